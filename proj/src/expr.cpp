#include "nullcorr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace nullcorr {

SheafExpr SheafExpr::atom(Node n) {
    SheafExpr e;
    e.node = n;
    return e;
}
SheafExpr SheafExpr::linesum(std::vector<int> w) {
    SheafExpr e;
    e.node = Node::LineSum;
    e.weights = std::move(w);
    return e;
}
SheafExpr SheafExpr::twist(SheafExpr x, int t) {
    SheafExpr e;
    e.node = Node::Twist;
    e.arg = t;
    e.a = std::make_shared<SheafExpr>(std::move(x));
    return e;
}
SheafExpr SheafExpr::dual(SheafExpr x) {
    SheafExpr e;
    e.node = Node::Dual;
    e.a = std::make_shared<SheafExpr>(std::move(x));
    return e;
}
SheafExpr SheafExpr::tensor(SheafExpr x, SheafExpr y) {
    SheafExpr e;
    e.node = Node::Tensor;
    e.a = std::make_shared<SheafExpr>(std::move(x));
    e.b = std::make_shared<SheafExpr>(std::move(y));
    return e;
}
SheafExpr SheafExpr::extpow(SheafExpr x, int q) {
    SheafExpr e;
    e.node = Node::ExtPow;
    e.arg = q;
    e.a = std::make_shared<SheafExpr>(std::move(x));
    return e;
}

std::string SheafExpr::to_string() const {
    std::ostringstream os;
    switch (node) {
        case Node::Q: return "Q";
        case Node::Qdual: return "Qdual";
        case Node::N: return "N";
        case Node::Ndual: return "Ndual";
        case Node::LineSum: {
            os << "linesum[";
            for (size_t i = 0; i < weights.size(); ++i) os << (i ? "," : "") << weights[i];
            os << "]";
            return os.str();
        }
        case Node::Twist:
            os << "twist(" << a->to_string() << "," << arg << ")";
            return os.str();
        case Node::Dual:
            os << "dual(" << a->to_string() << ")";
            return os.str();
        case Node::Tensor:
            os << "tensor(" << a->to_string() << "," << b->to_string() << ")";
            return os.str();
        case Node::ExtPow:
            os << "extpow(" << a->to_string() << "," << arg << ")";
            return os.str();
    }
    return "?";
}

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;

    void ws() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw UnsupportedExpr("expected '" + std::string(1, c) + "' in expression");
    }
    int integer() {
        ws();
        bool neg = eat('-');
        ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw UnsupportedExpr("expected integer in expression");
        int v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }
    std::string ident() {
        ws();
        std::string out;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) out += s[i++];
        if (out.empty()) throw UnsupportedExpr("expected name in expression");
        return out;
    }

    SheafExpr expr() {
        std::string name = ident();
        if (name == "Q") return SheafExpr::atom(SheafExpr::Node::Q);
        if (name == "Qdual") return SheafExpr::atom(SheafExpr::Node::Qdual);
        if (name == "N") return SheafExpr::atom(SheafExpr::Node::N);
        if (name == "Ndual") return SheafExpr::atom(SheafExpr::Node::Ndual);
        if (name == "O") return SheafExpr::linesum({0});
        if (name == "linesum") {
            expect('[');
            std::vector<int> w;
            if (!eat(']')) {
                w.push_back(integer());
                while (eat(',')) w.push_back(integer());
                expect(']');
            }
            return SheafExpr::linesum(std::move(w));
        }
        if (name == "twist") {
            expect('(');
            auto a = expr();
            expect(',');
            int t = integer();
            expect(')');
            return SheafExpr::twist(std::move(a), t);
        }
        if (name == "dual") {
            expect('(');
            auto a = expr();
            expect(')');
            return SheafExpr::dual(std::move(a));
        }
        if (name == "tensor") {
            expect('(');
            auto a = expr();
            expect(',');
            auto b = expr();
            expect(')');
            return SheafExpr::tensor(std::move(a), std::move(b));
        }
        if (name == "extpow") {
            expect('(');
            auto a = expr();
            expect(',');
            int q = integer();
            expect(')');
            return SheafExpr::extpow(std::move(a), q);
        }
        throw UnsupportedExpr("unknown expression head '" + name + "'");
    }
};

}  // namespace

SheafExpr parse_expr(const std::string& s) {
    Parser p{s};
    auto e = p.expr();
    p.ws();
    if (p.i != s.size()) throw UnsupportedExpr("trailing input in expression");
    return e;
}

CorePtr Core::make_line(WeightList wl) {
    auto c = std::make_shared<Core>();
    c->kind = CoreKind::Line;
    c->line = std::move(wl);
    c->key = c->line.describe();
    return c;
}

CorePtr Core::make(CoreKind k) {
    auto c = std::make_shared<Core>();
    c->kind = k;
    switch (k) {
        case CoreKind::Q: c->key = "Q"; break;
        case CoreKind::Qd: c->key = "Qd"; break;
        case CoreKind::N: c->key = "N"; break;
        case CoreKind::W2Q: c->key = "w2Q"; break;
        case CoreKind::W2Qd: c->key = "w2Qd"; break;
        case CoreKind::W2N: c->key = "w2N"; break;
        default: throw UnsupportedExpr("Core::make: not an atom");
    }
    return c;
}

CorePtr Core::make_prod(CorePtr x, CorePtr y) {
    if (x->kind == CoreKind::Line || y->kind == CoreKind::Line ||
        x->kind == CoreKind::Prod || y->kind == CoreKind::Prod)
        throw UnsupportedExpr("tensor expressions with three or more non-split factors are not carried");
    if (y->key < x->key) std::swap(x, y);
    auto c = std::make_shared<Core>();
    c->kind = CoreKind::Prod;
    c->a = std::move(x);
    c->b = std::move(y);
    c->key = c->a->key + "*" + c->b->key;
    return c;
}

int core_rank(const Weights& w, const CorePtr& c) {
    const int n = w.n;
    switch (c->kind) {
        case CoreKind::Line: return c->line.rank();
        case CoreKind::Q: case CoreKind::Qd: return 2 * n + 1;
        case CoreKind::N: return 2 * n;
        case CoreKind::W2Q: case CoreKind::W2Qd: return (2 * n + 1) * n;  // C(2n+1, 2)
        case CoreKind::W2N: return n * (2 * n - 1);                       // C(2n, 2)
        case CoreKind::Prod: return core_rank(w, c->a) * core_rank(w, c->b);
    }
    return 0;
}

int core_c1(const Weights& w, const CorePtr& c) {
    const int n = w.n;
    const int c1q = w.gamma - w.zeta * n;
    const int c1n = -w.zeta * n;
    switch (c->kind) {
        case CoreKind::Line: return c->line.weight_sum();
        case CoreKind::Q: return c1q;
        case CoreKind::Qd: return -c1q;
        case CoreKind::N: return c1n;
        case CoreKind::W2Q: return (2 * n - 1) * c1q;  // c1(wedge^2 E) = (rank-1) c1(E)
        case CoreKind::W2Qd: return -(2 * n - 1) * c1q;
        case CoreKind::W2N: return (2 * n - 2) * c1n;
        case CoreKind::Prod:
            return core_rank(w, c->b) * core_c1(w, c->a) + core_rank(w, c->a) * core_c1(w, c->b);
    }
    return 0;
}

NTerm dual_term(const Weights& w, const NTerm& t) {
    switch (t.core->kind) {
        case CoreKind::Line:
            return {Core::make_line(t.core->line.dual()), -t.twist};
        case CoreKind::Q: return {Core::make(CoreKind::Qd), -t.twist};
        case CoreKind::Qd: return {Core::make(CoreKind::Q), -t.twist};
        case CoreKind::N: return {Core::make(CoreKind::N), w.zeta - t.twist};  // symplectic: N* = N(zeta)
        case CoreKind::W2Q: return {Core::make(CoreKind::W2Qd), -t.twist};
        case CoreKind::W2Qd: return {Core::make(CoreKind::W2Q), -t.twist};
        case CoreKind::W2N: return {Core::make(CoreKind::W2N), 2 * w.zeta - t.twist};
        case CoreKind::Prod: {
            NTerm da = dual_term(w, {t.core->a, 0});
            NTerm db = dual_term(w, {t.core->b, 0});
            return {Core::make_prod(da.core, db.core), da.twist + db.twist - t.twist};
        }
    }
    throw UnsupportedExpr("dual_term: unreachable");
}

namespace {

std::vector<NTerm> extpow_term(const Weights& w, const NTerm& t, int q) {
    if (q < 0) throw UnsupportedExpr("extpow: negative exponent");
    if (q == 0) return {{Core::make_line(WeightList(w.proj_dim(), {0})), 0}};
    if (q == 1) return {t};
    if (t.core->kind == CoreKind::Line)
        return {{Core::make_line(ext_pow(t.core->line.twisted(t.twist), q)), 0}};
    const int r = core_rank(w, t.core);
    if (q > r) return {};  // the zero bundle
    if (q == r)            // determinant line bundle
        return {{Core::make_line(WeightList(w.proj_dim(), {core_c1(w, t.core)})), q * t.twist}};
    if (q == r - 1) {  // wedge^{r-1} E = E*(c1 E)
        NTerm d = dual_term(w, {t.core, 0});
        return {{d.core, d.twist + core_c1(w, t.core) + q * t.twist}};
    }
    if (q == 2) {
        switch (t.core->kind) {
            case CoreKind::Q: return {{Core::make(CoreKind::W2Q), 2 * t.twist}};
            case CoreKind::Qd: return {{Core::make(CoreKind::W2Qd), 2 * t.twist}};
            case CoreKind::N: return {{Core::make(CoreKind::W2N), 2 * t.twist}};
            default: break;
        }
    }
    throw UnsupportedExpr("extpow: exterior power " + std::to_string(q) +
                          " of a non-split bundle is not carried");
}

std::vector<NTerm> norm(const Weights& w, const SheafExpr& e) {
    using Node = SheafExpr::Node;
    switch (e.node) {
        case Node::Q: return {{Core::make(CoreKind::Q), 0}};
        case Node::Qdual: return {{Core::make(CoreKind::Qd), 0}};
        case Node::N: return {{Core::make(CoreKind::N), 0}};
        case Node::Ndual: return {{Core::make(CoreKind::N), w.zeta}};
        case Node::LineSum: {
            if (e.weights.empty()) return {};
            return {{Core::make_line(WeightList(w.proj_dim(), e.weights)), 0}};
        }
        case Node::Twist: {
            auto terms = norm(w, *e.a);
            for (auto& t : terms) t.twist += e.arg;
            return terms;
        }
        case Node::Dual: {
            auto terms = norm(w, *e.a);
            for (auto& t : terms) t = dual_term(w, t);
            return terms;
        }
        case Node::Tensor: {
            auto xs = norm(w, *e.a);
            auto ys = norm(w, *e.b);
            std::vector<NTerm> out;
            for (const auto& x : xs)
                for (const auto& y : ys) {
                    if (x.core->kind == CoreKind::Line && y.core->kind == CoreKind::Line) {
                        std::vector<int> sums;
                        for (int a : x.core->line.weights)
                            for (int b : y.core->line.weights) sums.push_back(a + b);
                        out.push_back({Core::make_line(WeightList(w.proj_dim(), std::move(sums))),
                                       x.twist + y.twist});
                    } else if (x.core->kind == CoreKind::Line) {
                        for (int a : x.core->line.weights)
                            out.push_back({y.core, y.twist + x.twist + a});
                    } else if (y.core->kind == CoreKind::Line) {
                        for (int b : y.core->line.weights)
                            out.push_back({x.core, x.twist + y.twist + b});
                    } else {
                        out.push_back({Core::make_prod(x.core, y.core), x.twist + y.twist});
                    }
                }
            return out;
        }
        case Node::ExtPow: {
            auto terms = norm(w, *e.a);
            if (terms.empty()) return e.arg == 0 ? norm(w, SheafExpr::linesum({0})) : terms;
            if (terms.size() != 1)
                throw UnsupportedExpr("extpow: argument must be a single bundle, not a sum");
            return extpow_term(w, terms[0], e.arg);
        }
    }
    throw UnsupportedExpr("normalize: unreachable");
}

}  // namespace

std::string NSum::key() const {
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += " + ";
        s += t.core->key + "(" + std::to_string(t.twist) + ")";
    }
    return s.empty() ? "0" : s;
}

NSum normalize(const Weights& w, const SheafExpr& e) {
    NSum s;
    s.terms = norm(w, e);
    return s;
}

}  // namespace nullcorr
