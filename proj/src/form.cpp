#include "nullcorr/form.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace nullcorr {

FormValue::FormValue(int num_vars, int degree, std::map<Expo, std::int64_t> terms)
    : nv_(num_vars), deg_(degree), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0) { it = terms_.erase(it); continue; }
        if (static_cast<int>(it->first.size()) != nv_)
            throw DegreeMismatch("form term has wrong variable count");
        int d = std::accumulate(it->first.begin(), it->first.end(), 0);
        if (d != degree) throw DegreeMismatch("form term degree != declared degree");
        ++it;
    }
    if (terms_.empty()) deg_ = -1;
}

FormValue FormValue::variable(int num_vars, int v) {
    Expo e(static_cast<size_t>(num_vars), 0);
    e[static_cast<size_t>(v)] = 1;
    return monomial(num_vars, std::move(e), 1);
}

FormValue FormValue::monomial(int num_vars, Expo e, std::int64_t c) {
    int d = std::accumulate(e.begin(), e.end(), 0);
    std::map<Expo, std::int64_t> t;
    t.emplace(std::move(e), c);
    return FormValue(num_vars, d, std::move(t));
}

FormValue FormValue::negated() const {
    std::map<Expo, std::int64_t> t;
    for (const auto& [e, c] : terms_) t.emplace(e, -c);
    FormValue out;
    out.nv_ = nv_;
    out.deg_ = deg_;
    out.terms_ = std::move(t);
    return out;
}

std::string FormValue::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        std::int64_t a = c >= 0 ? c : -c;
        bool printed = false;
        if (a != 1) { os << a; printed = true; }
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            if (printed) os << "*";
            os << "x" << v;
            if (e[v] > 1) os << "^" << e[v];
            printed = true;
        }
        if (!printed) os << 1;
        first = false;
    }
    return os.str();
}

std::vector<std::string> FormValue::to_term_strings() const {
    std::vector<std::string> out;
    for (const auto& [e, c] : terms_) {
        std::ostringstream os;
        os << c;
        for (size_t v = 0; v < e.size(); ++v) {
            if (e[v] == 0) continue;
            os << " * x" << v;
            if (e[v] > 1) os << "^" << e[v];
        }
        out.push_back(os.str());
    }
    return out;
}

namespace {

// one term: [+-] [coeff] { '*'|space  xK [^E] }*
void parse_one_term(const std::string& s, int num_vars, std::map<Expo, std::int64_t>& acc) {
    size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    skip_ws();
    std::int64_t sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -sign;
        ++i;
        skip_ws();
    }
    std::int64_t coeff = 1;
    bool saw_digit = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        coeff = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            coeff = coeff * 10 + (s[i] - '0');
            ++i;
        }
        saw_digit = true;
    }
    Expo e(static_cast<size_t>(num_vars), 0);
    bool saw_var = false;
    for (;;) {
        skip_ws();
        if (i < s.size() && s[i] == '*') { ++i; skip_ws(); }
        if (i >= s.size()) break;
        if (s[i] != 'x') throw DegreeMismatch("form term: expected variable, got '" + s.substr(i) + "'");
        ++i;
        int v = 0;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw DegreeMismatch("form term: variable index expected");
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            ++i;
        }
        if (v >= num_vars) throw DegreeMismatch("form term: variable index out of range");
        int ex = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            ex = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                ex = ex * 10 + (s[i] - '0');
                ++i;
            }
        }
        e[static_cast<size_t>(v)] += ex;
        saw_var = true;
    }
    if (!saw_digit && !saw_var) throw DegreeMismatch("empty form term");
    acc[e] += sign * coeff;
}

}  // namespace

FormValue FormValue::parse_terms(int num_vars, const std::vector<std::string>& terms) {
    std::map<Expo, std::int64_t> acc;
    for (const auto& t : terms) parse_one_term(t, num_vars, acc);
    int deg = -1;
    for (auto it = acc.begin(); it != acc.end();) {
        if (it->second == 0) { it = acc.erase(it); continue; }
        deg = std::accumulate(it->first.begin(), it->first.end(), 0);
        ++it;
    }
    return FormValue(num_vars, deg, std::move(acc));
}

FormValue FormValue::parse(int num_vars, const std::string& s) {
    // split on top-level +/- boundaries, keeping signs with the terms
    std::vector<std::string> terms;
    std::string cur;
    for (size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && !cur.empty() &&
            cur.find_first_not_of(" \t+-") != std::string::npos) {
            terms.push_back(cur);
            cur.clear();
        }
        cur += s[i];
    }
    if (cur.find_first_not_of(" \t") != std::string::npos) terms.push_back(cur);
    return parse_terms(num_vars, terms);
}

FormValue FormValue::random_dense(int num_vars, int degree, std::uint64_t& state) {
    const auto& basis = MonomialBasis::get(num_vars, degree);
    std::map<Expo, std::int64_t> t;
    for (int i = 0; i < basis.size(); ++i) {
        std::int64_t c = static_cast<std::int64_t>(splitmix64(state) % 1000000ull) + 1;
        t.emplace(basis.at(i), c);
    }
    return FormValue(num_vars, degree, std::move(t));
}

FormZ::FormZ(const FormValue& f) {
    for (const auto& [e, c] : f.terms()) terms_[e] = mpz_class(static_cast<long>(c));
}

void FormZ::add_mul(const FormValue& a, const FormValue& b, int sign) {
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            Expo e(ea.size());
            for (size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
            terms_[e] += mpz_class(static_cast<long>(ca)) * mpz_class(static_cast<long>(cb)) * sign;
        }
}

bool FormZ::is_zero() const {
    for (const auto& [e, c] : terms_)
        if (c != 0) return false;
    return true;
}

std::string FormZ::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (c == 0) continue;
        if (!first) os << " + ";
        os << c.get_str();
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v]) os << "*x" << v << (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
        first = false;
    }
    return first ? "0" : os.str();
}

}  // namespace nullcorr
