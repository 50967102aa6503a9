#include "nullcorr/monad.hpp"

namespace nullcorr {

MonadData MonadData::build(const Weights& w, const FormSource& src) {
    w.validate();
    MonadData m;
    m.w_ = w;
    m.h_ = hzeta_weights(w);
    const int n = w.n;
    const int nv = w.num_vars();

    if (std::holds_alternative<SeededRandom>(src)) {
        std::uint64_t state = std::get<SeededRandom>(src).seed;
        // fixed draw order: f_0..f_n then g_0..g_n
        for (int i = 0; i <= n; ++i)
            m.f_.push_back(FormValue::random_dense(nv, w.gamma + w.zeta + w.lambda[static_cast<size_t>(n - i)], state));
        for (int i = 0; i <= n; ++i)
            m.g_.push_back(FormValue::random_dense(nv, w.gamma - w.lambda[static_cast<size_t>(i)], state));
    } else {
        const auto& ex = std::get<ExplicitForms>(src);
        if (static_cast<int>(ex.f.size()) != n + 1 || static_cast<int>(ex.g.size()) != n + 1)
            throw DegreeMismatch("build: expected n+1 forms f and n+1 forms g");
        for (int i = 0; i <= n; ++i) {
            if (ex.f[static_cast<size_t>(i)].num_vars() != nv || ex.g[static_cast<size_t>(i)].num_vars() != nv)
                throw DegreeMismatch("build: form has wrong variable count");
            if (ex.f[static_cast<size_t>(i)].degree() != w.gamma + w.zeta + w.lambda[static_cast<size_t>(n - i)])
                throw DegreeMismatch("build: deg f_" + std::to_string(i) + " must be gamma+zeta+lambda_{n-i}");
            if (ex.g[static_cast<size_t>(i)].degree() != w.gamma - w.lambda[static_cast<size_t>(i)])
                throw DegreeMismatch("build: deg g_" + std::to_string(i) + " must be gamma-lambda_i");
        }
        m.f_ = ex.f;
        m.g_ = ex.g;
    }

    // A = (g_n .. g_0 ; -f_n .. -f_0), B = t(f_0 .. f_n ; g_0 .. g_n)
    for (int k = 0; k <= n; ++k) m.a_.push_back(m.g_[static_cast<size_t>(n - k)]);
    for (int k = 0; k <= n; ++k) m.a_.push_back(m.f_[static_cast<size_t>(n - k)].negated());
    for (int k = 0; k <= n; ++k) m.b_.push_back(m.f_[static_cast<size_t>(k)]);
    for (int k = 0; k <= n; ++k) m.b_.push_back(m.g_[static_cast<size_t>(k)]);
    return m;
}

std::vector<FormValue> MonadData::all_forms() const {
    std::vector<FormValue> out = f_;
    out.insert(out.end(), g_.begin(), g_.end());
    return out;
}

MonadData MonadData::with_b_entries_swapped(int i, int j) const {
    MonadData m = *this;
    std::swap(m.b_[static_cast<size_t>(i)], m.b_[static_cast<size_t>(j)]);
    return m;
}

template <class F>
ValidationReport validate_monad(const F& field, const MonadData& m, ValidateOptions opts) {
    ValidationReport r;
    const int dim = static_cast<int>(m.a_entries().size());

    FormZ ab;
    for (int k = 0; k < dim; ++k) ab.add_mul(m.a_entries()[static_cast<size_t>(k)], m.b_entries()[static_cast<size_t>(k)], +1);
    r.ab_zero = ab.is_zero();

    // (-A.J)_j = -A_{2n+1-j} * J[2n+1-j][j]; compare with tB_j = B_j
    r.tb_matches_neg_aj = true;
    for (int j = 0; j < dim; ++j) {
        int sign = -m.j_sign(dim - 1 - j);
        FormValue lhs = sign < 0 ? m.a_entries()[static_cast<size_t>(dim - 1 - j)].negated()
                                 : m.a_entries()[static_cast<size_t>(dim - 1 - j)];
        if (!(lhs == m.b_entries()[static_cast<size_t>(j)])) r.tb_matches_neg_aj = false;
    }

    // (-J.B)_k = -J[k][2n+1-k] * B_{2n+1-k}; compare with tA_k = A_k
    r.ta_matches_neg_jb = true;
    for (int k = 0; k < dim; ++k) {
        int sign = -m.j_sign(k);
        FormValue lhs = sign < 0 ? m.b_entries()[static_cast<size_t>(dim - 1 - k)].negated()
                                 : m.b_entries()[static_cast<size_t>(dim - 1 - k)];
        if (!(lhs == m.a_entries()[static_cast<size_t>(k)])) r.ta_matches_neg_jb = false;
    }

    // (J^2)[k][k] = J[k][2n+1-k] * J[2n+1-k][k]
    r.j_squared_neg_id = true;
    for (int k = 0; k < dim; ++k)
        if (m.j_sign(k) * m.j_sign(dim - 1 - k) != -1) r.j_squared_neg_id = false;

    if (opts.check_basepoint) r.basepoint = basepoint_free_certificate(field, m.all_forms());
    return r;
}

template ValidationReport validate_monad<PrimeField>(const PrimeField&, const MonadData&, ValidateOptions);
template ValidationReport validate_monad<RationalField>(const RationalField&, const MonadData&, ValidateOptions);

std::pair<std::int64_t, std::int64_t> chern(const Weights& w) {
    std::int64_t ls = 0, l2 = 0;
    for (int l : w.lambda) { ls += l; l2 += static_cast<std::int64_t>(l) * l; }
    std::int64_t c1 = -static_cast<std::int64_t>(w.zeta) * w.n;
    std::int64_t c2 = static_cast<std::int64_t>(w.gamma) * w.gamma - l2 +
                      w.zeta * (w.gamma + w.zeta * (static_cast<std::int64_t>(w.n) * (w.n - 1) / 2) - ls);
    return {c1, c2};
}

namespace {

// degree-2 truncation of a product of (1 + a_k h) factors
struct Trunc2 {
    std::int64_t c0 = 1, c1 = 0, c2 = 0;
    void mul_linear(std::int64_t a) {
        c2 = c2 + c1 * a;
        c1 = c1 + c0 * a;
    }
    // multiply by the inverse of (1 + a h): 1 - a h + a^2 h^2 - ...
    void div_linear(std::int64_t a) {
        c1 = c1 - c0 * a;
        c2 = c2 - c1 * a;  // note: uses already-updated c1, matching series division
    }
};

}  // namespace

bool chern_whitney_check(const Weights& w) {
    Trunc2 c;
    for (int a : hzeta_weights(w).weights) c.mul_linear(a);
    c.div_linear(-(w.gamma + w.zeta));
    c.div_linear(w.gamma);
    auto [c1, c2] = chern(w);
    return c.c0 == 1 && c.c1 == c1 && c.c2 == c2;
}

std::int64_t c1_quotient(const Weights& w) {
    // Whitney on 0 -> O(-gamma-zeta) -> H -> Q -> 0
    std::int64_t s = 0;
    for (int a : hzeta_weights(w).weights) s += a;
    return s + (w.gamma + w.zeta);
}

std::int64_t euler_ncorr(const Weights& w, int t) {
    const int m = w.proj_dim();
    return split_euler(hzeta_weights(w), t) -
           binom_signed(static_cast<long long>(t) - w.gamma - w.zeta + m, m) -
           binom_signed(static_cast<long long>(t) + w.gamma + m, m);
}

}  // namespace nullcorr
