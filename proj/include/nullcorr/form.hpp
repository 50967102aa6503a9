#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nullcorr/elim.hpp"
#include "nullcorr/monomial.hpp"
#include "nullcorr/smat.hpp"

namespace nullcorr {

struct DegreeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A homogeneous form with integer coefficients. Coefficients live in Z and
/// are mapped into the working field only when a matrix is built, so the same
/// form is usable over any field (cross-prime and rational reruns included).
/// Invariants: every term has total degree == degree; no zero coefficients.
class FormValue {
public:
    FormValue() = default;  // the zero form, degree -1 by convention
    FormValue(int num_vars, int degree, std::map<Expo, std::int64_t> terms);

    static FormValue zero(int num_vars) { return FormValue(num_vars, -1, {}); }
    static FormValue variable(int num_vars, int v);
    static FormValue monomial(int num_vars, Expo e, std::int64_t c);

    int num_vars() const { return nv_; }
    int degree() const { return deg_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Expo, std::int64_t>& terms() const { return terms_; }

    FormValue negated() const;
    bool operator==(const FormValue& o) const { return nv_ == o.nv_ && terms_ == o.terms_; }

    std::string to_string() const;

    /// term list format used in config files: each entry "c * x0^a0 * x1^a1"
    std::vector<std::string> to_term_strings() const;
    static FormValue parse_terms(int num_vars, const std::vector<std::string>& terms);
    static FormValue parse(int num_vars, const std::string& s);

    /// dense random form of the given degree; coefficients are drawn in
    /// [1, 10^6] from the seeded stream, independent of any field
    static FormValue random_dense(int num_vars, int degree, std::uint64_t& state);

private:
    int nv_ = 0;
    int deg_ = -1;
    std::map<Expo, std::int64_t> terms_;
};

/// Exact product with big-integer accumulation (polynomial identity checks).
class FormZ {
public:
    FormZ() = default;
    explicit FormZ(const FormValue& f);
    void add_mul(const FormValue& a, const FormValue& b, int sign);
    bool is_zero() const;
    std::string to_string() const;

private:
    std::map<Expo, mpz_class> terms_;
};

/// Matrix of multiplication by f from degree source_degree to degree
/// source_degree + deg f, in the canonical monomial bases. A negative source
/// degree gives the matrix with zero columns.
template <class F>
SpMat<F> mult_map(const F& field, const FormValue& f, int source_degree) {
    const int nv = f.num_vars();
    const auto& src = MonomialBasis::get(nv, source_degree);
    const int tdeg = f.is_zero() ? source_degree : source_degree + f.degree();
    const auto& dst = MonomialBasis::get(nv, tdeg < 0 ? -1 : tdeg);
    SpMat<F> m(dst.size(), src.size());
    if (f.is_zero() || source_degree < 0) return m;
    Expo sum(static_cast<size_t>(nv));
    for (int j = 0; j < src.size(); ++j) {
        const Expo& e = src.at(j);
        auto& col = m.cols[static_cast<size_t>(j)];
        for (const auto& [me, c] : f.terms()) {
            for (int v = 0; v < nv; ++v) sum[static_cast<size_t>(v)] = e[static_cast<size_t>(v)] + me[static_cast<size_t>(v)];
            auto fc = field.from_int(c);
            if (!field.is_zero(fc)) col.emplace_back(dst.index_of(sum), fc);
        }
        std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        // dense forms can collide only if two terms share a monomial, which the map rules out
    }
    return m;
}

/// Degree-D piece of the ideal generated by the forms: block matrix whose
/// column space is sum_j f_j * S_{D - deg f_j}.
template <class F>
SpMat<F> ideal_piece(const F& field, const std::vector<FormValue>& forms, int D) {
    if (forms.empty()) throw std::invalid_argument("ideal_piece: no forms");
    const int nv = forms.front().num_vars();
    SpMat<F> out(static_cast<int>(graded_dim(nv, D)), 0);
    for (const auto& f : forms) {
        if (f.is_zero()) continue;
        if (f.degree() > D) throw DegreeMismatch("ideal_piece: D below a form degree");
        out = out.hstack(mult_map(field, f, D - f.degree()));
    }
    return out;
}

struct BasepointCertificate {
    bool certified = false;
    int degree = 0;  // the socle-bound degree that was tested
};

/// Base-point-freeness certificate for 2n+2 forms in 2n+2 variables: full
/// rank of the ideal's graded piece at D = sum(deg_j - 1) + 1 (the socle
/// bound of an Artinian complete intersection) certifies an empty common
/// zero locus. Certified is sound; Inconclusive only reports the degree.
template <class F>
BasepointCertificate basepoint_free_certificate(const F& field, const std::vector<FormValue>& forms) {
    if (forms.empty()) throw std::invalid_argument("certificate: no forms");
    const int nv = forms.front().num_vars();
    if (static_cast<int>(forms.size()) != nv)
        throw std::invalid_argument("certificate: expected as many forms as variables");
    long long D = 1;
    for (const auto& f : forms) {
        if (f.is_zero()) return BasepointCertificate{false, 1};
        D += f.degree() - 1;
    }
    auto m = ideal_piece(field, forms, static_cast<int>(D));
    bool full = rank(field, m) == static_cast<int>(graded_dim(nv, static_cast<int>(D)));
    return BasepointCertificate{full, static_cast<int>(D)};
}

/// splitmix64: the deterministic seed stream used for random forms
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace nullcorr
