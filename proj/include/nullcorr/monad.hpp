#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "nullcorr/form.hpp"
#include "nullcorr/splitcalc.hpp"
#include "nullcorr/weights.hpp"

namespace nullcorr {

/// Sources for the monad's forms.
struct SeededRandom { std::uint64_t seed = 0; };
struct ExplicitForms {
    std::vector<FormValue> f;  // deg f_i = gamma + zeta + lambda_{n-i}
    std::vector<FormValue> g;  // deg g_i = gamma - lambda_i
};
using FormSource = std::variant<SeededRandom, ExplicitForms>;

/// The weighted null-correlation monad O(-gamma-zeta) -B-> H_zeta -A-> O(gamma)
/// with A = (g_n .. g_0 ; -f_n .. -f_0) and B = t(f_0 .. f_n ; g_0 .. g_n).
/// H_zeta summand k carries weight a_k (descending lambdas first, then the
/// negated block); A's entry on summand k is a form of degree gamma - a_k and
/// B's entry is a form of degree gamma + zeta + a_k.
class MonadData {
public:
    static MonadData build(const Weights& w, const FormSource& src);

    const Weights& weights() const { return w_; }
    const WeightList& hzeta() const { return h_; }
    int num_vars() const { return w_.num_vars(); }

    const std::vector<FormValue>& f() const { return f_; }
    const std::vector<FormValue>& g() const { return g_; }

    /// row entries of A: H_zeta -> O(gamma), indexed by H-summand (signs included)
    const std::vector<FormValue>& a_entries() const { return a_; }
    /// column entries of B: O(-gamma-zeta) -> H_zeta
    const std::vector<FormValue>& b_entries() const { return b_; }

    /// sign of the antidiagonal entry J[k][2n+1-k]: -1 on the upper half,
    /// +1 on the lower half
    int j_sign(int k) const { return k <= w_.n ? -1 : +1; }

    /// all 2n+2 forms f_i, g_i in one list (base-point-freeness input)
    std::vector<FormValue> all_forms() const;

    /// negative control: a copy with two of B's entry forms exchanged, which
    /// breaks the composite and transpose identities
    MonadData with_b_entries_swapped(int i, int j) const;

private:
    Weights w_;
    WeightList h_;
    std::vector<FormValue> f_, g_, a_, b_;
};

struct ValidationReport {
    bool ab_zero = false;          // A.B = 0 as a polynomial identity
    bool tb_matches_neg_aj = false;  // tB = -A.J entrywise
    bool ta_matches_neg_jb = false;  // tA = -J.B entrywise
    bool j_squared_neg_id = false;   // J^2 = -I
    BasepointCertificate basepoint;
    bool all_pass() const {
        return ab_zero && tb_matches_neg_aj && ta_matches_neg_jb && j_squared_neg_id &&
               basepoint.certified;
    }
};

struct ValidateOptions {
    /// The base-point certificate eliminates a Macaulay matrix at the socle
    /// bound; at n = 2 with large gamma that matrix runs to ~2*10^4 columns.
    /// Identity checks are always run.
    bool check_basepoint = true;
};

template <class F>
ValidationReport validate_monad(const F& field, const MonadData& m, ValidateOptions opts = {});

/// c_1 = -zeta n,  c_2 = gamma^2 - sum lambda_i^2 + zeta(gamma + zeta n(n-1)/2 - sum lambda_i)
std::pair<std::int64_t, std::int64_t> chern(const Weights& w);

/// cross-check of chern() against the Whitney expansion
/// c(H_zeta) / (c(O(-gamma-zeta)) c(O(gamma))) truncated at degree 2
bool chern_whitney_check(const Weights& w);

/// first Chern class of the quotient bundle, from the Whitney expansion of
/// its defining sequence; equals gamma - zeta n
std::int64_t c1_quotient(const Weights& w);

/// chi(N(t)) by additivity along the monad
std::int64_t euler_ncorr(const Weights& w, int t);

extern template ValidationReport validate_monad<PrimeField>(const PrimeField&, const MonadData&, ValidateOptions);
extern template ValidationReport validate_monad<RationalField>(const RationalField&, const MonadData&, ValidateOptions);

}  // namespace nullcorr
