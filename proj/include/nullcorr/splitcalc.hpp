#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nullcorr/binom.hpp"
#include "nullcorr/weights.hpp"

namespace nullcorr {

/// A direct sum of line bundles O(a_1) + ... + O(a_r) on P^{ambient_dim_proj},
/// described by its weight multiset. Stored sorted descending, so the maximal
/// sub-line-bundle twist of an exterior power is a prefix sum.
struct WeightList {
    int ambient_dim_proj = 0;  // = 2n+1
    std::vector<int> weights;  // sorted descending

    WeightList() = default;
    WeightList(int m, std::vector<int> w);

    int rank() const { return static_cast<int>(weights.size()); }
    int weight_sum() const;
    WeightList twisted(int t) const;
    WeightList dual() const;

    bool operator==(const WeightList&) const = default;
    std::string describe() const;
};

/// weights of H_zeta: {lambda_0..lambda_n} u {-lambda_0-zeta .. -lambda_n-zeta}
WeightList hzeta_weights(const Weights& w);

/// all q-subset sums of the weights; size C(rank, q)
WeightList ext_pow(const WeightList& wl, int q);

/// h^i(P^m, O(t)): nonzero only at i=0 (C(t+m,m), t>=0) and i=m (C(-t-1,m), t<=-m-1)
std::int64_t bott_h(int m, int t, int i);

/// sum over the weights of bott_h(2n+1, a+twist, i)
std::int64_t split_cohom(const WeightList& wl, int twist, int i);

/// chi(sum O(a+twist)) as the signed binomial polynomial
std::int64_t split_euler(const WeightList& wl, int twist);

/// max { t : O(t) is a subbundle }, i.e. the largest weight
int max_subline_twist(const WeightList& wl);

/// One comparison row of the split-bundle section-vanishing check: the
/// computed h^0 of an exterior power of H_zeta against the closed-form
/// prefix-sum criterion, plus a flag when the displayed prefix formula
/// differs from the true maximal subset sum (which happens for q > n+1
/// with lambda_0 > 0 or zeta = 1).
struct Lemma31Row {
    int q = 0;
    int k = 0;
    int a = 0;  // extra shift, only exercised for zeta = 1
    std::int64_t h0 = 0;
    int rhs_prefix_sum = 0;  // the displayed bound sum_{i<=min(q-1,n)} lambda_{n-i}
    int true_max_sum = 0;    // max q-subset sum of the weights
    bool criterion_holds = false;   // gamma - zeta*n > rhs_prefix_sum
    bool vanishes = false;          // computed h0 == 0
    bool iff_agrees = false;        // vanishes == criterion_holds
    bool formula_divergent = false; // rhs_prefix_sum != true_max_sum
};

struct Lemma31Report {
    std::vector<Lemma31Row> rows;
    bool sufficient_direction_ok = true;  // criterion true => vanishing, on all rows
    int divergent_count = 0;
    int iff_failures = 0;
};

Lemma31Report verify_lemma31(const Weights& w, int q_min, int q_max, int k_min, int k_max);

}  // namespace nullcorr
