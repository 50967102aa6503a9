#include "nullcorr/splitcalc.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace nullcorr {

WeightList::WeightList(int m, std::vector<int> w) : ambient_dim_proj(m), weights(std::move(w)) {
    std::sort(weights.begin(), weights.end(), std::greater<int>());
}

int WeightList::weight_sum() const {
    int s = 0;
    for (int a : weights) s += a;
    return s;
}

WeightList WeightList::twisted(int t) const {
    std::vector<int> w = weights;
    for (int& a : w) a += t;
    return WeightList(ambient_dim_proj, std::move(w));
}

WeightList WeightList::dual() const {
    std::vector<int> w = weights;
    for (int& a : w) a = -a;
    return WeightList(ambient_dim_proj, std::move(w));
}

std::string WeightList::describe() const {
    std::string s = "O(";
    for (size_t i = 0; i < weights.size(); ++i) s += (i ? "," : "") + std::to_string(weights[i]);
    return s + ")";
}

WeightList hzeta_weights(const Weights& w) {
    std::vector<int> a;
    a.reserve(2 * static_cast<size_t>(w.n) + 2);
    for (int i = 0; i <= w.n; ++i) a.push_back(w.lambda[static_cast<size_t>(i)]);
    for (int i = 0; i <= w.n; ++i) a.push_back(-w.lambda[static_cast<size_t>(i)] - w.zeta);
    return WeightList(w.proj_dim(), std::move(a));
}

WeightList ext_pow(const WeightList& wl, int q) {
    const int r = wl.rank();
    if (q < 0 || q > r) throw std::invalid_argument("ext_pow: q out of range");
    std::vector<int> sums;
    std::vector<int> idx(static_cast<size_t>(q));
    std::function<void(int, int, int)> rec = [&](int pos, int start, int acc) {
        if (pos == q) {
            sums.push_back(acc);
            return;
        }
        for (int i = start; i < r; ++i) rec(pos + 1, i + 1, acc + wl.weights[static_cast<size_t>(i)]);
    };
    rec(0, 0, 0);
    if (q == 0) sums = {0};
    return WeightList(wl.ambient_dim_proj, std::move(sums));
}

std::int64_t bott_h(int m, int t, int i) {
    if (i < 0 || i > m) throw std::invalid_argument("bott_h: 0 <= i <= m required");
    if (i == 0) return t >= 0 ? binom_nonneg(static_cast<long long>(t) + m, m) : 0;
    if (i == m) return t <= -m - 1 ? binom_nonneg(static_cast<long long>(-t) - 1, m) : 0;
    return 0;
}

std::int64_t split_cohom(const WeightList& wl, int twist, int i) {
    std::int64_t s = 0;
    for (int a : wl.weights) s += bott_h(wl.ambient_dim_proj, a + twist, i);
    return s;
}

std::int64_t split_euler(const WeightList& wl, int twist) {
    const int m = wl.ambient_dim_proj;
    std::int64_t s = 0;
    for (int a : wl.weights) s += binom_signed(static_cast<long long>(a) + twist + m, m);
    return s;
}

int max_subline_twist(const WeightList& wl) {
    if (wl.weights.empty()) throw std::invalid_argument("max_subline_twist: empty weight list");
    return wl.weights.front();
}

Lemma31Report verify_lemma31(const Weights& w, int q_min, int q_max, int k_min, int k_max) {
    Lemma31Report rep;
    const WeightList h = hzeta_weights(w);
    const int n = w.n;
    const int a_range = w.zeta == 1 ? n : 0;
    for (int q = q_min; q <= q_max; ++q) {
        if (q < 1 || q > 2 * n + 1) continue;
        const WeightList lq = ext_pow(h, q);
        int rhs = 0;
        for (int i = 0; i <= std::min(q - 1, n); ++i) rhs += w.lambda[static_cast<size_t>(n - i)];
        for (int k = k_min; k <= k_max; ++k) {
            for (int a = -a_range; a <= a_range; ++a) {
                Lemma31Row row;
                row.q = q;
                row.k = k;
                row.a = a;
                row.h0 = split_cohom(lq, -k + a, 0);
                row.rhs_prefix_sum = rhs;
                row.true_max_sum = max_subline_twist(lq);
                row.criterion_holds = (w.gamma - w.zeta * n) > rhs;
                row.vanishes = row.h0 == 0;
                row.iff_agrees = row.vanishes == row.criterion_holds;
                row.formula_divergent = row.rhs_prefix_sum != row.true_max_sum;
                if (row.criterion_holds && !row.vanishes) rep.sufficient_direction_ok = false;
                if (!row.iff_agrees) ++rep.iff_failures;
                if (row.formula_divergent) ++rep.divergent_count;
                rep.rows.push_back(row);
            }
        }
    }
    return rep;
}

}  // namespace nullcorr
