#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nullcorr/binom.hpp"

namespace nullcorr {

/// dim of the degree-d graded piece of a polynomial ring in num_vars
/// variables: C(d + num_vars - 1, num_vars - 1) for d >= 0, else 0.
inline std::int64_t graded_dim(int num_vars, int degree) {
    if (degree < 0) return 0;
    return binom_nonneg(degree + num_vars - 1, num_vars - 1);
}

using Expo = std::vector<int>;  // exponent vector, one entry per variable

/// Canonical ordered monomial basis of one graded piece. Ordering is
/// graded-lexicographic: within the fixed degree, exponent vectors descend
/// lexicographically, so (d,0,...,0) comes first and (0,...,0,d) last.
class MonomialBasis {
public:
    MonomialBasis(int num_vars, int degree);

    int num_vars() const { return nv_; }
    int degree() const { return deg_; }
    int size() const { return static_cast<int>(list_.size()); }
    const Expo& at(int i) const { return list_[static_cast<size_t>(i)]; }
    const std::vector<Expo>& exponents() const { return list_; }

    /// index of an exponent vector; -1 if not of this degree
    int index_of(const Expo& e) const;

    /// process-wide memoized basis registry
    static const MonomialBasis& get(int num_vars, int degree);

private:
    int nv_, deg_;
    std::vector<Expo> list_;
    std::map<Expo, int> index_;
};

}  // namespace nullcorr
