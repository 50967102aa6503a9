#pragma once

#include <cstdint>
#include <stdexcept>

#include <gmpxx.h>

namespace nullcorr {

/// C(x, m) as the degree-m polynomial x(x-1)...(x-m+1)/m!, for any integer x.
/// This is the signed convention used by Euler characteristics.
inline mpz_class binom_signed_mpz(long long x, int m) {
    if (m < 0) return 0;
    mpz_class num = 1;
    for (int i = 0; i < m; ++i) num *= mpz_class(static_cast<long>(x - i));
    mpz_class den = 1;
    for (int i = 2; i <= m; ++i) den *= i;
    return num / den;  // exact: product of m consecutive integers is divisible by m!
}

inline std::int64_t to_i64_checked(const mpz_class& z) {
    if (!z.fits_slong_p())
        throw std::overflow_error("binomial does not fit in 64 bits");
    return static_cast<std::int64_t>(z.get_si());
}

inline std::int64_t binom_signed(long long x, int m) { return to_i64_checked(binom_signed_mpz(x, m)); }

/// Dimension-flavored binomial: 0 whenever 0 <= x < m or x < 0.
inline std::int64_t binom_nonneg(long long x, int m) {
    if (x < 0 || m < 0 || x < m) return 0;
    return binom_signed(x, m);
}

}  // namespace nullcorr
