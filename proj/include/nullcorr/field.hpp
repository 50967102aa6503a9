#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace nullcorr {

/// Runtime description of the coefficient field.
/// kind == Prime: arithmetic in Z/p for a prime p (default: a prime near 2^31).
/// kind == Rational: exact rationals, always kept in lowest terms (GMP).
struct FieldSpec {
    enum class Kind { Prime, Rational };
    Kind kind = Kind::Prime;
    std::uint64_t p = kDefaultPrime;

    static constexpr std::uint64_t kDefaultPrime = 2147483647ull;  // 2^31 - 1
    static constexpr std::uint64_t kAltPrime = 2147483629ull;      // second prime for cross-checks

    static FieldSpec prime(std::uint64_t p);
    static FieldSpec rationals() { return FieldSpec{Kind::Rational, 0}; }

    bool operator==(const FieldSpec&) const = default;
    std::string describe() const;
};

bool is_prime_u64(std::uint64_t n);

/// Z/p with p < 2^32. Elements are canonical representatives in [0, p).
class PrimeField {
public:
    using Elem = std::int64_t;

    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < (1u << 20) || !is_prime_u64(p))
            throw std::invalid_argument("PrimeField: modulus must be a prime >= 2^20");
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }

    Elem from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return r < 0 ? r + static_cast<std::int64_t>(p_) : r;
    }

    Elem add(Elem a, Elem b) const {
        std::uint64_t s = static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b);
        if (s >= p_) s -= p_;
        return static_cast<Elem>(s);
    }
    Elem sub(Elem a, Elem b) const {
        return a >= b ? a - b : a + static_cast<Elem>(p_) - b;
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : static_cast<Elem>(p_) - a; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b)) % p_);
    }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    std::uint64_t modulus() const { return p_; }
    std::string describe_elem(Elem a) const { return std::to_string(a); }

private:
    std::uint64_t p_;
};

/// Exact rationals via GMP. mpq_class canonicalizes (lowest terms) on construction.
class RationalField {
public:
    using Elem = mpq_class;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    Elem from_int(std::int64_t v) const { return Elem(static_cast<long>(v)); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (sgn(a) == 0) throw std::domain_error("RationalField: division by zero");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return a / inv_guard(b); }
    std::string describe_elem(const Elem& a) const { return a.get_str(); }

private:
    const Elem& inv_guard(const Elem& b) const {
        if (sgn(b) == 0) throw std::domain_error("RationalField: division by zero");
        return b;
    }
};

}  // namespace nullcorr
