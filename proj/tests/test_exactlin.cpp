#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nullcorr/form.hpp"
#include "nullcorr/subquot.hpp"

using namespace nullcorr;

namespace {

const PrimeField Fp(FieldSpec::kDefaultPrime);
const PrimeField Fp2(FieldSpec::kAltPrime);
const RationalField Q;

template <class F>
SpMat<F> dense(const F& f, int r, int c, const std::vector<std::vector<std::int64_t>>& rows) {
    std::vector<std::tuple<int, int, typename F::Elem>> ts;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (rows[i][j] != 0) ts.emplace_back(i, j, f.from_int(rows[i][j]));
    return SpMat<F>::from_triplets(f, r, c, ts);
}

template <class F>
SpMat<F> random_mat(const F& f, int r, int c, double density, std::uint64_t& st) {
    std::vector<std::tuple<int, int, typename F::Elem>> ts;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            if ((splitmix64(st) % 1000) / 1000.0 >= density) continue;
            auto v = f.from_int(static_cast<std::int64_t>(splitmix64(st) % 97) - 48);
            if (!f.is_zero(v)) ts.emplace_back(i, j, v);
        }
    return SpMat<F>::from_triplets(f, r, c, ts);
}

}  // namespace

TEST_CASE("field basics") {
    CHECK(is_prime_u64(FieldSpec::kDefaultPrime));
    CHECK(is_prime_u64(FieldSpec::kAltPrime));
    CHECK(!is_prime_u64(1u << 21));
    CHECK_THROWS(FieldSpec::prime(1000003 * 2));
    auto a = Fp.from_int(-5);
    CHECK(Fp.add(a, Fp.from_int(5)) == 0);
    CHECK(Fp.mul(Fp.inv(Fp.from_int(7)), Fp.from_int(7)) == 1);
    mpq_class half = Q.div(Q.one(), Q.from_int(2));
    CHECK(half + half == 1);
    // rationals stay in lowest terms
    mpq_class r = Q.mul(Q.from_int(2), Q.div(Q.from_int(3), Q.from_int(6)));
    CHECK(r.get_num() == 1);
    CHECK(r.get_den() == 1);
}

TEST_CASE("matrix invariants") {
    CHECK_THROWS_AS(SpMat<PrimeField>::from_triplets(Fp, 2, 2, {{0, 0, 0}}), MatrixInvariantViolation);
    CHECK_THROWS_AS(SpMat<PrimeField>::from_triplets(Fp, 2, 2, {{2, 0, 1}}), MatrixInvariantViolation);
    CHECK_THROWS_AS(SpMat<PrimeField>::from_triplets(Fp, 2, 2, {{0, 0, 1}, {0, 0, 2}}),
                    MatrixInvariantViolation);
}

TEST_CASE("rank examples") {
    CHECK(rank(Fp, SpMat<PrimeField>::identity(Fp, 3)) == 3);
    CHECK(rank(Fp, SpMat<PrimeField>::zero(4, 2)) == 0);
    auto m = dense(Q, 2, 2, {{1, 2}, {2, 4}});
    CHECK(rank(Q, m) == 1);
}

TEST_CASE("kernel examples") {
    CHECK(kernel_basis(Fp, SpMat<PrimeField>::identity(Fp, 3)).ncols == 0);
    auto k0 = kernel_basis(Fp, SpMat<PrimeField>::zero(3, 3));
    CHECK(k0.ncols == 3);
    auto row = dense(Fp, 1, 2, {{1, 1}});
    auto k = kernel_basis(Fp, row);
    REQUIRE(k.ncols == 1);
    CHECK(row.mul(Fp, k).is_zero_matrix());
}

TEST_CASE("rank properties on random matrices") {
    std::uint64_t st = 12345;
    for (int trial = 0; trial < 25; ++trial) {
        int r = 1 + static_cast<int>(splitmix64(st) % 12);
        int c = 1 + static_cast<int>(splitmix64(st) % 12);
        auto m = random_mat(Fp, r, c, 0.4, st);
        int rk = rank(Fp, m);
        CHECK(rk == rank(Fp, m.transpose(Fp)));
        auto ker = kernel_basis(Fp, m);
        CHECK(ker.ncols == c - rk);
        CHECK(rank(Fp, ker) == c - rk);
        CHECK(m.mul(Fp, ker).is_zero_matrix());
    }
}

TEST_CASE("two primes agree and parallel matches serial") {
    std::uint64_t st = 777;
    for (int trial = 0; trial < 12; ++trial) {
        // the same small integer entries, mapped into both prime fields
        std::vector<std::tuple<int, int, std::int64_t>> ts;
        for (int i = 0; i < 30; ++i)
            for (int j = 0; j < 24; ++j) {
                if (splitmix64(st) % 10 >= 3) continue;
                std::int64_t v = static_cast<std::int64_t>(splitmix64(st) % 97) - 48;
                if (v != 0) ts.emplace_back(i, j, v);
            }
        std::vector<std::tuple<int, int, PrimeField::Elem>> ts1, ts2;
        for (auto& [i, j, v] : ts) {
            ts1.emplace_back(i, j, Fp.from_int(v));
            ts2.emplace_back(i, j, Fp2.from_int(v));
        }
        auto m = SpMat<PrimeField>::from_triplets(Fp, 30, 24, ts1);
        auto m2 = SpMat<PrimeField>::from_triplets(Fp2, 30, 24, ts2);
        CHECK(rank(Fp, m) == rank(Fp2, m2));

        auto es = echelonize(Fp, m, true, ExecPolicy::Serial);
        auto ep = echelonize(Fp, m, true, ExecPolicy::Parallel);
        CHECK(es.rank == ep.rank);
        CHECK(es.pivot_rows == ep.pivot_rows);
        CHECK(es.basis_matrix().equals(Fp, ep.basis_matrix()));
        CHECK(es.kernel.equals(Fp, ep.kernel));
    }
}

TEST_CASE("subquotient examples") {
    auto id4 = SpMat<PrimeField>::identity(Fp, 4);
    auto z4 = SpMat<PrimeField>::zero(4, 0);
    CHECK(Subquot<PrimeField>::make(Fp, 4, id4, z4).dim() == 4);
    CHECK(Subquot<PrimeField>::make(Fp, 4, id4, id4).dim() == 0);

    auto z = dense(Fp, 3, 2, {{1, 0}, {0, 1}, {0, 0}});
    auto b = dense(Fp, 3, 1, {{1}, {0}, {0}});
    CHECK(Subquot<PrimeField>::make(Fp, 3, z, b).dim() == 1);

    auto outside = dense(Fp, 3, 1, {{0}, {0}, {1}});
    CHECK_THROWS_AS(Subquot<PrimeField>::make(Fp, 3, z, outside), ContainmentViolation);
}

TEST_CASE("subquotient dim invariant under respanning") {
    // shuffle and rescale the spanning columns; dimension is unchanged
    auto z = dense(Fp, 4, 3, {{1, 0, 1}, {0, 2, 2}, {0, 0, 0}, {3, 1, 4}});
    auto b = dense(Fp, 4, 1, {{2}, {4}, {0}, {8}});
    auto s1 = Subquot<PrimeField>::make(Fp, 4, z, b);
    auto z2 = dense(Fp, 4, 3, {{5, 1, 0}, {10, 0, 2}, {0, 0, 0}, {20, 3, 1}});
    auto s2 = Subquot<PrimeField>::make(Fp, 4, z2, b);
    CHECK(s1.dim() == s2.dim());
}

TEST_CASE("induced map examples") {
    auto id4 = SpMat<PrimeField>::identity(Fp, 4);
    auto z4 = SpMat<PrimeField>::zero(4, 0);
    auto s = Subquot<PrimeField>::make(Fp, 4, id4, z4);
    auto m = induced_map(Fp, s, s, id4);
    CHECK(m.equals(Fp, SpMat<PrimeField>::identity(Fp, 4)));
    auto zmap = induced_map(Fp, s, s, SpMat<PrimeField>::zero(4, 4));
    CHECK(zmap.is_zero_matrix());

    // quotient of F^3 by e1, mapped by a permutation fixing e1
    auto id3 = SpMat<PrimeField>::identity(Fp, 3);
    auto e1 = dense(Fp, 3, 1, {{1}, {0}, {0}});
    auto q = Subquot<PrimeField>::make(Fp, 3, id3, e1);
    REQUIRE(q.dim() == 2);
    auto perm = dense(Fp, 3, 3, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
    auto ind = induced_map(Fp, q, q, perm);
    auto expected = dense(Fp, 2, 2, {{0, 1}, {1, 0}});
    CHECK(ind.equals(Fp, expected));

    // a map whose image leaves the target cycles is rejected
    auto small = Subquot<PrimeField>::make(Fp, 3, e1, SpMat<PrimeField>::zero(3, 0));
    CHECK_THROWS_AS(induced_map(Fp, q, small, id3), NotWellDefined);
}

TEST_CASE("span solver coordinates") {
    auto gens = dense(Fp, 3, 2, {{1, 1}, {0, 1}, {0, 0}});
    SpanSolver<PrimeField> sp(Fp, gens);
    auto c = sp.coords({{0, Fp.from_int(3)}, {1, Fp.from_int(2)}});
    REQUIRE(c.has_value());
    // reconstruct: 3*e0+2*e1 = 1*g0 + 2*g1
    auto v = gens.mul_vec(Fp, *c);
    CHECK(v == SpMat<PrimeField>::Col{{0, Fp.from_int(3)}, {1, Fp.from_int(2)}});
    CHECK(!sp.coords({{2, Fp.one()}}).has_value());
}
