#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nullcorr/form.hpp"

using namespace nullcorr;

namespace {
const PrimeField Fp(FieldSpec::kDefaultPrime);
}

TEST_CASE("graded dimensions") {
    CHECK(graded_dim(4, 2) == 10);
    CHECK(graded_dim(4, 0) == 1);
    CHECK(graded_dim(6, 3) == 56);
    CHECK(graded_dim(4, -1) == 0);
    CHECK(MonomialBasis::get(4, 2).size() == 10);
    // canonical ordering: first is x0^d, last is x_{v-1}^d
    const auto& b = MonomialBasis::get(3, 2);
    CHECK(b.at(0) == Expo{2, 0, 0});
    CHECK(b.at(b.size() - 1) == Expo{0, 0, 2});
    for (int i = 0; i < b.size(); ++i) CHECK(b.index_of(b.at(i)) == i);
}

TEST_CASE("form parsing and printing") {
    auto f = FormValue::parse(4, "2*x0^2 - x1*x2 + 3*x3^2");
    CHECK_THROWS_AS(FormValue::parse(4, "x0 + x1^2"), DegreeMismatch);  // inhomogeneous
    CHECK(f.is_zero() == false);
    CHECK(f.degree() == 2);
    // round trip through the term-list format
    auto g = FormValue::parse_terms(4, f.to_term_strings());
    CHECK(f == g);
    auto z = FormValue::parse(4, "x0 - x0");
    CHECK(z.is_zero());
    CHECK_THROWS(FormValue::parse(4, "x7"));
}

TEST_CASE("mult_map examples") {
    auto x0 = FormValue::variable(4, 0);
    auto m = mult_map(Fp, x0, 0);
    REQUIRE(m.nrows == 4);
    REQUIRE(m.ncols == 1);
    CHECK(m.col(0).size() == 1);
    CHECK(m.col(0)[0].first == MonomialBasis::get(4, 1).index_of(Expo{1, 0, 0, 0}));

    CHECK(mult_map(Fp, FormValue::zero(4), 2).is_zero_matrix());

    auto f = FormValue::parse(4, "x0 + x1");
    auto m2 = mult_map(Fp, f, 1);
    CHECK(m2.nrows == 10);
    CHECK(m2.ncols == 4);
    CHECK(rank(Fp, m2) == 4);  // multiplication by a nonzerodivisor is injective
}

TEST_CASE("graded functoriality of mult_map") {
    std::uint64_t st = 99;
    for (int trial = 0; trial < 5; ++trial) {
        auto f = FormValue::random_dense(4, 1 + static_cast<int>(splitmix64(st) % 2), st);
        auto g = FormValue::random_dense(4, 1 + static_cast<int>(splitmix64(st) % 2), st);
        int d = static_cast<int>(splitmix64(st) % 3);
        // mult(f*g, d) = mult(g, d+deg f) * mult(f, d)
        std::map<Expo, std::int64_t> terms;
        for (const auto& [e, cf] : f.terms())
            for (const auto& [eg, cg] : g.terms()) {
                Expo s(e.size());
                for (size_t v = 0; v < s.size(); ++v) s[v] = e[v] + eg[v];
                terms[s] += cf * cg;
            }
        FormValue prod(4, f.degree() + g.degree(), std::move(terms));
        auto lhs = mult_map(Fp, prod, d);
        auto rhs = mult_map(Fp, g, d + f.degree()).mul(Fp, mult_map(Fp, f, d));
        CHECK(lhs.equals(Fp, rhs));
    }
}

TEST_CASE("mult_map rank equals graded_dim for nonzero forms") {
    std::uint64_t st = 4242;
    for (int deg = 1; deg <= 2; ++deg)
        for (int d = 0; d <= 3; ++d) {
            auto f = FormValue::random_dense(4, deg, st);
            CHECK(rank(Fp, mult_map(Fp, f, d)) == graded_dim(4, d));
        }
}

TEST_CASE("ideal piece examples") {
    std::vector<FormValue> vars;
    for (int v = 0; v < 4; ++v) vars.push_back(FormValue::variable(4, v));
    CHECK(rank(Fp, ideal_piece(Fp, vars, 1)) == graded_dim(4, 1));

    std::vector<FormValue> sq = {FormValue::parse(4, "x0^2")};
    CHECK(rank(Fp, ideal_piece(Fp, sq, 2)) == 1);

    // four generic linear forms span degree 1
    std::uint64_t st = 7;
    std::vector<FormValue> gen;
    for (int i = 0; i < 4; ++i) gen.push_back(FormValue::random_dense(4, 1, st));
    CHECK(rank(Fp, ideal_piece(Fp, gen, 1)) == 4);
}

TEST_CASE("basepoint-free certificate") {
    std::vector<FormValue> vars;
    for (int v = 0; v < 4; ++v) vars.push_back(FormValue::variable(4, v));
    auto c = basepoint_free_certificate(Fp, vars);
    CHECK(c.certified);
    CHECK(c.degree == 1);

    std::vector<FormValue> bad(4, FormValue::variable(4, 0));
    auto c2 = basepoint_free_certificate(Fp, bad);
    CHECK(!c2.certified);
    CHECK(c2.degree == 1);

    // certified implies full rank one degree up as well
    std::uint64_t st = 11;
    std::vector<FormValue> gen;
    for (int i = 0; i < 4; ++i) gen.push_back(FormValue::random_dense(4, 1 + (i % 2), st));
    auto c3 = basepoint_free_certificate(Fp, gen);
    CHECK(c3.certified);
    CHECK(rank(Fp, ideal_piece(Fp, gen, c3.degree + 1)) == graded_dim(4, c3.degree + 1));
}
