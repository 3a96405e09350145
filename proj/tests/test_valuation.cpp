#include "doctest.h"
#include "hlf/error.hpp"
#include "hlf/random.hpp"
#include "hlf/valuation.hpp"
#include "oracles.hpp"

using namespace hlf;

TEST_CASE("rank valuations")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const Element x = Element::parse(f, "u^-3*t^2");
    CHECK(rank_valuation(x, 2) == ValVec{-3, 2});
    CHECK(oracle::rank_valuation(x, oracle::standard_params(f)) == std::vector<int64_t>{-3, 2});
    const Element a = Element::parse(f, "u^-3"), b = Element::parse(f, "t^2");
    CHECK(rank_valuation(a, 2)[0] + rank_valuation(b, 2)[0] == -3);
    CHECK(rank_valuation(a, 2)[1] + rank_valuation(b, 2)[1] == 2);
    CHECK(rank_valuation(Element::integer(f, 1), 2) == ValVec{0, 0});
    CHECK(rank_valuation(Element::integer(f, 1), 1) == ValVec{0});
    CHECK(rank_valuation(x, 1) == ValVec{2});
    auto m = Field::parse("Qp(3){{t}}");
    const Element y = Element::parse(m, "3*t^-7 + t^2");
    CHECK(rank_valuation(y, 2) == ValVec{2, 0});
    CHECK(oracle::rank_valuation(y, oracle::standard_params(m)) == std::vector<int64_t>{2, 0});
    CHECK_THROWS_AS(rank_valuation(Element(f), 2), Error);
}

TEST_CASE("integer ring chain")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const Element x = Element::parse(f, "u^-3*t^2");
    // inverse-lex: v_2 = 2 > 0 dominates, so x is in O_F
    CHECK(in_integer_ring(x, 1));
    CHECK(in_integer_ring(x, 2));
    const Element y = Element::parse(f, "u^-1");
    CHECK_FALSE(in_integer_ring(y, 1));
    CHECK(in_integer_ring(y, 2));
    for (int l = 1; l <= 2; ++l)
        CHECK(in_integer_ring(Element(f), l));
    CHECK_FALSE(in_integer_ring(Element::parse(f, "t^-1*u^5"), 2));
}

TEST_CASE("valuation properties on random elements")
{
    Rng rng(21);
    for (const char *fs : {"Fq(5)((u))((t))", "Qp(3)((t))", "Qp(3){{t}}", "Fq(4;w^2+w+1)((u))((t))", "Q((s))((u))((t))"}) {
        auto f = Field::parse(fs);
        const auto params = oracle::standard_params(f);
        const int n = f->dim();
        for (int it = 0; it < 60; ++it) {
            const Element x = random_element(f, rng), y = random_element(f, rng);
            const ValVec vx = x.valuation(), vy = y.valuation(), vxy = (x * y).valuation();
            CHECK(std::vector<int64_t>(vx) == oracle::rank_valuation(x, params));
            for (int k = 0; k < n; ++k)
                CHECK(vxy[k] == vx[k] + vy[k]);
            const Element s = x + y;
            if (!s.is_zero()) {
                const ValVec m = compare_inverse_lex(vx, vy) <= 0 ? vx : vy;
                CHECK(compare_inverse_lex(s.valuation(), m) >= 0);
            }
            for (int l = 1; l <= n; ++l) {
                if (in_integer_ring(x, l) && in_integer_ring(y, l)) {
                    CHECK(in_integer_ring(x + y, l));
                    CHECK(in_integer_ring(x * y, l));
                }
                if (l < n && in_integer_ring(x, l))
                    CHECK(in_integer_ring(x, l + 1));
            }
            // another representation of the same fraction
            const Element x2 = Element::fraction(f, x.num() * y.den(), x.den() * y.den());
            CHECK(x2.valuation() == vx);
        }
    }
}

TEST_CASE("O_F does not depend on the parameter t -> t(1+u)")
{
    Rng rng(4);
    auto f = Field::parse("Fq(5)((u))((t))");
    auto params = oracle::standard_params(f);
    params[0] = Element::parse(f, "t*(1+u)");
    for (int it = 0; it < 100; ++it) {
        const Element x = random_element(f, rng);
        const auto alt = oracle::rank_valuation(x, params);
        CHECK(in_integer_ring(x, 1) == (compare_inverse_lex(ValVec(alt), ValVec(alt.size(), 0)) >= 0));
    }
}

TEST_CASE("unit decomposition")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const Element x = Element::parse(f, "2*u^3*t^-1*(1+u*t)");
    const UnitDecomposition d = unit_decompose(x);
    CHECK(d.exponents == ValVec{3, -1});
    CHECK(d.theta == Scalar(FqElem(f->fq(), 2)));
    CHECK(d.principal == Element::parse(f, "1+u*t"));
    CHECK(recompose(f, d) == x);
    const UnitDecomposition one = unit_decompose(Element::integer(f, 1));
    CHECK(one.exponents == ValVec{0, 0});
    CHECK(one.principal.is_one());
    const UnitDecomposition t = unit_decompose(Element::parse(f, "t"));
    CHECK(t.exponents == ValVec{0, 1});
    CHECK(t.theta.is_one());
    CHECK_THROWS_AS(unit_decompose(Element::parse(Field::parse("Qp(3)((t))"), "t")), Error);
    Rng rng(8);
    for (int it = 0; it < 100; ++it) {
        const Element y = random_element(f, rng);
        const UnitDecomposition e = unit_decompose(y);
        CHECK(recompose(f, e) == y);
        CHECK(in_rank_maximal_ideal(e.principal - Element::integer(f, 1)));
    }
}
