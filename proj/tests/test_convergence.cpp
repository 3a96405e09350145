#include "doctest.h"
#include "hlf/convergence.hpp"
#include "hlf/error.hpp"

using namespace hlf;

namespace {

BasicOpen level_ball(int64_t cutoff, int64_t i, int64_t m)
{
    return BasicOpen::constant_below(cutoff, {{i, BasicOpen::ball(m)}}, BasicOpen::full());
}

Verdict run(const FieldPtr &f, const char *seq, const char *lim, Topology top)
{
    return converges(SeqFamily::parse(f, seq), Element::parse(f, lim), top);
}

} // namespace

TEST_CASE("family parsing and evaluation")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const SeqFamily s = SeqFamily::parse(f, "t^(-1)*u^(n) + 2*t^n");
    CHECK(s.at(3) == Element::parse(f, "t^-1*u^3 + 2*t^3"));
    CHECK_FALSE(s.is_fraction());
    CHECK(SeqFamily::parse(f, "u^(2*n-1)").at(2) == Element::parse(f, "u^3"));
    CHECK(SeqFamily::parse(f, "(t*u^2)^(n)").at(2) == Element::parse(f, "t^2*u^4"));
    CHECK(SeqFamily::parse(f, "1/(1+t^(-1)*u^(n))").is_fraction());
    CHECK(SeqFamily::parse(f, "1/(u^(n)*t)").at(1) == Element::parse(f, "u^-1*t^-1"));
    CHECK_THROWS_AS(SeqFamily::parse(f, "n*t"), Error);
    CHECK_THROWS_AS(SeqFamily::parse(f, "2^(n)"), Error);
    CHECK_THROWS_AS(SeqFamily::parse(f, "(1+t)^(n)"), Error);
    CHECK_THROWS_AS(SeqFamily::parse(f, "u^(n*n)"), Error);
    const SeqFamily g = SeqFamily::parse(f, "1/(1-u^(n))");
    CHECK(g.start() == 1);
    auto m = Field::parse("Qp(3){{t}}");
    const SeqFamily p = SeqFamily::parse(m, "3^(n-1)*t^(-5) + t^n");
    CHECK(p.at(2) == Element::parse(m, "3*t^-5 + t^2"));
    CHECK(SeqFamily::parse(m, "9^(n)").at(2) == Element::integer(m, 81));
    CHECK_THROWS_AS(SeqFamily::parse(m, "2^(n)"), Error);
    // printing re-parses to the same family
    Rng rng(2);
    for (const char *txt : {"t^(-1)*u^(n) + 2*t^n - 3*u", "1/(1+t^(-1)*u^(n))", "(u^(n) + t)/(1 - t*u^(2*n))"}) {
        const SeqFamily a = SeqFamily::parse(f, txt);
        const SeqFamily b = SeqFamily::parse(f, a.str());
        for (int64_t n = 1; n < 6; ++n)
            CHECK(a.at(n) == b.at(n));
    }
    CHECK(SeqFamily::parse(m, p.str()).at(4) == p.at(4));
    const SeqFamily r = s.reparam(2, 1);
    CHECK(r.at(3) == s.at(7));
}

TEST_CASE("convergence phenomena in F_5((u))((t))")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const Verdict a = run(f, "t^(-1)*u^(n)", "0", Topology::Higher);
    REQUIRE(a.converges());
    for (int64_t m = 1; m < 9; ++m)
        CHECK(a.tail(level_ball(0, -1, m)) == m);
    CHECK(run(f, "t^(-1)*u^(n)", "0", Topology::Valuation).diverges());
    const Verdict av = run(f, "t^(-1)*u^(n)", "0", Topology::Valuation);
    CHECK(av.valuation_ball == 0);
    CHECK(av.witness_verified);

    for (Topology top : {Topology::Higher, Topology::Valuation}) {
        CHECK(run(f, "u^(-n)*t^n", "0", top).converges());
        CHECK(run(f, "t^-1*u^3 + 2", "t^-1*u^3 + 2", top).converges());
        CHECK(run(f, "t + u^(n)", "t", top).converges() == (top == Topology::Higher));
    }
    const Verdict b = run(f, "t^(-n)*u^(n)", "0", Topology::Higher);
    REQUIRE(b.diverges());
    CHECK(*b.witness == BasicOpen::shrinking(2));
    CHECK(b.witness_verified);
    CHECK(b.witness_from == 2);
    for (int64_t n = 2; n < 30; ++n)
        CHECK_FALSE(member(Element::parse(f->residue(), "u^" + std::to_string(n)), BasicOpen::ball(n * n)).yes());
    // constant non-zero remainder: the witness excludes its exact position
    const Verdict c = run(f, "t^(-1)*u^(n) + u^2", "0", Topology::Higher);
    REQUIRE(c.diverges());
    CHECK(c.witness_verified);
    CHECK(c.witness->dump() == R"({"cutoff":1,"levels":[{"i":0,"set":{"cutoff":3,"levels":[{"i":2,"set":"zero"}],"below_rule":{"kind":"constant","set":"full"}}}],"below_rule":{"kind":"constant","set":"full"}})");
    // slope < 0 below a fixed top level
    const Verdict d = run(f, "t*u^(-n)", "0", Topology::Higher);
    REQUIRE(d.diverges());
    CHECK(d.witness_verified);
}

TEST_CASE("certificate battery for t^-1 u^n")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const SeqFamily s = SeqFamily::parse(f, "t^(-1)*u^(n)");
    const Element zero(f);
    const Verdict v = converges(s, zero, Topology::Higher);
    Rng rng(11);
    int ok = 0;
    for (int k = 0; k < 300; ++k)
        ok += check_certificate(s, zero, v, random_open(2, rng), rng);
    CHECK(ok == 300);
}

TEST_CASE("random families: certificates replay and witnesses reject")
{
    Rng rng(12);
    for (const char *fs : {"Fq(5)((u))((t))", "Qp(3)((t))", "Qp(3){{t}}", "Fq(2)((s))((u))((t))"}) {
        auto f = Field::parse(fs);
        int conv = 0, div = 0;
        for (int it = 0; it < 40; ++it) {
            std::vector<FTerm> ts;
            const int nt = static_cast<int>(uniform(rng, 1, 3));
            for (int k = 0; k < nt; ++k) {
                FTerm t;
                t.c = random_scalar(*f, rng);
                for (int v = 0; v < f->nvars(); ++v)
                    t.e[v] = Affine{uniform(rng, -1, 2), uniform(rng, -2, 2)};
                if (f->mixed())
                    t.pslope = uniform(rng, -1, 2);
                ts.push_back(t);
            }
            const SeqFamily s = SeqFamily::from_terms(f, ts);
            const Element lim = uniform(rng, 0, 1) ? Element(f) : Element::poly(f, random_poly(*f, rng, 2, 2));
            for (Topology top : {Topology::Higher, Topology::Valuation}) {
                const Verdict v = converges(s, lim, top);
                REQUIRE(v.kind != Verdict::Kind::Unknown);
                if (v.converges()) {
                    ++conv;
                    for (int k = 0; k < 8; ++k) {
                        if (top == Topology::Higher)
                            CHECK(check_certificate(s, lim, v, random_open(f->dim(), rng, 2), rng, 6));
                        else
                            CHECK(check_valuation_certificate(s, lim, v, uniform(rng, -3, 6), rng, 6));
                    }
                } else {
                    ++div;
                    CHECK(v.witness_verified);
                }
            }
        }
        CHECK(conv > 5);
        CHECK(div > 5);
    }
}

TEST_CASE("mixed characteristic phenomena")
{
    auto m = Field::parse("Qp(3){{t}}");
    CHECK(run(m, "3^(n)*t^(-5)", "0", Topology::Higher).converges());
    CHECK(run(m, "3^(n)*t^(-5)", "0", Topology::Valuation).converges());
    CHECK(run(m, "t^n", "0", Topology::Higher).converges());
    CHECK(run(m, "t^n", "0", Topology::Valuation).diverges());
    CHECK(run(m, "3^(-n)", "0", Topology::Higher).diverges());
    CHECK(run(m, "2*t^(-n)", "0", Topology::Higher).diverges());
    auto q = Field::parse("Qp(3)((t))");
    CHECK(run(q, "3^(n)*t^(-1)", "0", Topology::Higher).converges());
    CHECK(run(q, "3^(n)*t^(-1)", "0", Topology::Valuation).diverges());
    const Verdict v = run(q, "(3^(n)+2)*t^(-1)", "0", Topology::Higher);
    CHECK(v.diverges());
    CHECK(v.witness_verified);
    auto p5 = Field::parse("Qp(5){{t}}");
    const Verdict w = run(p5, "2*t^n + 5^(n)", "0", Topology::Higher);
    REQUIRE(w.converges());
    Rng rng(3);
    for (int k = 0; k < 20; ++k)
        CHECK(check_certificate(SeqFamily::parse(p5, "2*t^n + 5^(n)"), Element(p5), w, random_open(2, rng, 2), rng, 5));
}

TEST_CASE("fraction families")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    // the inverse of 1 + t^-1 u^n lies in t O_F and has constant residue 0, so it never approaches 1
    const Verdict a = run(f, "1/(1+t^(-1)*u^(n))", "1", Topology::Higher);
    REQUIRE(a.diverges());
    CHECK(a.witness_verified);
    CHECK(run(f, "1/(1+u^(n))", "1", Topology::Higher).converges());
    CHECK(run(f, "1/(1+u^(n))", "1", Topology::Valuation).diverges());
    CHECK(run(f, "t^(-1)*u^(n)/(1-t)", "0", Topology::Higher).converges());
    CHECK(run(f, "t^(-1)*u^(n)/(1-t)", "0", Topology::Valuation).diverges());
    CHECK(run(f, "(t^(-1)*u^(n) - u^(n))/(1-t)", "0", Topology::Higher).converges());
    CHECK(run(f, "(1+u+t^(n))/(1+u)", "1", Topology::Higher).converges());
    CHECK(run(f, "t^(-n)/(1+u)", "0", Topology::Higher).diverges());
    CHECK(run(f, "1/(1+u+t^(n))", "1/(1+u)", Topology::Higher).converges());
    const Verdict u = run(f, "u^(n)/(1+t*u^(-n))", "0", Topology::Higher);
    CHECK(u.kind == Verdict::Kind::Unknown);
    const Verdict c = run(f, "1/(1+u^(n))", "1", Topology::Higher);
    Rng rng(4);
    for (int k = 0; k < 30; ++k)
        CHECK(check_certificate(SeqFamily::parse(f, "1/(1+u^(n))"), Element::integer(f, 1), c, random_open(2, rng), rng, 6));
}

TEST_CASE("verdicts do not depend on the presentation")
{
    auto f = Field::parse("Fq(5)((u))((t))");
    const std::pair<const char *, const char *> same[] = {
        {"(t^(n)+u)*(t^(n)-u)", "t^(2*n) - u^2"},
        {"t^(-1)*u^(n) + t^(-1)*u^(n)", "2*u^(n)*t^(-1)"},
        {"u^(n)*t^(-n)*t^n", "u^(n)"},
        {"(t^(-n)*u^(n))^2", "t^(-2*n)*u^(2*n)"},
    };
    for (auto [a, b] : same)
        for (Topology top : {Topology::Higher, Topology::Valuation}) {
            const Verdict x = run(f, a, "0", top), y = run(f, b, "0", top);
            CHECK(x.kind == y.kind);
            CHECK(x.to_json().dump() == y.to_json().dump());
        }
}
