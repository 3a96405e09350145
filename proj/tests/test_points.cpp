#include "doctest.h"
#include "hlf/error.hpp"
#include "hlf/expansion.hpp"
#include "hlf/points.hpp"
#include "hlf/units.hpp"

using namespace hlf;

namespace {

FieldPtr F5() { return Field::parse("Fq(5)((u))((t))"); }

BaseRing ring(const FieldPtr &f, BaseRing::Kind k) { return BaseRing{f, k, std::nullopt}; }

Element el(const FieldPtr &f, const char *s) { return Element::parse(f, s); }

FTerm random_term(const Field &f, Rng &rng, int64_t slope_lo, int64_t slope_hi)
{
    FTerm t;
    t.c = random_scalar(f, rng);
    for (int v = 0; v < f.nvars(); ++v)
        t.e[static_cast<std::size_t>(v)] = Affine{uniform(rng, slope_lo, slope_hi), uniform(rng, -2, 2)};
    return t;
}

// constant part plus moving terms; the constant part is the only candidate limit
SeqFamily random_family(const FieldPtr &f, Rng &rng)
{
    std::vector<FTerm> ts;
    for (int k = 0; k < uniform(rng, 1, 2); ++k)
        ts.push_back(random_term(*f, rng, 0, 0));
    for (int k = 0; k < uniform(rng, 0, 2); ++k)
        ts.push_back(random_term(*f, rng, -1, 1));
    return SeqFamily::from_terms(f, ts);
}

Element constant_part(const SeqFamily &s)
{
    const FieldPtr &f = s.field();
    Element l(f);
    for (const auto &t : s.num())
        if (t.constant())
            l = l + SeqFamily::from_terms(f, {t}).at(0);
    return l;
}

// terms of positive v_F for every n
SeqFamily random_small_family(const FieldPtr &f, Rng &rng)
{
    std::vector<FTerm> ts;
    for (int k = 0; k < uniform(rng, 1, 2); ++k) {
        FTerm t = random_term(*f, rng, -1, 1);
        t.e[1] = Affine{uniform(rng, 0, 1), uniform(rng, 1, 2)};
        ts.push_back(t);
    }
    return SeqFamily::from_terms(f, ts);
}

bool conj(const Verdict &a, const Verdict &b, const Verdict &ab)
{
    if (a.diverges() || b.diverges())
        return ab.diverges();
    if (a.converges() && b.converges())
        return ab.converges();
    return ab.kind == Verdict::Kind::Unknown;
}

} // namespace

TEST_CASE("points of affine presentations")
{
    auto f = F5();
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    const auto G = AffinePresentation::make(R, {"X", "Y"}, {"X*Y - 1"});
    CHECK(member_points(G, parse_point(f, "(u, u^-1)").coords).yes());
    CHECK(member_points(G, parse_point(f, "u, u").coords).no());
    CHECK(member_points(affine_space(R, 2), parse_point(f, "t^-9, 1+u").coords).yes());
    CHECK(member_points(AffinePresentation::make(R, {"X"}, {"0"}), {el(f, "u")}).yes());
    CHECK_THROWS_AS(member_points(G, {el(f, "u")}), Error);
    // integer rings also require integral coordinates
    const auto O = AffinePresentation::make(ring(f, BaseRing::Kind::ValuationRing), {"X"}, {});
    CHECK(member_points(O, {el(f, "u^-3")}).yes());
    CHECK(member_points(O, {el(f, "t^-1")}).no());
    const auto OF = AffinePresentation::make(ring(f, BaseRing::Kind::RankIntegers), {"X"}, {});
    CHECK(member_points(OF, {el(f, "u^-3")}).no());
    CHECK(member_points(OF, {el(f, "u + t*u^-3")}).yes());
    CHECK_THROWS_AS(AffinePresentation::make(ring(f, BaseRing::Kind::ValuationRing), {"X"}, {"X - t^-1"}), Error);
    CHECK_THROWS_AS(AffinePresentation::make(R, {"u"}, {}), Error);
    CHECK_THROWS_AS(AffinePresentation::make(R, {"X"}, {"1/X"}), Error);
    // JSON round trip
    const auto G2 = AffinePresentation::from_json(G.to_json());
    CHECK(G2.to_json().dump() == G.to_json().dump());
    CHECK(G2.gens[0] == G.gens[0]);
}

TEST_CASE("polynomial maps")
{
    auto f = F5();
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    const auto A1 = affine_space(R, 1), A2 = affine_space(R, 2);
    const std::vector<std::string> xy{"X1", "X2"};
    const Point p = parse_point(f, "t, t^-1*u");
    CHECK(apply_map({RPoly::parse(f, xy, "X1*X2")}, A1, p).coords[0] == el(f, "u"));
    CHECK(apply_map({RPoly::var(f, 2, 0), RPoly::var(f, 2, 1)}, A2, p) == p);
    const auto G = AffinePresentation::make(R, {"X", "Y"}, {"X*Y - 1"});
    const Point g = parse_point(f, "1+u, (1+u)^-1");
    CHECK(apply_map({RPoly::var(f, 2, 0), RPoly::var(f, 2, 1)}, A2, g) == g);
    CHECK_THROWS_AS(apply_map({RPoly::var(f, 2, 0), RPoly::var(f, 2, 0)}, G, g), Error);
    try {
        apply_map({RPoly::var(f, 2, 0), RPoly::var(f, 2, 0)}, G, g);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TargetViolation);
    }
    // functoriality on random data
    Rng rng(41);
    for (int it = 0; it < 40; ++it) {
        std::vector<RPoly> phi, psi;
        for (int k = 0; k < 2; ++k) {
            RPoly a(f, 2), b(f, 2);
            for (int m = 0; m < 3; ++m) {
                a = a + RPoly::var(f, 2, static_cast<int>(uniform(rng, 0, 1))).pow(static_cast<uint32_t>(uniform(rng, 0, 2)))
                            .scale(Element::poly(f, random_poly(*f, rng, 2, 2)));
                b = b + RPoly::var(f, 2, static_cast<int>(uniform(rng, 0, 1))).pow(static_cast<uint32_t>(uniform(rng, 0, 2)))
                            .scale(Element::poly(f, random_poly(*f, rng, 2, 2)));
            }
            phi.push_back(a);
            psi.push_back(b);
        }
        std::vector<RPoly> comp;
        for (const auto &q : psi)
            comp.push_back(q.compose(phi, 2));
        const Point x{0, {Element::poly(f, random_poly(*f, rng, 2, 2)), Element::poly(f, random_poly(*f, rng, 2, 2))}};
        CHECK(apply_map(comp, A2, x) == apply_map(psi, A2, apply_map(phi, A2, x)));
    }
}

TEST_CASE("sequences of points")
{
    auto f = F5();
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    const auto G = AffinePresentation::make(R, {"X", "Y"}, {"X*Y - 1"});
    const auto A2 = affine_space(R, 2);
    const Element c = el(f, "2+u*t");
    CHECK(point_seq_converges(G, {{SeqFamily::constant(c), SeqFamily::constant(c.inv())}, Point{0, {c, c.inv()}}})
              .converges());
    // the first coordinate tends to 0, the second escapes: no limit in V(XY - 1)
    const auto pair = parse_family_tuple(f, "u^(-n)*t^n, t^(-n)*u^n");
    CHECK(converges(pair[0], Element(f), Topology::Higher).converges());
    const Verdict in_plane = point_seq_converges(A2, {pair, Point{0, {Element(f), Element(f)}}});
    CHECK(in_plane.diverges());
    CHECK(in_plane.reason.rfind("coordinate 1", 0) == 0);
    for (const char *l : {"1", "u", "t^-1*u^3 + 2"}) {
        const Element x = el(f, l);
        CHECK(point_seq_converges(G, {pair, Point{0, {x, x.inv()}}}).diverges());
    }
    // 1 + t^-1 u^n tends to 1 but its inverse does not
    const auto inv = parse_family_tuple(f, "t^(-1)*u^(n) + 1, 1/(1 + t^(-1)*u^(n))");
    const Verdict v = point_seq_converges(G, {inv, parse_point(f, "1, 1")});
    CHECK(v.diverges());
    CHECK(v.reason.rfind("coordinate 1", 0) == 0);
    CHECK(v.witness_verified);
    // the same with a small perturbation converges on both coordinates
    const auto ok = parse_family_tuple(f, "t*u^(n) + 1, 1/(1 + t*u^(n))");
    CHECK(point_seq_converges(G, {ok, parse_point(f, "1, 1")}).converges());
    CHECK_THROWS_AS(point_seq_converges(G, {ok, parse_point(f, "1, 2")}), Error);
    CHECK_THROWS_AS(point_seq_converges(G, {parse_family_tuple(f, "u^n, u^n"), parse_point(f, "1, 1")}), Error);
}

TEST_CASE("products and closed immersions at sequence level")
{
    auto f = F5();
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    Rng rng(42);
    for (int it = 0; it < 50; ++it) {
        const int a = static_cast<int>(uniform(rng, 1, 2)), b = static_cast<int>(uniform(rng, 1, 2));
        const auto Aa = affine_space(R, a, "X"), Ab = affine_space(R, b, "Y");
        const auto P = product(Aa, Ab);
        PointSeqFamily fa, fb, fp;
        for (int k = 0; k < a; ++k) {
            fa.coords.push_back(random_family(f, rng));
            fa.limit.coords.push_back(constant_part(fa.coords.back()));
        }
        for (int k = 0; k < b; ++k) {
            fb.coords.push_back(random_family(f, rng));
            fb.limit.coords.push_back(constant_part(fb.coords.back()));
        }
        fp.coords = fa.coords;
        fp.coords.insert(fp.coords.end(), fb.coords.begin(), fb.coords.end());
        fp.limit.coords = fa.limit.coords;
        fp.limit.coords.insert(fp.limit.coords.end(), fb.limit.coords.begin(), fb.limit.coords.end());
        CHECK(conj(point_seq_converges(Aa, fa), point_seq_converges(Ab, fb), point_seq_converges(P, fp)));
    }
    const auto G = AffinePresentation::make(R, {"X", "Y"}, {"X*Y - 1"});
    const auto A2 = affine_space(R, 2);
    int conv = 0, div = 0;
    for (int it = 0; it < 50; ++it) {
        // x_n = c t^a u^b (1 + eps_n), with eps small or moving exponents
        FTerm lead = random_term(*f, rng, 0, 0);
        if (it % 3 == 0)
            lead.e[static_cast<std::size_t>(uniform(rng, 0, 1))].slope = uniform(rng, 0, 1) ? 1 : -1;
        std::vector<FTerm> ts{lead};
        const SeqFamily eps = random_small_family(f, rng);
        for (const auto &t : eps.num())
            ts.push_back(t * lead);
        const SeqFamily x = SeqFamily::from_terms(f, ts);
        const Element lim = lead.constant() ? SeqFamily::from_terms(f, {lead}).at(0) : Element::integer(f, 1);
        const PointSeqFamily fam{{x, x.inv()}, Point{0, {lim, lim.inv()}}};
        const Verdict vg = point_seq_converges(G, fam), va = point_seq_converges(A2, fam);
        CHECK(member_points(G, fam.limit.coords).yes());
        CHECK(vg.kind == va.kind);
        conv += vg.converges();
        div += vg.diverges();
    }
    CHECK(conv >= 10);
    CHECK(div >= 5);
}

TEST_CASE("principal opens and units")
{
    auto f = F5();
    const RPoly X = RPoly::var(f, 1, 0);
    CHECK(in_principal_open(ring(f, BaseRing::Kind::Field), X, Point{0, {el(f, "u")}}));
    CHECK_FALSE(in_principal_open(ring(f, BaseRing::Kind::Field), X, Point{0, {Element(f)}}));
    CHECK_FALSE(in_principal_open(ring(f, BaseRing::Kind::ValuationRing), X, Point{0, {el(f, "t")}}));
    CHECK(in_principal_open(ring(f, BaseRing::Kind::ValuationRing), X, Point{0, {el(f, "u")}}));
    CHECK_FALSE(in_principal_open(ring(f, BaseRing::Kind::RankIntegers), X, Point{0, {el(f, "u")}}));
    CHECK(in_principal_open(ring(f, BaseRing::Kind::RankIntegers), X, Point{0, {el(f, "3 + t")}}));
    Rng rng(43);
    for (int it = 0; it < 100; ++it) {
        const Element x = random_element(f, rng, false);
        CHECK(in_principal_open(ring(f, BaseRing::Kind::Field), X, Point{0, {x}}) == !x.is_zero());
    }
    // G_m coherence: convergence in V(XY - 1) is the unit-group convergence
    const auto G = AffinePresentation::make(ring(f, BaseRing::Kind::Field), {"X", "Y"}, {"X*Y - 1"});
    int moving = 0;
    for (int it = 0; it < 30; ++it) {
        FTerm lead = random_term(*f, rng, 0, 0);
        if (it % 3 == 0) {
            lead.e[1].slope = uniform(rng, 0, 1) ? 1 : -1;
            ++moving;
        }
        std::vector<FTerm> ts{lead};
        const SeqFamily eps = random_small_family(f, rng);
        for (const auto &t : eps.num())
            ts.push_back(t * lead);
        const SeqFamily a = SeqFamily::from_terms(f, ts);
        const Element to = lead.constant() ? SeqFamily::from_terms(f, {lead}).at(0) : Element::integer(f, 1);
        const UnitVerdict uv = unit_converges(a, to);
        const Verdict pv = point_seq_converges(G, {{a, a.inv()}, Point{0, {to, to.inv()}}});
        CHECK(pv.kind == uv.lambda.kind);
        CHECK(uv.agree());
    }
    CHECK(moving >= 5);
}

TEST_CASE("charts of the projective line")
{
    auto f = F5();
    const ChartedScheme P1 = projective_line(ring(f, BaseRing::Kind::Field));
    Rng rng(44);
    P1.validate(rng);
    const auto y = chart_transfer(P1, Point{0, {el(f, "u")}}, 1);
    REQUIRE(y);
    CHECK(y->chart == 1);
    CHECK(y->coords[0] == el(f, "u^-1"));
    CHECK_FALSE(chart_transfer(P1, Point{0, {Element(f)}}, 1));
    for (int it = 0; it < 50; ++it) {
        const Point x{0, {random_element(f, rng, false)}};
        const auto z = chart_transfer(P1, x, 1);
        CHECK(static_cast<bool>(z) == !x.coords[0].is_zero());
        if (z) {
            CHECK(*chart_transfer(P1, *z, 0) == x);
            CHECK(points_equal(P1, x, *z));
        }
    }
    // over the valuation ring the overlap is the unit locus
    const ChartedScheme P1O = projective_line(ring(f, BaseRing::Kind::ValuationRing));
    P1O.validate(rng);
    CHECK_FALSE(chart_transfer(P1O, Point{0, {el(f, "t")}}, 1));
    CHECK(chart_transfer(P1O, Point{0, {el(f, "2 + t")}}, 1)->coords[0] == el(f, "(2 + t)^-1"));
    CHECK_FALSE(points_equal(P1O, Point{0, {el(f, "t")}}, Point{1, {el(f, "t")}}));
    // JSON round trip and refusal when a hypothesis is switched off
    const ChartedScheme Q = ChartedScheme::from_json(P1.to_json());
    CHECK(Q.to_json().dump() == P1.to_json().dump());
    ChartedScheme bad = P1;
    for (auto &c : bad.charts)
        c.base.flag_override = RingFlags{true, true, false};
    CHECK_THROWS_AS(bad.validate(rng), Error);
    ChartedScheme broken = P1;
    broken.transitions[1].maps[0].first = RPoly::constant(Element::integer(f, 2), 1);
    CHECK_THROWS_AS(broken.validate(rng), Error);
}

TEST_CASE("chart independence of convergence")
{
    auto f = F5();
    const ChartedScheme P1 = projective_line(ring(f, BaseRing::Kind::Field));
    const auto &A = P1.charts[0], &B = P1.charts[1];
    Rng rng(45);
    for (int it = 0; it < 40; ++it) {
        // x_n = x (1 + eps_n) with eps_n of positive v_F: both charts agree
        const Element x = random_element(f, rng);
        const SeqFamily eps = random_small_family(f, rng);
        const SeqFamily xs = SeqFamily::constant(x) * (SeqFamily::constant(Element::integer(f, 1)) + eps);
        const Verdict v0 = point_seq_converges(A, {{xs}, Point{0, {x}}});
        const Verdict v1 = point_seq_converges(B, {{xs.inv()}, *chart_transfer(P1, Point{0, {x}}, 1)});
        CHECK(v0.kind == v1.kind);
        CHECK(v0.kind != Verdict::Kind::Unknown);
    }
    // 1 + t^-1 u^n: chart 0 converges to 1, the transferred family does not
    const SeqFamily s = SeqFamily::parse(f, "1 + t^(-1)*u^(n)");
    CHECK(point_seq_converges(A, {{s}, Point{0, {el(f, "1")}}}).converges());
    CHECK(point_seq_converges(B, {{s.inv()}, Point{1, {el(f, "1")}}}).diverges());
}

TEST_CASE("base change and reduction")
{
    auto f = F5();
    const BaseRing O = ring(f, BaseRing::Kind::ValuationRing);
    const auto A1 = affine_space(O, 1);
    const auto rho = RingMorphismDesc::residue(f);
    const Point r = base_change_point(rho, A1, Point{0, {el(f, "t*u + u^2")}});
    CHECK(r.coords[0] == Element::parse(f->residue(), "u^2"));
    CHECK_THROWS_AS(base_change_point(rho, A1, Point{0, {el(f, "t^-1")}}), Error);
    const auto incl = RingMorphismDesc::inclusion(O);
    CHECK(base_change_point(incl, A1, Point{0, {el(f, "t*u + u^2")}}).coords[0] == el(f, "t*u + u^2"));
    CHECK(base_change(incl, A1).base.kind == BaseRing::Kind::Field);
    // V(X^2 - u) has no points: u has odd u-adic valuation
    const auto C = AffinePresentation::make(O, {"X"}, {"X^2 - u"});
    Rng rng(46);
    for (int it = 0; it < 50; ++it)
        CHECK(member_points(C, {random_element(f, rng, false)}).no());
    // generators and points move together through rho
    const auto D = AffinePresentation::make(O, {"X", "Y"}, {"X^2*Y - u - t"});
    const Point d{0, {el(f, "1 + t"), el(f, "(u + t)*(1 + t)^-2")}};
    REQUIRE(member_points(D, d.coords).yes());
    const Point dbar = base_change_point(rho, D, d);
    CHECK(dbar.coords[1] == Element::parse(f->residue(), "u"));
    CHECK(base_change(rho, D).gens[0] == RPoly::parse(f->residue(), {"X", "Y"}, "X^2*Y - u"));
    // sampled surjectivity of reduction
    const auto Dbar = base_change(rho, D);
    for (int it = 0; it < 30; ++it) {
        const Element a = random_element(f->residue(), rng), b = random_element(f->residue(), rng, false);
        const Point xb{0, {b}};
        const auto p = reduction_preimage(A1, xb);
        REQUIRE(p);
        CHECK(base_change_point(rho, A1, *p) == xb);
        const Point yb{0, {a, Element::parse(f->residue(), "u") / (a * a)}};
        REQUIRE(member_points(Dbar, yb.coords).yes());
        const auto q = reduction_preimage(D, yb);
        REQUIRE(q);
        CHECK(member_points(D, q->coords).yes());
        CHECK(base_change_point(rho, D, *q) == yb);
    }
    for (int it = 0; it < 50; ++it) {
        const BasicOpen U = random_open(2, rng);
        CHECK(reduction_open_image(U) == U.level(0));
    }
}

TEST_CASE("base change of sequences")
{
    auto f = F5();
    const BaseRing O = ring(f, BaseRing::Kind::ValuationRing);
    const auto A1 = affine_space(O, 1);
    const auto rho = RingMorphismDesc::residue(f);
    const auto incl = RingMorphismDesc::inclusion(O);
    Rng rng(47);
    int conv = 0;
    for (int it = 0; it < 60; ++it) {
        // integral families: top exponents with nonnegative values from the start
        std::vector<FTerm> ts;
        for (int k = 0; k < uniform(rng, 1, 3); ++k) {
            FTerm t = random_term(*f, rng, -1, 1);
            t.e[1] = Affine{uniform(rng, 0, 1), uniform(rng, 0, 1)};
            if (k == 0)
                t.e[1] = Affine{0, 0};
            ts.push_back(t);
        }
        const SeqFamily s = SeqFamily::from_terms(f, ts);
        const Element l = constant_part(s);
        const SeqFamily sr = rho.apply(s);
        for (int64_t n = sr.start(); n < sr.start() + 5; ++n)
            CHECK(sr.at(n) == residue(s.at(n)));
        const Verdict v = point_seq_converges(A1, {{s}, Point{0, {l}}});
        if (!v.converges())
            continue;
        ++conv;
        const auto A1F = base_change(incl, A1);
        CHECK(point_seq_converges(A1F, {{incl.apply(s)}, Point{0, {l}}}).converges());
        const auto A1bar = base_change(rho, A1);
        CHECK(point_seq_converges(A1bar, {{sr}, base_change_point(rho, A1, Point{0, {l}})}).converges());
    }
    CHECK(conv >= 15);
    // fraction families reduce term by term
    const SeqFamily q = SeqFamily::parse(f, "(u^(n) + t)/(1 + t*u^(-n))");
    const SeqFamily qr = rho.apply(q);
    for (int64_t n = qr.start(); n < qr.start() + 4; ++n)
        CHECK(qr.at(n) == residue(q.at(n)));
    CHECK_THROWS_AS(rho.apply(SeqFamily::parse(f, "t^(-1)*u^n")), Error);
}

TEST_CASE("Weil restriction along theta^2 = u")
{
    auto f = F5();
    const Extension S = Extension::parse(f, "theta", "theta^2 - u");
    REQUIRE(S.degree() == 2);
    REQUIRE(S.radical_var() == 0);
    const auto sigma = RingMorphismDesc::finite_free(S);
    const WeilRestriction A = weil_restrict(ExtPresentation::make(S, {"Y"}, {}), sigma);
    CHECK(A.X.arity() == 2);
    CHECK(A.X.gens.empty());
    const WeilRestriction W = weil_restrict(ExtPresentation::make(S, {"Y"}, {"Y^2 - theta"}), sigma);
    REQUIRE(W.X.gens.size() == 2);
    CHECK(W.X.vars == std::vector<std::string>{"Y_0", "Y_1"});
    CHECK(W.X.gens[0] == RPoly::parse(f, W.X.vars, "Y_0^2 + u*Y_1^2"));
    CHECK(W.X.gens[1] == RPoly::parse(f, W.X.vars, "2*Y_0*Y_1 - 1"));
    CHECK_THROWS_AS(weil_restrict(W.Y, RingMorphismDesc::inclusion(ring(f, BaseRing::Kind::ValuationRing))), Error);
    CHECK_THROWS_AS(Extension::parse(f, "theta", "u"), Error);
    // components against (a + b theta)(c + d theta) = (ac + u bd) + (ad + bc) theta
    const Element u = el(f, "u");
    auto mul = [&](const SElem &x, const SElem &y) {
        return SElem{x[0] * y[0] + u * x[1] * y[1], x[0] * y[1] + x[1] * y[0]};
    };
    const WeilRestriction W3 =
        weil_restrict(ExtPresentation::make(S, {"Y", "Z"}, {"Y^3 - t*theta*Z + u", "Y*Z^2 - theta^3"}), sigma);
    Rng rng(48);
    for (int it = 0; it < 100; ++it) {
        auto rp = [&] { return Element::poly(f, random_poly(*f, rng, 3, 3)); };
        const SElem y{rp(), rp()};
        const SElem z{rp(), rp()};
        const SElem th{Element(f), Element::integer(f, 1)};
        const SElem g1 = mul(mul(y, y), y);
        const SElem g1b = mul(SElem{el(f, "t"), Element(f)}, mul(th, z));
        const SElem v1{g1[0] - g1b[0] + u, g1[1] - g1b[1]};
        const SElem v2{mul(y, mul(z, z))[0] - mul(th, mul(th, th))[0], mul(y, mul(z, z))[1] - mul(th, mul(th, th))[1]};
        const Point x = W3.encode({y, z});
        CHECK(W3.decode(x) == SPoint{y, z});
        std::vector<Element> comps;
        for (const auto &g : W3.X.gens)
            comps.push_back(g.eval(x.coords));
        // zero components are dropped from the generator list
        std::vector<Element> want;
        for (const auto &c : {v1[0], v1[1], v2[0], v2[1]})
            want.push_back(c);
        REQUIRE(W3.X.gens.size() == 4);
        CHECK(comps == want);
        CHECK(member_s_points(W3.Y, {y, z}) == member_points(W3.X, x.coords).yes());
    }
    // Y = theta is a point of V(Y^2 - u) over S
    const WeilRestriction R2 = weil_restrict(ExtPresentation::make(S, {"Y"}, {"Y^2 - u"}), sigma);
    const SPoint yp{{Element(f), Element::integer(f, 1)}};
    CHECK(member_s_points(R2.Y, yp));
    CHECK(member_points(R2.X, R2.encode(yp).coords).yes());
    CHECK(s_to_field(S, yp[0]) == Element::parse(S.as_field(), "theta"));
}

TEST_CASE("Weil restriction preserves convergence")
{
    auto f = F5();
    const Extension S = Extension::parse(f, "theta", "theta^2 - u");
    const auto sigma = RingMorphismDesc::finite_free(S);
    Rng rng(49);
    int conv = 0, div = 0;
    for (int it = 0; it < 40; ++it) {
        const int m = static_cast<int>(uniform(rng, 1, 2));
        std::vector<std::string> vars;
        for (int j = 0; j < m; ++j)
            vars.push_back("Y" + std::to_string(j));
        const ExtPresentation Y = ExtPresentation::make(S, vars, {});
        const WeilRestriction W = weil_restrict(Y, sigma);
        SPointFamily fam;
        for (int j = 0; j < m; ++j) {
            std::vector<SeqFamily> c;
            SElem l;
            for (int k = 0; k < 2; ++k) {
                c.push_back(random_family(f, rng));
                l.push_back(constant_part(c.back()));
            }
            fam.coords.push_back(c);
            fam.limit.push_back(l);
        }
        const Verdict vs = s_point_seq_converges(Y, fam);
        const Verdict vx = point_seq_converges(W.X, encode_family(W, fam));
        CHECK(vs.kind == vx.kind);
        conv += vs.converges();
        div += vs.diverges();
    }
    CHECK(conv >= 5);
    CHECK(div >= 5);
    // base change into S viewed as a field
    const Element x = el(f, "u + t");
    CHECK(sigma.apply(x) == Element::parse(S.as_field(), "theta^2 + t"));
    const SeqFamily s = SeqFamily::parse(f, "t^(-1)*u^(n)");
    CHECK(sigma.apply(s).at(3) == Element::parse(S.as_field(), "t^-1*theta^6"));
}
