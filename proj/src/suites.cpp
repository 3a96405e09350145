#include "hlf/suites.hpp"

#include <algorithm>
#include <functional>
#include <iterator>

#include "hlf/error.hpp"
#include "hlf/expansion.hpp"
#include "hlf/points.hpp"
#include "hlf/units.hpp"
#include "hlf/valuation.hpp"
#include "hlf/witness.hpp"

namespace hlf {

namespace {

using Body = std::function<void(Rng &, CheckLine &)>;

uint64_t fnv1a(const std::string &s)
{
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void tally(CheckLine &c, bool ok, const std::string &what)
{
    if (ok) {
        ++c.passed;
        return;
    }
    if (c.failed++ == 0)
        c.detail["first_failure"] = what;
}

CheckLine run_check(const std::string &suite, const std::string &name, uint64_t seed, const Body &body)
{
    CheckLine c;
    c.name = name;
    Rng rng(seed ^ fnv1a(suite + "/" + name));
    try {
        body(rng, c);
    } catch (const Error &e) {
        ++c.failed;
        c.detail["error"] = e.what();
    }
    return c;
}

FTerm random_term(const Field &f, Rng &rng, int64_t slope_lo, int64_t slope_hi)
{
    FTerm t;
    t.c = random_scalar(f, rng);
    for (int v = 0; v < f.nvars(); ++v)
        t.e[static_cast<std::size_t>(v)] = Affine{uniform(rng, slope_lo, slope_hi), uniform(rng, -2, 2)};
    return t;
}

// fixed part plus moving terms
SeqFamily random_family(const FieldPtr &f, Rng &rng)
{
    std::vector<FTerm> ts;
    for (int k = 0; k < uniform(rng, 1, 2); ++k)
        ts.push_back(random_term(*f, rng, 0, 0));
    for (int k = 0; k < uniform(rng, 0, 2); ++k)
        ts.push_back(random_term(*f, rng, -1, 1));
    return SeqFamily::from_terms(f, ts);
}

Element fixed_part(const SeqFamily &s)
{
    Element l(s.field());
    for (const auto &t : s.num())
        if (t.constant())
            l = l + SeqFamily::from_terms(s.field(), {t}).at(0);
    return l;
}

// terms of positive v_F for every n
std::vector<FTerm> small_terms(const Field &f, Rng &rng)
{
    std::vector<FTerm> ts;
    const std::size_t top = static_cast<std::size_t>(f.coords().back().var);
    for (int k = 0; k < uniform(rng, 1, 2); ++k) {
        FTerm t = random_term(f, rng, -1, 1);
        t.e[top] = Affine{uniform(rng, 0, 1), uniform(rng, 1, 2)};
        ts.push_back(t);
    }
    return ts;
}

struct UnitSample {
    SeqFamily a;
    Element to;
    bool moving = false;
};

// lead * (1 + eps): the lead moves when `moving`
UnitSample random_unit_family(const FieldPtr &f, Rng &rng, bool moving)
{
    FTerm lead = random_term(*f, rng, 0, 0);
    if (moving)
        lead.e[static_cast<std::size_t>(uniform(rng, 0, f->nvars() - 1))].slope = uniform(rng, 0, 1) ? 1 : -1;
    std::vector<FTerm> ts{lead};
    for (const auto &t : small_terms(*f, rng))
        ts.push_back(t * lead);
    UnitSample s;
    s.a = SeqFamily::from_terms(f, ts);
    s.to = lead.constant() ? SeqFamily::from_terms(f, {lead}).at(0) : Element::integer(f, 1);
    s.moving = !lead.constant();
    return s;
}

BaseRing ring(const FieldPtr &f, BaseRing::Kind k) { return BaseRing{f, k, std::nullopt}; }

const char *kValuationFields[] = {"Fq(5)((u))((t))", "Qp(3)((t))", "Qp(3){{t}}"};

// ---- axioms

void valuation_additivity(Rng &rng, CheckLine &c)
{
    for (const char *fs : kValuationFields) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < 500; ++it) {
            const Element x = random_element(f, rng), y = random_element(f, rng);
            const Element xy = x * y;
            bool ok = true;
            for (int r = 1; r <= f->dim(); ++r) {
                const ValVec a = rank_valuation(x, r), b = rank_valuation(y, r), ab = rank_valuation(xy, r);
                for (int k = 0; k < r; ++k)
                    ok = ok && ab[static_cast<std::size_t>(k)] == a[static_cast<std::size_t>(k)] + b[static_cast<std::size_t>(k)];
            }
            tally(c, ok, std::string(fs) + ": v(xy) != v(x)+v(y) for " + x.str() + ", " + y.str());
        }
    }
}

void ultrametric(Rng &rng, CheckLine &c)
{
    for (const char *fs : kValuationFields) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < 500; ++it) {
            const Element x = random_element(f, rng), y = random_element(f, rng);
            const Element s = x + y;
            if (s.is_zero())
                continue;
            bool ok = true;
            for (int r = 1; r <= f->dim(); ++r) {
                const ValVec a = rank_valuation(x, r), b = rank_valuation(y, r);
                const ValVec &m = compare_inverse_lex(a, b) <= 0 ? a : b;
                ok = ok && compare_inverse_lex(rank_valuation(s, r), m) >= 0;
            }
            tally(c, ok, std::string(fs) + ": ultrametric fails for " + x.str() + ", " + y.str());
        }
    }
}

void integer_chain(Rng &rng, CheckLine &c)
{
    for (const char *fs : kValuationFields) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < 100; ++it) {
            const Element x = random_element(f, rng), y = random_element(f, rng);
            bool ok = true;
            for (int l = 1; l <= f->dim(); ++l) {
                if (in_integer_ring(x, l) && in_integer_ring(y, l))
                    ok = ok && in_integer_ring(x + y, l) && in_integer_ring(x * y, l);
                if (l < f->dim() && in_integer_ring(x, l))
                    ok = ok && in_integer_ring(x, l + 1);
            }
            tally(c, ok, std::string(fs) + ": chain O_1 c ... c O_n fails at " + x.str());
        }
    }
}

void section_property(Rng &rng, CheckLine &c)
{
    for (const char *fs : kValuationFields) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < 200; ++it) {
            const Element y = random_element(f->residue(), rng, false);
            tally(c, residue(lift_h(f, y, 8).value) == y, std::string(fs) + ": residue(h(y)) != y for " + y.str());
        }
    }
}

void unit_decomposition(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    for (int it = 0; it < 100; ++it) {
        const Element x = random_element(f, rng);
        const UnitDecomposition d = unit_decompose(x);
        tally(c, recompose(f, d) == x && in_rank_maximal_ideal(d.principal - Element::integer(f, 1)),
              "decomposition of " + x.str());
    }
}

// ---- topology

void residue_openness(Rng &rng, CheckLine &c, int battery)
{
    for (const char *fs : {"Fq(5)((u))((t))", "Qp(3){{t}}"}) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < battery; ++it) {
            const BasicOpen U = random_open(2, rng);
            const BasicOpen U0 = residue_image(U);
            bool ok = U0 == U.level(0);
            for (int k = 0; k < 50; ++k) {
                if (k % 2 == 0) {
                    const Element yb = random_element(f->residue(), rng, false, 3);
                    ok = ok && member(lift_h(f, yb, 8).value, U).verdict == member(yb, U0).verdict;
                } else {
                    const Element x = random_element(f, rng, false, 3);
                    if (!x.is_zero() && x.top_valuation() < 0)
                        continue;
                    if (member(x, U).yes())
                        ok = ok && member(residue(x), U0).yes();
                }
            }
            tally(c, ok, std::string(fs) + ": residue image of " + U.dump());
        }
    }
}

void convergence_phenomena(Rng &rng, CheckLine &c, int battery)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const Element zero(f);
    const SeqFamily a = SeqFamily::parse(f, "t^(-1)*u^(n)");
    const Verdict va = converges(a, zero, Topology::Higher);
    tally(c, va.converges(), "t^-1 u^n -> 0 in the higher topology");
    if (va.converges()) {
        int64_t ok = 0;
        for (int k = 0; k < 10 * battery; ++k)
            ok += check_certificate(a, zero, va, random_open(2, rng), rng, 6);
        c.detail["certificate_battery"] = Json{{"descriptors", 10 * battery}, {"replayed", ok}};
        tally(c, ok == 10 * battery, "certificate replay for t^-1 u^n");
    }
    const Verdict vv = converges(a, zero, Topology::Valuation);
    tally(c, vv.diverges() && vv.witness_verified, "t^-1 u^n diverges in the valuation topology");
    const SeqFamily b = SeqFamily::parse(f, "u^(-n)*t^n");
    tally(c, converges(b, zero, Topology::Higher).converges() && converges(b, zero, Topology::Valuation).converges(),
          "u^-n t^n -> 0 in both topologies");
    const Verdict vd = converges(SeqFamily::parse(f, "t^(-n)*u^(n)"), zero, Topology::Higher);
    bool rejected = vd.diverges() && vd.witness_verified;
    if (rejected)
        for (int64_t n = vd.witness_from; n < vd.witness_from + 40; ++n)
            rejected = rejected && member(Element::parse(f, "t^-" + std::to_string(n) + "*u^" + std::to_string(n)),
                                          *vd.witness)
                                       .no();
    tally(c, rejected, "t^-n u^n diverges with a verified defeating descriptor");
}

void random_certificates(Rng &rng, CheckLine &c)
{
    for (const char *fs : {"Fq(5)((u))((t))", "Qp(3)((t))", "Qp(3){{t}}", "Fq(2)((s))((u))((t))"}) {
        const FieldPtr f = Field::parse(fs);
        for (int it = 0; it < 25; ++it) {
            std::vector<FTerm> ts;
            for (int k = 0; k < uniform(rng, 1, 3); ++k) {
                FTerm t = random_term(*f, rng, -1, 2);
                if (f->mixed())
                    t.pslope = uniform(rng, -1, 2);
                ts.push_back(t);
            }
            const SeqFamily s = SeqFamily::from_terms(f, ts);
            const Element lim = uniform(rng, 0, 1) ? Element(f) : Element::poly(f, random_poly(*f, rng, 2, 2));
            for (Topology top : {Topology::Higher, Topology::Valuation}) {
                const Verdict v = converges(s, lim, top);
                bool ok = v.kind != Verdict::Kind::Unknown;
                if (v.converges())
                    for (int k = 0; k < 4; ++k)
                        ok = ok && (top == Topology::Higher
                                        ? check_certificate(s, lim, v, random_open(f->dim(), rng, 2), rng, 4)
                                        : check_valuation_certificate(s, lim, v, uniform(rng, -3, 6), rng, 4));
                else
                    ok = ok && v.witness_verified;
                tally(c, ok, std::string(fs) + ": " + s.str() + " -> " + lim.str());
            }
        }
    }
}

void product_continuity(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    int pairs = 0;
    for (int guard = 0; pairs < 100 && guard < 5000; ++guard) {
        const SeqFamily a = random_family(f, rng), b = random_family(f, rng);
        const Element la = fixed_part(a), lb = fixed_part(b);
        if (!converges(a, la, Topology::Higher).converges() || !converges(b, lb, Topology::Higher).converges())
            continue;
        ++pairs;
        tally(c, product_continuity_check(a, la, b, lb).converges(), a.str() + " times " + b.str());
    }
    c.detail["pairs"] = pairs;
}

// ---- counterexamples

void product_escape(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const BasicOpen W = canonical_product_target();
    for (int it = 0; it < 20; ++it) {
        const BasicOpen U = random_open(2, rng), V = random_open(2, rng);
        const auto p = product_escape_witness(f, U, V, W);
        tally(c, p && member(p->x, U).yes() && member(p->y, V).yes() && member(p->x * p->y, W).no(),
              "no escape pair for " + U.dump() + ", " + V.dump());
    }
}

void subgroup_escape(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    for (int it = 0; it < 50; ++it) {
        const BasicOpen U = random_subgroup_open(rng);
        const SubgroupEscape s = subgroup_escape_witness(f, U);
        const Element p = Element::parse(f, "t^" + std::to_string(s.a) + "*u^-" + std::to_string(s.c));
        const Element q = Element::parse(f, "t^-" + std::to_string(s.a) + "*u^" + std::to_string(s.c));
        tally(c, member(p, U).yes() && member(q, U).yes() && member(s.element, U).yes() && s.element == p + q,
              "subgroup witness for " + U.dump());
    }
}

void closed_c(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    int constant = 0;
    for (int it = 0; it < 50; ++it) {
        const Affine a{uniform(rng, 0, 2), uniform(rng, 1, 4)}, cc{uniform(rng, 0, 2), uniform(rng, 1, 4)};
        const ClosedCheck r = seq_closed_check_C(f, a, cc);
        const bool fixed = a.constant() && cc.constant();
        constant += fixed;
        const bool ok = r.verdict.converges() == fixed &&
                        (r.verdict.converges() ? r.limit_in_c : r.diverges_for_every_limit && r.verdict.witness_verified);
        tally(c, ok, "a(n) = " + a.str() + ", c(n) = " + cc.str());
    }
    c.detail["constant_parameters"] = constant;
}

void unit_routes(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    int moving_divergent = 0;
    for (int it = 0; it < 100; ++it) {
        const UnitSample s = random_unit_family(f, rng, it % 2 == 0);
        const UnitVerdict v = unit_converges(s.a, s.to);
        moving_divergent += s.moving && v.tau.diverges() && v.lambda.diverges();
        tally(c, v.agree() && v.tau.kind != Verdict::Kind::Unknown, s.a.str() + " -> " + s.to.str());
    }
    c.detail["divergent_with_moving_exponents"] = moving_divergent;
    tally(c, moving_divergent >= 20, "fewer than 20 divergent families with moving exponents");
}

// ---- points

void product_conjunction(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    for (int it = 0; it < 50; ++it) {
        const int a = static_cast<int>(uniform(rng, 1, 2)), b = static_cast<int>(uniform(rng, 1, 2));
        const auto Aa = affine_space(R, a, "X"), Ab = affine_space(R, b, "Y");
        PointSeqFamily fa, fb, fp;
        for (int k = 0; k < a + b; ++k) {
            PointSeqFamily &g = k < a ? fa : fb;
            g.coords.push_back(random_family(f, rng));
            g.limit.coords.push_back(fixed_part(g.coords.back()));
            fp.coords.push_back(g.coords.back());
            fp.limit.coords.push_back(g.limit.coords.back());
        }
        const Verdict va = point_seq_converges(Aa, fa), vb = point_seq_converges(Ab, fb);
        const Verdict vp = point_seq_converges(product(Aa, Ab), fp);
        const Verdict::Kind want = va.diverges() || vb.diverges()               ? Verdict::Kind::Diverges
                                   : va.converges() && vb.converges()           ? Verdict::Kind::Converges
                                                                                : Verdict::Kind::Unknown;
        tally(c, vp.kind == want, "product verdict");
    }
}

void closed_immersion(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const BaseRing R = ring(f, BaseRing::Kind::Field);
    const auto G = AffinePresentation::make(R, {"X", "Y"}, {"X*Y - 1"});
    const auto A2 = affine_space(R, 2);
    for (int it = 0; it < 50; ++it) {
        const UnitSample s = random_unit_family(f, rng, it % 3 == 0);
        const PointSeqFamily fam{{s.a, s.a.inv()}, Point{0, {s.to, s.to.inv()}}};
        const Verdict vg = point_seq_converges(G, fam), va = point_seq_converges(A2, fam);
        tally(c, vg.kind == va.kind && member_points(G, fam.limit.coords).yes(), s.a.str());
    }
}

void base_change_continuity(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const BaseRing O = ring(f, BaseRing::Kind::ValuationRing);
    const auto A1 = affine_space(O, 1);
    const auto rho = RingMorphismDesc::residue(f);
    const auto incl = RingMorphismDesc::inclusion(O);
    const auto A1F = base_change(incl, A1), A1bar = base_change(rho, A1);
    int families = 0;
    for (int guard = 0; families < 50 && guard < 2000; ++guard) {
        std::vector<FTerm> ts;
        for (int k = 0; k < uniform(rng, 1, 3); ++k) {
            FTerm t = random_term(*f, rng, -1, 1);
            t.e[1] = k == 0 ? Affine{0, 0} : Affine{uniform(rng, 0, 1), uniform(rng, 0, 1)};
            ts.push_back(t);
        }
        const SeqFamily s = SeqFamily::from_terms(f, ts);
        const Element l = fixed_part(s);
        if (!point_seq_converges(A1, {{s}, Point{0, {l}}}).converges())
            continue;
        ++families;
        const bool inc = point_seq_converges(A1F, {{incl.apply(s)}, Point{0, {l}}}).converges();
        const bool red =
            point_seq_converges(A1bar, {{rho.apply(s)}, base_change_point(rho, A1, Point{0, {l}})}).converges();
        tally(c, inc && red, s.str());
    }
    c.detail["families"] = families;
}

void gm_coherence(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const auto G = AffinePresentation::make(ring(f, BaseRing::Kind::Field), {"X", "Y"}, {"X*Y - 1"});
    const RPoly X = RPoly::var(f, 1, 0);
    for (int it = 0; it < 30; ++it) {
        const UnitSample s = random_unit_family(f, rng, it % 3 == 0);
        const UnitVerdict uv = unit_converges(s.a, s.to);
        const Verdict pv = point_seq_converges(G, {{s.a, s.a.inv()}, Point{0, {s.to, s.to.inv()}}});
        const Element x = random_element(f, rng, false);
        const bool open_ok = in_principal_open(ring(f, BaseRing::Kind::Field), X, Point{0, {x}}) == !x.is_zero();
        tally(c, pv.kind == uv.lambda.kind && uv.agree() && open_ok, s.a.str());
    }
}

void chart_cocycle(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    for (auto kind : {BaseRing::Kind::Field, BaseRing::Kind::ValuationRing}) {
        const ChartedScheme P1 = projective_line(ring(f, kind));
        P1.validate(rng);
        for (int it = 0; it < 25; ++it) {
            const Point x{0, {random_element(f, rng, false, 2)}};
            if (!member_points(P1.charts[0], x.coords).yes())
                continue;
            const auto y = chart_transfer(P1, x, 1);
            const bool expect = ring(f, kind).is_unit(x.coords[0]);
            bool ok = static_cast<bool>(y) == expect;
            if (y)
                ok = ok && chart_transfer(P1, *y, 0) == x;
            tally(c, ok, "P1 transfer of " + x.str());
        }
    }
}

void reduction_surjectivity(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const FieldPtr res = f->residue();
    const BaseRing O = ring(f, BaseRing::Kind::ValuationRing);
    const auto rho = RingMorphismDesc::residue(f);
    const auto A1 = affine_space(O, 1);
    int a1 = 0, substitute = 0;
    for (int it = 0; it < 30; ++it) {
        const Point xb{0, {random_element(res, rng, false)}};
        const auto p = reduction_preimage(A1, xb);
        const bool ok = p && base_change_point(rho, A1, *p) == xb;
        a1 += ok;
        tally(c, ok, "A1 preimage of " + xb.str());
    }
    c.detail["a1_preimages"] = a1;
    // X^2 = u has no solution over F_5((u)): u has odd valuation
    const auto C = AffinePresentation::make(O, {"X"}, {"X^2 - u"});
    const auto Cbar = base_change(rho, C);
    int rejected = 0;
    for (int it = 0; it < 30; ++it) {
        const Element y = random_element(res, rng, false);
        const bool none = !member_points(Cbar, {y}).yes() && (y.is_zero() || (y * y).valuation()[0] % 2 == 0);
        rejected += none;
        tally(c, none, "residue candidate " + y.str());
    }
    c.detail["x2_minus_u"] = Json{{"residue_points", 0}, {"candidates_rejected", rejected}};
    // a curve whose reduction needs a correction in t
    const auto D = AffinePresentation::make(O, {"X", "Y"}, {"X^2*Y - u - t"});
    const auto Dbar = base_change(rho, D);
    for (int it = 0; it < 30; ++it) {
        const Element a = random_element(res, rng);
        const Point yb{0, {a, Element::param(res, 0) / (a * a)}};
        if (!member_points(Dbar, yb.coords).yes()) {
            tally(c, false, "bad residue sample");
            continue;
        }
        const auto q = reduction_preimage(D, yb);
        const bool ok = q && base_change_point(rho, D, *q) == yb;
        substitute += ok;
        tally(c, ok, "preimage of " + yb.str() + " on X^2 Y = u + t");
    }
    c.detail["substitute_preimages"] = substitute;
}

void reduction_open(Rng &rng, CheckLine &c)
{
    for (int it = 0; it < 50; ++it) {
        const BasicOpen U = random_open(2, rng);
        tally(c, reduction_open_image(U) == U.level(0), U.dump());
    }
}

// ---- Weil restriction

void weil_encode_decode(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const Extension S = Extension::parse(f, "theta", "theta^2 - u");
    const WeilRestriction W =
        weil_restrict(ExtPresentation::make(S, {"Y", "Z"}, {}), RingMorphismDesc::finite_free(S));
    for (int it = 0; it < 100; ++it) {
        SPoint y;
        for (int j = 0; j < 2; ++j)
            y.push_back({random_element(f, rng, false), random_element(f, rng, false)});
        const Point x = W.encode(y);
        tally(c, W.decode(x) == y && W.encode(W.decode(x)) == x, "round trip");
    }
}

// polynomials in theta, reduced by the monic modulus m from the top down
std::vector<Element> theta_mulmod(const std::vector<Element> &m, const std::vector<Element> &a,
                                  const std::vector<Element> &b)
{
    const std::size_t d = m.size() - 1;
    std::vector<Element> r(a.size() + b.size() - 1, Element(m[0].field()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    for (std::size_t k = r.size(); k-- > d;) {
        const Element top = r[k];
        for (std::size_t i = 0; i < d; ++i)
            r[k - d + i] = r[k - d + i] - top * m[i];
        r.pop_back();
    }
    r.resize(d, Element(m[0].field()));
    return r;
}

// restricted generators evaluated at x are the nonzero theta-components of g(decode(x))
void weil_resubstitution(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> systems = {
        {{"Y"}, {"Y^2 - theta"}},
        {{"Y", "Z"}, {"Y^3 - t*theta*Z + u", "Y*Z^2 - theta^3"}},
    };
    for (int it = 0; it < 8; ++it) {
        std::string g;
        for (int k = 0; k < 3; ++k)
            g += (k ? " + " : "") + std::string("(") + Element::poly(f, random_poly(*f, rng, 2, 2)).str() + ")*Y^" +
                 std::to_string(uniform(rng, 0, 3)) + "*theta^" + std::to_string(uniform(rng, 0, 3));
        systems.push_back({{"Y"}, {g}});
    }
    for (const char *modulus : {"theta^2 - u", "theta^2 + t*theta - u", "theta^3 - t"}) {
        const Extension S = Extension::parse(f, "theta", modulus);
        const std::size_t d = static_cast<std::size_t>(S.degree());
        for (const auto &[vars, gens] : systems) {
            const ExtPresentation Y = ExtPresentation::make(S, vars, gens);
            const WeilRestriction W = weil_restrict(Y, RingMorphismDesc::finite_free(S));
            bool ok = W.X.gens.size() <= d * Y.gens.size();
            for (int trial = 0; trial < 4 && ok; ++trial) {
                Point x;
                for (std::size_t i = 0; i < d * vars.size(); ++i)
                    x.coords.push_back(Element::poly(f, random_poly(*f, rng, 2, 2)));
                const SPoint y = W.decode(x);
                std::vector<std::string> comps, values;
                for (const auto &g : Y.gens) {
                    std::vector<Element> total(d, Element(f));
                    for (const auto &[mono, coef] : g.terms()) {
                        std::vector<Element> term{coef};
                        for (std::size_t j = 0; j < vars.size(); ++j)
                            for (uint32_t e = 0; e < mono[j]; ++e)
                                term = theta_mulmod(S.modulus, term, y[j]);
                        std::vector<Element> th{Element(f), Element::integer(f, 1)};
                        for (uint32_t e = 0; e < mono.back(); ++e)
                            term = theta_mulmod(S.modulus, term, th);
                        term.resize(d, Element(f));
                        for (std::size_t k = 0; k < d; ++k)
                            total[k] = total[k] + term[k];
                    }
                    for (const auto &e : total)
                        comps.push_back(e.str());
                }
                for (const auto &p : W.X.gens)
                    values.push_back(p.eval(x.coords).str());
                // every restricted generator is a component; the dropped ones vanish identically
                std::sort(comps.begin(), comps.end());
                std::sort(values.begin(), values.end());
                std::vector<std::string> rest;
                std::set_difference(comps.begin(), comps.end(), values.begin(), values.end(),
                                    std::back_inserter(rest));
                ok = rest.size() + values.size() == comps.size();
                for (const auto &r : rest)
                    ok = ok && r == Element(f).str();
            }
            tally(c, ok, std::string(modulus) + ": restriction of " + gens.front());
        }
    }
}

void weil_convergence(Rng &rng, CheckLine &c)
{
    const FieldPtr f = Field::parse("Fq(5)((u))((t))");
    const Extension S = Extension::parse(f, "theta", "theta^2 - u");
    const auto sigma = RingMorphismDesc::finite_free(S);
    int conv = 0, div = 0;
    for (int it = 0; it < 30; ++it) {
        const int m = static_cast<int>(uniform(rng, 1, 2));
        std::vector<std::string> vars;
        for (int j = 0; j < m; ++j)
            vars.push_back("Y" + std::to_string(j));
        const ExtPresentation Y = ExtPresentation::make(S, vars, {});
        const WeilRestriction W = weil_restrict(Y, sigma);
        SPointFamily fam;
        for (int j = 0; j < m; ++j) {
            std::vector<SeqFamily> cs;
            SElem l;
            for (int k = 0; k < 2; ++k) {
                cs.push_back(random_family(f, rng));
                l.push_back(fixed_part(cs.back()));
            }
            fam.coords.push_back(cs);
            fam.limit.push_back(l);
        }
        const Verdict vs = s_point_seq_converges(Y, fam);
        const Verdict vx = point_seq_converges(W.X, encode_family(W, fam));
        conv += vs.converges();
        div += vs.diverges();
        tally(c, vs.kind == vx.kind && vs.kind != Verdict::Kind::Unknown, "S-family " + std::to_string(it));
    }
    c.detail["converging"] = conv;
    c.detail["diverging"] = div;
}

struct Entry {
    const char *name;
    std::function<void(Rng &, CheckLine &, int)> body;
};

std::vector<Entry> entries(const std::string &suite)
{
    auto plain = [](void (*fn)(Rng &, CheckLine &)) {
        return [fn](Rng &r, CheckLine &c, int) { fn(r, c); };
    };
    if (suite == "axioms")
        return {{"valuation-additivity", plain(valuation_additivity)},
                {"ultrametric", plain(ultrametric)},
                {"integer-ring-chain", plain(integer_chain)},
                {"section-property", plain(section_property)},
                {"unit-decomposition", plain(unit_decomposition)}};
    if (suite == "topology")
        return {{"residue-openness", residue_openness},
                {"convergence-phenomena", convergence_phenomena},
                {"random-certificates", plain(random_certificates)},
                {"product-continuity", plain(product_continuity)}};
    if (suite == "counterexamples")
        return {{"product-escape", plain(product_escape)},
                {"subgroup-escape", plain(subgroup_escape)},
                {"closed-C", plain(closed_c)},
                {"unit-routes", plain(unit_routes)}};
    if (suite == "points")
        return {{"product-conjunction", plain(product_conjunction)},
                {"closed-immersion", plain(closed_immersion)},
                {"base-change-continuity", plain(base_change_continuity)},
                {"gm-coherence", plain(gm_coherence)},
                {"chart-cocycle", plain(chart_cocycle)},
                {"reduction-surjectivity", plain(reduction_surjectivity)},
                {"reduction-open-image", plain(reduction_open)}};
    if (suite == "weil")
        return {{"encode-decode", plain(weil_encode_decode)},
                {"restricted-ideal", plain(weil_resubstitution)},
                {"convergence-agreement", plain(weil_convergence)}};
    fail(ErrorCode::InvalidInput, "unknown suite '" + suite + "'");
}

} // namespace

Json CheckLine::to_json() const
{
    return Json{{"name", name}, {"passed", passed}, {"failed", failed}, {"ok", ok()}, {"detail", detail}};
}

bool SuiteReport::ok() const
{
    for (const auto &c : checks)
        if (!c.ok())
            return false;
    return !checks.empty();
}

const CheckLine &SuiteReport::check(const std::string &name) const
{
    for (const auto &c : checks)
        if (c.name == name)
            return c;
    fail(ErrorCode::InvalidInput, "no check '" + name + "' in suite " + suite);
}

Json SuiteReport::to_json() const
{
    Json cs = Json::array();
    for (const auto &c : checks)
        cs.push_back(c.to_json());
    return Json{{"suite", suite}, {"seed", seed}, {"battery_size", battery}, {"ok", ok()}, {"checks", cs}};
}

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"axioms", "topology", "counterexamples", "points", "weil"};
    return names;
}

SuiteReport run_suite(const std::string &name, uint64_t seed, int battery)
{
    if (battery < 1)
        fail(ErrorCode::InvalidInput, "battery size must be positive");
    SuiteReport r;
    r.suite = name;
    r.seed = seed;
    r.battery = battery;
    for (const auto &e : entries(name))
        r.checks.push_back(run_check(name, e.name, seed, [&](Rng &rng, CheckLine &c) { e.body(rng, c, battery); }));
    return r;
}

} // namespace hlf
