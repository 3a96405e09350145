#include "hlf/convergence.hpp"

#include <algorithm>
#include <memory>

#include "hlf/error.hpp"

namespace hlf {

namespace {

int64_t ceil_div(int64_t a, int64_t b)
{
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

int64_t floor_div(int64_t a, int64_t b)
{
    if (b < 0) {
        a = -a;
        b = -b;
    }
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::string coord_name(const Field &f, int k)
{
    const Coord &c = f.coords()[k];
    return c.kind == Coord::Kind::Param ? f.vars()[c.var] : "p";
}

// Index from which no two terms meet in any coordinate, so the eventual order of
// positions holds and distinct terms never sit at the same position.
int64_t settle_index(const Field &f, const std::vector<FTerm> &ts, int64_t start)
{
    int64_t m = start;
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j)
            for (int k = 0; k < f.dim(); ++k) {
                const Affine a = term_position(f, ts[i], k), b = term_position(f, ts[j], k);
                if (a.slope != b.slope)
                    m = std::max(m, floor_div(b.intercept - a.intercept, a.slope - b.slope) + 1);
            }
    return m;
}

// A neighbourhood (at the depth of coordinate k) that eventually rejects the sum of
// `g`, or nothing if every term tends to 0. Terms in `g` share all coordinates above k.
std::optional<BasicOpen> defeat(const Field &f, const std::vector<FTerm> &g, int k)
{
    if (g.empty())
        return std::nullopt;
    if (k < 0)
        return BasicOpen::zero();
    std::vector<std::pair<int64_t, FTerm>> flat;
    for (const auto &t : g) {
        const Affine a = term_position(f, t, k);
        if (a.slope < 0)
            return BasicOpen::shrinking(k + 1);
        if (a.slope == 0)
            flat.emplace_back(a.intercept, t);
    }
    std::stable_sort(flat.begin(), flat.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    const bool padic = f.coords()[k].kind == Coord::Kind::PAdic;
    for (std::size_t i = 0; i < flat.size();) {
        std::vector<FTerm> grp;
        std::size_t j = i;
        // at a p-adic coordinate each term is examined through its leading digit
        for (; j < flat.size() && flat[j].first == flat[i].first && (j == i || !padic); ++j)
            grp.push_back(flat[j].second);
        if (auto w = defeat(f, grp, k - 1))
            return BasicOpen::constant_below(flat[i].first + 1, {{flat[i].first, *w}}, BasicOpen::full());
        i = j;
    }
    return std::nullopt;
}

// n0 with the term inside D (depth k+1) for all n >= n0; the term tends to 0.
int64_t term_tail(const Field &f, const FTerm &t, int k, const BasicOpen &D, int64_t start)
{
    if (D.is_full())
        return start;
    if (k < 0)
        fail(ErrorCode::InvalidInput, "tail index requested for a non-vanishing term");
    const Affine a = term_position(f, t, k);
    const int64_t c = D.cutoff();
    if (a.slope > 0)
        return std::max(start, ceil_div(c - a.intercept, a.slope));
    if (a.slope < 0)
        fail(ErrorCode::InvalidInput, "tail index requested for a non-vanishing term");
    if (a.intercept >= c)
        return start;
    if (f.coords()[k].kind == Coord::Kind::Param)
        return term_tail(f, t, k - 1, D.level(a.intercept), start);
    // all digit levels from the leading one up to the cutoff may be occupied
    if (c - a.intercept > 100000)
        fail(ErrorCode::PrecisionExhausted, "descriptor cutoff too far above the term");
    int64_t n0 = start;
    for (int64_t j = a.intercept; j < c; ++j) {
        const BasicOpen L = D.level(j);
        if (!L.is_full())
            n0 = std::max(n0, term_tail(f, t, k - 1, L, start));
    }
    return n0;
}

Json term_plan(const Field &f, const FTerm &t)
{
    Json steps = Json::array();
    for (int k = f.dim() - 1; k >= 0; --k) {
        const Affine a = term_position(f, t, k);
        steps.push_back(Json{{"coord", coord_name(f, k)}, {"slope", a.slope}, {"intercept", a.intercept}});
        if (a.slope > 0)
            break;
    }
    return Json{{"term", fterm_str(f, t, true)}, {"plan", steps}};
}

std::vector<Element> sample_values(const SeqFamily &d, int64_t from, int64_t to)
{
    std::vector<Element> v;
    for (int64_t n = from; n <= to; ++n)
        v.push_back(d.at_unreduced(n));
    return v;
}

// witness confirmation: the rejected tail must be long enough to be meaningful
void confirm_witness(Verdict &v, const SeqFamily &d, int64_t from)
{
    from = std::max(from, d.start());
    int64_t last_in = from - 1;
    for (int64_t n = from; n <= kSampleHorizon; ++n) {
        const Element x = d.at_unreduced(n);
        bool rejected;
        if (v.witness)
            rejected = member(x, *v.witness).no();
        else
            rejected = !x.is_zero() && x.top_valuation() < *v.valuation_ball;
        if (!rejected)
            last_in = n;
    }
    v.witness_from = last_in + 1;
    v.witness_verified = v.witness_from <= kSampleHorizon - 20;
}

Verdict diverges_with(Topology top, std::optional<BasicOpen> w, std::optional<int64_t> ball, const SeqFamily &d,
                      int64_t from, std::string reason)
{
    Verdict v;
    v.kind = Verdict::Kind::Diverges;
    v.topology = top;
    v.witness = std::move(w);
    v.valuation_ball = ball;
    v.reason = std::move(reason);
    confirm_witness(v, d, from);
    return v;
}

Verdict monomial_higher(const SeqFamily &d)
{
    const FieldPtr fp = d.field();
    const Field &f = *fp;
    const auto terms = d.num();
    const int64_t settle = settle_index(f, terms, d.start());
    if (auto w = defeat(f, terms, f.dim() - 1))
        return diverges_with(Topology::Higher, *w, std::nullopt, d, settle,
                             "a term does not tend to 0 in the higher topology");
    Verdict v;
    v.kind = Verdict::Kind::Converges;
    v.topology = Topology::Higher;
    Json plans = Json::array();
    for (const auto &t : terms)
        plans.push_back(term_plan(f, t));
    v.certificate = Json{{"kind", "tail-index"}, {"from", settle}, {"terms", plans}};
    v.tail = [fp, terms, settle](const BasicOpen &U) {
        int64_t n0 = settle;
        for (const auto &t : terms)
            n0 = std::max(n0, term_tail(*fp, t, fp->dim() - 1, U, settle));
        return n0;
    };
    return v;
}

// top-coordinate analysis of a list of terms whose valuation is that of the lead term
Verdict monomial_valuation(const SeqFamily &d, const std::vector<FTerm> &terms, int64_t settle)
{
    const FieldPtr fp = d.field();
    const int top = fp->dim() - 1;
    bool ok = true;
    int64_t bound = INT64_MAX;
    for (const auto &t : terms) {
        const Affine a = term_position(*fp, t, top);
        if (a.slope <= 0) {
            ok = false;
            bound = std::min(bound, a.intercept);
        }
    }
    if (!ok)
        return diverges_with(Topology::Valuation, std::nullopt, bound + 1, d, settle,
                             "v_F stays bounded along the sequence");
    Verdict v;
    v.kind = Verdict::Kind::Converges;
    v.topology = Topology::Valuation;
    Json plans = Json::array();
    for (const auto &t : terms)
        plans.push_back(term_plan(*fp, t));
    v.certificate = Json{{"kind", "valuation-tail"}, {"from", settle}, {"terms", plans}};
    v.valuation_tail = [fp, terms, settle, top](int64_t m) {
        int64_t n0 = settle;
        for (const auto &t : terms) {
            const Affine a = term_position(*fp, t, top);
            n0 = std::max(n0, ceil_div(m - a.intercept, a.slope));
        }
        return n0;
    };
    return v;
}

const FTerm &eventual_lead(const Field &f, const std::vector<FTerm> &ts)
{
    const FTerm *best = &ts[0];
    for (const auto &t : ts)
        if (eventual_compare(f, t, *best) < 0)
            best = &t;
    return *best;
}

FTerm inverse_term(const FTerm &t)
{
    FTerm r;
    r.c = t.c.inv();
    for (int v = 0; v < kMaxVars; ++v)
        r.e[v] = -t.e[v];
    r.pslope = -t.pslope;
    return r;
}

Verdict fraction(const SeqFamily &d, Topology top)
{
    const FieldPtr fp = d.field();
    const Field &f = *fp;
    if (f.mixed()) {
        Verdict v;
        v.topology = top;
        v.reason = "fraction families over p-adic bases need a monomial denominator";
        return v;
    }
    // d = c / (1 + eps) with c = A / lead(B) and eps = B / lead(B) - 1
    const FTerm L = eventual_lead(f, d.den());
    const FTerm Li = inverse_term(L);
    std::vector<FTerm> c, eps;
    for (const auto &t : d.num())
        c.push_back(t * Li);
    for (const auto &t : d.den())
        if (!t.same_shape(L))
            eps.push_back(t * Li);
    c = combine_terms(c);
    std::vector<FTerm> all = d.num();
    all.insert(all.end(), d.den().begin(), d.den().end());
    const int64_t settle = settle_index(f, all, d.start());
    const FTerm lc = eventual_lead(f, c);
    Json pert = Json::array();
    for (const auto &t : eps)
        pert.push_back(fterm_str(f, t, true));

    if (top == Topology::Valuation) {
        // v_F(1 + eps) = 0, so v_F(d_n) = v_F(lead(c))
        Verdict v = monomial_valuation(d, {lc}, settle);
        if (v.converges())
            v.certificate = Json{{"kind", "reduction"}, {"lead_numerator", term_plan(f, lc)},
                                 {"denominator_lead", fterm_str(f, L, true)}, {"from", settle}};
        return v;
    }
    if (auto w = defeat(f, {lc}, f.dim() - 1))
        return diverges_with(top, *w, std::nullopt, d, settle, "the leading term of the expansion does not tend to 0");
    for (const auto &t : eps) {
        if (t.constant())
            continue;
        if (defeat(f, {t}, f.dim() - 1)) {
            Verdict v;
            v.topology = top;
            v.reason = "denominator perturbation " + fterm_str(f, t, true) + " does not tend to 0";
            return v;
        }
    }
    // 1/(1 + eps) converges to 1/(1 + eps*), so d behaves like c
    if (auto w = defeat(f, c, f.dim() - 1)) {
        Verdict v = diverges_with(top, *w, std::nullopt, d, settle, "numerator after reduction does not tend to 0");
        if (!v.witness_verified) {
            v.witness.reset();
            v.reason += "; no neighbourhood confirmed on the sample range";
        }
        return v;
    }
    Verdict v;
    v.kind = Verdict::Kind::Converges;
    v.topology = top;
    Json plans = Json::array();
    for (const auto &t : c)
        plans.push_back(term_plan(f, t));
    v.certificate = Json{{"kind", "reduction"},
                         {"numerator", plans},
                         {"denominator_lead", fterm_str(f, L, true)},
                         {"perturbation", pert},
                         {"tail", "observed on the sample range"},
                         {"from", settle}};
    auto vals = std::make_shared<std::vector<Element>>(sample_values(d, settle, kSampleHorizon));
    v.tail = [vals, settle](const BasicOpen &U) {
        int64_t n = kSampleHorizon;
        while (n >= settle && member((*vals)[static_cast<std::size_t>(n - settle)], U).yes())
            --n;
        return n + 1;
    };
    return v;
}

} // namespace

const char *topology_name(Topology t) { return t == Topology::Valuation ? "valuation" : "higher"; }

Topology parse_topology(const std::string &s)
{
    if (s == "valuation")
        return Topology::Valuation;
    if (s == "higher")
        return Topology::Higher;
    fail(ErrorCode::InvalidInput, "unknown topology '" + s + "'");
}

const char *kind_name(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Converges: return "CONVERGES";
    case Verdict::Kind::Diverges: return "DIVERGES";
    case Verdict::Kind::Unknown: return "UNKNOWN";
    }
    return "?";
}

int eventual_compare(const Field &f, const FTerm &a, const FTerm &b)
{
    for (int k = f.dim() - 1; k >= 0; --k) {
        const Affine x = term_position(f, a, k), y = term_position(f, b, k);
        if (x.slope != y.slope)
            return x.slope < y.slope ? -1 : 1;
        if (x.intercept != y.intercept)
            return x.intercept < y.intercept ? -1 : 1;
    }
    return 0;
}

Json Verdict::to_json() const
{
    Json j;
    j["verdict"] = kind_name(kind);
    j["topology"] = topology_name(topology);
    if (kind == Kind::Converges)
        j["certificate"] = certificate;
    if (kind == Kind::Diverges) {
        if (witness)
            j["witness"] = witness->to_json();
        else if (valuation_ball)
            j["witness"] = Json{{"valuation_ball", *valuation_ball}};
        else
            j["witness"] = nullptr;
        j["witness_from"] = witness_from;
        j["witness_verified"] = witness_verified;
    }
    if (!reason.empty())
        j["reason"] = reason;
    return j;
}

Verdict converges(const SeqFamily &f, const Element &limit, Topology top)
{
    require_same_field(*f.field(), *limit.field());
    const SeqFamily d = f - SeqFamily::constant(limit);
    if (d.is_zero()) {
        Verdict v;
        v.kind = Verdict::Kind::Converges;
        v.topology = top;
        v.certificate = Json{{"kind", "identically-limit"}, {"from", d.start()}};
        const int64_t s = d.start();
        v.tail = [s](const BasicOpen &) { return s; };
        v.valuation_tail = [s](int64_t) { return s; };
        return v;
    }
    if (d.is_fraction())
        return fraction(d, top);
    if (top == Topology::Higher)
        return monomial_higher(d);
    return monomial_valuation(d, d.num(), settle_index(*d.field(), d.num(), d.start()));
}

namespace {

std::vector<int64_t> sample_indices(int64_t n0, Rng &rng, int samples)
{
    std::vector<int64_t> ns;
    for (int64_t k = 0; k < 5; ++k)
        ns.push_back(n0 + k);
    const int64_t hi = std::max(n0 + 10, kSampleHorizon);
    for (int k = 5; k < samples; ++k)
        ns.push_back(uniform(rng, n0, hi));
    return ns;
}

} // namespace

bool check_certificate(const SeqFamily &f, const Element &limit, const Verdict &v, const BasicOpen &U, Rng &rng,
                       int samples)
{
    if (!v.converges() || !v.tail)
        return false;
    const int64_t n0 = std::max(v.tail(U), f.start());
    for (int64_t n : sample_indices(n0, rng, samples))
        if (!member(f.at(n) - limit, U).yes())
            return false;
    return true;
}

bool check_valuation_certificate(const SeqFamily &f, const Element &limit, const Verdict &v, int64_t m, Rng &rng,
                                 int samples)
{
    if (!v.converges() || !v.valuation_tail)
        return false;
    const int64_t n0 = std::max(v.valuation_tail(m), f.start());
    for (int64_t n : sample_indices(n0, rng, samples)) {
        const Element x = f.at(n) - limit;
        if (!x.is_zero() && x.top_valuation() < m)
            return false;
    }
    return true;
}

} // namespace hlf
