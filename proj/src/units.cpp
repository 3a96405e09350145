#include "hlf/units.hpp"

#include "hlf/error.hpp"

namespace hlf {

namespace {

FTerm lead_of(const Field &f, const std::vector<FTerm> &ts)
{
    const FTerm *best = &ts[0];
    for (const auto &t : ts)
        if (eventual_compare(f, t, *best) < 0)
            best = &t;
    return *best;
}

std::vector<FTerm> divide_by(const std::vector<FTerm> &ts, const FTerm &m)
{
    FTerm inv;
    inv.c = m.c.inv();
    for (int v = 0; v < kMaxVars; ++v)
        inv.e[v] = -m.e[v];
    std::vector<FTerm> r;
    for (const auto &t : ts)
        r.push_back(t * inv);
    return r;
}

Verdict plain(Verdict::Kind k, std::string reason)
{
    Verdict v;
    v.kind = k;
    v.reason = std::move(reason);
    return v;
}

} // namespace

UnitFamilyDecomposition decompose_unit_family(const SeqFamily &a)
{
    const FieldPtr &f = a.field();
    if (f->base() != Field::Base::Finite)
        fail(ErrorCode::UnsupportedField, "unit families are decomposed over finite last residue fields only");
    if (a.is_zero())
        fail(ErrorCode::ZeroElement, "the zero family has no unit decomposition");
    const FTerm la = lead_of(*f, a.num());
    FTerm mono = la;
    std::vector<FTerm> num = divide_by(a.num(), la), den;
    if (a.is_fraction()) {
        const FTerm lb = lead_of(*f, a.den());
        den = divide_by(a.den(), lb);
        mono.c = la.c * lb.c.inv();
        for (int v = 0; v < kMaxVars; ++v)
            mono.e[v] = la.e[v] - lb.e[v];
    }
    UnitFamilyDecomposition d;
    for (const auto &c : f->coords())
        d.exponents.push_back(mono.e[c.var]);
    d.theta = mono.c;
    d.principal = SeqFamily::from_terms(f, num, den).with_start(a.start());
    return d;
}

UnitVerdict unit_converges(const SeqFamily &a, const Element &to)
{
    const FieldPtr &f = a.field();
    require_same_field(*f, *to.field());
    if (to.is_zero())
        fail(ErrorCode::ZeroElement, "target of a unit sequence must be nonzero");
    UnitVerdict r;

    // lambda: both x_n/a -> 1 and a/x_n -> 1 in the higher topology of F
    const Element one = Element::integer(f, 1);
    const Verdict v1 = converges(a * SeqFamily::constant(to.inv()), one, Topology::Higher);
    const Verdict v2 = converges(a.inv() * SeqFamily::constant(to), one, Topology::Higher);
    if (v1.converges() && v2.converges()) {
        r.lambda = plain(Verdict::Kind::Converges, "");
        r.lambda.certificate = Json{{"ratio", v1.certificate}, {"inverse_ratio", v2.certificate}};
    } else if (v1.diverges() || v2.diverges()) {
        const Verdict &w = v1.diverges() ? v1 : v2;
        r.lambda = w;
        r.lambda.reason = std::string(v1.diverges() ? "x_n / a" : "a / x_n") + " does not tend to 1";
    } else {
        r.lambda = plain(Verdict::Kind::Unknown, v1.kind == Verdict::Kind::Unknown ? v1.reason : v2.reason);
    }

    // tau: discrete on the exponents and on F_q^x, higher topology on principal units
    const UnitFamilyDecomposition d = decompose_unit_family(a);
    const UnitDecomposition t = unit_decompose(to);
    bool moving = false;
    for (const auto &e : d.exponents)
        moving = moving || !e.constant();
    if (moving) {
        r.tau = plain(Verdict::Kind::Diverges, "exponents are not eventually constant");
    } else {
        bool same = d.theta == t.theta;
        for (std::size_t k = 0; k < d.exponents.size(); ++k)
            same = same && d.exponents[k].intercept == t.exponents[k];
        if (!same) {
            r.tau = plain(Verdict::Kind::Diverges, "exponents or Teichmuller part differ from the target");
        } else {
            r.tau = converges(d.principal, t.principal, Topology::Higher);
            if (r.tau.diverges())
                r.tau.reason = "principal parts do not converge";
        }
    }
    return r;
}

Json UnitVerdict::to_json() const
{
    return Json{{"lambda", lambda.to_json()}, {"tau", tau.to_json()}, {"agree", agree()}};
}

} // namespace hlf
