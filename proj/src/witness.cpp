#include "hlf/witness.hpp"

#include "hlf/error.hpp"

namespace hlf {

namespace {

void require_two_dim_equal_char(const Field &f)
{
    if (f.base() != Field::Base::Finite || f.dim() != 2)
        fail(ErrorCode::UnsupportedField, "witness constructions are over F_q((u))((t))");
}

Element mono(const FieldPtr &f, int64_t tu, int64_t tt)
{
    Exps e{};
    e[0] = static_cast<int32_t>(tu);
    e[1] = static_cast<int32_t>(tt);
    return Element::monomial(f, f->one(), e);
}

} // namespace

Verdict product_continuity_check(const SeqFamily &f, const Element &x, const SeqFamily &g, const Element &y)
{
    if (!converges(f, x, Topology::Higher).converges() || !converges(g, y, Topology::Higher).converges())
        fail(ErrorCode::InvalidInput, "product check needs two convergent families");
    return converges(f * g, x * y, Topology::Higher);
}

BasicOpen canonical_product_target()
{
    BasicOpen::Below b;
    b.kind = BasicOpen::Below::Kind::Shifted;
    b.sets = {BasicOpen::ball(0)};
    b.poly = {0, -1, 0};
    return BasicOpen::leveled(0, {}, b);
}

std::optional<EscapePair> product_escape_witness(const FieldPtr &f, const BasicOpen &U, const BasicOpen &V,
                                                 const BasicOpen &W)
{
    require_two_dim_equal_char(*f);
    if (W.is_full())
        return std::nullopt;
    const int64_t i0 = U.is_full() ? 0 : U.cutoff();
    constexpr int64_t kSearch = 64;
    for (int64_t L = W.cutoff() - 1; L >= W.cutoff() - kSearch; --L) {
        const BasicOpen D = W.level(L);
        if (D.is_full())
            continue;
        for (int64_t e = D.cutoff() - 1; e >= D.cutoff() - kSearch; --e) {
            if (!D.level(e).is_zero())
                continue;
            const int64_t j = L - i0;
            const BasicOpen Dv = V.level(j);
            const int64_t m = Dv.is_full() ? 0 : std::max<int64_t>(0, Dv.cutoff());
            const int64_t k = m - e;
            EscapePair p{mono(f, -k, i0), mono(f, m, j)};
            if (member(p.x, U).yes() && member(p.y, V).yes() && member(p.x * p.y, W).no())
                return p;
        }
    }
    return std::nullopt;
}

SubgroupEscape subgroup_escape_witness(const FieldPtr &f, const BasicOpen &U)
{
    require_two_dim_equal_char(*f);
    const int64_t i0 = U.is_full() ? 0 : U.cutoff();
    for (int64_t i = i0 - 64; i < i0; ++i) {
        const BasicOpen D = U.level(i);
        if (!D.is_full() && !D.ball_exponent())
            fail(ErrorCode::InvalidInput, "descriptor is not subgroup-shaped at level " + std::to_string(i));
    }
    SubgroupEscape s;
    s.a = std::max<int64_t>(i0, 1);
    const BasicOpen D = U.level(-s.a);
    s.c = std::max<int64_t>(1, D.is_full() ? 1 : *D.ball_exponent());
    const Element p = mono(f, -s.c, s.a), q = mono(f, s.c, -s.a);
    if (!member(p, U).yes() || !member(q, U).yes())
        fail(ErrorCode::InvalidInput, "subgroup witness failed its membership check");
    s.element = p + q;
    return s;
}

SeqFamily c_family(const FieldPtr &f, const Affine &a, const Affine &c)
{
    require_two_dim_equal_char(*f);
    FTerm x, y;
    x.c = y.c = f->one();
    x.e[1] = a;
    x.e[0] = -c;
    y.e[1] = -a;
    y.e[0] = c;
    return SeqFamily::from_terms(f, {x, y});
}

ClosedCheck seq_closed_check_C(const FieldPtr &f, const Affine &a, const Affine &c)
{
    const SeqFamily s = c_family(f, a, c);
    if (a.slope < 0 || c.slope < 0 || a.at(s.start()) < 1 || c.at(s.start()) < 1)
        fail(ErrorCode::UnsupportedFamily, "a(n) and c(n) must stay >= 1");
    ClosedCheck r;
    r.parameters_constant = a.constant() && c.constant();
    if (r.parameters_constant) {
        const Element lim = s.at(s.start());
        r.verdict = converges(s, lim, Topology::Higher);
        r.limit_in_c = a.intercept >= 1 && c.intercept >= 1 &&
                       lim == mono(f, -c.intercept, a.intercept) + mono(f, c.intercept, -a.intercept);
        return r;
    }
    r.verdict = converges(s, Element(f), Topology::Higher);
    // every term moves with n, so a constant limit cannot cancel the failing term
    bool all_move = true;
    for (const auto &t : s.num())
        all_move = all_move && !t.constant();
    r.diverges_for_every_limit = r.verdict.diverges() && all_move;
    return r;
}

} // namespace hlf
