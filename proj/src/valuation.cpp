#include "hlf/valuation.hpp"

#include "hlf/error.hpp"

namespace hlf {

ValVec rank_valuation(const Element &x, int r)
{
    const int n = x.field()->dim();
    if (r < 1 || r > n)
        fail(ErrorCode::InvalidInput, "rank must lie in [1, " + std::to_string(n) + "]");
    const ValVec v = x.valuation();
    return ValVec(v.end() - r, v.end());
}

bool in_integer_ring(const Element &x, int level)
{
    const int n = x.field()->dim();
    if (level < 1 || level > n)
        fail(ErrorCode::InvalidInput, "integer ring level must lie in [1, " + std::to_string(n) + "]");
    if (x.is_zero())
        return true;
    return nonnegative_inverse_lex(rank_valuation(x, n - level + 1));
}

bool in_rank_maximal_ideal(const Element &x)
{
    if (x.is_zero())
        return true;
    const ValVec v = x.valuation();
    return compare_inverse_lex(v, ValVec(v.size(), 0)) > 0;
}

UnitDecomposition unit_decompose(const Element &x)
{
    const FieldPtr &f = x.field();
    if (f->base() != Field::Base::Finite)
        fail(ErrorCode::UnsupportedField, "unit decomposition needs a tower over a finite field");
    if (x.is_zero())
        fail(ErrorCode::ZeroElement, "unit decomposition of zero");
    const Term l = x.lead();
    UnitDecomposition d;
    d.exponents = f->position(l);
    d.theta = l.c;
    d.principal = x / Element::monomial(f, l.c, l.e);
    return d;
}

Element recompose(const FieldPtr &f, const UnitDecomposition &d)
{
    Exps e{};
    for (int k = 0; k < f->dim(); ++k)
        e[f->coords()[k].var] = static_cast<int32_t>(d.exponents[k]);
    return Element::monomial(f, d.theta, e) * d.principal;
}

} // namespace hlf
