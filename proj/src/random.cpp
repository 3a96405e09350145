#include "hlf/random.hpp"

namespace hlf {

int64_t uniform(Rng &rng, int64_t lo, int64_t hi)
{
    return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

Scalar random_scalar(const Field &f, Rng &rng, bool nonzero)
{
    if (f.base() == Field::Base::Finite) {
        for (;;) {
            const uint64_t idx = static_cast<uint64_t>(uniform(rng, 0, static_cast<int64_t>(f.fq().order()) - 1));
            FqElem e = FqElem::from_index(f.fq(), idx);
            if (!nonzero || !e.is_zero())
                return Scalar(e);
        }
    }
    for (;;) {
        long n = static_cast<long>(uniform(rng, -6, 6));
        long d = static_cast<long>(uniform(rng, 1, 4));
        Rational r(n, d);
        if (f.base() == Field::Base::PAdic && uniform(rng, 0, 3) == 0) {
            const long pk = static_cast<long>(f.prime());
            r *= uniform(rng, 0, 1) ? Rational(pk) : Rational(1, pk);
        }
        r.canonicalize();
        if (!nonzero || r != 0)
            return Scalar(r);
    }
}

LaurentPoly random_poly(const Field &f, Rng &rng, int max_terms, int exp_range)
{
    const int k = static_cast<int>(uniform(rng, 1, max_terms));
    std::vector<Term> ts;
    for (int i = 0; i < k; ++i) {
        Term t;
        for (int v = 0; v < f.nvars(); ++v)
            t.e[v] = static_cast<int32_t>(uniform(rng, -exp_range, exp_range));
        t.c = random_scalar(f, rng);
        ts.push_back(t);
    }
    return LaurentPoly::from_terms(std::move(ts));
}

Element random_element(const FieldPtr &f, Rng &rng, bool nonzero, int exp_range)
{
    for (;;) {
        LaurentPoly n = random_poly(*f, rng, 3, exp_range);
        LaurentPoly d = uniform(rng, 0, 2) == 0 ? random_poly(*f, rng, 2, exp_range / 2 + 1)
                                                : LaurentPoly::constant(f->one());
        if (d.is_zero())
            continue;
        Element x = Element::fraction(f, n, d);
        if (!nonzero || !x.is_zero())
            return x;
    }
}

} // namespace hlf
