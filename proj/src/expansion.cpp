#include "hlf/expansion.hpp"

#include <map>

#include "hlf/error.hpp"

namespace hlf {

namespace {

// residue-field scalar for a coefficient of a mixed field
Scalar reduce_scalar(const Field &res, const Scalar &c)
{
    return Scalar(FqElem(res.fq(), reduce_mod_p(c.rat(), res.prime())));
}

LaurentPoly reduce_poly(const Field &res, const LaurentPoly &a)
{
    std::vector<Term> ts;
    for (const auto &t : a.terms())
        ts.push_back({t.e, reduce_scalar(res, t.c)});
    return LaurentPoly::from_terms(std::move(ts));
}

Element as_residue(const FieldPtr &res, const LaurentPoly &a, const LaurentPoly &b)
{
    return Element::fraction(res, a, b);
}

Jet expand_param(const Element &x, int64_t lo, int64_t hi)
{
    const FieldPtr &f = x.field();
    const FieldPtr res = f->residue();
    const int v = f->coords().back().var;
    Jet j;
    j.field = f;
    j.residue = res;
    j.lo = lo;
    j.hi = hi;
    if (x.is_zero()) {
        j.support_lo = hi + 1;
        j.coeffs.assign(static_cast<std::size_t>(std::max<int64_t>(0, hi - lo + 1)), Element(res));
        return j;
    }
    const auto P = x.num().split(v), Q = x.den().split(v);
    const int64_t a = P.begin()->first, b = Q.begin()->first;
    const int64_t start = a - b;
    j.support_lo = start;
    const Element q0inv = Element::poly(res, Q.begin()->second).inv();
    std::vector<Element> c; // c[k] is level start+k
    std::vector<std::pair<int64_t, Element>> qs;
    for (auto it = std::next(Q.begin()); it != Q.end(); ++it)
        qs.emplace_back(it->first - b, Element::poly(res, it->second));
    const int64_t need = hi - start;
    for (int64_t k = 0; k <= need; ++k) {
        auto pit = P.find(static_cast<int32_t>(a + k));
        Element acc = pit == P.end() ? Element(res) : Element::poly(res, pit->second);
        for (const auto &[l, ql] : qs) {
            if (l > k)
                break;
            acc = acc - ql * c[static_cast<std::size_t>(k - l)];
        }
        c.push_back(acc * q0inv);
    }
    for (int64_t i = lo; i <= hi; ++i)
        j.coeffs.push_back(i < start ? Element(res) : c[static_cast<std::size_t>(i - start)]);
    return j;
}

Element scale_p(const Element &x, int64_t k)
{
    const uint32_t p = x.field()->prime();
    Rational s = k >= 0 ? Rational(pow_int(p, k)) : Rational(1) / Rational(pow_int(p, -k));
    return x * Element::rational(x.field(), s);
}

Jet expand_padic(const Element &x, int64_t lo, int64_t hi, int64_t N, bool strict)
{
    const FieldPtr &f = x.field();
    const FieldPtr res = f->residue();
    Jet j;
    j.field = f;
    j.residue = res;
    j.lo = lo;
    j.hi = hi;
    if (x.is_zero()) {
        j.support_lo = hi + 1;
        j.coeffs.assign(static_cast<std::size_t>(std::max<int64_t>(0, hi - lo + 1)), Element(res));
        return j;
    }
    const int64_t v = x.top_valuation();
    j.support_lo = v;
    Element y = scale_p(x, -v);
    const Element pinv = Element::rational(f, Rational(1, static_cast<long>(f->prime())));
    std::vector<Element> digits;
    bool exact = true;
    for (int64_t i = v; i <= hi; ++i) {
        if (!exact && i > v + N - 1)
            break;
        const Element d = residue(y);
        digits.push_back(d);
        if (i == hi)
            break;
        const Lift h = lift_h(f, d, N);
        exact = exact && h.exact;
        y = (y - h.value) * pinv;
    }
    if (!exact)
        j.certified_hi = v + N - 1;
    const int64_t have = v + static_cast<int64_t>(digits.size()) - 1;
    if (strict && have < hi)
        fail(ErrorCode::PrecisionExhausted,
             "level " + std::to_string(hi) + " needs more than " + std::to_string(N) + " p-adic digits");
    const int64_t top = std::min(hi, have);
    j.hi = top;
    for (int64_t i = lo; i <= top; ++i)
        j.coeffs.push_back(i < v ? Element(res) : digits[static_cast<std::size_t>(i - v)]);
    return j;
}

} // namespace

Jet expand(const Element &x, int64_t lo, int64_t hi, int64_t N)
{
    if (hi < lo)
        fail(ErrorCode::InvalidInput, "empty expansion window");
    if (x.field()->dim() == 0)
        fail(ErrorCode::InvalidInput, "no expansion in a dimension-0 field");
    if (x.field()->top_padic())
        return expand_padic(x, lo, hi, N, true);
    return expand_param(x, lo, hi);
}

Jet expand_certified(const Element &x, int64_t lo, int64_t hi, int64_t N)
{
    if (x.field()->top_padic())
        return expand_padic(x, lo, hi, N, false);
    return expand_param(x, lo, hi);
}

Element residue(const Element &x)
{
    const FieldPtr &f = x.field();
    if (f->dim() == 0)
        fail(ErrorCode::InvalidInput, "dimension-0 field has no residue map");
    const FieldPtr res = f->residue();
    if (x.is_zero())
        return Element(res);
    const int64_t v = x.top_valuation();
    if (v < 0)
        fail(ErrorCode::NotIntegral, x.str() + " has v_F = " + std::to_string(v));
    if (v > 0)
        return Element(res);
    if (f->top_padic()) {
        // the denominator has Gauss valuation 0 after normalisation
        LaurentPoly n;
        std::vector<Term> ts;
        for (const auto &t : x.num().terms())
            if (padic_val(t.c.rat(), f->prime()) == 0)
                ts.push_back(t);
        n = LaurentPoly::from_terms(std::move(ts));
        return as_residue(res, reduce_poly(*res, n), reduce_poly(*res, x.den()));
    }
    const int var = f->coords().back().var;
    const auto P = x.num().split(var), Q = x.den().split(var);
    return as_residue(res, P.begin()->second, Q.begin()->second);
}

Element embed_residue(const FieldPtr &target, const Element &ybar)
{
    require_same_field(*target->residue(), *ybar.field());
    if (target->top_padic())
        fail(ErrorCode::UnsupportedField, "no inclusion of the residue field in mixed characteristic");
    return Element::fraction(target, ybar.num(), ybar.den());
}

namespace {

struct DigitLift {
    Rational value;
    bool exact;
};

DigitLift lift_digit(uint32_t a, uint32_t p, int64_t N)
{
    if (auto e = teichmuller_exact(a, p))
        return {*e, true};
    Integer x = teichmuller_int(a, p, N);
    return {Rational(x), false};
}

} // namespace

Lift lift_h(const FieldPtr &target, const Element &ybar, int64_t N)
{
    if (!target->residue())
        fail(ErrorCode::InvalidInput, "dimension-0 field has no lifting");
    require_same_field(*target->residue(), *ybar.field());
    if (!target->top_padic())
        return {embed_residue(target, ybar), true};
    if (ybar.is_zero())
        return {Element(target), true};
    const uint32_t p = target->prime();
    auto digit = [&](const Scalar &s) { return static_cast<uint32_t>(*s.fq().as_prime()); };
    if (target->curly() == 0) {
        const DigitLift d = lift_digit(digit(ybar.num().terms()[0].c), p, N);
        return {Element::rational(target, d.value), d.exact};
    }
    // ybar = t^m * A/B with A, B polynomials in t, A(0), B(0) != 0
    const int tv = 0;
    const int32_t ma = ybar.num().min_deg(tv), mb = ybar.den().min_deg(tv);
    std::vector<uint32_t> A(static_cast<std::size_t>(ybar.num().max_deg(tv) - ma + 1), 0);
    std::vector<uint32_t> B(static_cast<std::size_t>(ybar.den().max_deg(tv) - mb + 1), 0);
    for (const auto &t : ybar.num().terms())
        A[static_cast<std::size_t>(t.e[tv] - ma)] = digit(t.c);
    for (const auto &t : ybar.den().terms())
        B[static_cast<std::size_t>(t.e[tv] - mb)] = digit(t.c);
    const FqField &fp = FqField::prime(p);
    const uint32_t b0inv = *FqElem(fp, B[0]).inv().as_prime();
    // long division of A by B as power series; remainder states repeat eventually
    std::vector<uint32_t> R = A;
    R.resize(std::max(A.size(), B.size()), 0);
    std::map<std::vector<uint32_t>, std::size_t> seen;
    std::vector<uint32_t> digits;
    std::size_t start = 0, period = 0;
    for (;;) {
        auto it = seen.find(R);
        if (it != seen.end()) {
            start = it->second;
            period = digits.size() - start;
            break;
        }
        if (digits.size() > 200000)
            fail(ErrorCode::PrecisionExhausted, "period of the residue expansion is too long");
        seen.emplace(R, digits.size());
        const uint32_t a = static_cast<uint32_t>(uint64_t(R[0]) * b0inv % p);
        digits.push_back(a);
        for (std::size_t i = 0; i < B.size(); ++i)
            R[i] = static_cast<uint32_t>((R[i] + uint64_t(p - a) * B[i]) % p);
        R.erase(R.begin());
        R.push_back(0);
    }
    bool exact = true;
    std::vector<Term> pre, block;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k] == 0)
            continue;
        const DigitLift d = lift_digit(digits[k], p, N);
        exact = exact && d.exact;
        Exps e{};
        e[tv] = static_cast<int32_t>(k < start ? k : k - start);
        (k < start ? pre : block).push_back({e, target->scalar(d.value)});
    }
    const int32_t m = ma - mb;
    Exps em{};
    em[tv] = m;
    LaurentPoly num = LaurentPoly::from_terms(pre);
    LaurentPoly den = LaurentPoly::constant(target->one());
    if (!block.empty()) {
        Exps es{}, eL{};
        es[tv] = static_cast<int32_t>(start);
        eL[tv] = static_cast<int32_t>(period);
        const LaurentPoly q = LaurentPoly::constant(target->one()) - LaurentPoly::monomial(target->one(), eL);
        num = num * q + LaurentPoly::from_terms(block).shift(es);
        den = q;
    }
    return {Element::fraction(target, num.shift(em), den), exact};
}

} // namespace hlf
