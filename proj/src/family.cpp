#include "hlf/family.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "hlf/error.hpp"

namespace hlf {

namespace {

bool shape_less(const FTerm &a, const FTerm &b)
{
    for (int v = 0; v < kMaxVars; ++v)
        if (a.e[v] != b.e[v])
            return a.e[v] < b.e[v];
    return a.pslope < b.pslope;
}

int32_t narrow_exp(int64_t x)
{
    if (x > std::numeric_limits<int32_t>::max() / 2 || x < std::numeric_limits<int32_t>::min() / 2)
        fail(ErrorCode::UnsupportedFamily, "exponent " + std::to_string(x) + " out of range");
    return static_cast<int32_t>(x);
}

Rational p_power(uint32_t p, int64_t k)
{
    return k >= 0 ? Rational(pow_int(p, k)) : Rational(Rational(1) / Rational(pow_int(p, -k)));
}

struct Frac {
    std::vector<FTerm> num, den; // den empty = 1
};

Frac frac_mul(const Frac &a, const Frac &b)
{
    Frac r;
    r.num = mul_terms(a.num, b.num);
    if (a.den.empty())
        r.den = b.den;
    else if (b.den.empty())
        r.den = a.den;
    else
        r.den = mul_terms(a.den, b.den);
    return r;
}

std::vector<FTerm> one_terms(const Field &f)
{
    FTerm t;
    t.c = f.one();
    return {t};
}

std::vector<FTerm> negate(std::vector<FTerm> ts)
{
    for (auto &t : ts)
        t.c = -t.c;
    return ts;
}

bool same_terms(const std::vector<FTerm> &a, const std::vector<FTerm> &b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].same_shape(b[i]) || a[i].c != b[i].c)
            return false;
    return true;
}

Frac frac_add(const Field &f, const Frac &a, const Frac &b)
{
    Frac r;
    if (same_terms(a.den, b.den)) {
        r.num = a.num;
        r.num.insert(r.num.end(), b.num.begin(), b.num.end());
        r.num = combine_terms(r.num);
        r.den = a.den;
        return r;
    }
    const auto ad = a.den.empty() ? one_terms(f) : a.den;
    const auto bd = b.den.empty() ? one_terms(f) : b.den;
    r.num = mul_terms(a.num, bd);
    const auto x = mul_terms(b.num, ad);
    r.num.insert(r.num.end(), x.begin(), x.end());
    r.num = combine_terms(r.num);
    r.den = mul_terms(ad, bd);
    return r;
}

Frac frac_inv(const Field &f, const Frac &a)
{
    if (a.num.empty())
        fail(ErrorCode::DivisionByZero, "family is identically zero");
    Frac r;
    r.num = a.den.empty() ? one_terms(f) : a.den;
    r.den = a.num;
    return r;
}

Frac frac_pow(const Field &f, Frac a, int64_t e)
{
    if (e < 0) {
        a = frac_inv(f, a);
        e = -e;
    }
    if (e > 256)
        fail(ErrorCode::UnsupportedFamily, "power too large");
    Frac r;
    r.num = one_terms(f);
    for (int64_t k = 0; k < e; ++k)
        r = frac_mul(r, a);
    return r;
}

// base^(affine) for a single-monomial base
Frac frac_affine_pow(const Field &f, const Frac &base, const Affine &ex, std::size_t pos)
{
    if (!base.den.empty() || base.num.size() != 1 || !base.num[0].constant())
        fail(ErrorCode::UnsupportedFamily,
             "only a fixed monomial can be raised to a power depending on n (position " + std::to_string(pos) + ")");
    const FTerm &b = base.num[0];
    FTerm r;
    for (int v = 0; v < kMaxVars; ++v)
        r.e[v] = Affine{b.e[v].intercept * ex.slope, b.e[v].intercept * ex.intercept};
    if (b.c.is_one()) {
        r.c = f.one();
    } else if (f.mixed()) {
        Rational c = b.c.rat();
        const int64_t k = padic_val(c, f.prime());
        if (c != p_power(f.prime(), k))
            fail(ErrorCode::UnsupportedFamily, "coefficient " + b.c.str() + " raised to a power depending on n");
        r.pslope = k * ex.slope;
        r.c = Scalar(p_power(f.prime(), k * ex.intercept));
    } else {
        fail(ErrorCode::UnsupportedFamily, "coefficient " + b.c.str() + " raised to a power depending on n");
    }
    Frac out;
    out.num = {r};
    return out;
}

Frac eval_family(const FieldPtr &f, const Ast &a)
{
    switch (a.kind) {
    case Ast::Kind::Int:
    case Ast::Kind::Ident: {
        if (a.kind == Ast::Kind::Ident && a.name == "n")
            fail(ErrorCode::UnsupportedFamily, "n may only appear in exponents (position " + std::to_string(a.pos) + ")");
        const Element x = eval_element(f, a);
        const SeqFamily s = SeqFamily::constant(x);
        return Frac{s.num(), s.den()};
    }
    case Ast::Kind::Neg: {
        Frac r = eval_family(f, a.kids[0]);
        r.num = negate(r.num);
        return r;
    }
    case Ast::Kind::Add: return frac_add(*f, eval_family(f, a.kids[0]), eval_family(f, a.kids[1]));
    case Ast::Kind::Sub: {
        Frac b = eval_family(f, a.kids[1]);
        b.num = negate(b.num);
        return frac_add(*f, eval_family(f, a.kids[0]), b);
    }
    case Ast::Kind::Mul: return frac_mul(eval_family(f, a.kids[0]), eval_family(f, a.kids[1]));
    case Ast::Kind::Div: {
        const Frac d = eval_family(f, a.kids[1]);
        if (d.num.empty())
            throw Error(ErrorCode::DivisionByZero, "denominator at position " + std::to_string(a.kids[1].pos) + " is zero");
        return frac_mul(eval_family(f, a.kids[0]), frac_inv(*f, d));
    }
    case Ast::Kind::Pow: {
        const Affine ex = eval_affine(a.kids[1], "n");
        const Frac b = eval_family(f, a.kids[0]);
        if (ex.slope == 0)
            return frac_pow(*f, b, ex.intercept);
        return frac_affine_pow(*f, b, ex, a.pos);
    }
    }
    return {};
}

} // namespace

bool FTerm::constant() const
{
    if (pslope != 0)
        return false;
    for (const auto &a : e)
        if (a.slope != 0)
            return false;
    return true;
}

FTerm FTerm::operator*(const FTerm &o) const
{
    FTerm r;
    r.c = c * o.c;
    for (int v = 0; v < kMaxVars; ++v)
        r.e[v] = e[v] + o.e[v];
    r.pslope = pslope + o.pslope;
    return r;
}

Term FTerm::at(const Field &f, int64_t n) const
{
    Term t;
    for (int v = 0; v < kMaxVars; ++v)
        t.e[v] = narrow_exp(e[v].at(n));
    t.c = c;
    if (pslope != 0)
        t.c = c * Scalar(p_power(f.prime(), pslope * n));
    return t;
}

std::vector<FTerm> combine_terms(std::vector<FTerm> ts)
{
    std::stable_sort(ts.begin(), ts.end(), shape_less);
    std::vector<FTerm> out;
    for (auto &t : ts) {
        if (!out.empty() && out.back().same_shape(t))
            out.back().c = out.back().c + t.c;
        else
            out.push_back(std::move(t));
        if (out.back().c.is_zero())
            out.pop_back();
    }
    return out;
}

std::vector<FTerm> mul_terms(const std::vector<FTerm> &a, const std::vector<FTerm> &b)
{
    std::vector<FTerm> r;
    r.reserve(a.size() * b.size());
    for (const auto &x : a)
        for (const auto &y : b)
            r.push_back(x * y);
    return combine_terms(std::move(r));
}

Affine term_position(const Field &f, const FTerm &t, int k)
{
    const Coord &c = f.coords()[k];
    if (c.kind == Coord::Kind::Param)
        return t.e[c.var];
    return Affine{t.pslope, padic_val(t.c.rat(), f.prime())};
}

SeqFamily SeqFamily::from_terms(const FieldPtr &f, std::vector<FTerm> num, std::vector<FTerm> den)
{
    SeqFamily s(f);
    s.num_ = combine_terms(std::move(num));
    const bool had_den = !den.empty();
    s.den_ = combine_terms(std::move(den));
    if (had_den && s.den_.empty())
        fail(ErrorCode::DivisionByZero, "denominator family is identically zero");
    s.normalize();
    return s;
}

void SeqFamily::normalize()
{
    if (num_.empty()) {
        den_.clear();
    } else if (den_.size() == 1) {
        // divide by a single monomial
        const FTerm &d = den_[0];
        FTerm inv;
        inv.c = d.c.inv();
        for (int v = 0; v < kMaxVars; ++v)
            inv.e[v] = -d.e[v];
        inv.pslope = -d.pslope;
        for (auto &t : num_)
            t = t * inv;
        den_.clear();
        num_ = combine_terms(std::move(num_));
    }
    // the domain starts where the denominator is nonzero
    if (!den_.empty()) {
        for (int guard = 0; guard < 1000; ++guard) {
            std::vector<Term> ts;
            for (const auto &t : den_)
                ts.push_back(t.at(*f_, start_));
            if (!LaurentPoly::from_terms(ts).is_zero())
                return;
            ++start_;
        }
        fail(ErrorCode::UnsupportedFamily, "denominator vanishes on a long initial segment");
    }
}

SeqFamily SeqFamily::parse(const FieldPtr &f, std::string_view text)
{
    const Frac r = eval_family(f, parse_expr(text));
    return from_terms(f, r.num, r.den);
}

SeqFamily SeqFamily::constant(const Element &x)
{
    const FieldPtr &f = x.field();
    std::vector<FTerm> num, den;
    auto conv = [](const LaurentPoly &p, std::vector<FTerm> &out) {
        for (const auto &t : p.terms()) {
            FTerm ft;
            ft.c = t.c;
            for (int v = 0; v < kMaxVars; ++v)
                ft.e[v] = Affine{0, t.e[v]};
            out.push_back(ft);
        }
    };
    conv(x.num(), num);
    if (!(x.den().is_constant() && x.den().terms()[0].c.is_one()))
        conv(x.den(), den);
    return from_terms(f, num, den);
}

bool SeqFamily::is_constant() const
{
    for (const auto &t : num_)
        if (!t.constant())
            return false;
    for (const auto &t : den_)
        if (!t.constant())
            return false;
    return true;
}

SeqFamily SeqFamily::with_start(int64_t s) const
{
    SeqFamily r = *this;
    r.start_ = std::max(s, start_);
    return r;
}

Element SeqFamily::at(int64_t n) const
{
    const Element x = at_unreduced(n);
    return den_.empty() ? x : Element::fraction(f_, x.num(), x.den());
}

Element SeqFamily::at_unreduced(int64_t n) const
{
    auto build = [&](const std::vector<FTerm> &ts) {
        std::vector<Term> out;
        out.reserve(ts.size());
        for (const auto &t : ts)
            out.push_back(t.at(*f_, n));
        return LaurentPoly::from_terms(std::move(out));
    };
    if (den_.empty())
        return Element::poly(f_, build(num_));
    const LaurentPoly d = build(den_);
    if (d.is_zero())
        fail(ErrorCode::DivisionByZero, "denominator vanishes at n = " + std::to_string(n));
    return Element::unreduced(f_, build(num_), d);
}

SeqFamily SeqFamily::reparam(int64_t M, int64_t r) const
{
    if (M < 1)
        fail(ErrorCode::InvalidInput, "progression modulus must be positive");
    auto conv = [&](std::vector<FTerm> ts) {
        for (auto &t : ts) {
            for (auto &a : t.e)
                a = Affine{a.slope * M, a.slope * r + a.intercept};
            if (t.pslope != 0) {
                t.c = t.c * Scalar(p_power(f_->prime(), t.pslope * r));
                t.pslope *= M;
            }
        }
        return ts;
    };
    SeqFamily s(f_);
    s.num_ = combine_terms(conv(num_));
    s.den_ = den_.empty() ? den_ : combine_terms(conv(den_));
    int64_t k0 = 0;
    while (M * k0 + r < start_)
        ++k0;
    s.start_ = k0;
    s.normalize();
    return s;
}

SeqFamily SeqFamily::operator+(const SeqFamily &o) const
{
    require_same_field(*f_, *o.f_);
    const Frac r = frac_add(*f_, Frac{num_, den_}, Frac{o.num_, o.den_});
    return from_terms(f_, r.num, r.den).with_start(std::max(start_, o.start_));
}

SeqFamily SeqFamily::operator-() const
{
    SeqFamily r = *this;
    r.num_ = negate(r.num_);
    return r;
}

SeqFamily SeqFamily::operator-(const SeqFamily &o) const { return *this + (-o); }

SeqFamily SeqFamily::operator*(const SeqFamily &o) const
{
    require_same_field(*f_, *o.f_);
    const Frac r = frac_mul(Frac{num_, den_}, Frac{o.num_, o.den_});
    return from_terms(f_, r.num, r.den).with_start(std::max(start_, o.start_));
}

SeqFamily SeqFamily::inv() const
{
    const Frac r = frac_inv(*f_, Frac{num_, den_});
    SeqFamily s = from_terms(f_, r.num, r.den).with_start(start_);
    return s;
}

SeqFamily SeqFamily::pow(int64_t e) const
{
    const Frac r = frac_pow(*f_, Frac{num_, den_}, e);
    return from_terms(f_, r.num, r.den).with_start(start_);
}

std::string fterm_str(const Field &f, const FTerm &t, bool leading)
{
    std::string out;
    Scalar a = t.c;
    if (!a.is_fq() && a.rat() < 0) {
        out += leading ? "-" : " - ";
        a = -a;
    } else if (!leading) {
        out += " + ";
    }
    std::vector<std::string> parts;
    bool has_vars = t.pslope != 0;
    for (const auto &x : t.e)
        has_vars = has_vars || x != Affine{};
    if (!a.is_one() || !has_vars) {
        const std::string cs = a.str();
        parts.push_back(cs.find_first_of("+ ") != std::string::npos ? "(" + cs + ")" : cs);
    }
    if (t.pslope != 0)
        parts.push_back(std::to_string(f.prime()) + "^(" + Affine{t.pslope, 0}.str() + ")");
    for (int v = f.nvars() - 1; v >= 0; --v) {
        const Affine &x = t.e[v];
        if (x == Affine{})
            continue;
        if (x.slope == 0)
            parts.push_back(f.vars()[v] + (x.intercept == 1 ? "" : "^" + std::to_string(x.intercept)));
        else
            parts.push_back(f.vars()[v] + "^(" + x.str() + ")");
    }
    std::string body;
    for (std::size_t i = 0; i < parts.size(); ++i)
        body += (i ? "*" : "") + parts[i];
    return out + body;
}

std::string SeqFamily::str() const
{
    auto sum = [&](const std::vector<FTerm> &ts) {
        if (ts.empty())
            return std::string("0");
        std::string s;
        for (std::size_t i = 0; i < ts.size(); ++i)
            s += fterm_str(*f_, ts[i], i == 0);
        return s;
    };
    if (den_.empty())
        return sum(num_);
    return "(" + sum(num_) + ")/(" + sum(den_) + ")";
}

} // namespace hlf
