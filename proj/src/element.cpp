#include "hlf/element.hpp"

#include <algorithm>
#include <sstream>

#include "hlf/error.hpp"

namespace hlf {

Element::Element(FieldPtr f) : f_(std::move(f)), den_(LaurentPoly::constant(f_->one())) {}

Term lead_term(const Field &f, const LaurentPoly &p)
{
    if (p.is_zero())
        fail(ErrorCode::ZeroElement, "leading term of zero");
    const auto &ts = p.terms();
    if (f.dim() == 0 || ts.size() == 1)
        return ts.front();
    std::size_t best = 0;
    ValVec bp = f.position(ts[0]);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        ValVec q = f.position(ts[i]);
        if (compare_inverse_lex(q, bp) < 0) {
            best = i;
            bp = std::move(q);
        }
    }
    return ts[best];
}

namespace {

Term inverse_term(const Term &t)
{
    Term r;
    for (int i = 0; i < kMaxVars; ++i)
        r.e[i] = -t.e[i];
    r.c = t.c.inv();
    return r;
}

} // namespace

Element Element::fraction(FieldPtr f, LaurentPoly num, LaurentPoly den)
{
    if (den.is_zero())
        fail(ErrorCode::DivisionByZero, "zero denominator");
    Element x(f);
    if (num.is_zero())
        return x;
    if (!num.is_monomial() && !den.is_monomial()) {
        LaurentPoly g = laurent_gcd(num, den);
        if (!g.is_monomial()) {
            num = divide_exact(num, g);
            den = divide_exact(den, g);
        }
    }
    const Term li = inverse_term(lead_term(*f, den));
    x.num_ = num.mul_term(li);
    x.den_ = den.mul_term(li);
    return x;
}

Element Element::unreduced(FieldPtr f, LaurentPoly num, LaurentPoly den)
{
    if (den.is_zero())
        fail(ErrorCode::DivisionByZero, "zero denominator");
    Element x(f);
    if (num.is_zero())
        return x;
    const Term li = inverse_term(lead_term(*f, den));
    x.num_ = num.mul_term(li);
    x.den_ = den.mul_term(li);
    return x;
}

Element Element::poly(FieldPtr f, LaurentPoly num)
{
    LaurentPoly one = LaurentPoly::constant(f->one());
    return fraction(std::move(f), std::move(num), std::move(one));
}

Element Element::constant(FieldPtr f, const Scalar &c) { return poly(f, LaurentPoly::constant(c)); }
Element Element::integer(FieldPtr f, int64_t k) { return constant(f, f->scalar(Integer(static_cast<long>(k)))); }
Element Element::rational(FieldPtr f, const Rational &r) { return constant(f, f->scalar(r)); }

Element Element::monomial(FieldPtr f, const Scalar &c, const Exps &e)
{
    return poly(f, LaurentPoly::monomial(c, e));
}

Element Element::param(FieldPtr f, int var, int32_t power)
{
    Exps e{};
    e[var] = power;
    return monomial(f, f->one(), e);
}

bool Element::is_one() const { return num_.is_constant() && !num_.is_zero() && num_.terms()[0].c.is_one() && den_.is_constant(); }

Element Element::operator+(const Element &o) const
{
    require_same_field(*f_, *o.f_);
    if (is_zero())
        return o;
    if (o.is_zero())
        return *this;
    if (den_ == o.den_)
        return fraction(f_, num_ + o.num_, den_);
    return fraction(f_, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Element Element::operator-() const
{
    Element r = *this;
    r.num_ = -num_;
    return r;
}

Element Element::operator-(const Element &o) const { return *this + (-o); }

Element Element::operator*(const Element &o) const
{
    require_same_field(*f_, *o.f_);
    if (is_zero() || o.is_zero())
        return Element(f_);
    return fraction(f_, num_ * o.num_, den_ * o.den_);
}

Element Element::inv() const
{
    if (is_zero())
        fail(ErrorCode::DivisionByZero, "inverse of zero");
    return fraction(f_, den_, num_);
}

Element Element::operator/(const Element &o) const
{
    require_same_field(*f_, *o.f_);
    if (o.is_zero())
        fail(ErrorCode::DivisionByZero, "division by zero");
    return fraction(f_, num_ * o.den_, den_ * o.num_);
}

Element Element::pow(int64_t e) const
{
    if (e < 0)
        return inv().pow(-e);
    Element acc = integer(f_, 1), base = *this;
    for (; e; e >>= 1) {
        if (e & 1)
            acc = acc * base;
        if (e > 1)
            base = base * base;
    }
    return acc;
}

bool Element::operator==(const Element &o) const
{
    return f_->same(*o.f_) && num_ == o.num_ && den_ == o.den_;
}

ValVec Element::valuation() const
{
    if (is_zero())
        fail(ErrorCode::ZeroElement, "valuation of zero");
    return f_->position(lead_term(*f_, num_));
}

int64_t Element::top_valuation() const
{
    if (f_->dim() == 0)
        return 0;
    return valuation().back();
}

Term Element::lead() const { return lead_term(*f_, num_); }

std::string monomial_str(const Field &f, const Scalar &c, const Exps &e, bool leading)
{
    std::string out;
    Scalar a = c;
    bool neg = false;
    if (!a.is_fq() && a.rat() < 0) {
        neg = true;
        a = -a;
    }
    if (neg)
        out += leading ? "-" : " - ";
    else if (!leading)
        out += " + ";
    std::string body;
    const bool has_vars = !exps_zero(e);
    if (!a.is_one() || !has_vars)
        body = a.str();
    for (int v = f.nvars() - 1; v >= 0; --v) {
        if (e[v] == 0)
            continue;
        if (!body.empty())
            body += "*";
        body += f.vars()[v];
        if (e[v] != 1)
            body += "^" + std::to_string(e[v]);
    }
    return out + body;
}

std::string poly_str(const Field &f, const LaurentPoly &p)
{
    if (p.is_zero())
        return "0";
    std::vector<std::pair<ValVec, const Term *>> order;
    for (const auto &t : p.terms())
        order.emplace_back(f.position(t), &t);
    std::sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
        const int c = compare_inverse_lex(a.first, b.first);
        return c != 0 ? c < 0 : a.second->e < b.second->e;
    });
    std::string s;
    bool first = true;
    for (const auto &[pos, t] : order) {
        s += monomial_str(f, t->c, t->e, first);
        first = false;
    }
    return s;
}

std::string Element::str() const
{
    const std::string n = poly_str(*f_, num_);
    if (den_.is_constant() && den_.terms()[0].c.is_one())
        return n;
    return "(" + n + ")/(" + poly_str(*f_, den_) + ")";
}

Element eval_element(const FieldPtr &f, const Ast &a)
{
    switch (a.kind) {
    case Ast::Kind::Int: return Element::constant(f, f->scalar(a.value));
    case Ast::Kind::Ident: {
        const int v = f->var_index(a.name);
        if (v >= 0)
            return Element::param(f, v);
        if (f->base() == Field::Base::Finite && f->fq().degree() > 1 && a.name == f->fq().generator())
            return Element::constant(f, Scalar(FqElem::generator(f->fq())));
        throw Error(ErrorCode::UnknownParameter,
                    "'" + a.name + "' at position " + std::to_string(a.pos) + " is not a parameter of " + f->str());
    }
    case Ast::Kind::Neg: return -eval_element(f, a.kids[0]);
    case Ast::Kind::Add: return eval_element(f, a.kids[0]) + eval_element(f, a.kids[1]);
    case Ast::Kind::Sub: return eval_element(f, a.kids[0]) - eval_element(f, a.kids[1]);
    case Ast::Kind::Mul: return eval_element(f, a.kids[0]) * eval_element(f, a.kids[1]);
    case Ast::Kind::Div: {
        const Element d = eval_element(f, a.kids[1]);
        if (d.is_zero())
            throw Error(ErrorCode::DivisionByZero, "denominator at position " + std::to_string(a.kids[1].pos) + " is zero");
        return eval_element(f, a.kids[0]) / d;
    }
    case Ast::Kind::Pow: {
        const Affine e = eval_affine(a.kids[1], "");
        const Element b = eval_element(f, a.kids[0]);
        if (b.is_zero() && e.intercept < 0)
            throw Error(ErrorCode::DivisionByZero, "negative power of zero");
        if (e.intercept > 100000 || e.intercept < -100000)
            throw SyntaxError(a.kids[1].pos, "exponent out of range");
        return b.pow(e.intercept);
    }
    }
    return Element(f);
}

Element Element::parse(FieldPtr f, std::string_view text) { return eval_element(f, parse_expr(text)); }

} // namespace hlf
