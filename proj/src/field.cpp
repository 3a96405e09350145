#include "hlf/field.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "hlf/error.hpp"
#include "hlf/expr.hpp"

namespace hlf {

namespace {

using ZPoly = std::vector<Integer>;

ZPoly zp_add(ZPoly a, const ZPoly &b, int sign)
{
    if (a.size() < b.size())
        a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] += sign * b[i];
    return a;
}

ZPoly zp_mul(const ZPoly &a, const ZPoly &b)
{
    if (a.empty() || b.empty())
        return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

ZPoly eval_modulus(const Ast &a, const std::string &gen)
{
    switch (a.kind) {
    case Ast::Kind::Int: return {a.value};
    case Ast::Kind::Ident:
        if (a.name != gen)
            throw SyntaxError(a.pos, "modulus may only use the generator " + gen);
        return {0, 1};
    case Ast::Kind::Neg: return zp_add({}, eval_modulus(a.kids[0], gen), -1);
    case Ast::Kind::Add: return zp_add(eval_modulus(a.kids[0], gen), eval_modulus(a.kids[1], gen), 1);
    case Ast::Kind::Sub: return zp_add(eval_modulus(a.kids[0], gen), eval_modulus(a.kids[1], gen), -1);
    case Ast::Kind::Mul: return zp_mul(eval_modulus(a.kids[0], gen), eval_modulus(a.kids[1], gen));
    case Ast::Kind::Pow: {
        const Affine e = eval_affine(a.kids[1], "");
        if (e.intercept < 0)
            throw SyntaxError(a.pos, "negative power in modulus");
        ZPoly b = eval_modulus(a.kids[0], gen), r = {1};
        for (int64_t i = 0; i < e.intercept; ++i)
            r = zp_mul(r, b);
        return r;
    }
    default: throw SyntaxError(a.pos, "unsupported operator in modulus");
    }
}

std::recursive_mutex registry_mu;
std::map<std::string, FieldPtr> &registry()
{
    static std::map<std::string, FieldPtr> r;
    return r;
}

std::string base_str(Field::Base base, const FqField *fq, uint32_t p)
{
    switch (base) {
    case Field::Base::Finite: return "Fq(" + fq->descriptor() + ")";
    case Field::Base::PAdic: return "Qp(" + std::to_string(p) + ")";
    case Field::Base::Rational: return "Q";
    }
    return "";
}

bool valid_name(const std::string &s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

} // namespace

Field::Field(Base base, const FqField *fq, uint32_t p, std::vector<std::string> curly,
             std::vector<std::string> round)
    : base_(base), fq_(fq), p_(p), curlyv_(std::move(curly)), roundv_(std::move(round))
{
    vars_ = curlyv_;
    vars_.insert(vars_.end(), roundv_.begin(), roundv_.end());
    curly_ = static_cast<int>(curlyv_.size());
    for (int i = 0; i < curly_; ++i)
        coords_.push_back({Coord::Kind::Param, i});
    if (base_ == Base::PAdic)
        coords_.push_back({Coord::Kind::PAdic, -1});
    for (int i = 0; i < static_cast<int>(roundv_.size()); ++i)
        coords_.push_back({Coord::Kind::Param, curly_ + i});
    str_ = base_str(base_, fq_, p_);
    for (auto &v : curlyv_)
        str_ += "{{" + v + "}}";
    for (auto &v : roundv_)
        str_ += "((" + v + "))";
}

FieldPtr Field::make(Base base, const FqField *fq, uint32_t p, std::vector<std::string> curly,
                     std::vector<std::string> round)
{
    if (base == Base::Finite && !fq)
        fail(ErrorCode::UnsupportedField, "finite base without field data");
    if (base == Base::Finite)
        p = fq->p();
    if (base == Base::PAdic && !is_prime(p))
        fail(ErrorCode::UnsupportedField, "Qp needs a prime, got " + std::to_string(p));
    if (!curly.empty() && base != Base::PAdic)
        fail(ErrorCode::UnsupportedField, "{{.}} extensions are only supported over Qp");
    if (curly.size() > 1)
        fail(ErrorCode::UnsupportedField, "only one {{.}} extension is supported (Qp{{t}})");
    if (curly.size() + round.size() > static_cast<std::size_t>(kMaxVars))
        fail(ErrorCode::UnsupportedField, "at most " + std::to_string(kMaxVars) + " parameters");
    std::set<std::string> seen;
    for (const auto *vs : {&curly, &round})
        for (const auto &v : *vs) {
            if (!valid_name(v))
                fail(ErrorCode::UnsupportedField, "bad parameter name '" + v + "'");
            if (v == "n")
                fail(ErrorCode::UnsupportedField, "'n' is reserved for sequence indices");
            if (base == Base::Finite && fq->degree() > 1 && v == fq->generator())
                fail(ErrorCode::UnsupportedField, "parameter '" + v + "' clashes with the F_q generator");
            if (!seen.insert(v).second)
                fail(ErrorCode::UnsupportedField, "duplicate parameter '" + v + "'");
        }

    auto f = std::make_shared<Field>(base, fq, p, curly, round);
    std::lock_guard<std::recursive_mutex> lock(registry_mu);
    auto it = registry().find(f->str_);
    if (it != registry().end())
        return it->second;
    if (f->dim() > 0) {
        if (f->top_padic()) {
            f->residue_ = make(Base::Finite, &FqField::prime(p), p, {}, curly);
        } else {
            auto r2 = round;
            r2.pop_back();
            f->residue_ = make(base, fq, p, curly, r2);
        }
    }
    registry().emplace(f->str_, f);
    return f;
}

FieldPtr Field::parse(std::string_view desc)
{
    std::string s;
    for (char c : desc)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    std::size_t i = 0;
    Base base;
    const FqField *fq = nullptr;
    uint32_t p = 0;
    auto expect = [&](const std::string &tok) {
        if (s.compare(i, tok.size(), tok) != 0)
            throw SyntaxError(i, "expected '" + tok + "' in field descriptor");
        i += tok.size();
    };
    auto number = [&]() -> uint64_t {
        const std::size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (st == i || i - st > 12)
            throw SyntaxError(st, "expected a number in field descriptor");
        return std::stoull(s.substr(st, i - st));
    };
    if (s.compare(0, 3, "Fq(") == 0) {
        i = 3;
        const uint64_t q = number();
        std::vector<uint32_t> mod = {0, 1};
        std::string gen = "w";
        uint64_t pp = 0;
        int m = 0;
        for (uint64_t d = 2; d <= q; ++d)
            if (q % d == 0) {
                pp = d;
                break;
            }
        if (pp == 0)
            fail(ErrorCode::UnsupportedField, "field order must be a prime power >= 2");
        for (uint64_t r = q; r > 1; r /= pp, ++m)
            if (r % pp != 0)
                fail(ErrorCode::UnsupportedField, "field order " + std::to_string(q) + " is not a prime power");
        if (i < s.size() && s[i] == ';') {
            ++i;
            const std::size_t st = i;
            const std::size_t close = s.find(')', i);
            if (close == std::string::npos)
                throw SyntaxError(i, "unterminated modulus");
            // generator name: the first identifier in the modulus
            const std::string body = s.substr(st, close - st);
            std::size_t k = 0;
            while (k < body.size() && !std::isalpha(static_cast<unsigned char>(body[k])))
                ++k;
            std::size_t e = k;
            while (e < body.size() && (std::isalnum(static_cast<unsigned char>(body[e])) || body[e] == '_'))
                ++e;
            if (k == body.size())
                throw SyntaxError(st, "modulus needs a generator symbol");
            gen = body.substr(k, e - k);
            ZPoly zp;
            try {
                zp = eval_modulus(parse_expr(body), gen);
            } catch (const SyntaxError &err) {
                throw SyntaxError(st + err.position(), "bad modulus");
            }
            mod.assign(zp.size(), 0);
            for (std::size_t j = 0; j < zp.size(); ++j) {
                Integer r;
                mpz_fdiv_r_ui(r.get_mpz_t(), zp[j].get_mpz_t(), pp);
                mod[j] = static_cast<uint32_t>(r.get_ui());
            }
            while (!mod.empty() && mod.back() == 0)
                mod.pop_back();
            if (static_cast<int>(mod.size()) - 1 != m)
                fail(ErrorCode::UnsupportedField, "modulus degree does not match q = " + std::to_string(q));
            i = close;
        } else if (m != 1) {
            fail(ErrorCode::UnsupportedField, "Fq(" + std::to_string(q) + ") needs an explicit modulus, e.g. Fq(4;w^2+w+1)");
        }
        expect(")");
        fq = &FqField::get(static_cast<uint32_t>(pp), mod, gen);
        base = Base::Finite;
        p = fq->p();
    } else if (s.compare(0, 3, "Qp(") == 0) {
        i = 3;
        p = static_cast<uint32_t>(number());
        expect(")");
        base = Base::PAdic;
    } else if (s.compare(0, 1, "Q") == 0) {
        i = 1;
        base = Base::Rational;
    } else {
        throw SyntaxError(0, "field descriptor must start with Fq(, Qp( or Q");
    }
    std::vector<std::string> curly, round;
    while (i < s.size()) {
        if (s.compare(i, 2, "{{") == 0) {
            const std::size_t e = s.find("}}", i + 2);
            if (e == std::string::npos)
                throw SyntaxError(i, "unterminated {{");
            if (!round.empty())
                fail(ErrorCode::UnsupportedField, "{{.}} must come before ((.)) extensions");
            curly.push_back(s.substr(i + 2, e - i - 2));
            i = e + 2;
        } else if (s.compare(i, 2, "((") == 0) {
            const std::size_t e = s.find("))", i + 2);
            if (e == std::string::npos)
                throw SyntaxError(i, "unterminated ((");
            round.push_back(s.substr(i + 2, e - i - 2));
            i = e + 2;
        } else {
            throw SyntaxError(i, "expected (( or {{ in field descriptor");
        }
    }
    return make(base, fq, p, curly, round);
}

int Field::var_index(const std::string &name) const
{
    for (int i = 0; i < nvars(); ++i)
        if (vars_[i] == name)
            return i;
    return -1;
}

int Field::padic_coord() const
{
    for (int i = 0; i < dim(); ++i)
        if (coords_[i].kind == Coord::Kind::PAdic)
            return i;
    return -1;
}

FieldPtr Field::descend(int k) const
{
    if (k == 0)
        return shared_from_this();
    FieldPtr f = residue_;
    for (int i = 1; i < k && f; ++i)
        f = f->residue();
    if (!f)
        fail(ErrorCode::InvalidInput, "cannot descend below the last residue field");
    return f;
}

Scalar Field::zero() const { return scalar(Integer(0)); }
Scalar Field::one() const { return scalar(Integer(1)); }

Scalar Field::scalar(const Integer &k) const
{
    if (base_ == Base::Finite) {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), p_);
        return Scalar(FqElem(*fq_, static_cast<int64_t>(r.get_ui())));
    }
    return Scalar(Rational(k));
}

Scalar Field::scalar(const Rational &r) const
{
    if (base_ == Base::Finite) {
        const Integer d = r.get_den();
        if (mpz_divisible_ui_p(d.get_mpz_t(), p_))
            fail(ErrorCode::DivisionByZero, "denominator divisible by the characteristic");
        return scalar(Integer(r.get_num())) * scalar(d).inv();
    }
    return Scalar(r);
}

ValVec Field::position(const Term &t) const
{
    ValVec v(coords_.size());
    for (std::size_t k = 0; k < coords_.size(); ++k)
        v[k] = coords_[k].kind == Coord::Kind::Param ? t.e[coords_[k].var] : padic_val(t.c.rat(), p_);
    return v;
}

int compare_inverse_lex(const ValVec &a, const ValVec &b)
{
    for (std::size_t k = a.size(); k-- > 0;) {
        if (a[k] < b[k])
            return -1;
        if (a[k] > b[k])
            return 1;
    }
    return 0;
}

bool nonnegative_inverse_lex(const ValVec &a) { return compare_inverse_lex(a, ValVec(a.size(), 0)) >= 0; }

std::string valvec_str(const ValVec &v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << v[i];
    os << ')';
    return os.str();
}

void require_same_field(const Field &a, const Field &b)
{
    if (!a.same(b))
        fail(ErrorCode::FieldMismatch, a.str() + " vs " + b.str());
}

} // namespace hlf
