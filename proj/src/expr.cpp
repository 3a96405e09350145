#include "hlf/expr.hpp"

#include <cctype>

#include "hlf/error.hpp"

namespace hlf {

Ast Ast::integer(const mpz_class &v, std::size_t pos)
{
    Ast a;
    a.kind = Kind::Int;
    a.value = v;
    a.pos = pos;
    return a;
}

Ast Ast::ident(std::string n, std::size_t pos)
{
    Ast a;
    a.kind = Kind::Ident;
    a.name = std::move(n);
    a.pos = pos;
    return a;
}

Ast Ast::binary(Kind k, Ast a, Ast b)
{
    Ast r;
    r.kind = k;
    r.pos = a.pos;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Ast run()
    {
        skip();
        if (i_ >= s_.size())
            throw SyntaxError(i_, "empty expression");
        Ast a = expr();
        skip();
        if (i_ != s_.size())
            throw SyntaxError(i_, std::string("unexpected '") + s_[i_] + "'");
        return a;
    }

private:
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool eat(char c)
    {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Ast expr()
    {
        skip();
        Ast a;
        const std::size_t p0 = i_;
        if (eat('-')) {
            Ast t = term();
            a.kind = Ast::Kind::Neg;
            a.pos = p0;
            a.kids.push_back(std::move(t));
        } else {
            eat('+');
            a = term();
        }
        for (;;) {
            if (eat('+'))
                a = Ast::binary(Ast::Kind::Add, std::move(a), term());
            else if (eat('-'))
                a = Ast::binary(Ast::Kind::Sub, std::move(a), term());
            else
                return a;
        }
    }

    Ast term()
    {
        Ast a = unary();
        for (;;) {
            if (eat('*'))
                a = Ast::binary(Ast::Kind::Mul, std::move(a), unary());
            else if (eat('/'))
                a = Ast::binary(Ast::Kind::Div, std::move(a), unary());
            else
                return a;
        }
    }

    Ast unary()
    {
        skip();
        const std::size_t p0 = i_;
        if (eat('-')) {
            Ast r;
            r.kind = Ast::Kind::Neg;
            r.pos = p0;
            r.kids.push_back(unary());
            return r;
        }
        Ast b = primary();
        if (eat('^'))
            return Ast::binary(Ast::Kind::Pow, std::move(b), exponent());
        return b;
    }

    // t^-1, t^3, t^(2*n-1), t^n
    Ast exponent()
    {
        skip();
        const std::size_t p0 = i_;
        if (eat('-')) {
            Ast r;
            r.kind = Ast::Kind::Neg;
            r.pos = p0;
            r.kids.push_back(exponent());
            return r;
        }
        eat('+');
        return primary();
    }

    Ast primary()
    {
        skip();
        if (i_ >= s_.size())
            throw SyntaxError(i_, "unexpected end of input");
        const std::size_t p0 = i_;
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            Ast a = expr();
            if (!eat(')'))
                throw SyntaxError(i_, "expected ')'");
            return a;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
            return Ast::integer(mpz_class(std::string(s_.substr(p0, i_ - p0))), p0);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            return Ast::ident(std::string(s_.substr(p0, i_ - p0)), p0);
        }
        throw SyntaxError(i_, std::string("unexpected '") + c + "'");
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

} // namespace

Ast parse_expr(std::string_view text) { return Parser(text).run(); }

std::string Affine::str() const
{
    if (slope == 0)
        return std::to_string(intercept);
    std::string s = (slope == 1 ? "" : slope == -1 ? "-" : std::to_string(slope) + "*") + std::string("n");
    if (intercept > 0)
        s += "+" + std::to_string(intercept);
    else if (intercept < 0)
        s += std::to_string(intercept);
    return s;
}

Affine eval_affine(const Ast &a, const std::string &var)
{
    switch (a.kind) {
    case Ast::Kind::Int:
        if (!a.value.fits_slong_p())
            throw SyntaxError(a.pos, "exponent too large");
        return {0, a.value.get_si()};
    case Ast::Kind::Ident:
        if (!var.empty() && a.name == var)
            return {1, 0};
        throw SyntaxError(a.pos, "exponent must be an integer" +
                                     (var.empty() ? std::string() : " or affine in " + var));
    case Ast::Kind::Neg: return -eval_affine(a.kids[0], var);
    case Ast::Kind::Add: return eval_affine(a.kids[0], var) + eval_affine(a.kids[1], var);
    case Ast::Kind::Sub: return eval_affine(a.kids[0], var) - eval_affine(a.kids[1], var);
    case Ast::Kind::Mul: {
        const Affine x = eval_affine(a.kids[0], var), y = eval_affine(a.kids[1], var);
        if (x.slope != 0 && y.slope != 0)
            throw SyntaxError(a.pos, "exponent is not affine");
        return {x.slope * y.intercept + y.slope * x.intercept, x.intercept * y.intercept};
    }
    default: throw SyntaxError(a.pos, "unsupported operator in exponent");
    }
}

} // namespace hlf
