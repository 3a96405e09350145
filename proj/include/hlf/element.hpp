#pragma once

// Exact field elements: canonical fractions P/Q of Laurent polynomials in the
// parameters, Q normalised so that its valuation-leading term is exactly 1.

#include <string>
#include <string_view>

#include "hlf/expr.hpp"
#include "hlf/field.hpp"

namespace hlf {

class Element {
public:
    Element() = default;
    explicit Element(FieldPtr f);

    static Element fraction(FieldPtr f, LaurentPoly num, LaurentPoly den);
    // P/Q without cancelling common factors: not canonical, so only for valuation
    // and membership queries, never for equality
    static Element unreduced(FieldPtr f, LaurentPoly num, LaurentPoly den);
    static Element poly(FieldPtr f, LaurentPoly num);
    static Element constant(FieldPtr f, const Scalar &c);
    static Element integer(FieldPtr f, int64_t k);
    static Element rational(FieldPtr f, const Rational &r);
    static Element monomial(FieldPtr f, const Scalar &c, const Exps &e);
    static Element param(FieldPtr f, int var, int32_t power = 1);
    static Element parse(FieldPtr f, std::string_view text);

    const FieldPtr &field() const { return f_; }
    const LaurentPoly &num() const { return num_; }
    const LaurentPoly &den() const { return den_; }
    bool valid() const { return static_cast<bool>(f_); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    // c * monomial, with trivial denominator
    bool is_monomial() const { return num_.is_monomial() && den_.is_constant(); }

    Element operator+(const Element &o) const;
    Element operator-(const Element &o) const;
    Element operator*(const Element &o) const;
    Element operator/(const Element &o) const;
    Element operator-() const;
    Element inv() const;
    Element pow(int64_t e) const;

    bool operator==(const Element &o) const;
    bool operator!=(const Element &o) const { return !(*this == o); }

    // rank-n valuation (v_1..v_n); ZERO_ELEMENT on 0
    ValVec valuation() const;
    int64_t top_valuation() const;
    // valuation-leading monomial of the numerator
    Term lead() const;

    std::string str() const;

private:
    FieldPtr f_;
    LaurentPoly num_, den_;
};

Term lead_term(const Field &f, const LaurentPoly &p);
std::string poly_str(const Field &f, const LaurentPoly &p);
std::string monomial_str(const Field &f, const Scalar &c, const Exps &e, bool leading);

// Evaluate a parsed expression in a field.
Element eval_element(const FieldPtr &f, const Ast &a);

} // namespace hlf
