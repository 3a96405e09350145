#pragma once

// Coefficient scalars (F_q or Q) and sparse multivariate Laurent polynomials.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hlf/coeff.hpp"

namespace hlf {

class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    Scalar(const FqElem &e) : v_(e) {}
    Scalar(const Rational &r) : v_(r) {}

    bool is_fq() const { return v_.index() == 0; }
    const FqElem &fq() const { return std::get<FqElem>(v_); }
    const Rational &rat() const { return std::get<Rational>(v_); }

    bool is_zero() const;
    bool is_one() const;
    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(int64_t k) const;

    Scalar operator+(const Scalar &o) const;
    Scalar operator-(const Scalar &o) const;
    Scalar operator*(const Scalar &o) const;
    Scalar operator-() const;
    Scalar inv() const;

    bool operator==(const Scalar &o) const;
    bool operator!=(const Scalar &o) const { return !(*this == o); }
    // total order used only for canonical printing/sorting
    bool operator<(const Scalar &o) const;

    std::string str() const;

private:
    std::variant<FqElem, Rational> v_;
};

constexpr int kMaxVars = 6;
using Exps = std::array<int32_t, kMaxVars>;

Exps exps_add(const Exps &a, const Exps &b);
Exps exps_sub(const Exps &a, const Exps &b);
bool exps_zero(const Exps &a);

struct Term {
    Exps e{};
    Scalar c;
};

class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly constant(const Scalar &c);
    static LaurentPoly monomial(const Scalar &c, const Exps &e);
    // terms may be unsorted / duplicated; zero coefficients are dropped
    static LaurentPoly from_terms(std::vector<Term> ts);

    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    const std::vector<Term> &terms() const { return t_; }
    bool is_constant() const;
    bool is_monomial() const { return t_.size() == 1; }
    // lex-largest term (requires nonzero)
    const Term &lex_lead() const { return t_.back(); }
    Exps min_exps() const;
    int32_t max_deg(int var) const;
    int32_t min_deg(int var) const;

    LaurentPoly operator+(const LaurentPoly &o) const;
    LaurentPoly operator-(const LaurentPoly &o) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly &o) const;
    LaurentPoly scale(const Scalar &c) const;
    LaurentPoly shift(const Exps &e) const;
    LaurentPoly mul_term(const Term &m) const;

    bool operator==(const LaurentPoly &o) const;
    bool operator!=(const LaurentPoly &o) const { return !(*this == o); }

    // coefficients in variable v (lower variables kept in the coefficients)
    std::map<int32_t, LaurentPoly> split(int v) const;

private:
    std::vector<Term> t_; // sorted ascending by exponent vector, nonzero coefficients
};

// Exact quotient a/b in the Laurent ring; throws if b does not divide a.
LaurentPoly divide_exact(const LaurentPoly &a, const LaurentPoly &b);
// gcd up to units (monomials and scalars); nonzero result, lex-lead coefficient 1.
LaurentPoly laurent_gcd(const LaurentPoly &a, const LaurentPoly &b);

} // namespace hlf
