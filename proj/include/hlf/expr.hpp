#pragma once

// Parser for the element / sequence expression language into a small AST.
// Evaluation lives with the consumers (fields, families, schemes).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace hlf {

struct Ast {
    enum class Kind { Int, Ident, Add, Sub, Mul, Div, Neg, Pow };
    Kind kind = Kind::Int;
    mpz_class value;  // Int
    std::string name; // Ident
    std::vector<Ast> kids;
    std::size_t pos = 0;

    static Ast integer(const mpz_class &v, std::size_t pos = 0);
    static Ast ident(std::string n, std::size_t pos = 0);
    static Ast binary(Kind k, Ast a, Ast b);
};

Ast parse_expr(std::string_view text);

// Affine form s*n + b, used for exponents.
struct Affine {
    int64_t slope = 0;
    int64_t intercept = 0;

    int64_t at(int64_t n) const { return slope * n + intercept; }
    bool constant() const { return slope == 0; }
    bool operator==(const Affine &o) const { return slope == o.slope && intercept == o.intercept; }
    bool operator!=(const Affine &o) const { return !(*this == o); }
    bool operator<(const Affine &o) const
    {
        return slope != o.slope ? slope < o.slope : intercept < o.intercept;
    }
    Affine operator+(const Affine &o) const { return {slope + o.slope, intercept + o.intercept}; }
    Affine operator-(const Affine &o) const { return {slope - o.slope, intercept - o.intercept}; }
    Affine operator-() const { return {-slope, -intercept}; }
    Affine operator*(int64_t k) const { return {slope * k, intercept * k}; }
    std::string str() const;
};

// Evaluate an exponent AST as an affine form in `var` (empty var: integer only).
Affine eval_affine(const Ast &a, const std::string &var);

} // namespace hlf
