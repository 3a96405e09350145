#pragma once

// Symbolic sequences n -> x_n: sums of monomials whose exponents are affine in n,
// optionally as a quotient of two such sums.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "hlf/element.hpp"

namespace hlf {

struct FTerm {
    Scalar c;
    std::array<Affine, kMaxVars> e{};
    int64_t pslope = 0; // mixed fields: extra factor p^(pslope*n)

    // same monomial shape (everything except the coefficient)
    bool same_shape(const FTerm &o) const { return e == o.e && pslope == o.pslope; }
    bool constant() const;
    FTerm operator*(const FTerm &o) const;
    Term at(const Field &f, int64_t n) const;
};

class SeqFamily {
public:
    SeqFamily() = default;
    explicit SeqFamily(FieldPtr f) : f_(std::move(f)) {}

    // `n` may appear only in exponents, e.g. "t^(-1)*u^(n) + 3^(n)*t".
    static SeqFamily parse(const FieldPtr &f, std::string_view text);
    static SeqFamily constant(const Element &x);
    static SeqFamily from_terms(const FieldPtr &f, std::vector<FTerm> num, std::vector<FTerm> den = {});

    const FieldPtr &field() const { return f_; }
    const std::vector<FTerm> &num() const { return num_; }
    // empty means 1
    const std::vector<FTerm> &den() const { return den_; }
    bool is_fraction() const { return !den_.empty(); }
    bool is_zero() const { return num_.empty(); }
    // every exponent and p-power independent of n
    bool is_constant() const;
    // first index of the domain; the denominator is nonzero from here on
    int64_t start() const { return start_; }
    SeqFamily with_start(int64_t s) const;

    Element at(int64_t n) const;
    // x_n as an unreduced fraction (see Element::unreduced)
    Element at_unreduced(int64_t n) const;
    // x_(M*k + r) as a family in k
    SeqFamily reparam(int64_t M, int64_t r) const;

    SeqFamily operator+(const SeqFamily &o) const;
    SeqFamily operator-(const SeqFamily &o) const;
    SeqFamily operator*(const SeqFamily &o) const;
    SeqFamily operator-() const;
    SeqFamily inv() const;
    SeqFamily pow(int64_t e) const;

    std::string str() const;

private:
    void normalize();

    FieldPtr f_;
    std::vector<FTerm> num_, den_;
    int64_t start_ = 1;
};

// sorted by shape with equal shapes merged and zero coefficients dropped
std::vector<FTerm> combine_terms(std::vector<FTerm> ts);
std::vector<FTerm> mul_terms(const std::vector<FTerm> &a, const std::vector<FTerm> &b);

// Affine position of a term at valuation coordinate k (0-based, bottom first).
Affine term_position(const Field &f, const FTerm &t, int k);

std::string fterm_str(const Field &f, const FTerm &t, bool leading);

} // namespace hlf
