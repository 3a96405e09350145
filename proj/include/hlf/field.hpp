#pragma once

// Higher field towers: Fq(q)((t_1))...((t_n)), Qp(p){{t}}((...)), Qp(p)((...)), Q((...)).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlf/poly.hpp"

namespace hlf {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// One coordinate of the rank-n valuation: a parameter exponent or v_p of the coefficient.
struct Coord {
    enum class Kind { Param, PAdic };
    Kind kind;
    int var; // for Param
};

using ValVec = std::vector<int64_t>; // (v_1, ..., v_n)

class Field : public std::enable_shared_from_this<Field> {
public:
    enum class Base { Finite, PAdic, Rational };

    static FieldPtr parse(std::string_view desc);
    static FieldPtr make(Base base, const FqField *fq, uint32_t p, std::vector<std::string> curly,
                         std::vector<std::string> round);

    Base base() const { return base_; }
    const FqField &fq() const { return *fq_; }
    // p for Finite and PAdic bases, 0 for Q
    uint32_t prime() const { return p_; }
    uint32_t characteristic() const { return base_ == Base::Finite ? p_ : 0; }
    bool mixed() const { return base_ == Base::PAdic; }
    bool coefficient_field_dependent() const { return base_ == Base::Rational && dim() > 0; }

    const std::vector<std::string> &vars() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    int curly() const { return curly_; }
    int var_index(const std::string &name) const;

    const std::vector<Coord> &coords() const { return coords_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    bool top_padic() const { return dim() > 0 && coords_.back().kind == Coord::Kind::PAdic; }
    // index of the v_p coordinate, or -1
    int padic_coord() const;

    // residue field; null for dimension 0
    FieldPtr residue() const { return residue_; }
    // field obtained by descending k levels
    FieldPtr descend(int k) const;

    const std::string &str() const { return str_; }
    bool same(const Field &o) const { return this == &o || str_ == o.str_; }

    Scalar zero() const;
    Scalar one() const;
    Scalar scalar(const Integer &k) const;
    Scalar scalar(const Rational &r) const;

    // valuation vector of a single monomial
    ValVec position(const Term &t) const;

    Field(Base base, const FqField *fq, uint32_t p, std::vector<std::string> curly,
          std::vector<std::string> round);

private:
    Base base_;
    const FqField *fq_;
    uint32_t p_;
    std::vector<std::string> curlyv_, roundv_, vars_;
    int curly_;
    std::vector<Coord> coords_;
    FieldPtr residue_;
    std::string str_;
};

// Inverse-lexicographic comparison, v_n most significant: <0, 0, >0.
int compare_inverse_lex(const ValVec &a, const ValVec &b);
bool nonnegative_inverse_lex(const ValVec &a);
std::string valvec_str(const ValVec &v);

void require_same_field(const Field &a, const Field &b);

} // namespace hlf
