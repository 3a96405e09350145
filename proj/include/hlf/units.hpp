#pragma once

// Convergence of unit sequences: the lambda route (x_n / a -> 1 and a / x_n -> 1 in F)
// and the Parshin route (exponents eventually fixed, principal parts converge).

#include <vector>

#include "hlf/convergence.hpp"
#include "hlf/valuation.hpp"

namespace hlf {

// a_m = t_n^{i_n(m)} ... t_1^{i_1(m)} * theta * u_m
struct UnitFamilyDecomposition {
    std::vector<Affine> exponents; // bottom coordinate first
    Scalar theta;
    SeqFamily principal;
};

UnitFamilyDecomposition decompose_unit_family(const SeqFamily &a);

struct UnitVerdict {
    Verdict lambda;
    Verdict tau;
    bool agree() const { return lambda.kind == tau.kind; }
    Json to_json() const;
};

UnitVerdict unit_converges(const SeqFamily &a, const Element &to);

} // namespace hlf
