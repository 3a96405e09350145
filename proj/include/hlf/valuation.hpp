#pragma once

// Rank-r valuations, the chain O_F = O_1 c ... c O_n, and unit decomposition.

#include "hlf/element.hpp"

namespace hlf {

// (v_{n-r+1}, ..., v_n)
ValVec rank_valuation(const Element &x, int r);
// level 1 is O_F, level n is the valuation ring of v_F
bool in_integer_ring(const Element &x, int level);
// maximal ideal of O_F: v > 0 in inverse-lex order
bool in_rank_maximal_ideal(const Element &x);

struct UnitDecomposition {
    ValVec exponents; // (i_1, ..., i_n), exponent of t_k at index k-1
    Scalar theta;     // in F_q^x
    Element principal;
};

UnitDecomposition unit_decompose(const Element &x);
Element recompose(const FieldPtr &f, const UnitDecomposition &d);

} // namespace hlf
