#pragma once

// Constructive witnesses for the failure of joint continuity of multiplication and
// for the sequentially open set that contains no open subgroup.

#include <optional>

#include "hlf/convergence.hpp"

namespace hlf {

// Runs the decision procedure on f*g -> x*y after confirming f -> x and g -> y.
Verdict product_continuity_check(const SeqFamily &f, const Element &x, const SeqFamily &g, const Element &y);

struct EscapePair {
    Element x, y; // x in U, y in V, x*y not in W
};

// Proper-leveled target: level i < 0 is u^{-i} F_q[[u]], levels i >= 0 are everything.
BasicOpen canonical_product_target();

// Over F_q((u))((t)); nothing when W has no proper level below its cutoff.
std::optional<EscapePair> product_escape_witness(const FieldPtr &f, const BasicOpen &U, const BasicOpen &V,
                                                 const BasicOpen &W);

struct SubgroupEscape {
    int64_t a = 0, c = 0;
    Element element; // t^a u^-c + t^-a u^c, in U and in C
};

// U must be subgroup-shaped: levels u^{m_i} O below the cutoff.
SubgroupEscape subgroup_escape_witness(const FieldPtr &f, const BasicOpen &U);

// The family t^{a(n)} u^{-c(n)} + t^{-a(n)} u^{c(n)}, a and c >= 1 on the domain.
SeqFamily c_family(const FieldPtr &f, const Affine &a, const Affine &c);

struct ClosedCheck {
    Verdict verdict;
    bool parameters_constant = false;
    // CONVERGES: the limit is again of the form t^a u^-c + t^-a u^c
    bool limit_in_c = false;
    // DIVERGES: an n-dependent term already fails, so no limit exists at all
    bool diverges_for_every_limit = false;
};

ClosedCheck seq_closed_check_C(const FieldPtr &f, const Affine &a, const Affine &c);

} // namespace hlf
