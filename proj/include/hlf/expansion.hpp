#pragma once

// Expansions along the top parameter (or along p in Qp / Qp{{t}}), the residue
// map and the canonical lifting h.

#include <cstdint>
#include <vector>

#include "hlf/element.hpp"

namespace hlf {

constexpr int64_t kUncapped = INT64_MAX;

struct Jet {
    FieldPtr field;
    FieldPtr residue; // coefficient field
    int64_t lo = 0, hi = -1;
    std::vector<Element> coeffs; // levels lo..hi
    // all levels below support_lo are zero
    int64_t support_lo = 0;
    // levels above certified_hi are not exact (mixed fields with approximate lifts)
    int64_t certified_hi = kUncapped;

    const Element &at(int64_t i) const { return coeffs.at(static_cast<std::size_t>(i - lo)); }
};

// Coefficients of x at levels [lo, hi]. N is the p-adic digit precision used
// for non-exact Teichmuller lifts; PRECISION_EXHAUSTED if the window cannot be certified.
Jet expand(const Element &x, int64_t lo, int64_t hi, int64_t N = 8);

// Same, but returns the jet truncated to the certified part instead of failing.
Jet expand_certified(const Element &x, int64_t lo, int64_t hi, int64_t N);

Element residue(const Element &x);

struct Lift {
    Element value;
    bool exact = true;
};

// Canonical lifting h: F-bar -> O_F into `target`, whose residue field owns ybar.
Lift lift_h(const FieldPtr &target, const Element &ybar, int64_t N = 8);

// Element of the residue field viewed in F (equal characteristic only).
Element embed_residue(const FieldPtr &target, const Element &ybar);

} // namespace hlf
