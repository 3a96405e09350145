#pragma once

// Seeded generators for elements and sequences used by the property suites.

#include <cstdint>
#include <random>

#include "hlf/element.hpp"

namespace hlf {

using Rng = std::mt19937_64;

int64_t uniform(Rng &rng, int64_t lo, int64_t hi);
Scalar random_scalar(const Field &f, Rng &rng, bool nonzero = true);
LaurentPoly random_poly(const Field &f, Rng &rng, int max_terms, int exp_range);
// Random fraction with small support; may be zero unless nonzero is set.
Element random_element(const FieldPtr &f, Rng &rng, bool nonzero = true, int exp_range = 3);

} // namespace hlf
