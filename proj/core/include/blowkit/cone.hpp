#pragma once
// Polyhedral cone helpers shared by the monoid code.
#include "blowkit/exact.hpp"

namespace bk {

// Extreme rays of {x ∈ ℚⁿ : a·x ≥ 0 for a in A}, as primitive integer
// vectors, by double description. Requires rank A = n (pointed cone);
// throws NotPointed otherwise.
std::vector<IntVec> extreme_rays(const std::vector<IntVec>& A, std::size_t n);

// Lattice basis (Hermite form) of ℤⁿ ∩ span(rows).
std::vector<IntVec> saturate(const std::vector<IntVec>& rows, std::size_t n);

}  // namespace bk
