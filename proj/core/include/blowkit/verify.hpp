#pragma once
// Floating-point sampling checks of chart atlases and lifted maps, in log space.
#include "blowkit/manifold.hpp"

#include <cstdint>

namespace bk {

struct SamplePlan {
    std::size_t points = 100;
    double lo = 0.1, hi = 10.0;  // coordinates drawn log-uniformly from [lo, hi]
    std::uint64_t seed = 1;
    double tolerance = 1e-9;     // relative
};
// Throws InvalidPlan.
void validate_plan(const SamplePlan& plan);

struct SampleReport {
    bool ok = true;
    std::size_t samples = 0;
    double max_error = 0;
    std::string worst;   // where the largest error occurred
    std::vector<std::string> failures;
};

// Round trips χ₂₁∘χ₁₂ and β₂∘χ₁₂ = β₁ at interior points of every overlap.
SampleReport verify_transitions(const ChartAtlas& A, const SamplePlan& plan = {});

// β(f′(x)) = f(x) for f(x) = a·x^δ and f′(x) = a^{ν⁻¹}x^μ. Empty a means all
// ones. Throws PreconditionFailed unless δ = μν exactly and a > 0.
SampleReport verify_lift(const IntMat& delta, const IntMat& nu, const IntMat& mu, const SamplePlan& plan = {},
                         const std::vector<double>& a = {});

}  // namespace bk
