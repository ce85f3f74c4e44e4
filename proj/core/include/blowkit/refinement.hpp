#pragma once
// Refinements of a single toric monoid and the subdivisions that produce them.
#include "blowkit/monoid.hpp"

#include <string>

namespace bk {

struct MonoidRefinement {
    ToricMonoid base;
    std::vector<ToricMonoid> members;  // sorted, unique; all in base coordinates

    MonoidRefinement() = default;
    MonoidRefinement(ToricMonoid b, std::vector<ToricMonoid> m);
    std::vector<ToricMonoid> maximal() const;
    bool contains(const ToricMonoid& m) const;
    bool is_smooth() const;
    bool operator==(const MonoidRefinement& o) const { return base == o.base && members == o.members; }
};

struct Report {
    bool ok = true;
    std::string violated;  // name of the first failed property
    std::string detail;
    IntVec witness;
    static Report pass() { return {}; }
    static Report fail(std::string what, std::string detail, IntVec w = {}) {
        return {false, std::move(what), std::move(detail), std::move(w)};
    }
};

// Face closure, pairwise intersections along common faces, and support cover
// (exact fan-completeness test plus seeded random probes).
Report validate(const MonoidRefinement& R);

MonoidRefinement trivial_refinement(const ToricMonoid& sigma);
// S(σ, v): faces avoiding v and τ + ℤ₊v (lattice N_τ + ℤv).
MonoidRefinement star_subdivide(const ToricMonoid& sigma, const IntVec& v);
// Star subdivision at Σ n_i·e_i over the listed extremals of σ, n_i ≥ 1.
MonoidRefinement weighted_star_subdivide(const ToricMonoid& sigma, const std::vector<std::size_t>& extremal_index,
                                         const std::vector<Int>& weights);
MonoidRefinement smoothing(const ToricMonoid& sigma);
MonoidRefinement localize(const MonoidRefinement& R, const ToricMonoid& tau);
// Maximal faces of σ meeting σ ∩ span(M) only in 0.
std::vector<Face> maximal_faces_avoiding(const ToricMonoid& sigma, const std::vector<IntVec>& M);
// All faces of the joins μ ∗ τ, τ maximal avoiding μ = σ∩M, unchecked.
MonoidRefinement planar_joins(const ToricMonoid& sigma, const std::vector<IntVec>& M);
// S(σ, σ∩M); throws PlanarOverlap when the joins do not form a refinement.
MonoidRefinement planar_refine(const ToricMonoid& sigma, const std::vector<IntVec>& M);

// Cells σ ∩ {±h ≥ 0 for each h in H} and their faces. Always a refinement;
// every cell lies on one side of each hyperplane.
MonoidRefinement hyperplane_refine(const ToricMonoid& sigma, const std::vector<IntVec>& H);

// Does cone(τ) meet span(M) away from 0?
bool meets_subspace(const ToricMonoid& tau, const std::vector<IntVec>& M);

}  // namespace bk
