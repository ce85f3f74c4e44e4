#pragma once
// Fiber products of b-maps f₁ : X₁ → Y, f₂ : X₂ → Y, combinatorially.
#include "blowkit/binomial.hpp"

namespace bk {

struct FiberProblem {
    BMap f1, f2;
    // dimensions of X₁, X₂, Y; unset means the largest codimension of a face
    std::optional<std::size_t> dim1, dim2, dimY;
};
Report validate_problem(const FiberProblem& P);

// A pair of faces with (f₁)_#F₁ = (f₂)_#F₂ = G.
struct FacePair {
    std::string F1, F2, G;
    ToricMonoid monoid;              // σ_F₁ ×_σG σ_F₂ in ℤ^{codim F₁ + codim F₂}
    bool smooth = false;
    bool relevant = false;           // an element of the fiber complex
    std::size_t normal_rank = 0;     // rank of N_σF₁ ⊕ N_σF₂ → N_σG
    bool normal_surjective = false;  // normal_rank == codim G
    // dim Y ≤ normal_rank + dim F₁ + dim F₂: the tangential directions can make
    // up the deficit of the b-normal part
    bool transversal = false;
    // independent γⱼ = (ν₁ column j) ⊕ −(ν₂ column j) and dim Y − normal_rank
    // smooth equations, when the γⱼ are indefinite
    std::optional<BinomialSystem> model;
};

struct FiberReport {
    std::vector<FacePair> pairs;  // every pair over a common face, sorted by (F₁, F₂)
    bool transversal = false;     // over the relevant pairs; necessary condition only
    bool smooth = false;          // every relevant monoid freely generated
    std::vector<std::string> offenders;  // ids "(F₁,F₂)" of non-smooth relevant monoids
    std::string note;
};
FiberReport analyze(const FiberProblem& P);

struct TransversalityVerdict {
    bool ok = false;
    std::vector<std::string> failures;  // ids "(F₁,F₂)"
    std::string note;
};
// Dimension count over every relevant pair: b-transversality forces the
// tangential directions of F₁ and F₂ to cover what the b-normal part misses.
TransversalityVerdict b_normal_transversality(const FiberProblem& P);

// P_X₁ ×_P_Y P_X₂ with its projections, element ids "(F₁,F₂)".
FiberProductComplex fiber_complex(const FiberProblem& P);

struct SmoothFiberProduct {
    bool smooth = false;
    std::vector<std::string> offenders;
    FiberProductComplex complex;
    // when smooth: the fiber product as a manifold with corners and hᵢ : X → Xᵢ
    std::optional<CornerComplex> space;
    std::optional<BMap> h1, h2;
};
SmoothFiberProduct theorem_b_check(const FiberProblem& P);

struct FiberResolution {
    FiberProductComplex complex;
    ComplexRefinement R;        // smooth refinement of complex.complex
    CornerComplex space;        // corner_complex(R.source)
    ComplexMorphism k1, k2;     // R.source → P_Xᵢ
    BMap h1, h2;                // space → Xᵢ with f₁∘h₁ = f₂∘h₂
    std::vector<FacePair> pairs;  // relevant pairs with their local models
    Report verification;
};
// R defaults to ns of the fiber complex. Throws TransversalityFailed,
// TargetMismatch, NotSmoothRefinement.
FiberResolution resolve_fiber_product(const FiberProblem& P, const std::optional<ComplexRefinement>& R = {});

struct Factorization {
    std::string component;        // "(F₁,F₂)" receiving the interior of Z
    bool blown_up = false;
    std::optional<ComplexRefinement> S;  // refinement of P_Z when Z had to be blown up
    std::optional<Blowup> domain;
    BMap g;                       // Z (or [Z; S]) → space
    Report verification;          // hᵢ∘g = gᵢ (∘β)
};
// Throws NotCommuting, TargetMismatch.
Factorization factor_through(const FiberProblem& P, const FiberResolution& FR, const BMap& g1, const BMap& g2);

bool same_bmap(const BMap& a, const BMap& b);

}  // namespace bk
