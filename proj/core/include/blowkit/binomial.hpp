#pragma once
// Interior binomial subvarieties of a local model ℝⁿ₊ × ℝᵐ and their resolution.
#include "blowkit/manifold.hpp"

namespace bk {

// a·x^α = b·x^β at the base point, with d log(a/b) = Σ tangential_j dy_j there.
struct RawBinomial {
    IntVec alpha, beta;
    RatVec tangential;  // empty means zero
};

struct RawSystem {
    std::size_t n = 0, m = 0;
    std::vector<RawBinomial> binomials;
    std::vector<RatVec> smooth;  // differentials of the equations y = 0, each of length m
};

// {x^γᵢ = 1, i ≤ d′} ∪ {d − d′ smooth equations}.
struct BinomialSystem {
    std::size_t n = 0, m = 0;
    std::vector<IntVec> gamma;
    std::size_t smooth = 0;

    std::size_t codim() const { return gamma.size() + smooth; }
    std::size_t dim() const { return n + m - codim(); }
};

Report validate_system(const BinomialSystem& B);
// Throws DependentDifferentials, or DefiniteExponent when D misses the corner.
BinomialSystem normal_form(const RawSystem& raw);

struct VarietyFace {
    std::string id;                  // id of the face G of ℝⁿ₊ in CornerComplex::model(n)
    std::vector<std::size_t> coords;  // S, 0-based, in the coordinate order of σ_G
    IntVec witness;                   // w ∈ W, negative on S and zero off it
    ToricMonoid monoid;               // σ_G ∩ W in the coordinates of σ_G
    std::size_t codim = 0;            // in D
    std::size_t codim_in_face = 0;    // of D_G inside G
    std::size_t tangent_dim = 0;      // dim bT D_G = dim bT D − codim
};

struct VarietyComplex {
    std::size_t n = 0;
    std::vector<IntVec> W;  // saturated lattice basis of ∩ ker γᵢ in ℤⁿ
    std::vector<VarietyFace> faces;  // sorted by id
};

VarietyComplex boundary_faces(const BinomialSystem& B);

struct VarietyMorphism {
    MonoidalComplex complex;  // P_D, element ids shared with P_X
    ComplexMorphism inclusion;  // i_♮ : P_D → P_X = basic_complex(model(n))
};
VarietyMorphism variety_complex(const BinomialSystem& B);
VarietyMorphism variety_complex(const VarietyComplex& V);
bool is_smooth_complex(const MonoidalComplex& PD);

// P_X cut by the hyperplanes γᵢ = 0; contains P_D as a subcomplex.
ComplexRefinement arrangement_refinement(const BinomialSystem& B);

struct Resolution {
    ComplexRefinement RX;               // canonical smooth refinement of P_X
    std::string route;                  // "planar", or "arrangement" when the planar joins overlap
    std::vector<std::string> lifted;    // elements of R_X forming the copy of R_D
    MonoidalComplex lifted_complex;     // that subcomplex, ≅ P of the lift of D
    std::map<std::string, std::string> lifted_from;  // R_X element → R_D element
    Report verification;     // check_lifted_p_submanifold plus the restriction to P_D
    bool sign_uniform = false;  // check_sign_uniformity; always true when d′ = 1
    bool universal = false;
};
// R_D must be a smooth refinement of variety_complex(B).complex.
// Throws NotSmoothRefinement, TargetMismatch, VerificationFailed.
Resolution resolve(const BinomialSystem& B, const ComplexRefinement& RD);
// Throws ComplexNotSmooth.
Resolution universal_resolution(const BinomialSystem& B);

// Each lifted exponent μγᵢ single-signed over every maximal element.
Report check_sign_uniformity(const BinomialSystem& B, const ComplexRefinement& RX);
// Every element either lies in W or has no strictly positive combination of
// its generators in W, so some combination of the μγᵢ is definite there.
Report check_lifted_p_submanifold(const BinomialSystem& B, const ComplexRefinement& RX);

}  // namespace bk
