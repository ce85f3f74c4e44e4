#pragma once
// Combinatorial manifolds with corners, b-maps, generalized blow-up and lifting.
#include "blowkit/complex.hpp"

#include <map>
#include <set>

namespace bk {

// Boundary faces with their hypersurface incidence. The order is reverse
// inclusion: G ≤ F iff G ⊇ F, so the interior is minimal.
class CornerComplex {
public:
    struct FaceData {
        std::string id;
        std::vector<std::string> hyps;  // hypersurfaces containing the face, sorted
    };

    CornerComplex() = default;
    // `order` lists pairs (G, F) with G ≤ F; the transitive closure is taken.
    CornerComplex(std::vector<FaceData> faces, const std::vector<std::pair<std::string, std::string>>& order);
    // Order derived from incidence: G ≤ F iff hyps(G) ⊆ hyps(F). Only right
    // when no two faces share an incidence set.
    static CornerComplex from_incidence(std::vector<FaceData> faces);
    // ℝᵏ₊: hypersurfaces H1..Hk, face ids "o" (interior) and "H1.H3" etc.
    static CornerComplex model(std::size_t k);
    static std::string model_face_id(const std::vector<std::size_t>& hyps);  // 0-based

    std::size_t size() const { return faces_.size(); }
    const std::vector<FaceData>& faces() const { return faces_; }
    const FaceData& face(std::size_t i) const { return faces_[i]; }
    std::size_t codim(std::size_t i) const { return faces_[i].hyps.size(); }
    const std::vector<std::string>& hypersurfaces() const { return hyps_; }
    std::size_t hyp_index(const std::string& h) const;  // throws UnknownHypersurface
    std::optional<std::size_t> find(const std::string& id) const;
    std::size_t at(const std::string& id) const;  // throws UnknownFace
    bool le(std::size_t g, std::size_t f) const { return le_[g][f]; }
    std::vector<std::pair<std::string, std::string>> order() const;  // covering pairs

    bool operator==(const CornerComplex& o) const;

private:
    std::vector<FaceData> faces_;  // sorted by id
    std::vector<std::string> hyps_;
    std::vector<std::vector<char>> le_;
};

Report validate_corners(const CornerComplex& X);

struct BMap {
    CornerComplex source, target;
    std::map<std::string, std::string> face_map;  // f_#
    IntMat alpha;  // source hypersurfaces × target hypersurfaces, both in sorted order
};

Report validate_bmap(const BMap& f);
BMap identity_bmap(const CornerComplex& X);
// f ∘ g; throws ChainMismatch unless g.target == f.source.
BMap compose(const BMap& f, const BMap& g);
// Interior monomial map between local models ℝᵐ₊ → ℝⁿ₊ with exponents δ (m × n).
BMap monomial_map(const IntMat& delta);

// P_X: σ_F = ℤ₊^{hyps(F)}, coordinates in sorted hypersurface order.
MonoidalComplex basic_complex(const CornerComplex& X);
// f_♮ : P_X → P_Y.
ComplexMorphism induced_morphism(const BMap& f);

struct Blowup {
    CornerComplex space;          // [X; R], faces named by the elements of R
    BMap blowdown;                // β : [X; R] → X
    ComplexMorphism identification;  // P_[X;R] ≅ R, isomorphism onto R.source
};
// Corners of a smooth complex: faces are its elements, hypersurfaces its rays.
// Throws NotSmooth.
CornerComplex corner_complex(const MonoidalComplex& Q);
// The b-map corner_complex(h.source) → Y realizing h : Q → P_Y.
BMap realize_morphism(const ComplexMorphism& h, const CornerComplex& Y);
// Throws NotSmoothRefinement.
Blowup generalized_blowup(const CornerComplex& X, const ComplexRefinement& R);
// Isomorphism of the two spaces commuting with the blow-down maps.
bool isomorphic_over_base(const BMap& b1, const BMap& b2);

struct Compatibility {
    bool ok = false;
    ComplexMorphism phi;  // P_X → R.source when ok
    std::string witness;  // face of X whose image crosses members
    std::string detail;
};
// Sources of fn must be full-dimensional, as in basic complexes.
Compatibility is_compatible(const ComplexMorphism& fn, const ComplexRefinement& R);
Compatibility is_compatible(const BMap& f, const ComplexRefinement& R);
// X → corner_complex(R.source) with induced morphism c.phi; X must carry the
// faces of c.phi.source.
BMap lift_morphism(const CornerComplex& X, const Compatibility& c, const CornerComplex& Yb);
// f' : X → [Y; R] with β ∘ f' = f and f'_♮ = φ. Throws NotCompatible.
BMap lift_bmap(const BMap& f, const Blowup& B, const Compatibility& c);
BMap lift_bmap(const BMap& f, const ComplexRefinement& R);

struct DomainBlowup {
    ComplexRefinement S;  // refinement of P_X
    Blowup domain;        // [X; S]
    BMap lift;            // [X; S] → [Y; R]
    bool minimal = false;  // the pull-back was already smooth
};
DomainBlowup blowup_domain(const BMap& f, const ComplexRefinement& R);

// Charts of [ℝⁿ₊; R] for a smooth refinement R of ℤ₊ⁿ.
struct Chart {
    ToricMonoid sigma;
    IntMat nu;  // rows = generators, x = t^ν
};
struct Transition {
    std::size_t from = 0, to = 0;
    RatMat chi;                       // t' = t^χ, χ = ν_from ν_to⁻¹
    std::vector<std::size_t> common;  // coordinates of `from` allowed to vanish
    IntVec separator;                 // ⟨u,·⟩ = 0 on τ, > 0 on from, < 0 on to
};
struct ChartAtlas {
    std::size_t n = 0, tangential = 0;
    std::vector<Chart> charts;  // sorted by ν
    std::vector<Transition> transitions;  // every ordered pair of distinct charts
};
// Unit generators e_j sit in slot j, the others fill the free slots in
// lexicographic order. Throws NotSmoothRefinement.
ChartAtlas local_atlas(std::size_t n, const MonoidRefinement& R, std::size_t tangential = 0);

struct LocalLift {
    std::size_t chart = 0;
    IntMat mu;  // δ = μν
};
// The first chart whose monoid contains every row of δ. Throws NotCompatible.
LocalLift local_lift(const ChartAtlas& A, const IntMat& delta);

// Ids of the minimal elements of R lying over G.
std::vector<std::string> lift_face(const ComplexRefinement& R, const std::string& G);

struct ClassicalBlowup {
    ComplexRefinement refinement;
    Blowup blowup;
};
ClassicalBlowup ordinary_blowup(const CornerComplex& X, const std::string& F);
// Weights by hypersurface of F; all ≥ 1.
ClassicalBlowup inhomogeneous_blowup(const CornerComplex& X, const std::string& F,
                                     const std::map<std::string, long>& weights);
// Throws LiftNotUnique.
ClassicalBlowup iterated_blowup(const CornerComplex& X, const std::vector<std::string>& Fs);

struct BlowdownVerdict {
    bool injective = false, refinement = false, smooth = false, invertible = false;
    Report report;
    std::string note;
};
BlowdownVerdict check_blowdown_refinement(const BMap& f);

}  // namespace bk
