#pragma once
// Toric monoids σ = N_σ ∩ supp(σ), stored canonically as (lattice, cone).
#include "blowkit/exact.hpp"

#include <memory>
#include <vector>

namespace bk {

struct Face;

class ToricMonoid {
public:
    struct Impl;

    // The trivial monoid {0} in ambient dimension 0.
    ToricMonoid();
    static ToricMonoid trivial(std::size_t ambient_dim);
    // (group generated by gens) ∩ cone(gens); throws NotSaturated when that is
    // larger than the monoid the generators span, NotSharp if the cone has a line.
    static ToricMonoid from_generators(std::size_t ambient_dim, const std::vector<IntVec>& gens);
    // lattice ∩ cone(gens); span(gens) must equal span(lattice).
    static ToricMonoid from_lattice_cone(std::size_t ambient_dim, const std::vector<IntVec>& lattice,
                                         const std::vector<IntVec>& cone_gens);
    // Monoid freely generated by independent vectors.
    static ToricMonoid free(std::size_t ambient_dim, const std::vector<IntVec>& gens);
    // Points y·B (y ∈ ℤᵐ) with a·y ≥ 0 for each a in ineqs, saturated in span.
    static ToricMonoid from_hrep(std::size_t ambient_dim, const std::vector<IntVec>& basis,
                                 const std::vector<IntVec>& ineqs);

    std::size_t ambient_dim() const;
    std::size_t dim() const;
    bool is_trivial() const { return dim() == 0; }
    const IntMat& lattice() const;                       // dim × ambient, Hermite form
    const std::vector<IntVec>& extremals() const;        // lexicographic
    const std::vector<IntVec>& facets() const;           // inward ambient functionals
    const std::vector<IntVec>& span_equations() const;   // ambient annihilators of span
    const std::vector<IntVec>& lattice_extremals() const;  // extremals in lattice coordinates
    const std::vector<IntVec>& lattice_facets() const;

    std::vector<IntVec> hilbert_basis() const;
    bool is_simplicial() const;
    bool is_smooth() const;
    IntVec extremal_sum() const;

    std::optional<RatVec> coords(const RatVec& v) const;
    bool in_span(const RatVec& v) const;
    bool in_support(const RatVec& v) const;
    bool in_relint(const RatVec& v) const;
    bool contains(const IntVec& v) const;

    // Faces, {0} first, sorted by dimension then canonically.
    const std::vector<Face>& faces() const;
    std::size_t smallest_face_containing(const RatVec& v) const;  // index into faces()
    // Index of the face equal to tau, if tau is a face.
    std::optional<std::size_t> face_index(const ToricMonoid& tau) const;
    bool is_face(const ToricMonoid& tau) const { return face_index(tau).has_value(); }

    // σ ∩ cone(gens) with lattice N_σ ∩ span(gens); gens must lie in supp σ.
    ToricMonoid full_submonoid(const std::vector<IntVec>& cone_gens) const;
    // Image under v ↦ v·A; A must be injective on N_σ.
    ToricMonoid image(const IntMat& A) const;
    // Free monoid on the extremals (simplicial σ only).
    ToricMonoid smoothing() const;
    // Same cone as a set of rays (ignores lattices).
    bool same_support(const ToricMonoid& o) const;
    // Ambient-primitive ray directions of the cone, sorted.
    std::vector<IntVec> ray_directions() const;

    bool operator==(const ToricMonoid& o) const;
    bool operator!=(const ToricMonoid& o) const { return !(*this == o); }
    bool operator<(const ToricMonoid& o) const;
    std::string describe() const;

private:
    explicit ToricMonoid(std::shared_ptr<const Impl> p) : p_(std::move(p)) {}
    static ToricMonoid build(std::size_t d, std::vector<IntVec> lattice, std::vector<IntVec> cone);
    std::shared_ptr<const Impl> p_;
};

struct Face {
    ToricMonoid monoid;
    IntVec functional;                        // zero on the face, positive off it
    std::vector<std::size_t> extremal_index;  // into parent extremals()
};

struct MonoidHom {
    ToricMonoid source, target;
    IntMat matrix;  // source ambient × target ambient
    bool valid() const;
    IntVec apply(const IntVec& v) const { return v * matrix; }
};

inline std::vector<IntVec> extremals(const ToricMonoid& s) { return s.extremals(); }
inline std::vector<IntVec> hilbert_basis(const ToricMonoid& s) { return s.hilbert_basis(); }
inline std::size_t dimension(const ToricMonoid& s) { return s.dim(); }
inline bool is_simplicial(const ToricMonoid& s) { return s.is_simplicial(); }
inline bool is_smooth(const ToricMonoid& s) { return s.is_smooth(); }
inline bool is_face_of(const ToricMonoid& tau, const ToricMonoid& sigma) { return sigma.is_face(tau); }
Face smallest_face_containing(const ToricMonoid& s, const IntVec& v);

struct FiberProduct {
    ToricMonoid monoid;
    IntMat proj1, proj2;  // (d1+d2)×d1 and (d1+d2)×d2
};
FiberProduct fiber_product(const MonoidHom& f1, const MonoidHom& f2);
// σ ∩ span(M), with lattice N_σ ∩ span(M).
ToricMonoid intersect_with_subspace(const ToricMonoid& sigma, const std::vector<IntVec>& M);
// σ ∩ (supp τ1 + supp τ2) for full submonoids τi.
ToricMonoid join(const ToricMonoid& sigma, const ToricMonoid& t1, const ToricMonoid& t2);
bool is_full_submonoid(const ToricMonoid& sigma, const ToricMonoid& tau);

}  // namespace bk
