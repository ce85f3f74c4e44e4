#pragma once
// Monoidal complexes over finite posets, their morphisms and refinements.
#include "blowkit/refinement.hpp"

#include <functional>
#include <map>
#include <string>

namespace bk {

class MonoidalComplex {
public:
    struct Element {
        std::string id;
        ToricMonoid monoid;
    };
    struct Relation {
        std::string lower, upper;
        IntMat map;  // lower ambient × upper ambient
    };

    MonoidalComplex() = default;
    // Elements are sorted by id. Relations are closed under composition;
    // inconsistent compositions and cycles are kept as conflicts for validate.
    // With check = false the relations must already be closed and consistent.
    MonoidalComplex(std::vector<Element> elements, const std::vector<Relation>& relations, bool check = true);

    // Faces of one monoid, ids "{i,j,..}" from extremal indices, maps identity.
    static MonoidalComplex faces_of(const ToricMonoid& sigma);
    static MonoidalComplex point();

    std::size_t size() const { return el_.size(); }
    bool empty() const { return el_.empty(); }
    const std::string& id(std::size_t i) const { return el_[i].id; }
    const ToricMonoid& monoid(std::size_t i) const { return el_[i].monoid; }
    const std::vector<Element>& elements() const { return el_; }
    std::optional<std::size_t> find(const std::string& id) const;
    std::size_t at(const std::string& id) const;  // throws UnknownElement

    bool le(std::size_t a, std::size_t b) const { return le_[a][b]; }
    const IntMat& face_map(std::size_t a, std::size_t b) const;
    std::vector<std::size_t> below(std::size_t b) const;  // all a ≤ b
    std::vector<std::size_t> above(std::size_t a) const;  // all b ≥ a
    std::vector<std::size_t> maximal() const;
    std::vector<Relation> relations() const;  // every a < b
    const std::vector<std::string>& conflicts() const { return conflicts_; }

    bool is_smooth() const;
    bool is_simplicial() const;
    std::size_t dim() const;

    bool operator==(const MonoidalComplex& o) const;
    std::string describe() const;

private:
    std::vector<Element> el_;
    std::vector<std::vector<char>> le_;
    std::map<std::pair<std::size_t, std::size_t>, IntMat> maps_;
    std::vector<std::string> conflicts_;
};

struct ComplexMorphism {
    MonoidalComplex source, target;
    std::vector<std::size_t> map;  // poset map, source index → target index
    std::vector<IntMat> hom;       // per source element, source ambient × target ambient
};
// A refinement is a morphism with injective monoid maps whose images tile each target monoid.
using ComplexRefinement = ComplexMorphism;

Report validate_complex(const MonoidalComplex& Q);
Report validate_morphism(const ComplexMorphism& f);
Report validate_refinement(const ComplexRefinement& f);

ComplexMorphism identity_morphism(const MonoidalComplex& Q);
ComplexMorphism compose(const ComplexMorphism& g, const ComplexMorphism& f);  // g ∘ f

// Downward closure of a set of ids.
std::vector<std::string> closure(const MonoidalComplex& Q, const std::vector<std::string>& ids);
struct Subcomplex {
    MonoidalComplex complex;
    ComplexMorphism inclusion;
};
Subcomplex subcomplex(const MonoidalComplex& Q, const std::vector<std::string>& ids);
// The part of a refinement lying over a subcomplex of its target.
ComplexRefinement restrict_refinement(const ComplexRefinement& f, const std::vector<std::string>& target_ids);

MonoidRefinement localize_refinement(const ComplexRefinement& f, std::size_t target_index);
// Glue compatible per-element refinements. Members meeting relint σ_b become
// elements "b/k" (k in canonical order), or keep the id b when equal to σ_b.
ComplexRefinement assemble_from_local(const MonoidalComplex& Q, const std::vector<MonoidRefinement>& local);
// The same refinement in the form assemble_from_local produces.
ComplexRefinement canonicalize(const ComplexRefinement& f);
// Morphism R → S between canonical refinements of one complex, when R refines S.
ComplexMorphism factor_through(const ComplexRefinement& r, const ComplexRefinement& s);

ComplexRefinement trivial_refinement(const MonoidalComplex& Q);
ComplexRefinement star_subdivide_complex(const MonoidalComplex& Q, const std::string& a, const IntVec& v);
ComplexRefinement smooth_complex(const MonoidalComplex& Q);
// S(P, Q) for an injective i : Q → P with at most one preimage per element.
ComplexRefinement planar_refine_complex(const ComplexMorphism& i);

struct FiberProductComplex {
    MonoidalComplex complex;
    ComplexMorphism proj1, proj2;
};
FiberProductComplex product(const MonoidalComplex& Q1, const MonoidalComplex& Q2);
FiberProductComplex fiber_product_complex(const ComplexMorphism& f1, const ComplexMorphism& f2);
// Q1 ×_Q R → Q1, canonical.
ComplexRefinement pullback_refinement(const ComplexRefinement& f, const ComplexMorphism& psi);

std::size_t nsdim(const ToricMonoid& sigma);
bool is_fully_nonsimplicial(const ToricMonoid& sigma);

struct NsStep {
    std::string element;  // id of the subdivided monoid in the complex at that step
    std::size_t k = 0;
    std::size_t mk_before = 0, mk_after = 0;
};
using NsProgress = std::function<void(const NsStep&)>;
// ns(Q) → Q, canonical. Throws std::logic_error if M_k fails to drop.
ComplexRefinement natural_smooth_refinement(const MonoidalComplex& Q, std::vector<NsStep>* trace = nullptr,
                                            const NsProgress& progress = {});

struct ExtendRound {
    std::size_t d = 0;        // dimension of the damaged monoids handled
    std::size_t damaged = 0;  // damaged monoids before the round
};
// R → Q extending R0 → Q0 (Q0 given by the target of r0, a subcomplex of Q).
// With smooth = true the result is ns of the extension.
ComplexRefinement extend_refinement(const MonoidalComplex& Q, const ComplexRefinement& r0, bool smooth,
                                    std::vector<ExtendRound>* trace = nullptr);

struct MutualRefinement {
    ComplexRefinement to_base;
    ComplexMorphism to_r1, to_r2;
};
MutualRefinement mutual_smooth_refinement(const ComplexRefinement& r1, const ComplexRefinement& r2);

}  // namespace bk
