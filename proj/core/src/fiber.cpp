#include "blowkit/fiber.hpp"

#include <algorithm>

namespace bk {

namespace {

std::string pair_id(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

IntMat hconcat(const IntMat& a, const IntMat& b) {
    IntMat out(a.r, a.c + b.c);
    for (std::size_t i = 0; i < a.r; ++i) {
        for (std::size_t j = 0; j < a.c; ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.c; ++j) out(i, a.c + j) = b(i, j);
    }
    return out;
}

void require_valid(const FiberProblem& P) {
    auto rep = validate_problem(P);
    if (!rep.ok) throw Error("InvalidProblem", rep.violated + ": " + rep.detail);
}

std::size_t dim_of(const CornerComplex& X, const std::optional<std::size_t>& d) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < X.size(); ++i) k = std::max(k, X.codim(i));
    return d ? *d : k;
}

// Dependent γⱼ are dropped; their equations are smooth ones through the
// tangential parts of the coefficients.
std::optional<BinomialSystem> local_model(const IntMat& nu1, const IntMat& nu2, std::size_t m, std::size_t dimY) {
    BinomialSystem B{nu1.r + nu2.r, m, {}, 0};
    for (std::size_t j = 0; j < nu1.c; ++j) {
        IntVec g(B.n);
        for (std::size_t i = 0; i < nu1.r; ++i) g[i] = nu1(i, j);
        for (std::size_t i = 0; i < nu2.r; ++i) g[nu1.r + i] = -nu2(i, j);
        auto next = B.gamma;
        next.push_back(g);
        if (rank(next, B.n) == next.size()) B.gamma = next;
    }
    B.smooth = dimY - B.gamma.size();
    if (!validate_system(B).ok) return std::nullopt;
    return B;
}

// φ : P_Z → fiber complex from the two induced morphisms.
ComplexMorphism into_fiber(const BMap& g1, const BMap& g2, const FiberProductComplex& FC) {
    auto u1 = induced_morphism(g1), u2 = induced_morphism(g2);
    ComplexMorphism phi{u1.source, FC.complex, {}, {}};
    for (std::size_t e = 0; e < u1.source.size(); ++e) {
        auto id = pair_id(u1.target.id(u1.map[e]), u2.target.id(u2.map[e]));
        auto q = FC.complex.find(id);
        if (!q) throw std::logic_error("fiber product has no element " + id);
        phi.map.push_back(*q);
        phi.hom.push_back(hconcat(u1.hom[e], u2.hom[e]));
    }
    return phi;
}

std::size_t interior_face(const CornerComplex& Z) {
    for (std::size_t i = 0; i < Z.size(); ++i)
        if (Z.face(i).hyps.empty()) return i;
    return 0;
}

}  // namespace

bool same_bmap(const BMap& a, const BMap& b) {
    return a.source == b.source && a.target == b.target && a.face_map == b.face_map && a.alpha == b.alpha;
}

Report validate_problem(const FiberProblem& P) {
    if (!(P.f1.target == P.f2.target)) return Report::fail("target", "maps have different targets");
    auto r1 = validate_bmap(P.f1);
    if (!r1.ok) return Report::fail("f1", r1.violated + ": " + r1.detail);
    auto r2 = validate_bmap(P.f2);
    if (!r2.ok) return Report::fail("f2", r2.violated + ": " + r2.detail);
    const std::pair<const CornerComplex*, std::optional<std::size_t>> spaces[] = {
        {&P.f1.source, P.dim1}, {&P.f2.source, P.dim2}, {&P.f1.target, P.dimY}};
    for (auto& [X, d] : spaces)
        if (d && *d < dim_of(*X, {})) return Report::fail("dimension", "dimension below the codimension of a face");
    return Report::pass();
}

FiberProductComplex fiber_complex(const FiberProblem& P) {
    require_valid(P);
    return fiber_product_complex(induced_morphism(P.f1), induced_morphism(P.f2));
}

FiberReport analyze(const FiberProblem& P) {
    auto FC = fiber_complex(P);
    auto u1 = induced_morphism(P.f1), u2 = induced_morphism(P.f2);
    const auto& PY = u1.target;
    const std::size_t d1 = dim_of(P.f1.source, P.dim1), d2 = dim_of(P.f2.source, P.dim2), dY = dim_of(P.f1.target, P.dimY);
    FiberReport out;
    out.transversal = true;
    out.smooth = true;
    for (std::size_t a = 0; a < u1.source.size(); ++a)
        for (std::size_t b = 0; b < u2.source.size(); ++b) {
            if (u1.map[a] != u2.map[b]) continue;
            std::size_t g = u1.map[a];
            FacePair fp;
            fp.F1 = u1.source.id(a);
            fp.F2 = u2.source.id(b);
            fp.G = PY.id(g);
            const auto& sg = PY.monoid(g);
            auto prod = fiber_product({u1.source.monoid(a), sg, u1.hom[a]}, {u2.source.monoid(b), sg, u2.hom[b]});
            fp.monoid = prod.monoid;
            fp.smooth = fp.monoid.is_smooth();
            fp.relevant = FC.complex.find(pair_id(fp.F1, fp.F2)).has_value();
            auto rows = u1.hom[a].rows();
            for (auto& r : u2.hom[b].rows()) rows.push_back(r);
            fp.normal_rank = rank(rows, sg.ambient_dim());
            fp.normal_surjective = fp.normal_rank == sg.dim();
            std::size_t k1 = u1.source.monoid(a).dim(), k2 = u2.source.monoid(b).dim();
            std::size_t tangential = (d1 - k1) + (d2 - k2);
            fp.transversal = dY <= fp.normal_rank + tangential;
            if (fp.transversal) fp.model = local_model(u1.hom[a], u2.hom[b], tangential, dY);
            if (fp.relevant) {
                out.transversal = out.transversal && fp.transversal;
                if (!fp.smooth) {
                    out.smooth = false;
                    out.offenders.push_back(pair_id(fp.F1, fp.F2));
                }
            }
            out.pairs.push_back(std::move(fp));
        }
    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const FacePair& x, const FacePair& y) { return std::tie(x.F1, x.F2) < std::tie(y.F1, y.F2); });
    out.note =
        "transversality is a dimension count on the b-normal exponents; whether the tangential directions "
        "really cover the rest, and the number of components over each pair, need geometric input, so the "
        "fiber complex is an upper model";
    return out;
}

TransversalityVerdict b_normal_transversality(const FiberProblem& P) {
    auto rep = analyze(P);
    TransversalityVerdict v;
    v.ok = rep.transversal;
    for (auto& fp : rep.pairs)
        if (fp.relevant && !fp.transversal) v.failures.push_back(pair_id(fp.F1, fp.F2));
    v.note = "necessary condition only: " + rep.note;
    return v;
}

SmoothFiberProduct theorem_b_check(const FiberProblem& P) {
    SmoothFiberProduct out;
    out.complex = fiber_complex(P);
    for (std::size_t e = 0; e < out.complex.complex.size(); ++e)
        if (!out.complex.complex.monoid(e).is_smooth()) out.offenders.push_back(out.complex.complex.id(e));
    out.smooth = out.offenders.empty();
    if (out.smooth) {
        out.h1 = realize_morphism(out.complex.proj1, P.f1.source);
        out.h2 = realize_morphism(out.complex.proj2, P.f2.source);
        out.space = out.h1->source;
    }
    return out;
}

FiberResolution resolve_fiber_product(const FiberProblem& P, const std::optional<ComplexRefinement>& R) {
    auto rep = analyze(P);
    if (!rep.transversal) {
        std::string bad;
        for (auto& fp : rep.pairs)
            if (fp.relevant && !fp.transversal) bad += (bad.empty() ? "" : " ") + pair_id(fp.F1, fp.F2);
        throw Error("TransversalityFailed", "dimension count fails at " + bad);
    }
    FiberResolution out;
    out.complex = fiber_complex(P);
    if (R) {
        if (!(R->target == out.complex.complex)) throw Error("TargetMismatch", "refinement is not of the fiber complex");
        if (!R->source.is_smooth()) throw Error("NotSmoothRefinement", "refinement has a non-smooth monoid");
        auto v = validate_refinement(*R);
        if (!v.ok) throw Error("NotSmoothRefinement", v.violated + ": " + v.detail);
        out.R = *R;
    } else {
        out.R = natural_smooth_refinement(out.complex.complex);
    }
    out.k1 = compose(out.complex.proj1, out.R);
    out.k2 = compose(out.complex.proj2, out.R);
    out.h1 = realize_morphism(out.k1, P.f1.source);
    out.h2 = realize_morphism(out.k2, P.f2.source);
    out.space = out.h1.source;
    for (auto& fp : rep.pairs)
        if (fp.relevant) out.pairs.push_back(fp);

    out.verification = Report::pass();
    for (auto* k : {&out.k1, &out.k2}) {
        auto v = validate_morphism(*k);
        if (!v.ok) out.verification = Report::fail("projection", v.violated + ": " + v.detail);
    }
    for (auto* h : {&out.h1, &out.h2}) {
        auto v = validate_bmap(*h);
        if (!v.ok) out.verification = Report::fail("b-map", v.violated + ": " + v.detail);
    }
    if (out.verification.ok && !same_bmap(compose(P.f1, out.h1), compose(P.f2, out.h2)))
        out.verification = Report::fail("commutation", "f1∘h1 differs from f2∘h2");
    return out;
}

Factorization factor_through(const FiberProblem& P, const FiberResolution& FR, const BMap& g1, const BMap& g2) {
    if (!(g1.source == g2.source)) throw Error("TargetMismatch", "the two maps have different sources");
    if (!(g1.target == P.f1.source) || !(g2.target == P.f2.source))
        throw Error("TargetMismatch", "maps do not land in the sources of the problem");
    if (!same_bmap(compose(P.f1, g1), compose(P.f2, g2))) throw Error("NotCommuting", "f1∘g1 differs from f2∘g2");

    Factorization out;
    const auto& Z = g1.source;
    auto phi = into_fiber(g1, g2, FR.complex);
    out.component = FR.complex.complex.id(phi.map[interior_face(Z)]);
    auto c = is_compatible(phi, FR.R);
    BMap e1 = g1, e2 = g2;
    if (c.ok) {
        out.g = lift_morphism(Z, c, FR.space);
    } else {
        auto S = pullback_refinement(FR.R, phi);
        if (!S.source.is_smooth()) S = canonicalize(compose(S, natural_smooth_refinement(S.source)));
        out.blown_up = true;
        out.S = S;
        out.domain = generalized_blowup(Z, S);
        e1 = compose(g1, out.domain->blowdown);
        e2 = compose(g2, out.domain->blowdown);
        auto c2 = is_compatible(into_fiber(e1, e2, FR.complex), FR.R);
        if (!c2.ok) throw std::logic_error("blown-up domain is still not compatible: " + c2.detail);
        out.g = lift_morphism(out.domain->space, c2, FR.space);
    }
    out.verification = validate_bmap(out.g);
    if (out.verification.ok && !same_bmap(compose(FR.h1, out.g), e1))
        out.verification = Report::fail("factor", "h1∘g differs from g1");
    if (out.verification.ok && !same_bmap(compose(FR.h2, out.g), e2))
        out.verification = Report::fail("factor", "h2∘g differs from g2");
    return out;
}

}  // namespace bk
