#include "blowkit/refinement.hpp"

#include <algorithm>
#include <random>

namespace bk {

namespace {

std::vector<ToricMonoid> sorted_unique(std::vector<ToricMonoid> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<RatVec> rats(const std::vector<IntVec>& v) {
    std::vector<RatVec> out;
    for (auto& x : v) out.push_back(to_rat(x));
    return out;
}

bool inside(const ToricMonoid& small, const ToricMonoid& big) {
    for (auto& e : small.extremals())
        if (!big.in_support(to_rat(e))) return false;
    return true;
}

IntVec sample_point(std::mt19937_64& rng, const ToricMonoid& s) {
    std::uniform_int_distribution<long> c(0, 9);
    IntVec p(s.ambient_dim());
    for (auto& e : s.extremals()) p = add(p, scale(e, c(rng)));
    return p;
}

}  // namespace

MonoidRefinement::MonoidRefinement(ToricMonoid b, std::vector<ToricMonoid> m)
    : base(std::move(b)), members(sorted_unique(std::move(m))) {}

std::vector<ToricMonoid> MonoidRefinement::maximal() const {
    std::vector<ToricMonoid> out;
    for (auto& m : members) {
        bool covered = false;
        for (auto& o : members)
            if (o != m && o.dim() > m.dim() && o.is_face(m)) { covered = true; break; }
        if (!covered) out.push_back(m);
    }
    return out;
}

bool MonoidRefinement::contains(const ToricMonoid& m) const {
    return std::binary_search(members.begin(), members.end(), m);
}

bool MonoidRefinement::is_smooth() const {
    return std::all_of(members.begin(), members.end(), [](const ToricMonoid& m) { return m.is_smooth(); });
}

Report validate(const MonoidRefinement& R) {
    const auto& base = R.base;
    const std::size_t d = base.ambient_dim();
    for (auto& m : R.members) {
        if (m.ambient_dim() != d) return Report::fail("member", "ambient dimension mismatch");
        for (auto& h : m.hilbert_basis())
            if (!base.contains(h)) return Report::fail("member", "member not a submonoid of the base", h);
    }
    for (auto& m : R.members)
        for (auto& f : m.faces())
            if (!R.contains(f.monoid))
                return Report::fail("face-closed", "missing face " + f.monoid.describe() + " of " + m.describe(),
                                    f.monoid.is_trivial() ? IntVec{} : f.monoid.extremal_sum());
    auto maxi = R.maximal();
    for (std::size_t i = 0; i < maxi.size(); ++i)
        for (std::size_t j = i + 1; j < maxi.size(); ++j) {
            const auto &A = maxi[i], &B = maxi[j];
            const Face* common = nullptr;
            for (auto& fa : A.faces())
                if (B.is_face(fa.monoid) && (!common || fa.monoid.dim() > common->monoid.dim())) common = &fa;
            std::vector<RatVec> zero = rats(A.span_equations()), nonneg = rats(A.facets());
            for (auto& e : B.span_equations()) zero.push_back(to_rat(e));
            for (auto& f : B.facets()) nonneg.push_back(to_rat(f));
            auto lp = lp_feasible({to_rat(common->functional)}, zero, nonneg, d);
            if (lp.feasible)
                return Report::fail("intersection",
                                    A.describe() + " ∩ " + B.describe() + " is not a common face",
                                    integral_multiple(lp.witness));
        }
    // cover
    auto uncovered_probe = [&]() -> std::optional<IntVec> {
        std::vector<IntVec> probes = base.extremals();
        for (std::size_t i = 0; i < base.extremals().size(); ++i)
            for (std::size_t j = i + 1; j < base.extremals().size(); ++j)
                probes.push_back(add(base.extremals()[i], base.extremals()[j]));
        if (!base.is_trivial()) probes.push_back(base.extremal_sum());
        std::mt19937_64 rng(0x5eed);
        for (int s = 0; s < 64 && !base.is_trivial(); ++s) probes.push_back(sample_point(rng, base));
        for (auto& p : probes) {
            bool hit = false;
            for (auto& m : maxi)
                if (m.in_support(to_rat(p))) { hit = true; break; }
            if (!hit) return p;
        }
        return std::nullopt;
    };
    if (R.members.empty()) return Report::fail("cover", "no members", IntVec(d));
    for (auto& m : maxi)
        if (m.dim() != base.dim()) {
            auto w = uncovered_probe();
            return Report::fail("cover", "maximal member " + m.describe() + " is not full dimensional",
                                w ? *w : IntVec{});
        }
    for (std::size_t i = 0; i < maxi.size(); ++i)
        for (auto& f : maxi[i].faces()) {
            if (f.monoid.dim() + 1 != base.dim()) continue;
            bool boundary = false;
            for (auto& u : base.facets()) {
                bool zero_on = true;
                for (auto& e : f.monoid.extremals()) zero_on = zero_on && dot(u, e) == 0;
                if (zero_on) { boundary = true; break; }
            }
            if (boundary) continue;
            int partners = 0;
            for (std::size_t j = 0; j < maxi.size(); ++j) {
                if (j == i) continue;
                for (auto& g : maxi[j].faces())
                    if (g.monoid.dim() == f.monoid.dim() && g.monoid.same_support(f.monoid)) ++partners;
            }
            if (partners != 1) {
                auto w = uncovered_probe();
                return Report::fail("cover",
                                    "interior facet " + f.monoid.describe() + " shared by " +
                                        std::to_string(partners + 1) + " maximal members",
                                    w ? *w : f.monoid.extremal_sum());
            }
        }
    if (auto w = uncovered_probe()) return Report::fail("cover", "probe point not covered", *w);
    return Report::pass();
}

MonoidRefinement trivial_refinement(const ToricMonoid& sigma) {
    std::vector<ToricMonoid> m;
    for (auto& f : sigma.faces()) m.push_back(f.monoid);
    return {sigma, m};
}

MonoidRefinement star_subdivide(const ToricMonoid& sigma, const IntVec& v) {
    if (v.size() != sigma.ambient_dim() || is_zero(v) || !sigma.contains(v))
        throw Error("VNotInMonoid", to_string(v) + " is not a nonzero element of the monoid");
    std::vector<ToricMonoid> m;
    for (auto& f : sigma.faces()) {
        const auto& t = f.monoid;
        if (t.in_support(to_rat(v))) continue;
        m.push_back(t);
        auto lat = t.lattice().rows();
        lat.push_back(v);
        auto gens = t.extremals();
        gens.push_back(v);
        m.push_back(ToricMonoid::from_lattice_cone(sigma.ambient_dim(), lat, gens));
    }
    return {sigma, m};
}

MonoidRefinement weighted_star_subdivide(const ToricMonoid& sigma, const std::vector<std::size_t>& idx,
                                         const std::vector<Int>& weights) {
    if (idx.size() != weights.size() || idx.empty()) throw Error("BadWeights", "one weight per extremal");
    IntVec v(sigma.ambient_dim());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (weights[i] < 1) throw Error("BadWeights", "weights must be at least 1");
        if (idx[i] >= sigma.extremals().size()) throw Error("BadWeights", "extremal index out of range");
        v = add(v, scale(sigma.extremals()[idx[i]], weights[i]));
    }
    return star_subdivide(sigma, v);
}

MonoidRefinement smoothing(const ToricMonoid& sigma) {
    auto smooth = sigma.smoothing();
    return {sigma, trivial_refinement(smooth).members};
}

MonoidRefinement localize(const MonoidRefinement& R, const ToricMonoid& tau) {
    if (!R.base.is_face(tau)) throw Error("NotAFace", tau.describe() + " is not a face of the base");
    std::vector<ToricMonoid> m;
    for (auto& x : R.members)
        if (inside(x, tau)) m.push_back(x);
    return {tau, m};
}

bool meets_subspace(const ToricMonoid& tau, const std::vector<IntVec>& M) {
    if (tau.is_trivial()) return false;
    const std::size_t d = tau.ambient_dim();
    std::vector<IntVec> nz;
    for (auto& m : M)
        if (!is_zero(m)) nz.push_back(m);
    std::vector<RatVec> zero = rats(tau.span_equations());
    if (nz.empty()) return false;
    for (auto& a : saturated_kernel(stack(nz, d).transpose())) zero.push_back(to_rat(a));
    IntVec deg(d);
    for (auto& f : tau.facets()) deg = add(deg, f);
    if (tau.facets().empty()) return false;
    return lp_feasible({to_rat(deg)}, zero, rats(tau.facets()), d).feasible;
}

std::vector<Face> maximal_faces_avoiding(const ToricMonoid& sigma, const std::vector<IntVec>& M) {
    std::vector<Face> avoid;
    for (auto& f : sigma.faces())
        if (!meets_subspace(f.monoid, M)) avoid.push_back(f);
    std::vector<Face> out;
    for (auto& f : avoid) {
        bool maximal = true;
        for (auto& g : avoid)
            if (g.monoid.dim() > f.monoid.dim() && g.monoid.is_face(f.monoid)) { maximal = false; break; }
        if (maximal) out.push_back(f);
    }
    return out;
}

MonoidRefinement planar_joins(const ToricMonoid& sigma, const std::vector<IntVec>& M) {
    auto mu = intersect_with_subspace(sigma, M);
    std::vector<ToricMonoid> m;
    for (auto& t : maximal_faces_avoiding(sigma, M)) {
        auto j = join(sigma, mu, t.monoid);
        for (auto& f : j.faces()) m.push_back(f.monoid);
    }
    return {sigma, m};
}

MonoidRefinement planar_refine(const ToricMonoid& sigma, const std::vector<IntVec>& M) {
    if (!sigma.is_smooth()) throw Error("NotSmooth", "planar refinement needs a smooth monoid");
    auto R = planar_joins(sigma, M);
    // The joins can overlap when M has codimension ≥ 2 and meets σ in a cone
    // of dimension ≥ 2; see the regression test for a four dimensional case.
    auto rep = validate(R);
    if (!rep.ok) throw Error("PlanarOverlap", rep.detail + " at " + to_string(rep.witness));
    return R;
}

MonoidRefinement hyperplane_refine(const ToricMonoid& sigma, const std::vector<IntVec>& H) {
    if (sigma.is_trivial()) return trivial_refinement(sigma);
    const IntMat& L = sigma.lattice();
    std::vector<IntVec> cuts;  // hyperplanes in lattice coordinates
    for (auto& h : H) {
        if (h.size() != sigma.ambient_dim()) throw Error("DimensionMismatch", "hyperplane " + to_string(h));
        IntVec c(L.r);
        for (std::size_t i = 0; i < L.r; ++i) c[i] = dot(L.row(i), h);
        if (!is_zero(c)) cuts.push_back(c);
    }
    if (cuts.size() > 16) throw Error("TooManyHyperplanes", "at most 16 hyperplanes");
    std::vector<IntVec> basis = L.rows();
    std::vector<ToricMonoid> members;
    for (std::size_t signs = 0; signs < (std::size_t{1} << cuts.size()); ++signs) {
        auto ineqs = sigma.lattice_facets();
        for (std::size_t i = 0; i < cuts.size(); ++i) ineqs.push_back(signs >> i & 1 ? scale(cuts[i], -1) : cuts[i]);
        auto cell = ToricMonoid::from_hrep(sigma.ambient_dim(), basis, ineqs);
        if (cell.dim() != sigma.dim()) continue;
        for (auto& f : cell.faces()) members.push_back(f.monoid);
    }
    return {sigma, members};
}

}  // namespace bk
