#include "blowkit/binomial.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bk {

namespace {

// Row scaled to integers; rank is unchanged.
IntVec clear_denominators(const RatVec& v) {
    Int l = 1;
    for (auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i] * l).get_num();
    return out;
}

bool indefinite(const IntVec& g) {
    bool pos = false, neg = false;
    for (auto& x : g) {
        pos = pos || x > 0;
        neg = neg || x < 0;
    }
    return pos && neg;
}

std::string hyp_name(std::size_t i) { return CornerComplex::model_face_id({i}); }

// S in the coordinate order of σ_G in basic_complex(model(n)): sorted by hypersurface name.
std::vector<std::size_t> face_coords(std::vector<std::size_t> S) {
    std::sort(S.begin(), S.end(), [](std::size_t a, std::size_t b) { return hyp_name(a) < hyp_name(b); });
    return S;
}

std::vector<std::size_t> coords_of(const CornerComplex& X, std::size_t f) {
    std::vector<std::size_t> S;
    for (auto& h : X.face(f).hyps) S.push_back(std::stoul(h.substr(1)) - 1);
    return S;
}

IntVec restrict_to(const IntVec& g, const std::vector<std::size_t>& S) {
    IntVec out;
    for (auto i : S) out.push_back(g[i]);
    return out;
}

std::vector<IntVec> kernel_of(const std::vector<IntVec>& gamma, std::size_t k) {
    std::vector<IntVec> e;
    for (std::size_t i = 0; i < k; ++i) {
        IntVec v(k);
        v[i] = 1;
        e.push_back(v);
    }
    if (gamma.empty() || k == 0) return e;
    return saturated_kernel(stack(gamma, k).transpose());
}

ToricMonoid orthant(std::size_t k) {
    if (k == 0) return ToricMonoid::trivial(0);
    return ToricMonoid::free(k, kernel_of({}, k));
}

std::size_t posn(const std::vector<std::size_t>& xs, std::size_t x) {
    return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
}

}  // namespace

// ---------------------------------------------------------------- systems

Report validate_system(const BinomialSystem& B) {
    for (auto& g : B.gamma)
        if (g.size() != B.n) return Report::fail("shape", "exponent vector of length " + std::to_string(g.size()));
    if (B.codim() > B.n + B.m) return Report::fail("shape", "more equations than coordinates");
    if (rank(B.gamma, B.n) != B.gamma.size()) return Report::fail("independent", "exponent vectors are dependent");
    if (B.smooth > B.m) return Report::fail("independent", "more smooth equations than tangential coordinates");
    for (auto& g : B.gamma)
        if (!indefinite(g)) return Report::fail("indefinite", to_string(g) + " is definite", g);
    return Report::pass();
}

BinomialSystem normal_form(const RawSystem& raw) {
    const std::size_t n = raw.n, m = raw.m;
    std::vector<IntVec> rows, gammas;
    for (auto& b : raw.binomials) {
        if (b.alpha.size() != n || b.beta.size() != n || (!b.tangential.empty() && b.tangential.size() != m))
            throw Error("DimensionMismatch", "binomial of the wrong length");
        for (std::size_t i = 0; i < n; ++i)
            if (b.alpha[i] < 0 || b.beta[i] < 0) throw Error("NegativeExponent", to_string(b.alpha) + " = " + to_string(b.beta));
        IntVec g = sub(b.alpha, b.beta);
        RatVec r = to_rat(g);
        if (b.tangential.empty())
            r.resize(n + m);
        else
            r.insert(r.end(), b.tangential.begin(), b.tangential.end());
        rows.push_back(clear_denominators(r));
        gammas.push_back(g);
    }
    for (auto& s : raw.smooth) {
        if (s.size() != m) throw Error("DimensionMismatch", "smooth equation of the wrong length");
        RatVec r(n);
        r.insert(r.end(), s.begin(), s.end());
        rows.push_back(clear_denominators(r));
    }
    if (rank(rows, n + m) != rows.size())
        throw Error("DependentDifferentials", "the logarithmic differentials are dependent");
    BinomialSystem B{n, m, {}, 0};
    for (auto& g : gammas) {
        auto trial = B.gamma;
        trial.push_back(g);
        if (rank(trial, n) == trial.size()) B.gamma = std::move(trial);
    }
    B.smooth = rows.size() - B.gamma.size();
    for (auto& g : B.gamma)
        if (!indefinite(g)) throw Error("DefiniteExponent", to_string(g) + " does not vanish at the corner");
    return B;
}

// ---------------------------------------------------------------- P_D

VarietyComplex boundary_faces(const BinomialSystem& B) {
    const std::size_t n = B.n;
    if (n > 20) throw Error("TooManyCoordinates", "at most 20 boundary coordinates");
    VarietyComplex V{n, kernel_of(B.gamma, n), {}};
    std::vector<RatVec> eqs;
    for (auto& g : B.gamma) eqs.push_back(to_rat(g));
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> S;
        std::vector<RatVec> strict, zero = eqs;
        for (std::size_t i = 0; i < n; ++i) {
            RatVec e(n);
            e[i] = 1;
            if (mask >> i & 1) {
                S.push_back(i);
                e[i] = -1;
                strict.push_back(e);
            } else {
                zero.push_back(e);
            }
        }
        IntVec w(n);
        if (!S.empty()) {
            auto lp = lp_feasible(strict, zero, {}, n);
            if (!lp.feasible) continue;
            w = integral_multiple(lp.witness);
        }
        VarietyFace F;
        F.id = CornerComplex::model_face_id(S);
        F.coords = face_coords(S);
        F.witness = w;
        std::vector<IntVec> gs;
        for (auto& g : B.gamma) gs.push_back(restrict_to(g, F.coords));
        F.monoid = S.empty() ? ToricMonoid::trivial(0)
                             : intersect_with_subspace(orthant(S.size()), kernel_of(gs, S.size()));
        F.codim = F.monoid.dim();
        F.codim_in_face = B.codim() + F.codim - S.size();
        F.tangent_dim = B.dim() - F.codim;
        V.faces.push_back(std::move(F));
    }
    std::sort(V.faces.begin(), V.faces.end(), [](const VarietyFace& a, const VarietyFace& b) { return a.id < b.id; });
    return V;
}

VarietyMorphism variety_complex(const VarietyComplex& V) {
    std::vector<MonoidalComplex::Element> el;
    std::vector<MonoidalComplex::Relation> rel;
    for (auto& F : V.faces) el.push_back({F.id, F.monoid});
    for (auto& lo : V.faces)
        for (auto& up : V.faces) {
            if (&lo == &up || lo.coords.size() >= up.coords.size()) continue;
            bool sub = true;
            for (auto i : lo.coords) sub = sub && posn(up.coords, i) < up.coords.size();
            if (!sub) continue;
            IntMat m(lo.coords.size(), up.coords.size());
            for (std::size_t r = 0; r < lo.coords.size(); ++r) m(r, posn(up.coords, lo.coords[r])) = 1;
            rel.push_back({lo.id, up.id, m});
        }
    VarietyMorphism out{MonoidalComplex(std::move(el), rel, false), {}};
    auto PX = basic_complex(CornerComplex::model(V.n));
    out.inclusion = {out.complex, PX, {}, {}};
    for (std::size_t q = 0; q < out.complex.size(); ++q) {
        std::size_t k = out.complex.monoid(q).ambient_dim();
        IntMat id(k, k);
        for (std::size_t i = 0; i < k; ++i) id(i, i) = 1;
        out.inclusion.map.push_back(PX.at(out.complex.id(q)));
        out.inclusion.hom.push_back(id);
    }
    return out;
}

VarietyMorphism variety_complex(const BinomialSystem& B) { return variety_complex(boundary_faces(B)); }

bool is_smooth_complex(const MonoidalComplex& PD) { return PD.is_smooth(); }

// ---------------------------------------------------------------- resolution

Report check_sign_uniformity(const BinomialSystem& B, const ComplexRefinement& RX) {
    const auto& X = RX.target;
    auto model = CornerComplex::model(B.n);
    for (auto e : RX.source.maximal()) {
        auto S = coords_of(model, model.at(X.id(RX.map[e])));
        for (auto& g : B.gamma) {
            IntVec gs = restrict_to(g, S), beta;
            for (auto& t : RX.source.monoid(e).extremals()) {
                IntVec u = t * RX.hom[e];
                beta.push_back(dot(u, gs));
            }
            bool pos = false, neg = false;
            for (auto& x : beta) {
                pos = pos || x > 0;
                neg = neg || x < 0;
            }
            if (pos && neg)
                return Report::fail("sign", "exponent " + to_string(g) + " lifts to an indefinite vector over " +
                                                RX.source.id(e), beta);
        }
    }
    return Report::pass();
}

Report check_lifted_p_submanifold(const BinomialSystem& B, const ComplexRefinement& RX) {
    auto model = CornerComplex::model(B.n);
    for (std::size_t e = 0; e < RX.source.size(); ++e) {
        const auto& t = RX.source.monoid(e);
        if (t.is_trivial()) continue;
        auto S = coords_of(model, model.at(RX.target.id(RX.map[e])));
        const auto& gens = t.extremals();
        std::vector<RatVec> cols;
        bool inside = true;
        for (auto& g : B.gamma) {
            IntVec gs = restrict_to(g, S);
            RatVec c;
            for (auto& u : gens) c.push_back(Rat(dot(u * RX.hom[e], gs)));
            for (auto& x : c) inside = inside && x == 0;
            cols.push_back(c);
        }
        if (inside) continue;
        std::vector<RatVec> strict;
        for (std::size_t k = 0; k < gens.size(); ++k) {
            RatVec u(gens.size());
            u[k] = 1;
            strict.push_back(u);
        }
        auto lp = lp_feasible(strict, cols, {}, gens.size());
        if (lp.feasible)
            return Report::fail("p-submanifold", "the lift of D meets the interior of " + RX.source.id(e) +
                                                     " outside P_D", integral_multiple(lp.witness));
    }
    return Report::pass();
}

ComplexRefinement arrangement_refinement(const BinomialSystem& B) {
    auto model = CornerComplex::model(B.n);
    auto PX = basic_complex(model);
    std::vector<MonoidRefinement> local;
    for (std::size_t b = 0; b < PX.size(); ++b) {
        auto S = coords_of(model, model.at(PX.id(b)));
        std::vector<IntVec> H;
        for (auto& g : B.gamma) H.push_back(restrict_to(g, S));
        local.push_back(hyperplane_refine(PX.monoid(b), H));
    }
    return assemble_from_local(PX, local);
}

Resolution resolve(const BinomialSystem& B, const ComplexRefinement& RD) {
    auto vr = validate_system(B);
    if (!vr.ok) throw Error("InvalidSystem", vr.violated + ": " + vr.detail);
    auto V = variety_complex(B);
    const auto& PD = V.complex;
    if (!(RD.target == PD)) throw Error("TargetMismatch", "R_D does not refine P_D");
    auto rr = validate_refinement(RD);
    if (!rr.ok || !RD.source.is_smooth())
        throw Error("NotSmoothRefinement", rr.ok ? "R_D is not smooth" : rr.violated + ": " + rr.detail);

    Resolution out;
    ComplexRefinement S;
    try {
        S = planar_refine_complex(V.inclusion);
        out.route = "planar";
    } catch (const Error& e) {
        if (e.kind != "PlanarOverlap") throw;
        S = arrangement_refinement(B);
        out.route = "arrangement";
    }
    // The copy of P_D inside S(P_X, P_D).
    std::map<std::string, std::string> in_S;
    std::vector<std::string> ids;
    for (std::size_t q = 0; q < PD.size(); ++q) {
        std::size_t b = V.inclusion.map[q];
        for (std::size_t s = 0; s < S.source.size(); ++s)
            if (S.map[s] == b && S.source.monoid(s).image(S.hom[s]) == PD.monoid(q) && S.source.monoid(s) == PD.monoid(q)) {
                in_S[PD.id(q)] = S.source.id(s);
                ids.push_back(S.source.id(s));
            }
        if (!in_S.count(PD.id(q))) throw Error("VerificationFailed", PD.id(q) + " is missing from the planar refinement");
    }
    ComplexRefinement r0{RD.source, subcomplex(S.source, ids).complex, {}, RD.hom};
    for (auto t : RD.map) r0.map.push_back(r0.target.at(in_S.at(PD.id(t))));

    auto ext = extend_refinement(S.source, r0, true);
    out.RX = canonicalize(compose(S, ext));
    const auto& RXs = out.RX.source;
    const auto& X = out.RX.target;

    // R_X elements inside the subspaces of P_D, matched against the images of R_D.
    std::map<std::pair<std::string, ToricMonoid>, std::string> want;
    for (std::size_t r = 0; r < RD.source.size(); ++r)
        want[{PD.id(RD.map[r]), RD.source.monoid(r).image(RD.hom[r])}] = RD.source.id(r);
    out.verification = Report::pass();
    for (std::size_t e = 0; e < RXs.size(); ++e) {
        auto q = PD.find(X.id(out.RX.map[e]));
        if (!q) continue;
        auto img = RXs.monoid(e).image(out.RX.hom[e]);
        bool inside = true;
        for (auto& r : img.lattice().rows()) inside = inside && PD.monoid(*q).in_span(to_rat(r));
        if (!inside) continue;
        auto it = want.find({PD.id(*q), img});
        if (it == want.end()) {
            out.verification = Report::fail("restriction", RXs.id(e) + " lies in P_D but not in R_D");
            break;
        }
        out.lifted.push_back(RXs.id(e));
        out.lifted_from[RXs.id(e)] = it->second;
    }
    if (out.verification.ok && out.lifted.size() != RD.source.size())
        out.verification = Report::fail("restriction", "R_X restricted to P_D has " + std::to_string(out.lifted.size()) +
                                                           " elements, R_D has " + std::to_string(RD.source.size()));
    if (out.verification.ok) out.verification = check_lifted_p_submanifold(B, out.RX);
    out.sign_uniform = check_sign_uniformity(B, out.RX).ok;
    if (out.verification.ok) {
        auto sm = validate_refinement(out.RX);
        if (!sm.ok || !RXs.is_smooth())
            out.verification = Report::fail("smooth", sm.ok ? "R_X is not smooth" : sm.violated + ": " + sm.detail);
    }
    if (!out.verification.ok)
        throw Error("VerificationFailed", out.verification.violated + ": " + out.verification.detail);
    out.lifted_complex = subcomplex(RXs, out.lifted).complex;
    return out;
}

Resolution universal_resolution(const BinomialSystem& B) {
    auto V = variety_complex(B);
    if (!is_smooth_complex(V.complex))
        throw Error("ComplexNotSmooth", "P_D is not smooth; resolve with ns(P_D) instead");
    auto r = resolve(B, trivial_refinement(V.complex));
    r.universal = true;
    return r;
}

}  // namespace bk
