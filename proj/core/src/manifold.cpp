#include "blowkit/manifold.hpp"

#include <algorithm>
#include <stdexcept>

namespace bk {

namespace {

ToricMonoid free_orthant(std::size_t k) {
    std::vector<IntVec> e;
    for (std::size_t i = 0; i < k; ++i) {
        IntVec v(k);
        v[i] = 1;
        e.push_back(v);
    }
    return k == 0 ? ToricMonoid::trivial(0) : ToricMonoid::free(k, e);
}

std::size_t position(const std::vector<std::string>& xs, const std::string& x) {
    return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
}

// Solves c·(L·A) = g over the lattice rows L of s; returns c·L, or nothing
// when g is not the image of a lattice point.
std::optional<IntVec> lattice_preimage(const ToricMonoid& s, const IntMat& A, const IntVec& g) {
    if (s.is_trivial()) {
        if (!is_zero(g)) return std::nullopt;
        return IntVec(s.ambient_dim());
    }
    auto c = solve_left(to_rat(s.lattice() * A), to_rat(g));
    if (!c) return std::nullopt;
    for (auto& x : *c)
        if (x.get_den() != 1) return std::nullopt;
    RatVec m = *c * to_rat(s.lattice());
    IntVec out(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) out[j] = m[j].get_num();
    return out;
}

// Rays of element r of a smooth complex, with their generators in r's coordinates.
struct Rays {
    std::vector<std::size_t> index;
    std::vector<IntVec> gens;
};
Rays rays_below(const MonoidalComplex& Q, std::size_t r) {
    Rays out;
    for (auto w : Q.below(r)) {
        if (Q.monoid(w).dim() != 1) continue;
        out.index.push_back(w);
        out.gens.push_back(Q.monoid(w).extremals()[0] * Q.face_map(w, r));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- corners

CornerComplex::CornerComplex(std::vector<FaceData> faces, const std::vector<std::pair<std::string, std::string>>& order) {
    for (auto& f : faces) {
        std::sort(f.hyps.begin(), f.hyps.end());
        f.hyps.erase(std::unique(f.hyps.begin(), f.hyps.end()), f.hyps.end());
    }
    std::sort(faces.begin(), faces.end(), [](const FaceData& a, const FaceData& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < faces.size(); ++i)
        if (faces[i].id == faces[i - 1].id) throw Error("MalformedManifold", "duplicate face " + faces[i].id);
    faces_ = std::move(faces);
    for (auto& f : faces_) hyps_.insert(hyps_.end(), f.hyps.begin(), f.hyps.end());
    std::sort(hyps_.begin(), hyps_.end());
    hyps_.erase(std::unique(hyps_.begin(), hyps_.end()), hyps_.end());
    const std::size_t n = faces_.size();
    le_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) le_[i][i] = 1;
    for (auto& [g, f] : order) le_[at(g)][at(f)] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (le_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (le_[k][j]) le_[i][j] = 1;
}

CornerComplex CornerComplex::from_incidence(std::vector<FaceData> faces) {
    std::vector<std::pair<std::string, std::string>> order;
    for (auto& g : faces)
        for (auto& f : faces) {
            auto a = g.hyps, b = f.hyps;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (g.id != f.id && std::includes(b.begin(), b.end(), a.begin(), a.end())) order.emplace_back(g.id, f.id);
        }
    return CornerComplex(std::move(faces), order);
}

std::string CornerComplex::model_face_id(const std::vector<std::size_t>& hyps) {
    if (hyps.empty()) return "o";
    std::string s;
    for (std::size_t i = 0; i < hyps.size(); ++i) s += (i ? ".H" : "H") + std::to_string(hyps[i] + 1);
    return s;
}

CornerComplex CornerComplex::model(std::size_t k) {
    std::vector<FaceData> faces;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<std::size_t> idx;
        std::vector<std::string> hyps;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) {
                idx.push_back(i);
                hyps.push_back(model_face_id({i}));
            }
        faces.push_back({model_face_id(idx), hyps});
    }
    return from_incidence(std::move(faces));
}

std::size_t CornerComplex::hyp_index(const std::string& h) const {
    std::size_t p = position(hyps_, h);
    if (p == hyps_.size() || hyps_[p] != h) throw Error("UnknownHypersurface", h);
    return p;
}

std::optional<std::size_t> CornerComplex::find(const std::string& id) const {
    auto it = std::lower_bound(faces_.begin(), faces_.end(), id, [](const FaceData& f, const std::string& s) { return f.id < s; });
    if (it == faces_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - faces_.begin());
}

std::size_t CornerComplex::at(const std::string& id) const {
    auto i = find(id);
    if (!i) throw Error("UnknownFace", id);
    return *i;
}

std::vector<std::pair<std::string, std::string>> CornerComplex::order() const {
    std::vector<std::pair<std::string, std::string>> out;
    const std::size_t n = size();
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t f = 0; f < n; ++f) {
            if (g == f || !le_[g][f]) continue;
            bool cover = true;
            for (std::size_t k = 0; k < n && cover; ++k)
                if (k != g && k != f && le_[g][k] && le_[k][f]) cover = false;
            if (cover) out.emplace_back(faces_[g].id, faces_[f].id);
        }
    return out;
}

bool CornerComplex::operator==(const CornerComplex& o) const {
    if (size() != o.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (faces_[i].id != o.faces_[i].id || faces_[i].hyps != o.faces_[i].hyps) return false;
    return le_ == o.le_;
}

Report validate_corners(const CornerComplex& X) {
    for (auto& h : X.hypersurfaces()) {
        auto i = X.find(h);
        if (!i || X.face(*i).hyps != std::vector<std::string>{h})
            return Report::fail("hypersurface", h + " is not a codimension-one face containing itself");
    }
    for (std::size_t g = 0; g < X.size(); ++g)
        for (std::size_t f = 0; f < X.size(); ++f) {
            if (g == f || !X.le(g, f)) continue;
            if (X.le(f, g)) return Report::fail("order", "cycle through " + X.face(g).id + " and " + X.face(f).id);
            auto &a = X.face(g).hyps, &b = X.face(f).hyps;
            if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
                return Report::fail("order", X.face(g).id + " <= " + X.face(f).id + " but its hypersurfaces are not a subset");
        }
    for (std::size_t f = 0; f < X.size(); ++f) {
        const auto& hs = X.face(f).hyps;
        if (hs.size() > 20) return Report::fail("complete", X.face(f).id + " has too many hypersurfaces");
        std::map<std::vector<std::string>, int> seen;
        for (std::size_t g = 0; g < X.size(); ++g)
            if (X.le(g, f)) ++seen[X.face(g).hyps];
        for (std::size_t mask = 0; mask < (std::size_t{1} << hs.size()); ++mask) {
            std::vector<std::string> s;
            for (std::size_t i = 0; i < hs.size(); ++i)
                if (mask >> i & 1) s.push_back(hs[i]);
            int c = seen.count(s) ? seen[s] : 0;
            std::string name = "{";
            for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + s[i];
            name += "}";
            if (c == 0) return Report::fail("complete", "no face below " + X.face(f).id + " with hypersurfaces " + name);
            if (c > 1) return Report::fail("reduced", "several faces below " + X.face(f).id + " with hypersurfaces " + name);
        }
    }
    return Report::pass();
}

// ---------------------------------------------------------------- b-maps

Report validate_bmap(const BMap& f) {
    const auto &X = f.source, &Y = f.target;
    if (f.alpha.r != X.hypersurfaces().size() || f.alpha.c != Y.hypersurfaces().size())
        return Report::fail("shape", "exponent matrix must be source hypersurfaces x target hypersurfaces");
    for (auto& x : f.alpha.a)
        if (x < 0) return Report::fail("exponents", "negative exponent");
    std::vector<std::size_t> img(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        auto it = f.face_map.find(X.face(i).id);
        if (it == f.face_map.end()) return Report::fail("face-map", "no image for " + X.face(i).id);
        auto j = Y.find(it->second);
        if (!j) return Report::fail("face-map", "unknown target face " + it->second);
        img[i] = *j;
    }
    if (f.face_map.size() != X.size()) return Report::fail("face-map", "face map has entries for unknown faces");
    for (std::size_t g = 0; g < X.size(); ++g)
        for (std::size_t h = 0; h < X.size(); ++h)
            if (X.le(g, h) && !Y.le(img[g], img[h]))
                return Report::fail("order", "face map does not preserve " + X.face(g).id + " <= " + X.face(h).id);
    for (std::size_t i = 0; i < X.size(); ++i) {
        std::vector<std::string> hit;
        for (auto& g : X.face(i).hyps) {
            std::size_t gi = X.hyp_index(g);
            for (std::size_t hj = 0; hj < Y.hypersurfaces().size(); ++hj)
                if (f.alpha(gi, hj) > 0) hit.push_back(Y.hypersurfaces()[hj]);
        }
        std::sort(hit.begin(), hit.end());
        hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
        if (hit != Y.face(img[i]).hyps)
            return Report::fail("consistency", "exponents of " + X.face(i).id + " do not match its image " + Y.face(img[i]).id);
    }
    return Report::pass();
}

BMap identity_bmap(const CornerComplex& X) {
    BMap f{X, X, {}, IntMat::identity(X.hypersurfaces().size())};
    for (auto& F : X.faces()) f.face_map[F.id] = F.id;
    return f;
}

BMap compose(const BMap& f, const BMap& g) {
    if (!(g.target == f.source)) throw Error("ChainMismatch", "target of the inner map is not the source of the outer");
    BMap h{g.source, f.target, {}, g.alpha * f.alpha};
    for (auto& [a, b] : g.face_map) h.face_map[a] = f.face_map.at(b);
    return h;
}

BMap monomial_map(const IntMat& delta) {
    const std::size_t m = delta.r, n = delta.c;
    BMap f{CornerComplex::model(m), CornerComplex::model(n), {}, delta};
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<std::size_t> s, t;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1) s.push_back(i);
        for (std::size_t j = 0; j < n; ++j) {
            bool hit = false;
            for (auto i : s) hit = hit || delta(i, j) > 0;
            if (hit) t.push_back(j);
        }
        f.face_map[CornerComplex::model_face_id(s)] = CornerComplex::model_face_id(t);
    }
    return f;
}

MonoidalComplex basic_complex(const CornerComplex& X) {
    std::vector<MonoidalComplex::Element> el;
    std::vector<MonoidalComplex::Relation> rel;
    for (auto& F : X.faces()) el.push_back({F.id, free_orthant(F.hyps.size())});
    for (std::size_t g = 0; g < X.size(); ++g)
        for (std::size_t f = 0; f < X.size(); ++f) {
            if (g == f || !X.le(g, f)) continue;
            auto &a = X.face(g).hyps, &b = X.face(f).hyps;
            IntMat m(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) m(i, position(b, a[i])) = 1;
            rel.push_back({X.face(g).id, X.face(f).id, m});
        }
    return MonoidalComplex(std::move(el), rel, false);
}

ComplexMorphism induced_morphism(const BMap& f) {
    const auto &X = f.source, &Y = f.target;
    ComplexMorphism m{basic_complex(X), basic_complex(Y), {}, {}};
    for (std::size_t i = 0; i < X.size(); ++i) {
        std::size_t j = Y.at(f.face_map.at(X.face(i).id));
        auto &a = X.face(i).hyps, &b = Y.face(j).hyps;
        IntMat h(a.size(), b.size());
        for (std::size_t r = 0; r < a.size(); ++r)
            for (std::size_t c = 0; c < b.size(); ++c) h(r, c) = f.alpha(X.hyp_index(a[r]), Y.hyp_index(b[c]));
        m.map.push_back(j);
        m.hom.push_back(h);
    }
    return m;
}

// ---------------------------------------------------------------- blow-up

CornerComplex corner_complex(const MonoidalComplex& Q) {
    if (!Q.is_smooth()) throw Error("NotSmooth", "corner structure needs a smooth complex");
    std::vector<CornerComplex::FaceData> faces;
    std::vector<std::pair<std::string, std::string>> order;
    for (std::size_t r = 0; r < Q.size(); ++r) {
        CornerComplex::FaceData F{Q.id(r), {}};
        for (auto w : rays_below(Q, r).index) F.hyps.push_back(Q.id(w));
        faces.push_back(F);
        for (auto s : Q.above(r))
            if (s != r) order.emplace_back(Q.id(r), Q.id(s));
    }
    return CornerComplex(faces, order);
}

BMap realize_morphism(const ComplexMorphism& h, const CornerComplex& Y) {
    const auto& Q = h.source;
    BMap f{corner_complex(Q), Y, {}, {}};
    const auto& W = f.source;
    f.alpha = IntMat(W.hypersurfaces().size(), Y.hypersurfaces().size());
    for (std::size_t r = 0; r < Q.size(); ++r) f.face_map[Q.id(r)] = Y.face(h.map[r]).id;
    for (std::size_t k = 0; k < W.hypersurfaces().size(); ++k) {
        std::size_t w = Q.at(W.hypersurfaces()[k]);
        IntVec img = Q.monoid(w).extremals()[0] * h.hom[w];
        const auto& hs = Y.face(h.map[w]).hyps;
        for (std::size_t i = 0; i < hs.size(); ++i) f.alpha(k, Y.hyp_index(hs[i])) = img[i];
    }
    return f;
}

Blowup generalized_blowup(const CornerComplex& X, const ComplexRefinement& R) {
    if (!(R.target == basic_complex(X))) throw Error("TargetMismatch", "refinement is not of the basic complex");
    if (!R.source.is_smooth()) throw Error("NotSmoothRefinement", "refinement has a non-smooth monoid");
    auto rep = validate_refinement(R);
    if (!rep.ok) throw Error("NotSmoothRefinement", rep.violated + ": " + rep.detail);
    const auto& Q = R.source;
    Blowup B;
    B.blowdown = realize_morphism(R, X);
    B.space = B.blowdown.source;
    B.identification = ComplexMorphism{basic_complex(B.space), Q, {}, {}};
    for (std::size_t r = 0; r < Q.size(); ++r) {
        B.identification.map.push_back(r);
        auto gens = rays_below(Q, r).gens;
        B.identification.hom.push_back(stack(gens, Q.monoid(r).ambient_dim()));
    }
    return B;
}

bool isomorphic_over_base(const BMap& b1, const BMap& b2) {
    if (!(b1.target == b2.target)) return false;
    const auto &X1 = b1.source, &X2 = b2.source;
    if (X1.size() != X2.size() || X1.hypersurfaces().size() != X2.hypersurfaces().size()) return false;
    using Key = std::pair<std::string, IntVec>;
    auto hyp_keys = [](const BMap& b) {
        std::map<Key, std::string> out;
        const auto& hs = b.source.hypersurfaces();
        for (std::size_t k = 0; k < hs.size(); ++k) out[{b.face_map.at(hs[k]), b.alpha.row(k)}] = hs[k];
        return out;
    };
    auto k1 = hyp_keys(b1), k2 = hyp_keys(b2);
    if (k1.size() != X1.hypersurfaces().size() || k2.size() != k1.size()) return false;
    std::map<std::string, std::string> hmap;
    for (auto& [k, h] : k1) {
        auto it = k2.find(k);
        if (it == k2.end()) return false;
        hmap[h] = it->second;
    }
    std::map<std::pair<std::string, std::vector<std::string>>, std::size_t> face2;
    for (std::size_t i = 0; i < X2.size(); ++i) face2[{b2.face_map.at(X2.face(i).id), X2.face(i).hyps}] = i;
    if (face2.size() != X2.size()) return false;
    std::vector<std::size_t> pi(X1.size());
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < X1.size(); ++i) {
        std::vector<std::string> hs;
        for (auto& h : X1.face(i).hyps) hs.push_back(hmap.at(h));
        std::sort(hs.begin(), hs.end());
        auto it = face2.find({b1.face_map.at(X1.face(i).id), hs});
        if (it == face2.end() || !used.insert(it->second).second) return false;
        pi[i] = it->second;
    }
    for (std::size_t i = 0; i < X1.size(); ++i)
        for (std::size_t j = 0; j < X1.size(); ++j)
            if (X1.le(i, j) != X2.le(pi[i], pi[j])) return false;
    return true;
}

// ---------------------------------------------------------------- lifting

Compatibility is_compatible(const ComplexMorphism& fn, const ComplexRefinement& R) {
    if (!(R.target == fn.target)) throw Error("TargetMismatch", "refinement is not of the target complex");
    Compatibility out;
    out.phi = ComplexMorphism{fn.source, R.source, {}, {}};
    const auto& Q = R.source;
    for (std::size_t x = 0; x < fn.source.size(); ++x) {
        std::size_t b = fn.map[x];
        auto gens = fn.source.monoid(x).extremals();
        IntVec p(fn.hom[x].c);
        for (auto& g : gens) p = add(p, g * fn.hom[x]);
        std::optional<std::size_t> hit;
        for (std::size_t r = 0; r < Q.size() && !hit; ++r)
            if (R.map[r] == b && Q.monoid(r).image(R.hom[r]).in_relint(to_rat(p))) hit = r;
        out.witness = fn.source.id(x);
        if (!hit) {
            out.detail = "image of " + out.witness + " meets no member";
            return out;
        }
        // lattice rows of the source pulled through, so non-free sources work too
        const auto& L = fn.source.monoid(x).lattice();
        IntMat h(fn.source.monoid(x).ambient_dim(), Q.monoid(*hit).ambient_dim());
        if (!fn.source.monoid(x).is_trivial()) {
            IntMat img(L.r, Q.monoid(*hit).ambient_dim());
            for (std::size_t i = 0; i < L.r; ++i) {
                auto m = lattice_preimage(Q.monoid(*hit), R.hom[*hit], L.row(i) * fn.hom[x]);
                if (!m) {
                    out.detail = "image of " + out.witness + " is not in the lattice of " + Q.id(*hit);
                    return out;
                }
                for (std::size_t j = 0; j < m->size(); ++j) img(i, j) = (*m)[j];
            }
            if (L.r != L.c) throw Error("Unsupported", "source monoid of " + out.witness + " is not full-dimensional");
            auto Li = inverse(to_rat(L));
            auto hq = *Li * to_rat(img);
            for (std::size_t i = 0; i < h.r; ++i)
                for (std::size_t j = 0; j < h.c; ++j) {
                    if (hq(i, j).get_den() != 1) throw std::logic_error("compatibility: non-integral lift");
                    h(i, j) = hq(i, j).get_num();
                }
            for (auto& g : gens)
                if (!Q.monoid(*hit).contains(g * h)) {
                    out.detail = "image of " + out.witness + " is not contained in " + Q.id(*hit);
                    return out;
                }
        }
        out.phi.map.push_back(*hit);
        out.phi.hom.push_back(h);
    }
    out.ok = true;
    out.witness.clear();
    return out;
}

Compatibility is_compatible(const BMap& f, const ComplexRefinement& R) {
    if (!(R.target == basic_complex(f.target))) throw Error("TargetMismatch", "refinement is not of the basic complex of the target");
    return is_compatible(induced_morphism(f), R);
}

BMap lift_morphism(const CornerComplex& X, const Compatibility& c, const CornerComplex& Yb) {
    if (!c.ok) throw Error("NotCompatible", c.detail);
    const auto& Q = c.phi.target;
    BMap g{X, Yb, {}, IntMat(X.hypersurfaces().size(), Yb.hypersurfaces().size())};
    for (std::size_t x = 0; x < X.size(); ++x) g.face_map[X.face(x).id] = Q.id(c.phi.map[c.phi.source.at(X.face(x).id)]);
    for (std::size_t k = 0; k < X.hypersurfaces().size(); ++k) {
        std::size_t x = c.phi.source.at(X.hypersurfaces()[k]);
        std::size_t r = c.phi.map[x];
        auto rays = rays_below(Q, r);
        IntVec img = c.phi.source.monoid(x).extremals()[0] * c.phi.hom[x];
        auto coef = solve_left(to_rat(stack(rays.gens, Q.monoid(r).ambient_dim())), to_rat(img));
        if (!coef) throw std::logic_error("lift: image is not in the span of the rays");
        for (std::size_t i = 0; i < rays.index.size(); ++i) {
            const Rat& q = (*coef)[i];
            if (q.get_den() != 1 || q < 0) throw std::logic_error("lift: non-integral exponent");
            g.alpha(k, Yb.hyp_index(Q.id(rays.index[i]))) = q.get_num();
        }
    }
    return g;
}

BMap lift_bmap(const BMap& f, const Blowup& B, const Compatibility& c) { return lift_morphism(f.source, c, B.space); }

BMap lift_bmap(const BMap& f, const ComplexRefinement& R) {
    auto B = generalized_blowup(f.target, R);
    return lift_bmap(f, B, is_compatible(f, R));
}

DomainBlowup blowup_domain(const BMap& f, const ComplexRefinement& R) {
    auto fn = induced_morphism(f);
    DomainBlowup out;
    auto P = pullback_refinement(R, fn);
    out.minimal = P.source.is_smooth();
    out.S = out.minimal ? P : canonicalize(compose(P, natural_smooth_refinement(P.source)));
    out.domain = generalized_blowup(f.source, out.S);
    auto g = compose(f, out.domain.blowdown);
    auto BY = generalized_blowup(f.target, R);
    auto c = is_compatible(g, R);
    if (!c.ok) throw std::logic_error("blow-up of the domain is not compatible: " + c.detail);
    out.lift = lift_bmap(g, BY, c);
    return out;
}

// ---------------------------------------------------------------- atlases

ChartAtlas local_atlas(std::size_t n, const MonoidRefinement& R, std::size_t tangential) {
    if (!(R.base == free_orthant(n))) throw Error("TargetMismatch", "not a refinement of the basic monoid");
    if (!R.is_smooth()) throw Error("NotSmoothRefinement", "refinement has a non-smooth member");
    ChartAtlas A;
    A.n = n;
    A.tangential = tangential;
    for (auto& s : R.maximal()) {
        if (s.dim() != n) continue;
        std::vector<IntVec> slot(n);
        std::vector<IntVec> rest;
        for (auto& e : s.extremals()) {
            std::size_t nz = 0, at = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (e[j] != 0) ++nz, at = j;
            if (nz == 1 && e[at] == 1) slot[at] = e;
            else rest.push_back(e);
        }
        std::size_t k = 0;
        for (auto& v : slot)
            if (v.empty()) v = rest[k++];
        A.charts.push_back({s, stack(slot, n)});
    }
    std::sort(A.charts.begin(), A.charts.end(), [](const Chart& a, const Chart& b) { return a.nu < b.nu; });
    for (std::size_t i = 0; i < A.charts.size(); ++i)
        for (std::size_t j = 0; j < A.charts.size(); ++j) {
            if (i == j) continue;
            auto inv = inverse(to_rat(A.charts[j].nu));
            Transition t{i, j, to_rat(A.charts[i].nu) * *inv, {}, {}};
            auto r1 = A.charts[i].nu.rows(), r2 = A.charts[j].nu.rows();
            std::vector<RatVec> strict, zero;
            for (std::size_t a = 0; a < n; ++a) {
                bool shared = std::find(r2.begin(), r2.end(), r1[a]) != r2.end();
                if (shared) {
                    t.common.push_back(a);
                    zero.push_back(to_rat(r1[a]));
                } else {
                    strict.push_back(to_rat(r1[a]));
                }
                if (std::find(r1.begin(), r1.end(), r2[a]) == r1.end()) strict.push_back(to_rat(scale(r2[a], -1)));
            }
            auto lp = lp_feasible(strict, zero, {}, n);
            if (!lp.feasible) throw Error("NotSmoothRefinement", "two charts overlap in their interiors");
            t.separator = integral_multiple(lp.witness);
            A.transitions.push_back(t);
        }
    return A;
}

LocalLift local_lift(const ChartAtlas& A, const IntMat& delta) {
    if (delta.c != A.n) throw Error("DimensionMismatch", "exponent matrix has the wrong number of columns");
    for (std::size_t k = 0; k < A.charts.size(); ++k) {
        bool in = true;
        for (auto& row : delta.rows()) in = in && A.charts[k].sigma.contains(row);
        if (!in) continue;
        RatMat mu = to_rat(delta) * *inverse(to_rat(A.charts[k].nu));
        IntMat out(mu.r, mu.c);
        for (std::size_t i = 0; i < mu.a.size(); ++i) out.a[i] = mu.a[i].get_num();
        return {k, out};
    }
    throw Error("NotCompatible", "no chart contains the image of the exponents");
}

// ---------------------------------------------------------------- classical blow-ups

std::vector<std::string> lift_face(const ComplexRefinement& R, const std::string& G) {
    std::size_t g = R.target.at(G);
    std::vector<std::size_t> over;
    for (std::size_t r = 0; r < R.source.size(); ++r)
        if (R.map[r] == g) over.push_back(r);
    std::vector<std::string> out;
    for (auto r : over) {
        bool minimal = true;
        for (auto s : over) minimal = minimal && (s == r || !R.source.le(s, r));
        if (minimal) out.push_back(R.source.id(r));
    }
    return out;
}

namespace {

ClassicalBlowup weighted(const CornerComplex& X, const std::string& F, const IntVec& v) {
    auto P = basic_complex(X);
    if (v.empty()) throw Error("NotBoundaryFace", F + " is the interior");
    auto R = star_subdivide_complex(P, F, v);
    return {R, generalized_blowup(X, R)};
}

}  // namespace

ClassicalBlowup ordinary_blowup(const CornerComplex& X, const std::string& F) {
    return weighted(X, F, IntVec(X.face(X.at(F)).hyps.size(), 1));
}

ClassicalBlowup inhomogeneous_blowup(const CornerComplex& X, const std::string& F,
                                     const std::map<std::string, long>& weights) {
    const auto& hs = X.face(X.at(F)).hyps;
    IntVec v;
    for (auto& h : hs) {
        auto it = weights.find(h);
        if (it == weights.end() || it->second < 1) throw Error("BadWeights", "need a weight >= 1 for " + h);
        v.push_back(it->second);
    }
    if (weights.size() != hs.size()) throw Error("BadWeights", "weights given for hypersurfaces not through " + F);
    return weighted(X, F, v);
}

ClassicalBlowup iterated_blowup(const CornerComplex& X, const std::vector<std::string>& Fs) {
    auto R = trivial_refinement(basic_complex(X));
    for (auto& F : Fs) {
        auto lift = lift_face(R, F);
        if (lift.size() != 1) throw Error("LiftNotUnique", "the lift of " + F + " is not a single face");
        const auto& tau = R.source.monoid(R.source.at(lift[0]));
        if (tau.is_trivial()) throw Error("NotBoundaryFace", F + " is the interior");
        auto star = star_subdivide_complex(R.source, lift[0], tau.extremal_sum());
        R = canonicalize(compose(R, star));
    }
    return {R, generalized_blowup(X, R)};
}

BlowdownVerdict check_blowdown_refinement(const BMap& f) {
    BlowdownVerdict v;
    v.note = "combinatorial test only: properness and the behaviour on the interior are not modelled";
    auto rep = validate_bmap(f);
    if (!rep.ok) {
        v.report = rep;
        return v;
    }
    auto fn = induced_morphism(f);
    for (std::size_t x = 0; x < fn.source.size(); ++x)
        if (rank(fn.hom[x]) != fn.hom[x].r) {
            v.report = Report::fail("injective", "b-normal map of " + fn.source.id(x) + " is not injective");
            return v;
        }
    v.injective = true;
    v.report = validate_refinement(fn);
    v.refinement = v.report.ok;
    v.smooth = v.refinement && fn.source.is_smooth();
    if (!v.refinement) return v;
    std::set<std::size_t> hit(fn.map.begin(), fn.map.end());
    v.invertible = hit.size() == fn.map.size() && hit.size() == fn.target.size();
    for (auto& h : fn.hom) v.invertible = v.invertible && h.r == h.c && (h.r == 0 || abs(determinant(h)) == 1);
    return v;
}

}  // namespace bk
