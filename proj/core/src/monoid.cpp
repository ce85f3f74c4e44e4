#include "blowkit/monoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "blowkit/cone.hpp"

namespace bk {

using Mask = std::vector<bool>;

struct ToricMonoid::Impl {
    std::size_t d = 0, k = 0;
    IntMat L;
    std::vector<std::size_t> piv;
    RatMat Minv;
    std::vector<IntVec> ext, ext_c, fac, fac_c, eqs;
    std::vector<Mask> fac_tight;  // per facet: extremals on it

    mutable std::once_flag faces_once, hb_once;
    mutable std::vector<Face> faces;
    mutable std::vector<IntVec> hb;
};

namespace {

std::vector<IntVec> ambient_rows(const std::vector<IntVec>& c, const IntMat& L) {
    std::vector<IntVec> out;
    for (auto& v : c) out.push_back(v * L);
    return out;
}

Mask full_mask(std::size_t n) { return Mask(n, true); }

}  // namespace

ToricMonoid ToricMonoid::build(std::size_t d, std::vector<IntVec> lattice, std::vector<IntVec> cone) {
    auto p = std::make_shared<Impl>();
    p->d = d;
    for (auto& v : lattice)
        if (v.size() != d) throw Error("DimensionMismatch", "lattice vector length");
    for (auto& v : cone)
        if (v.size() != d) throw Error("DimensionMismatch", "cone generator length");
    HNF h = hermite_normal_form(lattice.empty() ? IntMat(0, d) : stack(lattice, d));
    p->k = h.rank;
    p->L = IntMat(p->k, d);
    for (std::size_t i = 0; i < p->k; ++i)
        for (std::size_t j = 0; j < d; ++j) p->L(i, j) = h.H(i, j);
    p->piv = h.pivots;
    const std::size_t k = p->k;
    p->eqs = saturated_kernel(p->L.transpose());
    if (k == 0) {
        for (auto& g : cone)
            if (!is_zero(g)) throw Error("SpanMismatch", "cone generator outside the lattice span");
        return ToricMonoid(p);
    }
    RatMat M(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M(i, j) = p->L(i, p->piv[j]);
    p->Minv = *inverse(M);

    ToricMonoid tmp(p);
    std::vector<IntVec> G;
    for (auto& g : cone) {
        auto c = tmp.coords(to_rat(g));
        if (!c) throw Error("SpanMismatch", "cone generator " + to_string(g) + " outside the lattice span");
        IntVec gi = integral_multiple(*c);
        if (!is_zero(gi)) G.push_back(gi);
    }
    std::sort(G.begin(), G.end());
    G.erase(std::unique(G.begin(), G.end()), G.end());
    if (rank(G, k) != k) throw Error("SpanMismatch", "cone does not span the lattice");
    auto F = extreme_rays(G, k);
    if (rank(F, k) != k) throw Error("NotSharp", "cone contains a line");
    // extremals: generators on k-1 independent facets
    std::vector<std::pair<IntVec, IntVec>> ex;  // (ambient, coords)
    for (auto& g : G) {
        std::vector<IntVec> tight;
        for (auto& f : F)
            if (dot(f, g) == 0) tight.push_back(f);
        if (rank(tight, k) == k - 1) ex.emplace_back(g * p->L, g);
    }
    std::sort(ex.begin(), ex.end());
    for (auto& [a, c] : ex) {
        p->ext.push_back(a);
        p->ext_c.push_back(c);
    }
    std::vector<std::pair<IntVec, IntVec>> fs;  // (ambient, coords)
    for (auto& f : F) {
        RatVec u(d);
        for (std::size_t i = 0; i < k; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < k; ++j) s += p->Minv(i, j) * f[j];
            u[p->piv[i]] = s;
        }
        fs.emplace_back(integral_multiple(u), f);
    }
    std::sort(fs.begin(), fs.end());
    for (auto& [a, c] : fs) {
        p->fac.push_back(a);
        p->fac_c.push_back(c);
        Mask m(p->ext.size(), false);
        for (std::size_t i = 0; i < p->ext.size(); ++i) m[i] = dot(c, p->ext_c[i]) == 0;
        p->fac_tight.push_back(m);
    }
    return ToricMonoid(p);
}

ToricMonoid::ToricMonoid() : ToricMonoid(build(0, {}, {})) {}

ToricMonoid ToricMonoid::trivial(std::size_t d) { return build(d, {}, {}); }

ToricMonoid ToricMonoid::from_lattice_cone(std::size_t d, const std::vector<IntVec>& lattice,
                                           const std::vector<IntVec>& cone) {
    return build(d, lattice, cone);
}

ToricMonoid ToricMonoid::free(std::size_t d, const std::vector<IntVec>& gens) {
    if (rank(gens, d) != gens.size()) throw Error("NotIndependent", "free monoid generators are dependent");
    return build(d, gens, gens);
}

ToricMonoid ToricMonoid::from_generators(std::size_t d, const std::vector<IntVec>& gens) {
    std::vector<IntVec> nz;
    for (auto& g : gens) {
        if (g.size() != d) throw Error("DimensionMismatch", "generator length");
        if (!is_zero(g)) nz.push_back(g);
    }
    ToricMonoid s = build(d, nz, nz);
    std::set<IntVec> have(nz.begin(), nz.end());
    for (auto& h : s.hilbert_basis())
        if (!have.count(h))
            throw Error("NotSaturated", "generated monoid misses " + to_string(h) + " of its saturation");
    return s;
}

ToricMonoid ToricMonoid::from_hrep(std::size_t d, const std::vector<IntVec>& basis,
                                   const std::vector<IntVec>& ineqs) {
    const std::size_t m = basis.size();
    if (m == 0) return trivial(d);
    IntMat B = stack(basis, d);
    std::vector<IntVec> rays;
    try {
        rays = extreme_rays(ineqs, m);
    } catch (const Error& e) {
        if (e.kind == "NotPointed") throw Error("NotSharp", "intersection cone contains a line");
        throw;
    }
    if (rays.empty()) return trivial(d);
    return build(d, ambient_rows(saturate(rays, m), B), ambient_rows(rays, B));
}

std::size_t ToricMonoid::ambient_dim() const { return p_->d; }
std::size_t ToricMonoid::dim() const { return p_->k; }
const IntMat& ToricMonoid::lattice() const { return p_->L; }
const std::vector<IntVec>& ToricMonoid::extremals() const { return p_->ext; }
const std::vector<IntVec>& ToricMonoid::facets() const { return p_->fac; }
const std::vector<IntVec>& ToricMonoid::span_equations() const { return p_->eqs; }
const std::vector<IntVec>& ToricMonoid::lattice_extremals() const { return p_->ext_c; }
const std::vector<IntVec>& ToricMonoid::lattice_facets() const { return p_->fac_c; }

std::optional<RatVec> ToricMonoid::coords(const RatVec& v) const {
    const auto& p = *p_;
    if (v.size() != p.d) throw Error("DimensionMismatch", "coords");
    RatVec c(p.k);
    for (std::size_t j = 0; j < p.k; ++j)
        for (std::size_t i = 0; i < p.k; ++i) c[j] += v[p.piv[i]] * p.Minv(i, j);
    RatVec back(p.d);
    for (std::size_t i = 0; i < p.k; ++i)
        for (std::size_t j = 0; j < p.d; ++j) back[j] += c[i] * p.L(i, j);
    if (back != v) return std::nullopt;
    return c;
}

bool ToricMonoid::in_span(const RatVec& v) const {
    for (auto& e : p_->eqs)
        if (dot(to_rat(e), v) != 0) return false;
    return true;
}

bool ToricMonoid::in_support(const RatVec& v) const {
    if (!in_span(v)) return false;
    for (auto& f : p_->fac)
        if (dot(to_rat(f), v) < 0) return false;
    return true;
}

bool ToricMonoid::in_relint(const RatVec& v) const {
    if (!in_span(v)) return false;
    if (p_->k == 0) return true;
    for (auto& f : p_->fac)
        if (dot(to_rat(f), v) <= 0) return false;
    return true;
}

bool ToricMonoid::contains(const IntVec& v) const {
    RatVec r = to_rat(v);
    if (!in_support(r)) return false;
    auto c = coords(r);
    if (!c) return false;
    for (auto& x : *c)
        if (x.get_den() != 1) return false;
    return true;
}

bool ToricMonoid::is_simplicial() const { return p_->ext.size() == p_->k; }

bool ToricMonoid::is_smooth() const {
    if (!is_simplicial()) return false;
    if (p_->k == 0) return true;
    auto s = smith_normal_form(stack(p_->ext_c, p_->k));
    for (std::size_t i = 0; i < p_->k; ++i)
        if (s.D(i, i) != 1) return false;
    return true;
}

IntVec ToricMonoid::extremal_sum() const {
    IntVec s(p_->d);
    for (auto& e : p_->ext) s = add(s, e);
    return s;
}

const std::vector<Face>& ToricMonoid::faces() const {
    std::call_once(p_->faces_once, [this] {
        const auto& p = *p_;
        const std::size_t n = p.ext.size();
        std::set<Mask> seen{full_mask(n)};
        std::vector<Mask> queue{full_mask(n)};
        for (std::size_t qi = 0; qi < queue.size(); ++qi)
            for (auto& t : p.fac_tight) {
                Mask g(n);
                for (std::size_t i = 0; i < n; ++i) g[i] = queue[qi][i] && t[i];
                if (seen.insert(g).second) queue.push_back(g);
            }
        std::vector<std::pair<std::pair<std::size_t, ToricMonoid>, Face>> tmp;
        for (auto& m : queue) {
            Face f;
            std::vector<IntVec> sub_c, sub;
            for (std::size_t i = 0; i < n; ++i)
                if (m[i]) {
                    f.extremal_index.push_back(i);
                    sub_c.push_back(p.ext_c[i]);
                    sub.push_back(p.ext[i]);
                }
            if (sub.empty()) f.monoid = trivial(p.d);
            else if (sub.size() == n) f.monoid = *this;
            else f.monoid = build(p.d, ambient_rows(saturate(sub_c, p.k), p.L), sub);
            f.functional = IntVec(p.d);
            for (std::size_t j = 0; j < p.fac.size(); ++j) {
                bool contains_face = true;
                for (std::size_t i = 0; i < n; ++i)
                    if (m[i] && !p.fac_tight[j][i]) contains_face = false;
                if (contains_face) f.functional = add(f.functional, p.fac[j]);
            }
            tmp.push_back({{f.monoid.dim(), f.monoid}, f});
        }
        std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& t : tmp) p.faces.push_back(t.second);
    });
    return p_->faces;
}

std::size_t ToricMonoid::smallest_face_containing(const RatVec& v) const {
    if (!in_support(v)) throw Error("NotInSupport", "vector outside the support");
    const auto& p = *p_;
    Mask m = full_mask(p.ext.size());
    for (std::size_t j = 0; j < p.fac.size(); ++j)
        if (dot(to_rat(p.fac[j]), v) == 0)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i] && p.fac_tight[j][i];
    const auto& fs = faces();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        Mask fm(m.size(), false);
        for (auto e : fs[i].extremal_index) fm[e] = true;
        if (fm == m) return i;
    }
    throw Error("Internal", "face lattice incomplete");
}

Face smallest_face_containing(const ToricMonoid& s, const IntVec& v) {
    return s.faces()[s.smallest_face_containing(to_rat(v))];
}

std::optional<std::size_t> ToricMonoid::face_index(const ToricMonoid& tau) const {
    if (tau.ambient_dim() != ambient_dim()) return std::nullopt;
    const auto& fs = faces();
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].monoid == tau) return i;
    return std::nullopt;
}

std::vector<IntVec> ToricMonoid::hilbert_basis() const {
    std::call_once(p_->hb_once, [this] {
        const auto& p = *p_;
        const std::size_t k = p.k, n = p.ext.size();
        if (k == 0) return;
        const auto& fs = faces();
        std::vector<Mask> masks;
        for (auto& f : fs) {
            Mask m(n, false);
            for (auto e : f.extremal_index) m[e] = true;
            masks.push_back(m);
        }
        // pulling triangulation: cone the lowest extremal over the facets
        // of each face that avoid it
        std::function<std::vector<std::vector<std::size_t>>(std::size_t)> tri = [&](std::size_t fi) {
            const auto& idx = fs[fi].extremal_index;
            const std::size_t dm = fs[fi].monoid.dim();
            if (idx.size() == dm) return std::vector<std::vector<std::size_t>>{idx};
            std::size_t v0 = idx.front();
            std::vector<std::vector<std::size_t>> out;
            for (std::size_t gi = 0; gi < fs.size(); ++gi) {
                if (fs[gi].monoid.dim() + 1 != dm || masks[gi][v0]) continue;
                bool inside = true;
                for (auto e : fs[gi].extremal_index) inside = inside && masks[fi][e];
                if (!inside) continue;
                for (auto t : tri(gi)) {
                    t.insert(t.begin(), v0);
                    out.push_back(t);
                }
            }
            return out;
        };
        std::set<IntVec> cand(p.ext_c.begin(), p.ext_c.end());
        for (auto& simplex : tri(fs.size() - 1)) {
            std::vector<IntVec> rows;
            for (auto i : simplex) rows.push_back(p.ext_c[i]);
            IntMat G = stack(rows, k);
            auto snf = smith_normal_form(G);
            auto Ginv = *inverse(to_rat(G));
            auto Vinv = *inverse(to_rat(snf.V));
            std::vector<Int> y(k, 0);
            while (true) {
                RatVec x = to_rat(y) * Vinv;
                RatVec lam = x * Ginv;
                for (auto& l : lam) {
                    Int fl;
                    mpz_fdiv_q(fl.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
                    l -= fl;
                }
                RatVec pt = lam * to_rat(G);
                IntVec ip(k);
                for (std::size_t i = 0; i < k; ++i) ip[i] = Int(pt[i]);
                if (!is_zero(ip)) cand.insert(ip);
                std::size_t i = 0;
                while (i < k && y[i] + 1 >= snf.D(i, i)) y[i++] = 0;
                if (i == k) break;
                ++y[i];
            }
        }
        IntVec deg(k);
        for (auto& f : p.fac_c) deg = add(deg, f);
        std::vector<std::pair<Int, IntVec>> sorted;
        for (auto& c : cand) sorted.emplace_back(dot(deg, c), c);
        std::sort(sorted.begin(), sorted.end());
        std::vector<IntVec> basis;
        for (auto& [dg, x] : sorted) {
            bool reducible = false;
            for (auto& h : basis) {
                IntVec r = sub(x, h);
                bool in = true;
                for (auto& f : p.fac_c) in = in && dot(f, r) >= 0;
                if (in) { reducible = true; break; }
            }
            if (!reducible) basis.push_back(x);
        }
        for (auto& b : basis) p.hb.push_back(b * p.L);
        std::sort(p.hb.begin(), p.hb.end());
    });
    return p_->hb;
}

ToricMonoid ToricMonoid::full_submonoid(const std::vector<IntVec>& gens) const {
    std::vector<IntVec> gc;
    for (auto& g : gens) {
        if (!in_support(to_rat(g))) throw Error("NotInSupport", to_string(g) + " outside the support");
        gc.push_back(integral_multiple(*coords(to_rat(g))));
    }
    return build(p_->d, ambient_rows(saturate(gc, p_->k), p_->L), gens);
}

ToricMonoid ToricMonoid::image(const IntMat& A) const {
    if (A.r != p_->d) throw Error("DimensionMismatch", "image matrix rows");
    if (A.r == A.c) {
        bool id = true;
        for (std::size_t i = 0; i < A.r && id; ++i)
            for (std::size_t j = 0; j < A.c && id; ++j) id = A(i, j) == (i == j ? 1 : 0);
        if (id) return *this;
    }
    IntMat LA = p_->L * A;
    if (rank(LA) != p_->k) throw Error("NotInjective", "map is not injective on the lattice");
    std::vector<IntVec> ext;
    for (auto& e : p_->ext) ext.push_back(e * A);
    return build(A.c, LA.rows(), ext);
}

ToricMonoid ToricMonoid::smoothing() const {
    if (!is_simplicial()) throw Error("NotSimplicial", "smoothing needs a simplicial monoid");
    return build(p_->d, p_->ext, p_->ext);
}

std::vector<IntVec> ToricMonoid::ray_directions() const {
    std::vector<IntVec> r;
    for (auto& e : p_->ext) r.push_back(primitive(e));
    std::sort(r.begin(), r.end());
    return r;
}

bool ToricMonoid::same_support(const ToricMonoid& o) const {
    return ambient_dim() == o.ambient_dim() && ray_directions() == o.ray_directions();
}

bool ToricMonoid::operator==(const ToricMonoid& o) const {
    if (p_ == o.p_) return true;
    return p_->d == o.p_->d && p_->L == o.p_->L && p_->ext == o.p_->ext;
}

bool ToricMonoid::operator<(const ToricMonoid& o) const {
    if (p_->d != o.p_->d) return p_->d < o.p_->d;
    if (p_->k != o.p_->k) return p_->k < o.p_->k;
    if (p_->ext != o.p_->ext) return p_->ext < o.p_->ext;
    return p_->L.a < o.p_->L.a;
}

std::string ToricMonoid::describe() const {
    std::ostringstream os;
    os << "<";
    for (std::size_t i = 0; i < p_->ext.size(); ++i) os << (i ? "," : "") << to_string(p_->ext[i]);
    os << ">";
    if (!is_smooth() || p_->k == 0) {
        os << " lattice[";
        for (std::size_t i = 0; i < p_->k; ++i) os << (i ? "," : "") << to_string(p_->L.row(i));
        os << "]";
    }
    return os.str();
}

bool MonoidHom::valid() const {
    if (matrix.r != source.ambient_dim() || matrix.c != target.ambient_dim()) return false;
    for (auto& h : source.hilbert_basis())
        if (!target.contains(h * matrix)) return false;
    return true;
}

FiberProduct fiber_product(const MonoidHom& f1, const MonoidHom& f2) {
    if (f1.target != f2.target) throw Error("TargetMismatch", "fiber product needs a common target");
    const auto& s1 = f1.source;
    const auto& s2 = f2.source;
    const std::size_t d1 = s1.ambient_dim(), d2 = s2.ambient_dim(), d = f1.target.ambient_dim();
    const std::size_t k1 = s1.dim(), k2 = s2.dim();
    FiberProduct out;
    out.proj1 = IntMat(d1 + d2, d1);
    out.proj2 = IntMat(d1 + d2, d2);
    for (std::size_t i = 0; i < d1; ++i) out.proj1(i, i) = 1;
    for (std::size_t i = 0; i < d2; ++i) out.proj2(d1 + i, i) = 1;
    IntMat K(k1 + k2, d);
    IntMat A1 = s1.lattice() * f1.matrix, A2 = s2.lattice() * f2.matrix;
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < d; ++j) K(i, j) = A1(i, j);
    for (std::size_t i = 0; i < k2; ++i)
        for (std::size_t j = 0; j < d; ++j) K(k1 + i, j) = -A2(i, j);
    auto E = saturated_kernel(K);
    std::vector<IntVec> basis, ineqs;
    for (auto& e : E) {
        IntVec c1(e.begin(), e.begin() + k1), c2(e.begin() + k1, e.end());
        IntVec b = c1 * s1.lattice();
        IntVec b2 = c2 * s2.lattice();
        b.insert(b.end(), b2.begin(), b2.end());
        basis.push_back(b);
    }
    for (auto& f : s1.lattice_facets()) {
        IntVec g;
        for (auto& e : E) g.push_back(dot(IntVec(e.begin(), e.begin() + k1), f));
        ineqs.push_back(g);
    }
    for (auto& f : s2.lattice_facets()) {
        IntVec g;
        for (auto& e : E) g.push_back(dot(IntVec(e.begin() + k1, e.end()), f));
        ineqs.push_back(g);
    }
    out.monoid = ToricMonoid::from_hrep(d1 + d2, basis, ineqs);
    return out;
}

ToricMonoid intersect_with_subspace(const ToricMonoid& sigma, const std::vector<IntVec>& M) {
    const std::size_t d = sigma.ambient_dim(), k = sigma.dim();
    std::vector<IntVec> nz;
    for (auto& m : M)
        if (!is_zero(m)) nz.push_back(m);
    std::vector<IntVec> ann;
    if (nz.empty()) {
        for (std::size_t i = 0; i < d; ++i) {
            IntVec e(d);
            e[i] = 1;
            ann.push_back(e);
        }
    } else {
        ann = saturated_kernel(stack(nz, d).transpose());
    }
    IntMat Z = ann.empty() ? IntMat(0, d) : stack(ann, d);
    auto E = saturated_kernel(sigma.lattice() * Z.transpose());
    std::vector<IntVec> basis, ineqs;
    for (auto& e : E) basis.push_back(e * sigma.lattice());
    for (auto& f : sigma.lattice_facets()) {
        IntVec g;
        for (auto& e : E) g.push_back(dot(e, f));
        ineqs.push_back(g);
    }
    (void)k;
    return ToricMonoid::from_hrep(d, basis, ineqs);
}

bool is_full_submonoid(const ToricMonoid& sigma, const ToricMonoid& tau) {
    if (tau.ambient_dim() != sigma.ambient_dim()) return false;
    for (auto& e : tau.extremals())
        if (!sigma.in_support(to_rat(e))) return false;
    if (tau.is_trivial()) return true;
    return sigma.full_submonoid(tau.extremals()) == tau;
}

ToricMonoid join(const ToricMonoid& sigma, const ToricMonoid& t1, const ToricMonoid& t2) {
    if (!is_full_submonoid(sigma, t1) || !is_full_submonoid(sigma, t2))
        throw Error("NotFullSubmonoid", "join needs full submonoids");
    std::vector<IntVec> g = t1.extremals();
    g.insert(g.end(), t2.extremals().begin(), t2.extremals().end());
    if (g.empty()) return ToricMonoid::trivial(sigma.ambient_dim());
    return sigma.full_submonoid(g);
}

}  // namespace bk
