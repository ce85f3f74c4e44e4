#include "blowkit/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bk {

namespace {

IntMat lattice_image(const ToricMonoid& s, const IntMat& A) { return s.lattice() * A; }

bool same_on_lattice(const ToricMonoid& s, const IntMat& A, const IntMat& B) {
    return lattice_image(s, A) == lattice_image(s, B);
}

std::string join_ids(const std::vector<std::size_t>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s + "}";
}

IntMat block_diag(const IntMat& a, const IntMat& b) {
    IntMat m(a.r + b.r, a.c + b.c);
    for (std::size_t i = 0; i < a.r; ++i)
        for (std::size_t j = 0; j < a.c; ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.r; ++i)
        for (std::size_t j = 0; j < b.c; ++j) m(a.r + i, a.c + j) = b(i, j);
    return m;
}

IntVec relint_point(const ToricMonoid& s) { return s.is_trivial() ? IntVec(s.ambient_dim()) : s.extremal_sum(); }

// Index of the face of σ_b that is the image of σ_a, for every a ≤ b.
std::map<std::size_t, std::size_t> face_owners(const MonoidalComplex& Q, std::size_t b) {
    std::map<std::size_t, std::size_t> owner;  // face index → a
    for (auto a : Q.below(b)) {
        auto img = Q.monoid(a).image(Q.face_map(a, b));
        auto fi = Q.monoid(b).face_index(img);
        if (!fi) throw Error("InvalidComplex", Q.id(a) + " is not mapped onto a face of " + Q.id(b));
        owner[*fi] = a;
    }
    return owner;
}

std::vector<ToricMonoid> local_members(const ComplexRefinement& f, std::size_t c) {
    std::vector<ToricMonoid> out;
    for (std::size_t x = 0; x < f.source.size(); ++x)
        if (f.target.le(f.map[x], c))
            out.push_back(f.source.monoid(x).image(f.hom[x] * f.target.face_map(f.map[x], c)));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- complexes

MonoidalComplex::MonoidalComplex(std::vector<Element> elements, const std::vector<Relation>& relations,
                                 bool check) {
    std::sort(elements.begin(), elements.end(), [](const Element& a, const Element& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < elements.size(); ++i)
        if (elements[i].id == elements[i - 1].id) throw Error("MalformedComplex", "duplicate id " + elements[i].id);
    el_ = std::move(elements);
    const std::size_t n = el_.size();
    le_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        le_[i][i] = 1;
        maps_[{i, i}] = IntMat::identity(el_[i].monoid.ambient_dim());
    }
    for (auto& r : relations) {
        std::size_t a = at(r.lower), b = at(r.upper);
        if (r.map.r != el_[a].monoid.ambient_dim() || r.map.c != el_[b].monoid.ambient_dim())
            throw Error("MalformedComplex", "face map " + r.lower + " -> " + r.upper + " has the wrong shape");
        auto it = maps_.find({a, b});
        if (it != maps_.end()) {
            if (check && !same_on_lattice(el_[a].monoid, it->second, r.map))
                conflicts_.push_back("two face maps " + r.lower + " -> " + r.upper);
            continue;
        }
        le_[a][b] = 1;
        maps_[{a, b}] = r.map;
    }
    if (!check) return;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || !le_[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k || !le_[k][j]) continue;
                if (i == j) {
                    conflicts_.push_back("cycle through " + el_[i].id + " and " + el_[k].id);
                    continue;
                }
                IntMat comp = maps_.at({i, k}) * maps_.at({k, j});
                auto it = maps_.find({i, j});
                if (it == maps_.end()) {
                    le_[i][j] = 1;
                    maps_[{i, j}] = comp;
                } else if (!same_on_lattice(el_[i].monoid, it->second, comp)) {
                    conflicts_.push_back("face maps " + el_[i].id + " -> " + el_[k].id + " -> " + el_[j].id +
                                         " do not compose");
                }
            }
        }
    std::sort(conflicts_.begin(), conflicts_.end());
    conflicts_.erase(std::unique(conflicts_.begin(), conflicts_.end()), conflicts_.end());
}

MonoidalComplex MonoidalComplex::faces_of(const ToricMonoid& sigma) {
    std::vector<Element> el;
    std::vector<Relation> rel;
    const auto& fs = sigma.faces();
    const IntMat I = IntMat::identity(sigma.ambient_dim());
    for (auto& f : fs) el.push_back({join_ids(f.extremal_index), f.monoid});
    for (auto& f : fs)
        for (auto& g : fs)
            if (&f != &g && std::includes(g.extremal_index.begin(), g.extremal_index.end(),
                                          f.extremal_index.begin(), f.extremal_index.end()))
                rel.push_back({join_ids(f.extremal_index), join_ids(g.extremal_index), I});
    return MonoidalComplex(std::move(el), rel, false);
}

MonoidalComplex MonoidalComplex::point() { return MonoidalComplex({{"pt", ToricMonoid::trivial(0)}}, {}); }

std::optional<std::size_t> MonoidalComplex::find(const std::string& id) const {
    auto it = std::lower_bound(el_.begin(), el_.end(), id, [](const Element& e, const std::string& s) { return e.id < s; });
    if (it == el_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - el_.begin());
}

std::size_t MonoidalComplex::at(const std::string& id) const {
    auto i = find(id);
    if (!i) throw Error("UnknownElement", "no element " + id);
    return *i;
}

const IntMat& MonoidalComplex::face_map(std::size_t a, std::size_t b) const {
    auto it = maps_.find({a, b});
    if (it == maps_.end()) throw Error("NotRelated", el_[a].id + " is not below " + el_[b].id);
    return it->second;
}

std::vector<std::size_t> MonoidalComplex::below(std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < size(); ++a)
        if (le_[a][b]) out.push_back(a);
    return out;
}

std::vector<std::size_t> MonoidalComplex::above(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < size(); ++b)
        if (le_[a][b]) out.push_back(b);
    return out;
}

std::vector<std::size_t> MonoidalComplex::maximal() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < size(); ++a)
        if (above(a).size() == 1) out.push_back(a);
    return out;
}

std::vector<MonoidalComplex::Relation> MonoidalComplex::relations() const {
    std::vector<Relation> out;
    for (auto& [k, m] : maps_)
        if (k.first != k.second) out.push_back({el_[k.first].id, el_[k.second].id, m});
    return out;
}

bool MonoidalComplex::is_smooth() const {
    return std::all_of(el_.begin(), el_.end(), [](const Element& e) { return e.monoid.is_smooth(); });
}

bool MonoidalComplex::is_simplicial() const {
    return std::all_of(el_.begin(), el_.end(), [](const Element& e) { return e.monoid.is_simplicial(); });
}

std::size_t MonoidalComplex::dim() const {
    std::size_t d = 0;
    for (auto& e : el_) d = std::max(d, e.monoid.dim());
    return d;
}

bool MonoidalComplex::operator==(const MonoidalComplex& o) const {
    if (size() != o.size() || le_ != o.le_) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (el_[i].id != o.el_[i].id || el_[i].monoid != o.el_[i].monoid) return false;
    return maps_ == o.maps_;
}

std::string MonoidalComplex::describe() const {
    std::ostringstream os;
    os << "complex(" << size() << " elements";
    if (!empty()) os << ", dim " << dim();
    os << ")";
    return os.str();
}

// --------------------------------------------------------------- validation

Report validate_complex(const MonoidalComplex& Q) {
    if (!Q.conflicts().empty()) return Report::fail("functoriality", Q.conflicts().front());
    for (std::size_t b = 0; b < Q.size(); ++b) {
        const auto& sb = Q.monoid(b);
        std::vector<int> hits(sb.faces().size(), 0);
        for (auto a : Q.below(b)) {
            ToricMonoid img;
            try {
                img = Q.monoid(a).image(Q.face_map(a, b));
            } catch (const Error&) {
                return Report::fail("face-map", "map " + Q.id(a) + " -> " + Q.id(b) + " is not injective");
            }
            auto fi = sb.face_index(img);
            if (!fi)
                return Report::fail("face-map", "image of " + Q.id(a) + " is not a face of " + Q.id(b),
                                    relint_point(img));
            ++hits[*fi];
        }
        for (std::size_t i = 0; i < hits.size(); ++i) {
            const auto& f = sb.faces()[i].monoid;
            if (hits[i] == 0)
                return Report::fail("complete", "face " + f.describe() + " of " + Q.id(b) + " has no element",
                                    relint_point(f));
            if (hits[i] > 1)
                return Report::fail("reduced", "face " + f.describe() + " of " + Q.id(b) + " has " +
                                                   std::to_string(hits[i]) + " elements",
                                    relint_point(f));
        }
    }
    return Report::pass();
}

Report validate_morphism(const ComplexMorphism& f) {
    const auto &S = f.source, &T = f.target;
    if (f.map.size() != S.size() || f.hom.size() != S.size())
        return Report::fail("shape", "one image and one homomorphism per element");
    for (std::size_t a = 0; a < S.size(); ++a) {
        if (f.map[a] >= T.size()) return Report::fail("shape", "image index out of range");
        MonoidHom h{S.monoid(a), T.monoid(f.map[a]), f.hom[a]};
        if (h.matrix.r != S.monoid(a).ambient_dim() || h.matrix.c != T.monoid(f.map[a]).ambient_dim())
            return Report::fail("shape", "homomorphism of " + S.id(a) + " has the wrong shape");
        if (!h.valid()) return Report::fail("homomorphism", S.id(a) + " is not mapped into " + T.id(f.map[a]));
    }
    for (std::size_t a = 0; a < S.size(); ++a)
        for (auto b : S.above(a)) {
            if (!T.le(f.map[a], f.map[b]))
                return Report::fail("order", S.id(a) + " <= " + S.id(b) + " is not preserved");
            IntMat left = S.face_map(a, b) * f.hom[b];
            IntMat right = f.hom[a] * T.face_map(f.map[a], f.map[b]);
            if (!same_on_lattice(S.monoid(a), left, right))
                return Report::fail("commute", "square over " + S.id(a) + " <= " + S.id(b) + " does not commute");
        }
    return Report::pass();
}

Report validate_refinement(const ComplexRefinement& f) {
    auto r = validate_morphism(f);
    if (!r.ok) return r;
    const auto &S = f.source, &T = f.target;
    for (std::size_t x = 0; x < S.size(); ++x) {
        const auto& s = S.monoid(x);
        if (rank(lattice_image(s, f.hom[x])) != s.dim())
            return Report::fail("injective", "homomorphism of " + S.id(x) + " is not injective");
        if (!T.monoid(f.map[x]).in_relint(to_rat(relint_point(s) * f.hom[x])))
            return Report::fail("poset-map", S.id(x) + " does not meet the interior of " + T.id(f.map[x]));
    }
    for (std::size_t c = 0; c < T.size(); ++c) {
        auto mem = local_members(f, c);
        std::set<ToricMonoid> distinct(mem.begin(), mem.end());
        if (distinct.size() != mem.size())
            return Report::fail("disjoint", "two elements over " + T.id(c) + " have the same image");
        auto loc = validate(MonoidRefinement(T.monoid(c), mem));
        if (!loc.ok) {
            loc.detail = "over " + T.id(c) + ": " + loc.detail;
            return loc;
        }
    }
    return Report::pass();
}

// ---------------------------------------------------------------- morphisms

ComplexMorphism identity_morphism(const MonoidalComplex& Q) {
    ComplexMorphism f{Q, Q, {}, {}};
    for (std::size_t i = 0; i < Q.size(); ++i) {
        f.map.push_back(i);
        f.hom.push_back(IntMat::identity(Q.monoid(i).ambient_dim()));
    }
    return f;
}

ComplexMorphism compose(const ComplexMorphism& g, const ComplexMorphism& f) {
    if (f.target.size() != g.source.size()) throw Error("DimensionMismatch", "morphisms do not compose");
    ComplexMorphism h{f.source, g.target, {}, {}};
    for (std::size_t a = 0; a < f.source.size(); ++a) {
        h.map.push_back(g.map[f.map[a]]);
        h.hom.push_back(f.hom[a] * g.hom[f.map[a]]);
    }
    return h;
}

std::vector<std::string> closure(const MonoidalComplex& Q, const std::vector<std::string>& ids) {
    std::set<std::string> out;
    for (auto& id : ids)
        for (auto a : Q.below(Q.at(id))) out.insert(Q.id(a));
    return {out.begin(), out.end()};
}

Subcomplex subcomplex(const MonoidalComplex& Q, const std::vector<std::string>& ids) {
    std::set<std::string> keep(ids.begin(), ids.end());
    for (auto& id : keep)
        for (auto a : Q.below(Q.at(id)))
            if (!keep.count(Q.id(a)))
                throw Error("NotDownwardComplete", Q.id(a) + " lies below " + id + " but is not selected");
    std::vector<MonoidalComplex::Element> el;
    std::vector<MonoidalComplex::Relation> rel;
    for (auto& id : keep) el.push_back({id, Q.monoid(Q.at(id))});
    for (auto& r : Q.relations())
        if (keep.count(r.lower) && keep.count(r.upper)) rel.push_back(r);
    Subcomplex s{MonoidalComplex(std::move(el), rel, false), {}};
    s.inclusion = ComplexMorphism{s.complex, Q, {}, {}};
    for (std::size_t i = 0; i < s.complex.size(); ++i) {
        s.inclusion.map.push_back(Q.at(s.complex.id(i)));
        s.inclusion.hom.push_back(IntMat::identity(s.complex.monoid(i).ambient_dim()));
    }
    return s;
}

ComplexRefinement restrict_refinement(const ComplexRefinement& f, const std::vector<std::string>& target_ids) {
    auto Q0 = subcomplex(f.target, target_ids).complex;
    std::vector<std::string> src;
    for (std::size_t x = 0; x < f.source.size(); ++x)
        if (Q0.find(f.target.id(f.map[x]))) src.push_back(f.source.id(x));
    auto R0 = subcomplex(f.source, src).complex;
    ComplexRefinement r{R0, Q0, {}, {}};
    for (std::size_t i = 0; i < R0.size(); ++i) {
        std::size_t x = f.source.at(R0.id(i));
        r.map.push_back(Q0.at(f.target.id(f.map[x])));
        r.hom.push_back(f.hom[x]);
    }
    return r;
}

// ------------------------------------------------------------- refinements

MonoidRefinement localize_refinement(const ComplexRefinement& f, std::size_t c) {
    return MonoidRefinement(f.target.monoid(c), local_members(f, c));
}

ComplexRefinement assemble_from_local(const MonoidalComplex& Q, const std::vector<MonoidRefinement>& local) {
    if (local.size() != Q.size()) throw Error("DimensionMismatch", "one local refinement per element");
    const std::size_t n = Q.size();
    std::vector<std::map<std::size_t, std::size_t>> owner(n);
    for (std::size_t b = 0; b < n; ++b) {
        if (local[b].base != Q.monoid(b))
            throw Error("IncompatibleLocalizations", "local refinement of " + Q.id(b) + " has another base");
        owner[b] = face_owners(Q, b);
    }
    // images of the members of R(a) in σ_b, checked against R(b) localized
    std::map<std::pair<std::size_t, std::size_t>, std::map<ToricMonoid, ToricMonoid>> preimage;
    for (std::size_t b = 0; b < n; ++b)
        for (auto a : Q.below(b)) {
            if (a == b) continue;
            const IntMat& m = Q.face_map(a, b);
            auto& pre = preimage[{a, b}];
            std::vector<ToricMonoid> img;
            for (auto& x : local[a].members) {
                img.push_back(x.image(m));
                pre.emplace(img.back(), x);
            }
            auto face = Q.monoid(a).image(m);
            auto here = localize(local[b], face).members;
            std::sort(img.begin(), img.end());
            if (img != here) {
                std::string got;
                for (auto& x : here) got += " " + x.describe();
                throw Error("IncompatibleLocalizations",
                            "refinement of " + Q.id(b) + " restricted to " + Q.id(a) + " differs:" + got);
            }
        }
    // new elements: members meeting the interior of their base
    struct Item {
        std::size_t base;
        ToricMonoid m;
    };
    std::vector<MonoidalComplex::Element> el;
    std::vector<Item> items;
    std::vector<std::map<ToricMonoid, std::string>> name(n);
    std::map<std::string, std::size_t> base_of;
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<ToricMonoid> inner;
        for (auto& m : local[b].members)
            if (Q.monoid(b).in_relint(to_rat(relint_point(m)))) inner.push_back(m);
        for (std::size_t k = 0; k < inner.size(); ++k) {
            std::string id = inner.size() == 1 ? Q.id(b) : Q.id(b) + "/" + std::to_string(k);
            name[b][inner[k]] = id;
            if (!base_of.emplace(id, b).second) throw Error("MalformedComplex", "generated id " + id + " collides");
            el.push_back({id, inner[k]});
            items.push_back({b, inner[k]});
        }
    }
    std::vector<MonoidalComplex::Relation> rel;
    for (auto& y : items) {
        const auto& sb = Q.monoid(y.base);
        for (auto& g : y.m.faces()) {
            if (g.monoid == y.m) continue;
            std::size_t fi = g.monoid.is_trivial() ? 0 : sb.smallest_face_containing(to_rat(g.monoid.extremal_sum()));
            std::size_t a = owner[y.base].at(fi);
            const IntMat& map = Q.face_map(a, y.base);
            const auto& names = name[a];
            auto it = a == y.base ? names.find(g.monoid) : names.find(preimage.at({a, y.base}).at(g.monoid));
            if (it == names.end()) throw Error("IncompatibleLocalizations", "face of a member has no element");
            rel.push_back({it->second, name[y.base].at(y.m), map});
        }
    }
    MonoidalComplex R(std::move(el), rel, false);
    ComplexRefinement f{R, Q, {}, {}};
    for (std::size_t i = 0; i < R.size(); ++i) {
        f.map.push_back(base_of.at(R.id(i)));
        f.hom.push_back(IntMat::identity(R.monoid(i).ambient_dim()));
    }
    return f;
}

ComplexRefinement canonicalize(const ComplexRefinement& f) {
    std::vector<MonoidRefinement> local;
    for (std::size_t c = 0; c < f.target.size(); ++c) local.push_back(localize_refinement(f, c));
    return assemble_from_local(f.target, local);
}

ComplexMorphism factor_through(const ComplexRefinement& r, const ComplexRefinement& s) {
    if (r.target.size() != s.target.size()) throw Error("TargetMismatch", "refinements of different complexes");
    ComplexMorphism g{r.source, s.source, {}, {}};
    for (std::size_t x = 0; x < r.source.size(); ++x) {
        std::size_t c = r.map[x];
        auto m = r.source.monoid(x).image(r.hom[x]);
        auto p = to_rat(relint_point(m));
        std::optional<std::size_t> hit;
        for (std::size_t y = 0; y < s.source.size() && !hit; ++y) {
            if (s.map[y] != c) continue;
            auto t = s.source.monoid(y).image(s.hom[y]);
            if (!t.in_relint(p)) continue;
            bool sub = true;
            for (auto& h : m.hilbert_basis()) sub = sub && t.contains(h);
            if (sub) hit = y;
        }
        if (!hit) throw Error("NotARefinement", r.source.id(x) + " lies in no element of the coarser refinement");
        if (s.hom[*hit] != IntMat::identity(s.target.monoid(c).ambient_dim()) ||
            r.hom[x] != IntMat::identity(r.target.monoid(c).ambient_dim()))
            throw Error("NotCanonical", "factor_through expects canonical refinements");
        g.map.push_back(*hit);
        g.hom.push_back(IntMat::identity(m.ambient_dim()));
    }
    return g;
}

ComplexRefinement trivial_refinement(const MonoidalComplex& Q) {
    std::vector<MonoidRefinement> local;
    for (std::size_t b = 0; b < Q.size(); ++b) local.push_back(trivial_refinement(Q.monoid(b)));
    return assemble_from_local(Q, local);
}

ComplexRefinement star_subdivide_complex(const MonoidalComplex& Q, const std::string& a, const IntVec& v0) {
    std::size_t ai = Q.at(a);
    if (v0.size() != Q.monoid(ai).ambient_dim() || is_zero(v0) || !Q.monoid(ai).contains(v0))
        throw Error("VNotInMonoid", to_string(v0) + " is not a nonzero element of " + a);
    // move to the element whose monoid has v in its interior
    IntVec v = v0;
    std::size_t face = Q.monoid(ai).smallest_face_containing(to_rat(v0));
    std::size_t owner = face_owners(Q, ai).at(face);
    if (owner != ai) {
        const auto& s = Q.monoid(owner);
        auto c = solve_left(to_rat(lattice_image(s, Q.face_map(owner, ai))), to_rat(v0));
        RatVec exact = *c * to_rat(s.lattice());
        v.assign(exact.size(), 0);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = exact[j].get_num();
        ai = owner;
    }
    std::vector<MonoidRefinement> local;
    for (std::size_t b = 0; b < Q.size(); ++b)
        local.push_back(Q.le(ai, b) ? star_subdivide(Q.monoid(b), v * Q.face_map(ai, b))
                                    : trivial_refinement(Q.monoid(b)));
    return assemble_from_local(Q, local);
}

ComplexRefinement smooth_complex(const MonoidalComplex& Q) {
    std::vector<MonoidRefinement> local;
    for (std::size_t b = 0; b < Q.size(); ++b) local.push_back(smoothing(Q.monoid(b)));
    return assemble_from_local(Q, local);
}

ComplexRefinement planar_refine_complex(const ComplexMorphism& i) {
    const auto &Qm = i.source, &P = i.target;
    if (!P.is_smooth()) throw Error("NotSmooth", "planar refinement needs a smooth complex");
    std::vector<std::optional<std::size_t>> pre(P.size());
    for (std::size_t q = 0; q < Qm.size(); ++q) {
        if (rank(lattice_image(Qm.monoid(q), i.hom[q])) != Qm.monoid(q).dim())
            throw Error("NotInjective", "homomorphism of " + Qm.id(q) + " is not injective");
        if (pre[i.map[q]]) throw Error("MultiplePreimages", P.id(i.map[q]) + " has two preimages");
        pre[i.map[q]] = q;
    }
    std::vector<MonoidRefinement> local;
    for (std::size_t p = 0; p < P.size(); ++p) {
        std::vector<IntVec> M;
        for (auto c : P.below(p)) {
            if (!pre[c]) continue;
            auto img = Qm.monoid(*pre[c]).image(i.hom[*pre[c]]);
            if (c == p && intersect_with_subspace(P.monoid(p), img.lattice().rows()) != img)
                throw Error("ImageNotPlanar", "image of " + Qm.id(*pre[c]) + " is not cut out by a subspace");
            for (auto& r : img.lattice().rows()) M.push_back(r * P.face_map(c, p));
        }
        local.push_back(planar_refine(P.monoid(p), M));
    }
    return assemble_from_local(P, local);
}

// ----------------------------------------------------------- fiber products

FiberProductComplex fiber_product_complex(const ComplexMorphism& f1, const ComplexMorphism& f2) {
    const auto &A = f1.source, &B = f2.source, &C = f1.target;
    if (C.size() != f2.target.size()) throw Error("TargetMismatch", "morphisms to different complexes");
    struct Pair {
        std::size_t a, b;
        FiberProduct fp;
    };
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < A.size(); ++a)
        for (std::size_t b = 0; b < B.size(); ++b) {
            if (f1.map[a] != f2.map[b]) continue;
            const auto& sc = C.monoid(f1.map[a]);
            auto fp = fiber_product({A.monoid(a), sc, f1.hom[a]}, {B.monoid(b), sc, f2.hom[b]});
            IntVec p = relint_point(fp.monoid);
            if (A.monoid(a).in_relint(to_rat(p * fp.proj1)) && B.monoid(b).in_relint(to_rat(p * fp.proj2)))
                kept.push_back({a, b, fp});
        }
    auto pid = [&](const Pair& p) { return "(" + A.id(p.a) + "," + B.id(p.b) + ")"; };
    std::vector<MonoidalComplex::Element> el;
    std::vector<MonoidalComplex::Relation> rel;
    for (auto& p : kept) el.push_back({pid(p), p.fp.monoid});
    for (auto& lo : kept)
        for (auto& up : kept)
            if (&lo != &up && A.le(lo.a, up.a) && B.le(lo.b, up.b))
                rel.push_back({pid(lo), pid(up), block_diag(A.face_map(lo.a, up.a), B.face_map(lo.b, up.b))});
    FiberProductComplex out{MonoidalComplex(std::move(el), rel, false), {}, {}};
    out.proj1 = {out.complex, A, {}, {}};
    out.proj2 = {out.complex, B, {}, {}};
    out.proj1.map.resize(out.complex.size());
    out.proj1.hom.resize(out.complex.size());
    out.proj2.map.resize(out.complex.size());
    out.proj2.hom.resize(out.complex.size());
    for (auto& p : kept) {
        std::size_t i = out.complex.at(pid(p));
        out.proj1.map[i] = p.a;
        out.proj1.hom[i] = p.fp.proj1;
        out.proj2.map[i] = p.b;
        out.proj2.hom[i] = p.fp.proj2;
    }
    return out;
}

FiberProductComplex product(const MonoidalComplex& Q1, const MonoidalComplex& Q2) {
    auto pt = MonoidalComplex::point();
    auto to_point = [&](const MonoidalComplex& Q) {
        ComplexMorphism f{Q, pt, std::vector<std::size_t>(Q.size(), 0), {}};
        for (std::size_t i = 0; i < Q.size(); ++i) f.hom.push_back(IntMat(Q.monoid(i).ambient_dim(), 0));
        return f;
    };
    return fiber_product_complex(to_point(Q1), to_point(Q2));
}

ComplexRefinement pullback_refinement(const ComplexRefinement& f, const ComplexMorphism& psi) {
    auto fp = fiber_product_complex(psi, f);
    return canonicalize(fp.proj1);
}

// -------------------------------------------------------------- smoothing

std::size_t nsdim(const ToricMonoid& sigma) {
    const auto& V = sigma.extremals();
    const std::size_t d = sigma.ambient_dim();
    const std::size_t r = rank(V, d);
    std::vector<IntVec> W;
    for (std::size_t i = 0; i < V.size(); ++i) {
        std::vector<IntVec> rest;
        for (std::size_t j = 0; j < V.size(); ++j)
            if (j != i) rest.push_back(V[j]);
        if (rank(rest, d) == r) W.push_back(V[i]);  // not independent of the others
    }
    if (W.empty()) return 0;
    const std::size_t rw = rank(W, d);
    std::size_t best = 0;
    for (auto& f : sigma.faces()) {
        auto ext = W;
        for (auto& e : f.monoid.extremals()) ext.push_back(e);
        if (rank(ext, d) == rw) best = std::max(best, f.monoid.dim());
    }
    return best;
}

bool is_fully_nonsimplicial(const ToricMonoid& sigma) {
    return !sigma.is_simplicial() && nsdim(sigma) == sigma.dim();
}

ComplexRefinement natural_smooth_refinement(const MonoidalComplex& Q, std::vector<NsStep>* trace,
                                            const NsProgress& progress) {
    ComplexRefinement comp = identity_morphism(Q);
    MonoidalComplex cur = Q;
    auto count = [](const MonoidalComplex& X, std::size_t k) {
        std::size_t c = 0;
        for (auto& e : X.elements()) c += nsdim(e.monoid) == k;
        return c;
    };
    while (true) {
        std::size_t k = 0;
        for (auto& e : cur.elements()) k = std::max(k, nsdim(e.monoid));
        if (k == 0) break;
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < cur.size() && !pick; ++i)
            if (cur.monoid(i).dim() == k && is_fully_nonsimplicial(cur.monoid(i))) pick = i;
        if (!pick) throw std::logic_error("no fully non-simplicial monoid of maximal non-simplicial dimension");
        NsStep step{cur.id(*pick), k, count(cur, k), 0};
        auto sub = star_subdivide_complex(cur, cur.id(*pick), cur.monoid(*pick).extremal_sum());
        step.mk_after = count(sub.source, k);
        if (step.mk_after >= step.mk_before) throw std::logic_error("M_k did not decrease at " + step.element);
        if (trace) trace->push_back(step);
        if (progress) progress(step);
        comp = compose(comp, sub);
        cur = sub.source;
    }
    comp = compose(comp, smooth_complex(cur));
    return canonicalize(comp);
}

// --------------------------------------------------------------- extension

ComplexRefinement extend_refinement(const MonoidalComplex& Q, const ComplexRefinement& r0, bool smooth,
                                    std::vector<ExtendRound>* trace) {
    const auto& Q0 = r0.target;
    for (auto& e : Q0.elements()) {
        auto i = Q.find(e.id);
        if (!i || Q.monoid(*i) != e.monoid) throw Error("NotASubcomplex", e.id + " is not an element of the complex");
    }
    std::vector<MonoidRefinement> local;
    std::vector<char> refined(Q.size(), 0);
    for (std::size_t b = 0; b < Q.size(); ++b) {
        auto triv = trivial_refinement(Q.monoid(b));
        if (auto c = Q0.find(Q.id(b))) {
            local.push_back(localize_refinement(r0, *c));
            refined[b] = local.back() != triv;
        } else {
            local.push_back(triv);
        }
    }
    while (true) {
        std::vector<std::size_t> damaged;
        for (std::size_t s = 0; s < Q.size(); ++s) {
            if (refined[s]) continue;
            for (auto a : Q.below(s))
                if (a != s && refined[a]) {
                    damaged.push_back(s);
                    break;
                }
        }
        if (damaged.empty()) break;
        std::size_t d = Q.monoid(damaged[0]).dim();
        for (auto s : damaged) d = std::min(d, Q.monoid(s).dim());
        if (trace) trace->push_back({d, damaged.size()});
        std::vector<std::pair<std::size_t, MonoidRefinement>> updates;
        for (auto s : damaged) {
            if (Q.monoid(s).dim() != d) continue;
            const auto& sig = Q.monoid(s);
            IntVec v = sig.extremal_sum();
            std::vector<ToricMonoid> members;
            for (auto a : Q.below(s)) {
                if (a == s) continue;
                for (auto& m : local[a].members) {
                    auto beta = m.image(Q.face_map(a, s));
                    members.push_back(beta);
                    auto lat = beta.lattice().rows();
                    lat.push_back(v);
                    auto gens = beta.extremals();
                    gens.push_back(v);
                    members.push_back(ToricMonoid::from_lattice_cone(sig.ambient_dim(), lat, gens));
                }
            }
            updates.push_back({s, MonoidRefinement(sig, members)});
        }
        for (auto& [s, R] : updates) {
            local[s] = R;
            refined[s] = 1;
        }
    }
    auto R = assemble_from_local(Q, local);
    if (!smooth) return R;
    return canonicalize(compose(R, natural_smooth_refinement(R.source)));
}

MutualRefinement mutual_smooth_refinement(const ComplexRefinement& r1, const ComplexRefinement& r2) {
    auto fp = fiber_product_complex(r1, r2);
    auto to_q = compose(r1, fp.proj1);
    auto ns = natural_smooth_refinement(fp.complex);
    MutualRefinement out;
    out.to_base = canonicalize(compose(to_q, ns));
    out.to_r1 = factor_through(out.to_base, canonicalize(r1));
    out.to_r2 = factor_through(out.to_base, canonicalize(r2));
    return out;
}

}  // namespace bk
