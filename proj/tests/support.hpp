#pragma once
// Small helpers shared by the unit and acceptance tests.
#include <blowkit/binomial.hpp>

#include <functional>
#include <random>
#include <set>

namespace bk::test {

inline IntVec iv(std::initializer_list<long> xs) {
    IntVec v;
    for (long x : xs) v.push_back(x);
    return v;
}

inline std::vector<IntVec> ivs(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<IntVec> out;
    for (auto& r : rows) {
        IntVec v;
        for (long x : r) v.push_back(x);
        out.push_back(v);
    }
    return out;
}

inline IntMat im(std::initializer_list<std::initializer_list<long>> rows) {
    auto r = ivs(rows);
    return stack(r, r.empty() ? 0 : r[0].size());
}

inline std::vector<IntVec> unit_vectors(std::size_t n) {
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < n; ++i) {
        IntVec e(n);
        e[i] = 1;
        out.push_back(e);
    }
    return out;
}

inline ToricMonoid orthant(std::size_t n) { return ToricMonoid::free(n, unit_vectors(n)); }

// Calls f on every integer point of [lo, hi]^n.
inline void for_box(std::size_t n, long lo, long hi, const std::function<void(const IntVec&)>& f) {
    std::vector<long> p(n, lo);
    while (true) {
        f(IntVec(p.begin(), p.end()));
        std::size_t i = 0;
        while (i < n && p[i] == hi) p[i++] = lo;
        if (i == n) return;
        ++p[i];
    }
}

// Brute-force minimal generators of the monoid points inside [0, hi]^n, for
// monoids contained in the non-negative orthant (so summands stay in the box).
inline std::set<IntVec> box_minimal_generators(const std::function<bool(const IntVec&)>& member,
                                               std::size_t n, long hi) {
    std::vector<IntVec> pts;
    for_box(n, 0, hi, [&](const IntVec& v) {
        if (!is_zero(v) && member(v)) pts.push_back(v);
    });
    std::set<IntVec> all(pts.begin(), pts.end()), out;
    for (auto& x : pts) {
        bool red = false;
        for (auto& y : pts) {
            if (y == x) continue;
            IntVec z = sub(x, y);
            bool nonneg = true;
            for (auto& c : z) nonneg = nonneg && c >= 0;
            if (nonneg && all.count(z)) { red = true; break; }
        }
        if (!red) out.insert(x);
    }
    return out;
}

// A random pointed monoid inside the non-negative orthant of ℤⁿ.
inline ToricMonoid random_orthant_monoid(std::mt19937_64& rng, std::size_t n, long max_entry,
                                         bool saturated_lattice) {
    std::uniform_int_distribution<long> e(0, max_entry);
    std::uniform_int_distribution<int> cnt(1, static_cast<int>(n) + 2);
    while (true) {
        std::vector<IntVec> g;
        int c = cnt(rng);
        for (int i = 0; i < c; ++i) {
            IntVec v(n);
            for (auto& x : v) x = e(rng);
            if (!is_zero(v)) g.push_back(v);
        }
        if (g.empty()) continue;
        std::vector<IntVec> lat = g;
        if (saturated_lattice) {
            // ℤⁿ ∩ span(g)
            auto K = saturated_kernel(stack(g, n).transpose());
            lat = K.empty() ? unit_vectors(n) : saturated_kernel(stack(K, n).transpose());
        }
        return ToricMonoid::from_lattice_cone(n, lat, g);
    }
}

// A random smooth monoid of dimension k in ℤⁿ: k rows of a random unimodular matrix.
inline ToricMonoid random_smooth_monoid(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::uniform_int_distribution<long> c(-2, 2);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    auto rows = unit_vectors(n);
    for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i != j) rows[i] = add(rows[i], scale(rows[j], c(rng)));
    }
    rows.resize(k);
    return ToricMonoid::free(n, rows);
}

// Random point of supp(σ): a non-negative combination of extremals, often on
// the boundary because coefficients can be zero.
inline IntVec random_support_point(std::mt19937_64& rng, const ToricMonoid& s, long max_coeff = 6) {
    std::uniform_int_distribution<long> c(0, max_coeff);
    IntVec p(s.ambient_dim());
    for (auto& e : s.extremals()) p = add(p, scale(e, c(rng)));
    return p;
}

// Cone over a random lattice quadrilateral or pentagon at height one.
inline ToricMonoid random_polygon_cone(std::mt19937_64& rng, bool saturated_lattice) {
    std::uniform_int_distribution<long> c(0, 3);
    std::uniform_int_distribution<int> cnt(4, 8);
    while (true) {
        std::vector<IntVec> g;
        for (int i = cnt(rng); i > 0; --i) g.push_back(iv({c(rng), c(rng), 1}));
        if (rank(g, 3) < 3) continue;
        auto s = ToricMonoid::from_lattice_cone(3, saturated_lattice ? unit_vectors(3) : g, g);
        if (s.extremals().size() == 4 || s.extremals().size() == 5) return s;
    }
}

// A random complex with at most max_elements elements and dimension ≤ max_dim:
// either the faces of one random monoid, or the closure of some maximal cells of
// a star subdivision of one.
inline MonoidalComplex random_complex(std::mt19937_64& rng, std::size_t max_elements = 12, std::size_t max_dim = 4) {
    std::uniform_int_distribution<std::size_t> dim(2, max_dim);
    std::uniform_int_distribution<int> coin(0, 1), third(0, 2);
    while (true) {
        std::size_t n = dim(rng);
        int mode = third(rng);
        auto s = mode == 0 ? random_polygon_cone(rng, coin(rng) == 0) : random_orthant_monoid(rng, n, 3, coin(rng) == 0);
        if (s.dim() < 2 || s.faces().size() > 4 * max_elements) continue;
        auto Q = MonoidalComplex::faces_of(s);
        if (mode == 2) {
            IntVec v = random_support_point(rng, s, 2);
            if (is_zero(v)) continue;
            auto top = Q.maximal().front();
            auto R = star_subdivide_complex(Q, Q.id(top), v).source;
            auto mx = R.maximal();
            std::shuffle(mx.begin(), mx.end(), rng);
            mx.resize(std::min<std::size_t>(mx.size(), 1 + coin(rng)));
            std::vector<std::string> ids;
            for (auto m : mx) ids.push_back(R.id(m));
            Q = subcomplex(R, closure(R, ids)).complex;
        }
        if (Q.size() <= max_elements) return Q;
    }
}

// Downward closure of a random nonempty set of elements.
inline std::vector<std::string> random_closed_subset(std::mt19937_64& rng, const MonoidalComplex& Q) {
    std::uniform_int_distribution<std::size_t> pick(0, Q.size() - 1);
    std::vector<std::string> ids{Q.id(pick(rng))};
    if (pick(rng) % 2) ids.push_back(Q.id(pick(rng)));
    return closure(Q, ids);
}

// A random smooth refinement: star subdivisions of maximal elements at random
// points, then ns.
inline ComplexRefinement random_smooth_refinement(std::mt19937_64& rng, const MonoidalComplex& P, int steps = 2) {
    auto R = trivial_refinement(P);
    std::uniform_int_distribution<int> nsteps(0, steps);
    for (int s = nsteps(rng); s > 0; --s) {
        auto top = R.source.maximal();
        std::uniform_int_distribution<std::size_t> pick(0, top.size() - 1);
        std::size_t e = top[pick(rng)];
        if (R.source.monoid(e).dim() < 2) continue;
        IntVec v = random_support_point(rng, R.source.monoid(e), 2);
        if (is_zero(v)) continue;
        R = canonicalize(compose(R, star_subdivide_complex(R.source, R.source.id(e), v)));
    }
    return canonicalize(compose(R, natural_smooth_refinement(R.source)));
}

inline IntMat random_exponents(std::mt19937_64& rng, std::size_t m, std::size_t n, long hi = 3) {
    std::uniform_int_distribution<long> e(0, hi);
    while (true) {
        IntMat d(m, n);
        for (auto& x : d.a) x = e(rng);
        bool ok = true;  // every source hypersurface maps into the boundary
        for (std::size_t i = 0; i < m; ++i) ok = ok && !is_zero(d.row(i));
        if (ok) return d;
    }
}

}  // namespace bk::test
