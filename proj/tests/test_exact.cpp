#include "doctest.h"

#include <blowkit/exact.hpp>

#include <random>

using namespace bk;

namespace {

IntMat mat(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<IntVec> rs;
    for (auto& r : rows) {
        IntVec v;
        for (long x : r) v.push_back(x);
        rs.push_back(v);
    }
    return stack(rs, rs.empty() ? 0 : rs[0].size());
}

IntMat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
    std::uniform_int_distribution<long> d(-bound, bound);
    IntMat m(r, c);
    for (auto& x : m.a) x = d(rng);
    return m;
}

bool is_hermite(const HNF& h) {
    for (std::size_t i = 0; i < h.rank; ++i) {
        std::size_t p = h.pivots[i];
        if (h.H(i, p) <= 0) return false;
        for (std::size_t j = 0; j < p; ++j)
            if (h.H(i, j) != 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (h.H(k, p) < 0 || h.H(k, p) >= h.H(i, p)) return false;
        if (i > 0 && h.pivots[i - 1] >= p) return false;
    }
    for (std::size_t i = h.rank; i < h.H.r; ++i)
        for (std::size_t j = 0; j < h.H.c; ++j)
            if (h.H(i, j) != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("hnf examples") {
    auto h = hermite_normal_form(IntMat::identity(3));
    CHECK(h.H == IntMat::identity(3));
    CHECK(h.U == IntMat::identity(3));

    auto d = mat({{2, 0}, {0, 3}});
    h = hermite_normal_form(d);
    CHECK(h.H == d);
    CHECK(h.U == IntMat::identity(2));

    auto m = mat({{2, 4}, {1, 3}});
    h = hermite_normal_form(m);
    CHECK(h.H(0, 0) == 1);
    CHECK(h.U * m == h.H);
    CHECK(abs(determinant(h.U)) == 1);
}

TEST_CASE("hnf and snf identities on random matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int it = 0; it < 150; ++it) {
        std::size_t r = dim(rng), c = dim(rng);
        IntMat m = random_mat(rng, r, c, it % 3 == 0 ? 3 : 100);
        if (it % 5 == 0 && r > 1)  // force rank deficiency
            for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
        auto h = hermite_normal_form(m);
        CHECK(h.U * m == h.H);
        CHECK(abs(determinant(h.U)) == 1);
        CHECK(is_hermite(h));
        CHECK(h.rank == rank(m));

        auto s = smith_normal_form(m);
        CHECK(s.U * m * s.V == s.D);
        CHECK(abs(determinant(s.U)) == 1);
        CHECK(abs(determinant(s.V)) == 1);
        std::size_t n = std::min(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) CHECK(s.D(i, j) == 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            CHECK(s.D(i, i) >= 0);
            if (s.D(i, i) == 0) CHECK(s.D(i + 1, i + 1) == 0);
            else CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
        }
    }
}

TEST_CASE("snf examples") {
    auto s = smith_normal_form(IntMat::identity(3));
    CHECK(s.D == IntMat::identity(3));
    s = smith_normal_form(mat({{2, 0}, {0, 3}}));
    CHECK(s.D == mat({{1, 0}, {0, 6}}));
    s = smith_normal_form(IntMat(2, 3));
    CHECK(s.D == IntMat(2, 3));
}

TEST_CASE("saturated kernel") {
    auto k = saturated_kernel(mat({{1}, {1}}));
    REQUIRE(k.size() == 1);
    CHECK((k[0] == IntVec{1, -1} || k[0] == IntVec{-1, 1}));

    // oracle: smallest nonzero integer solutions of 2a - 3b = 0 in a box
    k = saturated_kernel(mat({{2}, {-3}}));
    REQUIRE(k.size() == 1);
    IntVec best;
    for (long a = -6; a <= 6; ++a)
        for (long b = -6; b <= 6; ++b)
            if ((a || b) && 2 * a - 3 * b == 0 && a > 0 && (best.empty() || a < best[0]))
                best = {a, b};
    CHECK(primitive(k[0]) == k[0]);
    CHECK((k[0] == best || k[0] == scale(best, -1)));

    CHECK(saturated_kernel(mat({{1, 2}, {3, 4}})).empty());
}

TEST_CASE("saturated kernel spans all integral annihilators") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 40; ++it) {
        std::size_t r = 2 + it % 3, c = 1 + it % 2;
        IntMat m = random_mat(rng, r, c, 4);
        auto k = saturated_kernel(m);
        for (auto& v : k) CHECK(is_zero(v * m));
        // every small annihilator is an integral combination of the basis
        std::vector<long> box(r, -3);
        while (true) {
            IntVec v(box.begin(), box.end());
            if (!is_zero(v) && is_zero(v * m)) {
                REQUIRE(!k.empty());
                auto x = solve_left(to_rat(stack(k, r)), to_rat(v));
                REQUIRE(x);
                for (auto& q : *x) CHECK(q.get_den() == 1);
            }
            std::size_t i = 0;
            while (i < r && box[i] == 3) box[i++] = -3;
            if (i == r) break;
            ++box[i];
        }
    }
}

TEST_CASE("primitive") {
    CHECK(primitive(IntVec{2, 4}) == IntVec{1, 2});
    CHECK(primitive(IntVec{3, 2}) == IntVec{3, 2});
    CHECK(primitive(IntVec{-2, -2}) == IntVec{-1, -1});
    CHECK_THROWS_AS(primitive(IntVec{0, 0}), Error);
}

TEST_CASE("lp examples") {
    auto r = lp_feasible({{1, 0}}, {}, {}, 2);
    REQUIRE(r.feasible);
    CHECK(r.witness[0] > 0);
    CHECK_FALSE(lp_feasible({{1, 0}, {-1, 0}}, {}, {}, 2).feasible);
    r = lp_feasible({{1, -1}}, {{1, 1}}, {}, 2);
    REQUIRE(r.feasible);
    CHECK(r.witness[0] - r.witness[1] > 0);
    CHECK(r.witness[0] + r.witness[1] == 0);
}

TEST_CASE("lp engines agree and match a grid oracle") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> coef(-3, 3), cnt(0, 4);
    for (int it = 0; it < 300; ++it) {
        std::size_t dim = 1 + it % 3;
        auto rnd = [&] {
            RatVec v(dim);
            for (auto& x : v) x = coef(rng);
            return v;
        };
        std::vector<RatVec> s, z, n;
        int ns = 1 + cnt(rng) % 3, nz = cnt(rng) % 2, nn = cnt(rng);
        for (int i = 0; i < ns; ++i) s.push_back(rnd());
        for (int i = 0; i < nz; ++i) z.push_back(rnd());
        for (int i = 0; i < nn; ++i) n.push_back(rnd());
        auto a = lp_feasible_fm(s, z, n, dim);
        auto b = lp_feasible_simplex(s, z, n, dim);
        CHECK(a.feasible == b.feasible);
        for (auto* res : {&a, &b}) {
            if (!res->feasible) continue;
            for (auto& v : s) CHECK(dot(v, res->witness) > 0);
            for (auto& v : z) CHECK(dot(v, res->witness) == 0);
            for (auto& v : n) CHECK(dot(v, res->witness) >= 0);
        }
        // dense rational grid: any grid solution forces feasibility
        bool grid = false;
        const int N = 6;
        std::vector<int> p(dim, -N);
        while (!grid) {
            RatVec x(dim);
            for (std::size_t i = 0; i < dim; ++i) x[i] = Rat(p[i], 2);
            bool ok = true;
            for (auto& v : s) ok = ok && dot(v, x) > 0;
            for (auto& v : z) ok = ok && dot(v, x) == 0;
            for (auto& v : n) ok = ok && dot(v, x) >= 0;
            grid = ok;
            std::size_t i = 0;
            while (i < dim && p[i] == N) p[i++] = -N;
            if (i == dim) break;
            ++p[i];
        }
        if (grid) CHECK(a.feasible);
    }
}

TEST_CASE("lp above the elimination threshold uses simplex") {
    // cube-ish cone in dim 10: x_i > 0, sum constraint zero, one more tie
    std::size_t dim = 10;
    std::vector<RatVec> s, z, n;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        RatVec v(dim);
        v[i] = 1;
        s.push_back(v);
    }
    RatVec sum(dim, Rat(1));
    z.push_back(sum);
    auto r = lp_feasible(s, z, n, dim);
    REQUIRE(r.feasible);
    CHECK(dot(sum, r.witness) == 0);
    CHECK(r.witness[dim - 1] < 0);
    RatVec last(dim);
    last[dim - 1] = 1;
    n.push_back(last);
    CHECK_FALSE(lp_feasible(s, z, n, dim).feasible);
}
