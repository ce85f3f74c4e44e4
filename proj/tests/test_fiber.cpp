#include <doctest.h>

#include "support.hpp"

#include <blowkit/fiber.hpp>

using namespace bk;
using namespace bk::test;

namespace {

std::set<std::string> ids_of(const MonoidalComplex& Q) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < Q.size(); ++i) out.insert(Q.id(i));
    return out;
}

// Smoothness from a Hilbert basis: as many generators as the dimension and
// unit invariant factors.
bool smooth_by_snf(const std::vector<IntVec>& hb, std::size_t dim, std::size_t ambient) {
    if (hb.size() != dim) return false;
    if (dim == 0) return true;
    auto D = smith_normal_form(stack(hb, ambient)).D;
    for (std::size_t i = 0; i < dim; ++i)
        if (D(i, i) != 1 && D(i, i) != -1) return false;
    return true;
}

// Random simple exponent matrix: entries 0/1, at most one nonzero per row.
IntMat simple_exponents(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    std::uniform_int_distribution<std::size_t> col(0, n);
    IntMat d(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = col(rng);
        if (j < n) d(i, j) = 1;
    }
    return d;
}

// Exponent rows (a, b) and (c, d) with a + b = c + d, for the addition pattern.
std::pair<IntMat, IntMat> commuting_pair(std::mt19937_64& rng, std::size_t m) {
    std::uniform_int_distribution<long> e(0, 3);
    IntMat A(m, 2), B(m, 2);
    for (std::size_t i = 0; i < m; ++i) {
        long s = e(rng);
        std::uniform_int_distribution<long> split(0, s);
        A(i, 0) = split(rng);
        A(i, 1) = s - A(i, 0);
        B(i, 0) = split(rng);
        B(i, 1) = s - B(i, 0);
    }
    return {A, B};
}

FiberProblem addition_pattern() {
    auto f = monomial_map(im({{1}, {1}}));
    return {f, f};
}

}  // namespace

TEST_CASE("fiber complexes of the identity and the diagonal") {
    auto X = CornerComplex::model(2);
    FiberProblem id{identity_bmap(X), identity_bmap(X)};
    auto FC = fiber_complex(id);
    auto PY = basic_complex(X);
    CHECK(FC.complex.size() == PY.size());
    for (std::size_t i = 0; i < PY.size(); ++i) {
        auto e = FC.complex.at("(" + PY.id(i) + "," + PY.id(i) + ")");
        CHECK(FC.complex.monoid(e).dim() == PY.monoid(i).dim());
        CHECK(FC.complex.monoid(e).is_smooth());
    }
    CHECK(b_normal_transversality(id).ok);
    auto tb = theorem_b_check(id);
    CHECK(tb.smooth);
    REQUIRE(tb.space);
    CHECK(tb.space->size() == X.size());
    CHECK(same_bmap(compose(id.f1, *tb.h1), compose(id.f2, *tb.h2)));

    // two copies of x ↦ (x, x) meet non-transversally at the corner
    auto d = monomial_map(im({{1, 1}}));
    auto v = b_normal_transversality({d, d});
    CHECK_FALSE(v.ok);
    CHECK(v.failures == std::vector<std::string>{"(H1,H1)"});
    CHECK(v.note.find("necessary") != std::string::npos);
    CHECK_THROWS_WITH_AS(resolve_fiber_product({d, d}), doctest::Contains("TransversalityFailed"), Error);

    // a blow-down of the same corner twice is transversal, although at the
    // front face the b-normal part alone only reaches the ray (1,1)
    auto b = ordinary_blowup(X, "H1.H2").blowup.blowdown;
    CHECK(b_normal_transversality({b, b}).ok);
    std::size_t short_pairs = 0;
    for (auto& fp : analyze({b, b}).pairs)
        if (fp.relevant && !fp.normal_surjective) {
            ++short_pairs;
            CHECK(fp.transversal);
            REQUIRE(fp.model);
            CHECK(fp.model->gamma.size() == 1);
            CHECK(fp.model->smooth == 1);
        }
    CHECK(short_pairs == 1);
    // with no room for tangential directions the same maps fail
    CHECK_FALSE(b_normal_transversality({b, b, 2, 2, 3}).ok);

    CHECK_FALSE(validate_problem({d, identity_bmap(CornerComplex::model(3))}).ok);
}

TEST_CASE("addition pattern gives the cone over a square") {
    auto P = addition_pattern();
    auto rep = analyze(P);
    CHECK(rep.transversal);
    CHECK_FALSE(rep.smooth);
    CHECK(rep.offenders == std::vector<std::string>{"(H1.H2,H1.H2)"});
    const FacePair* top = nullptr;
    for (auto& fp : rep.pairs)
        if (fp.F1 == "H1.H2" && fp.F2 == "H1.H2") top = &fp;
    REQUIRE(top);
    auto ext = top->monoid.extremals();
    CHECK(std::set<IntVec>(ext.begin(), ext.end()) ==
          std::set<IntVec>{iv({1, 0, 1, 0}), iv({1, 0, 0, 1}), iv({0, 1, 1, 0}), iv({0, 1, 0, 1})});
    CHECK_FALSE(top->monoid.is_simplicial());
    auto member = [](const IntVec& v) { return v[0] + v[1] == v[2] + v[3]; };
    auto hb = top->monoid.hilbert_basis();
    CHECK(box_minimal_generators(member, 4, 3) == std::set<IntVec>(hb.begin(), hb.end()));
    REQUIRE(top->model);
    CHECK(top->model->gamma == ivs({{1, 1, -1, -1}}));
    auto V = boundary_faces(*top->model);
    bool met = false;
    for (auto& F : V.faces)
        if (F.id == "H1.H2.H3.H4") {
            met = true;
            CHECK(F.monoid == top->monoid);
        }
    CHECK(met);

    auto tb = theorem_b_check(P);
    CHECK_FALSE(tb.smooth);
    CHECK(tb.offenders == rep.offenders);
    CHECK_FALSE(tb.space);

    auto FR = resolve_fiber_product(P);
    CHECK(FR.verification.ok);
    CHECK(FR.R.source.is_smooth());
    CHECK(validate_refinement(FR.R).ok);
    std::size_t cells = 0;
    for (auto e : FR.R.source.maximal())
        if (FR.complex.complex.id(FR.R.map[e]) == "(H1.H2,H1.H2)") ++cells;
    // ns stars the square at the sum of its extremals, keeping the lattice
    // generated with that point
    CHECK(cells == 4);
    for (auto e : FR.R.source.maximal()) {
        if (FR.complex.complex.id(FR.R.map[e]) != "(H1.H2,H1.H2)") continue;
        auto img = FR.R.source.monoid(e).image(FR.R.hom[e]);
        auto ex = img.extremals();
        CHECK(std::find(ex.begin(), ex.end(), iv({2, 2, 2, 2})) != ex.end());
    }

    // a user refinement cutting the square along one diagonal
    const auto& Q = FR.complex.complex;
    std::vector<MonoidRefinement> local;
    for (std::size_t i = 0; i < Q.size(); ++i)
        local.push_back(Q.id(i) == "(H1.H2,H1.H2)" ? hyperplane_refine(Q.monoid(i), ivs({{1, 0, -1, 0}}))
                                                  : trivial_refinement(Q.monoid(i)));
    auto cut = assemble_from_local(Q, local);
    CHECK(validate_refinement(cut).ok);
    auto FC2 = resolve_fiber_product(P, cut);
    CHECK(FC2.verification.ok);
    std::size_t halves = 0;
    for (auto e : FC2.R.source.maximal())
        if (Q.id(FC2.R.map[e]) == "(H1.H2,H1.H2)") ++halves;
    CHECK(halves == 2);
    CHECK_THROWS_WITH_AS(resolve_fiber_product(P, trivial_refinement(Q)), doctest::Contains("NotSmoothRefinement"),
                         Error);
    CHECK(validate_bmap(FR.h1).ok);
    CHECK(same_bmap(compose(P.f1, FR.h1), compose(P.f2, FR.h2)));
}

TEST_CASE("blow-down against the diagonal inclusion") {
    auto X = CornerComplex::model(2);
    auto beta = ordinary_blowup(X, "H1.H2").blowup.blowdown;
    auto incl = monomial_map(im({{1, 1}}));
    auto FC = fiber_complex({beta, incl});
    std::string interior, front;
    for (auto& F : beta.source.faces()) {
        if (F.hyps.empty()) interior = F.id;
        if (F.hyps.size() == 1 && beta.face_map.at(F.id) == "H1.H2") front = F.id;
    }
    // the lifted diagonal crosses the front face once and misses its corners
    CHECK(ids_of(FC.complex) == std::set<std::string>{"(" + interior + ",o)", "(" + front + ",H1)"});
    auto tb = theorem_b_check({beta, incl});
    CHECK(tb.smooth);
    CHECK(validate_bmap(*tb.h1).ok);
    CHECK(validate_bmap(*tb.h2).ok);
}

TEST_CASE("simple b-maps have smooth fiber products") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::size_t> nn(1, 4), kk(1, 3);
        std::size_t n = nn(rng);
        FiberProblem P{monomial_map(simple_exponents(rng, kk(rng), n)), monomial_map(simple_exponents(rng, kk(rng), n))};
        auto rep = analyze(P);
        CHECK(rep.smooth);
        for (auto& fp : rep.pairs) {
            if (!fp.relevant) continue;
            CHECK(smooth_by_snf(fp.monoid.hilbert_basis(), fp.monoid.dim(), fp.monoid.ambient_dim()));
        }
        auto tb = theorem_b_check(P);
        CHECK(tb.smooth == rep.smooth);
        if (tb.smooth && rep.transversal) {
            CHECK(validate_bmap(*tb.h1).ok);
            CHECK(same_bmap(compose(P.f1, *tb.h1), compose(P.f2, *tb.h2)));
        }
    }
}

TEST_CASE("fiber monoids against brute force") {
    std::mt19937_64 rng(313);
    int singular = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<std::size_t> kk(1, 2), nn(1, 2);
        std::size_t n = nn(rng);
        FiberProblem P{monomial_map(random_exponents(rng, kk(rng), n, 2)),
                       monomial_map(random_exponents(rng, kk(rng), n, 2))};
        auto rep = analyze(P);
        for (auto& fp : rep.pairs) {
            const auto& s = fp.monoid;
            std::size_t d = s.ambient_dim();
            if (d == 0) continue;
            auto u1 = induced_morphism(P.f1), u2 = induced_morphism(P.f2);
            auto F1 = u1.source.at(fp.F1), F2 = u2.source.at(fp.F2);
            std::size_t k1 = u1.source.monoid(F1).ambient_dim();
            auto member = [&](const IntVec& v) {
                IntVec a(v.begin(), v.begin() + k1), b(v.begin() + k1, v.end());
                return a * u1.hom[F1] == b * u2.hom[F2];
            };
            std::set<IntVec> in_box;
            for (auto& h : s.hilbert_basis()) {
                bool inbox = true;
                for (auto& x : h) inbox = inbox && x <= 4;
                if (inbox) in_box.insert(h);
            }
            INFO("pair " << fp.F1 << " " << fp.F2);
            CHECK(in_box == box_minimal_generators(member, d, 4));
            bool all_in = in_box.size() == s.hilbert_basis().size();
            if (all_in) CHECK(fp.smooth == smooth_by_snf(s.hilbert_basis(), s.dim(), d));
            if (fp.relevant && !fp.smooth) ++singular;
            // the local binomial model meets the top face exactly when the pair is relevant
            if (fp.model && d < 10) {
                auto V = boundary_faces(*fp.model);
                std::vector<std::size_t> all(d);
                for (std::size_t i = 0; i < d; ++i) all[i] = i;
                auto topid = CornerComplex::model_face_id(all);
                const VarietyFace* top = nullptr;
                for (auto& F : V.faces)
                    if (F.id == topid) top = &F;
                CHECK((top != nullptr) == fp.relevant);
                if (top) CHECK(top->monoid == s);
            }
        }
    }
    CHECK(singular > 0);
}

TEST_CASE("two blow-downs give the intersection complex") {
    std::mt19937_64 rng(8);
    auto X = CornerComplex::model(3);
    auto PX = basic_complex(X);
    int singular = 0;
    for (int trial = 0; trial < 6; ++trial) {
        auto R1 = random_smooth_refinement(rng, PX, 2), R2 = random_smooth_refinement(rng, PX, 2);
        auto B1 = generalized_blowup(X, R1), B2 = generalized_blowup(X, R2);
        FiberProblem P{B1.blowdown, B2.blowdown};
        CHECK(b_normal_transversality(P).ok);
        auto FC = fiber_complex(P);
        auto mutual = compose(R1, compose(B1.identification, FC.proj1));
        CHECK(validate_refinement(mutual).ok);
        // every relint-meeting pair of cells appears, with monoid τ₁ ∩ τ₂
        for (std::size_t r1 = 0; r1 < R1.source.size(); ++r1)
            for (std::size_t r2 = 0; r2 < R2.source.size(); ++r2) {
                if (R1.map[r1] != R2.map[r2]) continue;
                auto t1 = R1.source.monoid(r1).image(R1.hom[r1]);
                auto t2 = R2.source.monoid(r2).image(R2.hom[r2]);
                std::size_t d = t1.ambient_dim();
                std::set<IntVec> both;
                bool relint = false;
                for_box(d, 0, 9, [&](const IntVec& p) {
                    if (!t1.contains(p) || !t2.contains(p)) return;
                    both.insert(p);
                    relint = relint || (t1.in_relint(to_rat(p)) && t2.in_relint(to_rat(p)));
                });
                auto id = "(" + R1.source.id(r1) + "," + R2.source.id(r2) + ")";
                auto e = FC.complex.find(id);
                INFO(id);
                CHECK(e.has_value() == relint);
                if (!e) continue;
                auto to1 = FC.proj1.hom[*e] * B1.identification.hom[r1] * R1.hom[r1];
                auto to2 = FC.proj2.hom[*e] * B2.identification.hom[r2] * R2.hom[r2];
                auto img = FC.complex.monoid(*e).image(to1);
                CHECK(img == FC.complex.monoid(*e).image(to2));
                std::set<IntVec> mine;
                for_box(d, 0, 9, [&](const IntVec& p) {
                    if (img.contains(p)) mine.insert(p);
                });
                CHECK(mine == both);
            }
        // intersections of smooth cells need not be smooth
        auto tb = theorem_b_check(P);
        auto FR = resolve_fiber_product(P);
        CHECK(FR.verification.ok);
        if (tb.smooth) CHECK(FR.R.source.size() == FC.complex.size());
        if (!tb.smooth) ++singular;
    }
    MESSAGE(singular << " of 6 intersection complexes were singular");
}

TEST_CASE("factoring through the resolved fiber product") {
    auto P = addition_pattern();
    auto FR = resolve_fiber_product(P);

    // Z = the resolved product itself
    auto self = factor_through(P, FR, FR.h1, FR.h2);
    CHECK_FALSE(self.blown_up);
    CHECK(self.verification.ok);
    CHECK(same_bmap(self.g, identity_bmap(FR.space)));

    // constant maps into the interior
    BMap z1{CornerComplex::model(1), P.f1.source, {{"o", "o"}, {"H1", "o"}}, IntMat(1, 2)};
    auto pt = factor_through(P, FR, z1, z1);
    CHECK(pt.component == "(o,o)");
    CHECK(pt.verification.ok);

    BMap g1 = monomial_map(im({{1, 2}})), g2 = monomial_map(im({{2, 1}}));
    CHECK_THROWS_WITH_AS(factor_through(P, FR, g1, monomial_map(im({{1, 1}}))), doctest::Contains("NotCommuting"),
                         Error);
    auto ray = factor_through(P, FR, g1, g2);
    CHECK(ray.component == "(o,o)");
    CHECK(ray.verification.ok);

    // a quadrant onto an edge of the square fits in a cell; one onto a
    // diagonal crosses the central ray and Z has to be blown up
    auto q1 = factor_through(P, FR, monomial_map(im({{1, 0}, {1, 0}})), monomial_map(im({{1, 0}, {0, 1}})));
    auto q2 = factor_through(P, FR, monomial_map(im({{1, 0}, {0, 1}})), monomial_map(im({{1, 0}, {0, 1}})));
    CHECK_FALSE(q1.blown_up);
    CHECK(q2.blown_up);
    for (auto* q : {&q1, &q2}) {
        CHECK(q->verification.ok);
        if (!q->blown_up) continue;
        REQUIRE(q->S);
        CHECK(validate_refinement(*q->S).ok);
        CHECK(q->S->source.size() > basic_complex(CornerComplex::model(2)).size());
    }
}

TEST_CASE("universal property on random commuting maps") {
    auto P = addition_pattern();
    auto FR = resolve_fiber_product(P);
    std::mt19937_64 rng(99);
    int blown = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<std::size_t> mm(1, 3);
        auto [A, B] = commuting_pair(rng, mm(rng));
        auto g1 = monomial_map(A), g2 = monomial_map(B);
        INFO("A = " << to_string(A.a) << " B = " << to_string(B.a));
        auto r = factor_through(P, FR, g1, g2);
        CHECK(r.verification.ok);
        auto e1 = r.blown_up ? compose(g1, r.domain->blowdown) : g1;
        auto e2 = r.blown_up ? compose(g2, r.domain->blowdown) : g2;
        CHECK(same_bmap(compose(FR.h1, r.g), e1));
        CHECK(same_bmap(compose(FR.h2, r.g), e2));
        if (r.blown_up) {
            ++blown;
            CHECK(validate_refinement(*r.S).ok);
            CHECK(r.S->source.is_smooth());
        }
        // uniqueness: maps that already factor return the same g
        auto again = factor_through(P, FR, compose(FR.h1, r.g), compose(FR.h2, r.g));
        CHECK_FALSE(again.blown_up);
        CHECK(same_bmap(again.g, r.g));
    }
    CHECK(blown > 0);
}
