#include "doctest.h"
#include "support.hpp"

#include <blowkit/complex.hpp>

using namespace bk;
using namespace bk::test;

namespace {

ToricMonoid ray(std::initializer_list<long> v) { return ToricMonoid::from_generators(v.size(), {iv(v)}); }
ToricMonoid fig1() { return ToricMonoid::from_generators(2, ivs({{2, 0}, {1, 1}, {0, 2}})); }
ToricMonoid square_cone() {
    return ToricMonoid::from_generators(3, ivs({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
}

// Images of the maximal elements of a refinement inside the target monoids.
std::set<ToricMonoid> maximal_images(const ComplexRefinement& f) {
    std::set<ToricMonoid> out;
    for (auto x : f.source.maximal()) out.insert(f.source.monoid(x).image(f.hom[x]));
    return out;
}

MonoidalComplex football() {
    auto z2 = orthant(2);
    IntMat I = IntMat::identity(2);
    return MonoidalComplex({{"0", ToricMonoid::trivial(2)},
                            {"a", ray({1, 0})},
                            {"b", ray({0, 1})},
                            {"c", z2},
                            {"d", z2}},
                           {{"0", "a", I}, {"0", "b", I}, {"a", "c", I}, {"a", "d", I}, {"b", "c", I}, {"b", "d", I}});
}

void require_valid(const ComplexRefinement& f) {
    auto c = validate_complex(f.source);
    INFO(c.violated, ": ", c.detail);
    REQUIRE(c.ok);
    auto r = validate_refinement(f);
    INFO(r.violated, ": ", r.detail);
    REQUIRE(r.ok);
}

std::string top_id(const MonoidalComplex& Q) { return Q.id(Q.maximal().front()); }

}  // namespace

TEST_CASE("complex validation") {
    auto sq = MonoidalComplex::faces_of(square_cone());
    CHECK(sq.size() == 10);
    CHECK(validate_complex(sq).ok);
    CHECK(validate_complex(MonoidalComplex::faces_of(fig1())).ok);
    CHECK(validate_complex(MonoidalComplex()).ok);

    auto fb = football();
    CHECK(validate_complex(fb).ok);
    CHECK(fb.maximal().size() == 2);
    // as a would-be refinement of ℤ₊² both 2-cells land on the same monoid
    auto Q = MonoidalComplex::faces_of(orthant(2));
    ComplexMorphism f{fb, Q, {}, {}};
    for (std::size_t i = 0; i < fb.size(); ++i) {
        f.map.push_back(Q.size());
        for (std::size_t j = 0; j < Q.size(); ++j)
            if (Q.monoid(j) == fb.monoid(i)) f.map.back() = j;
        f.hom.push_back(IntMat::identity(2));
    }
    CHECK(validate_morphism(f).ok);
    auto rf = validate_refinement(f);
    CHECK_FALSE(rf.ok);
    CHECK(rf.violated == "disjoint");

    IntMat I = IntMat::identity(2);
    MonoidalComplex missing({{"0", ToricMonoid::trivial(2)}, {"a", ray({1, 0})}, {"c", orthant(2)}},
                            {{"0", "a", I}, {"a", "c", I}});
    auto m = validate_complex(missing);
    CHECK_FALSE(m.ok);
    CHECK(m.violated == "complete");
    CHECK(m.witness == iv({0, 1}));

    MonoidalComplex doubled({{"0", ToricMonoid::trivial(2)}, {"a", ray({1, 0})}, {"a2", ray({1, 0})},
                             {"b", ray({0, 1})}, {"c", orthant(2)}},
                            {{"0", "a", I}, {"0", "a2", I}, {"0", "b", I}, {"a", "c", I}, {"a2", "c", I}, {"b", "c", I}});
    auto d = validate_complex(doubled);
    CHECK_FALSE(d.ok);
    CHECK(d.violated == "reduced");

    // ℤ₊ placed on both axes of ℤ₊² by two different face maps
    MonoidalComplex twice({{"r", orthant(1)}, {"s", orthant(2)}},
                          {{"r", "s", im({{1, 0}})}, {"r", "s", im({{0, 1}})}});
    CHECK(validate_complex(twice).violated == "functoriality");

    MonoidalComplex notface({{"0", ToricMonoid::trivial(2)}, {"r", ray({1, 1})}, {"c", orthant(2)}},
                            {{"0", "r", I}, {"r", "c", I}});
    CHECK(validate_complex(notface).violated == "face-map");

    CHECK_THROWS_AS(MonoidalComplex({{"x", orthant(1)}, {"x", orthant(1)}}, {}), Error);
}

TEST_CASE("subcomplexes") {
    auto Q = MonoidalComplex::faces_of(orthant(3));
    auto ids = closure(Q, {"{0,1}"});
    CHECK(ids == std::vector<std::string>{"{0,1}", "{0}", "{1}", "{}"});
    auto s = subcomplex(Q, ids);
    CHECK(validate_complex(s.complex).ok);
    CHECK(validate_morphism(s.inclusion).ok);
    CHECK(validate_refinement(s.inclusion).ok == false);  // does not cover
    CHECK_THROWS_WITH_AS(subcomplex(Q, {"{0,1,2}"}), doctest::Contains("lies below"), Error);

    auto fb = football();
    CHECK_THROWS_AS(subcomplex(fb, {"a", "c"}), Error);
    auto fb0 = subcomplex(fb, closure(fb, {"c"})).complex;
    CHECK(fb0.size() == 4);
    CHECK(validate_complex(fb0).ok);
}

TEST_CASE("local refinements and assembly") {
    auto z2 = orthant(2);
    auto Q = MonoidalComplex::faces_of(z2);
    auto T = trivial_refinement(Q);
    CHECK(T.source == Q);
    require_valid(T);

    auto S = star_subdivide_complex(Q, top_id(Q), iv({1, 1}));
    require_valid(S);
    CHECK(S.source.size() == 6);
    CHECK(S.source.is_smooth());
    CHECK(localize_refinement(S, Q.at(top_id(Q))) == star_subdivide(z2, iv({1, 1})));
    CHECK(localize_refinement(S, Q.at("{0}")) == trivial_refinement(Q.monoid(Q.at("{0}"))));
    CHECK(maximal_images(S) == std::set<ToricMonoid>{ToricMonoid::free(2, ivs({{1, 0}, {1, 1}})),
                                                    ToricMonoid::free(2, ivs({{1, 1}, {0, 1}}))});
    // round trip through the local description
    std::vector<MonoidRefinement> loc;
    for (std::size_t c = 0; c < Q.size(); ++c) loc.push_back(localize_refinement(S, c));
    auto again = assemble_from_local(Q, loc);
    CHECK(again.source == S.source);
    CHECK(again.map == S.map);

    // 2ℤ₊ on one ray does not match the top cell's trivial refinement
    std::vector<MonoidRefinement> bad;
    for (std::size_t c = 0; c < Q.size(); ++c) bad.push_back(trivial_refinement(Q.monoid(c)));
    std::size_t e1 = Q.at("{1}");
    REQUIRE(Q.monoid(e1) == ray({1, 0}));
    bad[e1] = star_subdivide(Q.monoid(e1), iv({2, 0}));
    CHECK_THROWS_WITH_AS(assemble_from_local(Q, bad), doctest::Contains("differs"), Error);

    // v extremal changes nothing
    CHECK(star_subdivide_complex(Q, top_id(Q), iv({1, 0})).source == Q);
    CHECK_THROWS_AS(star_subdivide_complex(Q, "{0}", iv({1, 0})), Error);

    // only elements above the subdivided one change
    auto fb = football();
    auto Sf = star_subdivide_complex(fb, "c", iv({1, 1}));
    require_valid(Sf);
    CHECK(Sf.source.find("d"));
    CHECK_FALSE(Sf.source.find("c"));
    CHECK(Sf.source.find("c/0"));
    CHECK(Sf.source.size() == 7);
}

TEST_CASE("smoothing complexes") {
    auto Q = MonoidalComplex::faces_of(fig1());
    auto S = smooth_complex(Q);
    require_valid(S);
    CHECK(S.source.size() == Q.size());
    CHECK(S.source.is_smooth());
    auto top = Q.at(top_id(Q));
    for (std::size_t i = 0; i < Q.size(); ++i) {
        CHECK(S.source.id(i) == Q.id(i));
        if (i == top)
            CHECK(S.source.monoid(i) == ToricMonoid::free(2, ivs({{2, 0}, {0, 2}})));
        else
            CHECK(S.source.monoid(i) == Q.monoid(i));
    }
    auto z3 = MonoidalComplex::faces_of(orthant(3));
    CHECK(smooth_complex(z3).source == z3);
    CHECK_THROWS_AS(smooth_complex(MonoidalComplex::faces_of(square_cone())), Error);
}

TEST_CASE("products and fiber products") {
    auto Q = MonoidalComplex::faces_of(fig1());
    auto P = product(Q, MonoidalComplex::point());
    CHECK(validate_complex(P.complex).ok);
    CHECK(P.complex.size() == Q.size());
    for (std::size_t i = 0; i < P.complex.size(); ++i)
        CHECK(P.complex.monoid(i).image(P.proj1.hom[i]) == Q.monoid(P.proj1.map[i]));
    CHECK(validate_morphism(P.proj1).ok);

    auto z1 = MonoidalComplex::faces_of(orthant(1));
    auto P2 = product(z1, z1);
    CHECK(validate_complex(P2.complex).ok);
    CHECK(P2.complex.size() == 4);
    CHECK(P2.complex.monoid(P2.complex.at("({0},{0})")) == orthant(2));
    CHECK(product(MonoidalComplex(), z1).complex.empty());

    auto z2 = MonoidalComplex::faces_of(orthant(2));
    auto T = trivial_refinement(z2);
    auto TT = fiber_product_complex(T, T);
    CHECK(TT.complex.size() == z2.size());
    require_valid(canonicalize(compose(T, TT.proj1)));
    CHECK(canonicalize(compose(T, TT.proj1)).source == z2);

    // the intersection complex of two star subdivisions: rays (1,0),(2,1),(1,1),(0,1).
    // Cones from S2 next to (0,1) carry the lattice ℤ(0,1) + ℤ(2,1), which the
    // intersections inherit.
    auto top = top_id(z2);
    auto S1 = star_subdivide_complex(z2, top, iv({1, 1}));
    auto S2 = star_subdivide_complex(z2, top, iv({2, 1}));
    auto F = fiber_product_complex(S1, S2);
    CHECK(validate_complex(F.complex).ok);
    auto to_q = compose(S1, F.proj1);
    require_valid(to_q);
    CHECK(validate_refinement(F.proj1).ok);
    CHECK(validate_refinement(F.proj2).ok);
    auto L2 = ivs({{2, 0}, {0, 1}});
    CHECK(maximal_images(to_q) == std::set<ToricMonoid>{ToricMonoid::free(2, ivs({{1, 0}, {2, 1}})),
                                                       ToricMonoid::from_lattice_cone(2, L2, ivs({{2, 1}, {1, 1}})),
                                                       ToricMonoid::from_lattice_cone(2, L2, ivs({{1, 1}, {0, 1}}))});
}

TEST_CASE("pullback of refinements") {
    auto Q = MonoidalComplex::faces_of(orthant(3));
    auto top = top_id(Q);
    // extremals are lexicographic, so {1,2} is the face ⟨e2,e1⟩
    auto R = star_subdivide_complex(Q, "{1,2}", iv({1, 1, 0}));
    require_valid(R);
    CHECK(pullback_refinement(R, identity_morphism(Q)).source == R.source);
    CHECK(pullback_refinement(trivial_refinement(Q), identity_morphism(Q)).source == Q);

    auto face = subcomplex(Q, closure(Q, {"{1,2}"}));
    auto pb = pullback_refinement(R, face.inclusion);
    require_valid(pb);
    std::size_t f = face.complex.at("{1,2}");
    CHECK(localize_refinement(pb, f) == localize_refinement(R, Q.at("{1,2}")));
    auto other = subcomplex(Q, closure(Q, {"{0,1}"}));
    CHECK(pullback_refinement(R, other.inclusion).source == other.complex);
    (void)top;
}

TEST_CASE("non-simplicial dimension") {
    CHECK(nsdim(orthant(3)) == 0);
    CHECK(nsdim(fig1()) == 0);
    CHECK(nsdim(square_cone()) == 3);
    CHECK(is_fully_nonsimplicial(square_cone()));
    auto sqx = ToricMonoid::from_generators(
        4, ivs({{0, 0, 1, 0}, {1, 0, 1, 0}, {0, 1, 1, 0}, {1, 1, 1, 0}, {0, 0, 0, 1}}));
    CHECK(sqx.extremals().size() == 5);
    CHECK(nsdim(sqx) == 3);
    CHECK_FALSE(is_fully_nonsimplicial(sqx));
    CHECK(nsdim(ToricMonoid()) == 0);
}

TEST_CASE("natural smooth refinement") {
    auto z3 = MonoidalComplex::faces_of(orthant(3));
    CHECK(natural_smooth_refinement(z3).source == z3);

    auto Q = MonoidalComplex::faces_of(square_cone());
    std::vector<NsStep> trace;
    auto ns = natural_smooth_refinement(Q, &trace);
    require_valid(ns);
    CHECK(ns.source.is_smooth());
    CHECK(trace.size() == 1);
    CHECK(trace[0].k == 3);
    CHECK(trace[0].mk_after < trace[0].mk_before);
    CHECK(maximal_images(ns).size() == 4);
    CHECK(natural_smooth_refinement(ns.source).source == ns.source);

    auto F = MonoidalComplex::faces_of(fig1());
    CHECK(natural_smooth_refinement(F).source == smooth_complex(F).source);
}

TEST_CASE("extension of refinements") {
    auto Q = MonoidalComplex::faces_of(orthant(3));
    auto R = star_subdivide_complex(Q, "{0,1,2}", iv({1, 1, 1}));
    CHECK(extend_refinement(Q, R, false).source == R.source);
    CHECK(extend_refinement(Q, trivial_refinement(Q), false).source == Q);

    // subdivide a boundary 2-face and extend into the corner
    auto Q0 = subcomplex(Q, closure(Q, {"{0,1}"})).complex;
    auto R0 = star_subdivide_complex(Q0, "{0,1}", iv({0, 1, 1}));
    std::vector<ExtendRound> trace;
    auto E = extend_refinement(Q, R0, false, &trace);
    require_valid(E);
    CHECK(E.source.is_smooth());
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].d == 3);
    auto back = restrict_refinement(E, closure(Q, {"{0,1}"}));
    CHECK(back.source == R0.source);
    CHECK(localize_refinement(E, Q.at("{0,1,2}")).members.size() > trivial_refinement(orthant(3)).members.size());

    // 2ℤ₊ on the ray e1 of ℤ₊²
    auto Z = MonoidalComplex::faces_of(orthant(2));
    auto Z0 = subcomplex(Z, {"{1}", "{}"}).complex;
    REQUIRE(Z0.monoid(Z0.at("{1}")) == ray({1, 0}));
    std::vector<MonoidRefinement> loc{trivial_refinement(Z0.monoid(0)), trivial_refinement(Z0.monoid(1))};
    loc[Z0.at("{1}")] = star_subdivide(Z0.monoid(Z0.at("{1}")), iv({2, 0}));
    auto R2 = assemble_from_local(Z0, loc);
    auto E2 = extend_refinement(Z, R2, false);
    require_valid(E2);
    CHECK(restrict_refinement(E2, {"{1}", "{}"}).source == R2.source);
    auto E3 = extend_refinement(Z, R2, true);
    require_valid(E3);
    CHECK(E3.source.is_smooth());
    CHECK(restrict_refinement(E3, {"{1}", "{}"}).source == R2.source);
}

TEST_CASE("mutual smooth refinement") {
    auto z2 = MonoidalComplex::faces_of(orthant(2));
    auto top = top_id(z2);
    auto S1 = star_subdivide_complex(z2, top, iv({1, 1}));
    auto S2 = star_subdivide_complex(z2, top, iv({1, 2}));
    auto M = mutual_smooth_refinement(S1, S2);
    require_valid(M.to_base);
    CHECK(M.to_base.source.is_smooth());
    CHECK(maximal_images(M.to_base).size() == 3);
    CHECK(validate_refinement(M.to_r1).ok);
    CHECK(validate_refinement(M.to_r2).ok);
    CHECK(mutual_smooth_refinement(S1, S1).to_base.source == S1.source);
    CHECK(mutual_smooth_refinement(S1, trivial_refinement(z2)).to_base.source == S1.source);
}

TEST_CASE("planar refinement of complexes") {
    auto P = MonoidalComplex::faces_of(orthant(2));
    auto top = top_id(P);
    // Q is the diagonal ray with its vertex
    MonoidalComplex Q({{"o", ToricMonoid::trivial(2)}, {"m", ray({1, 1})}}, {{"o", "m", IntMat::identity(2)}});
    // elements sorted by id: m, o
    ComplexMorphism i{Q, P, {P.at(top), P.at("{}")}, {IntMat::identity(2), IntMat::identity(2)}};
    auto vi = validate_morphism(i);
    INFO(vi.detail);
    CHECK(vi.ok);
    auto S = planar_refine_complex(i);
    require_valid(S);
    CHECK(S.source == star_subdivide_complex(P, top, iv({1, 1})).source);

    ComplexMorphism none{MonoidalComplex(), P, {}, {}};
    CHECK(planar_refine_complex(none).source == P);
    auto all = identity_morphism(P);
    CHECK(planar_refine_complex(all).source == P);

    ComplexMorphism twice{Q, P, {P.at(top), P.at(top)}, {IntMat::identity(2), IntMat::identity(2)}};
    CHECK_THROWS_AS(planar_refine_complex(twice), Error);
    MonoidalComplex half({{"o", ToricMonoid::trivial(2)}, {"m", ToricMonoid::from_generators(2, {iv({2, 2})})}},
                         {{"o", "m", IntMat::identity(2)}});
    ComplexMorphism coarse{half, P, {P.at(top), P.at("{}")}, {IntMat::identity(2), IntMat::identity(2)}};
    CHECK_THROWS_WITH_AS(planar_refine_complex(coarse), doctest::Contains("subspace"), Error);
}

TEST_CASE("natural smooth refinement on random complexes") {
    std::mt19937_64 rng(2024);
    int nonsimplicial = 0;
    for (int t = 0; t < 20; ++t) {
        auto Q = random_complex(rng);
        INFO("trial ", t, " ", Q.describe());
        REQUIRE(validate_complex(Q).ok);
        nonsimplicial += !Q.is_simplicial();
        auto ns = natural_smooth_refinement(Q);
        require_valid(ns);
        CHECK(ns.source.is_smooth());
        CHECK(natural_smooth_refinement(ns.source).source == ns.source);
        auto ids = random_closed_subset(rng, Q);
        auto Q0 = subcomplex(Q, ids).complex;
        auto lhs = restrict_refinement(ns, ids);
        auto rhs = natural_smooth_refinement(Q0);
        CHECK(lhs.source == rhs.source);
    }
    CHECK(nonsimplicial >= 5);
}

TEST_CASE("extension on random complexes") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 12; ++t) {
        auto Q = random_complex(rng);
        auto ids = random_closed_subset(rng, Q);
        auto Q0 = subcomplex(Q, ids).complex;
        // a star subdivision of Q0 at a random point of one of its cells
        auto top = Q0.maximal().front();
        IntVec v = random_support_point(rng, Q0.monoid(top), 2);
        auto R0 = is_zero(v) ? trivial_refinement(Q0) : star_subdivide_complex(Q0, Q0.id(top), v);
        INFO("trial ", t);
        std::vector<ExtendRound> trace;
        auto E = extend_refinement(Q, R0, false, &trace);
        require_valid(E);
        CHECK(restrict_refinement(E, ids).source == R0.source);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].d > trace[i - 1].d);
        if (R0.source.is_smooth()) {
            auto Es = extend_refinement(Q, R0, true);
            require_valid(Es);
            CHECK(Es.source.is_smooth());
            CHECK(restrict_refinement(Es, ids).source == R0.source);
        }
    }
}
