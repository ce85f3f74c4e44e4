#include <doctest.h>

#include "support.hpp"

#include <blowkit/verify.hpp>

using namespace bk;
using namespace bk::test;

namespace {

MonoidRefinement at_top(const ComplexRefinement& R) {
    std::size_t top = 0;
    for (std::size_t i = 0; i < R.target.size(); ++i)
        if (R.target.monoid(i).dim() > R.target.monoid(top).dim()) top = i;
    return localize_refinement(R, top);
}

}  // namespace

TEST_CASE("sampled transitions") {
    auto id = local_atlas(3, trivial_refinement(orthant(3)));
    auto r0 = verify_transitions(id);
    CHECK(r0.ok);
    CHECK(r0.max_error == 0);

    auto A = local_atlas(2, star_subdivide(orthant(2), iv({1, 1})));
    auto r = verify_transitions(A, {200, 0.1, 10, 7, 1e-9});
    CHECK(r.ok);
    CHECK(r.samples == 2 * 2 * 200);
    CHECK(r.max_error < 1e-12);

    auto bad = A;
    bad.transitions[0].chi(0, 0) += Rat(1, 1000);
    auto rb = verify_transitions(bad);
    CHECK_FALSE(rb.ok);
    CHECK_FALSE(rb.failures.empty());
    CHECK(rb.failures[0].find("transition 0->1") != std::string::npos);

    // the same seed gives the same samples
    CHECK(verify_transitions(bad).max_error == rb.max_error);

    CHECK_THROWS_WITH_AS(verify_transitions(A, {0}), doctest::Contains("InvalidPlan"), Error);
    CHECK_THROWS_WITH_AS(verify_transitions(A, {10, -1, 10}), doctest::Contains("InvalidPlan"), Error);
    CHECK_THROWS_WITH_AS(verify_transitions(A, {10, 0.1, 10, 1, 0}), doctest::Contains("InvalidPlan"), Error);
}

TEST_CASE("sampled transitions of random atlases") {
    std::mt19937_64 rng(12);
    for (int it = 0; it < 10; ++it) {
        std::size_t n = 2 + it % 2;
        auto R = random_smooth_refinement(rng, basic_complex(CornerComplex::model(n)), 3);
        auto A = local_atlas(n, at_top(R));
        auto r = verify_transitions(A, {100, 0.1, 10, static_cast<std::uint64_t>(it), 1e-9});
        INFO(r.worst);
        CHECK(r.ok);
    }
}

TEST_CASE("sampled lifts") {
    auto A = local_atlas(2, star_subdivide(orthant(2), iv({1, 1})));
    auto diag = im({{1, 1}});
    auto L = local_lift(A, diag);
    auto r = verify_lift(diag, A.charts[L.chart].nu, L.mu);
    CHECK(r.ok);
    CHECK(r.samples == 100);
    CHECK(verify_lift(diag, A.charts[L.chart].nu, L.mu, {}, {2.0, 0.5}).ok);

    // t ↦ (t³, t²) through the resolution of the cusp
    auto res = universal_resolution({2, 0, ivs({{2, -3}}), 0});
    auto C = local_atlas(2, at_top(res.RX));
    auto cusp = im({{3, 2}});
    auto Lc = local_lift(C, cusp);
    CHECK(verify_lift(cusp, C.charts[Lc.chart].nu, Lc.mu, {300, 0.1, 10, 3, 1e-9}, {1.5, 4.0}).ok);

    CHECK_THROWS_WITH_AS(verify_lift(diag, A.charts[L.chart].nu, im({{1, 0}})), doctest::Contains("PreconditionFailed"),
                         Error);
    CHECK_THROWS_WITH_AS(verify_lift(diag, A.charts[L.chart].nu, L.mu, {}, {1.0, -1.0}),
                         doctest::Contains("PreconditionFailed"), Error);

    std::mt19937_64 rng(5);
    for (int it = 0; it < 20; ++it) {
        std::size_t n = 2 + it % 2;
        auto R = random_smooth_refinement(rng, basic_complex(CornerComplex::model(n)), 2);
        auto B = local_atlas(n, at_top(R));
        std::uniform_int_distribution<std::size_t> pick(0, B.charts.size() - 1);
        auto& c = B.charts[pick(rng)];
        auto mu = random_exponents(rng, 1 + it % 3, n, 2);
        auto rr = verify_lift(mu * c.nu, c.nu, mu, {100, 0.1, 10, static_cast<std::uint64_t>(it), 1e-9}, std::vector<double>(n, 1.7));
        INFO(rr.worst);
        CHECK(rr.ok);
    }
}
