#include <blowkit/fiber.hpp>
#include <blowkit/verify.hpp>

#include <benchmark/benchmark.h>

using namespace bk;

namespace {

std::vector<IntVec> rows(std::initializer_list<std::initializer_list<long>> rs) {
    std::vector<IntVec> out;
    for (auto& r : rs) out.emplace_back(r.begin(), r.end());
    return out;
}

IntMat mat(std::initializer_list<std::initializer_list<long>> rs) {
    auto r = rows(rs);
    return stack(r, r[0].size());
}

std::string corner(std::size_t n) {
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(i);
    return CornerComplex::model_face_id(all);
}

}  // namespace

// the basis is cached per monoid, so construction is part of the measurement
static void BM_HilbertBasis(benchmark::State& st) {
    auto cone = rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto lattice = rows({{1, 0, 0}, {0, 1, 0}, {1, 1, st.range(0)}});
    for (auto _ : st) {
        auto s = ToricMonoid::from_lattice_cone(3, cone, lattice);
        benchmark::DoNotOptimize(s.hilbert_basis());
    }
}
BENCHMARK(BM_HilbertBasis)->Arg(3)->Arg(7)->Arg(15);

static void BM_SmithNormalForm(benchmark::State& st) {
    const long n = st.range(0);
    IntMat m(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m(i, j) = (i * 7 + j * 13) % 11 - 5;
    for (auto _ : st) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(8)->Arg(12);

static void BM_NaturalSmoothRefinement(benchmark::State& st) {
    // cone over a square, and its product with a ray
    auto sq = ToricMonoid::from_generators(3, rows({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
    auto Q = MonoidalComplex::faces_of(sq);
    for (auto _ : st) benchmark::DoNotOptimize(natural_smooth_refinement(Q));
}
BENCHMARK(BM_NaturalSmoothRefinement);

static void BM_OrdinaryBlowup(benchmark::State& st) {
    auto X = CornerComplex::model(st.range(0));
    auto F = corner(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(ordinary_blowup(X, F));
}
BENCHMARK(BM_OrdinaryBlowup)->DenseRange(2, 4);

static void BM_UniversalResolution(benchmark::State& st) {
    BinomialSystem cusp{2, 0, rows({{2, -3}}), 0};
    for (auto _ : st) benchmark::DoNotOptimize(universal_resolution(cusp));
}
BENCHMARK(BM_UniversalResolution);

static void BM_FiberResolution(benchmark::State& st) {
    auto f = monomial_map(mat({{1}, {1}}));
    FiberProblem P{f, f};
    for (auto _ : st) benchmark::DoNotOptimize(resolve_fiber_product(P));
}
BENCHMARK(BM_FiberResolution);

static void BM_VerifyTransitions(benchmark::State& st) {
    auto b = ordinary_blowup(CornerComplex::model(3), corner(3));
    auto A = local_atlas(3, localize_refinement(b.refinement, b.refinement.target.at(corner(3))));
    SamplePlan plan;
    plan.points = st.range(0);
    for (auto _ : st) benchmark::DoNotOptimize(verify_transitions(A, plan));
}
BENCHMARK(BM_VerifyTransitions)->Arg(100)->Arg(1000);
BENCHMARK_MAIN();
