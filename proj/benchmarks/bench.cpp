#include <benchmark/benchmark.h>

#include "mixlink/analysis.hpp"
#include "mixlink/geometry.hpp"
#include "mixlink/harness.hpp"

using namespace mixlink;

static void BM_PartialLoss(benchmark::State& state) {
    ProperLossSpec loss = catalog_loss("square_vector", 3);
    ProbVector p({0.2, 0.3, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(loss.partial_loss(p));
}
BENCHMARK(BM_PartialLoss);

static void BM_MixabilityGrid(benchmark::State& state) {
    ProperLossSpec loss = catalog_loss("boosting", 2);
    for (auto _ : state) benchmark::DoNotOptimize(grid_mixability_estimate(loss));
}
BENCHMARK(BM_MixabilityGrid);

static void BM_NumericExpConcavity(benchmark::State& state) {
    ProperLossSpec loss = catalog_loss("square_vector", 2);
    CompositeLoss comp{loss, exp_concavifying_link(loss)};
    for (auto _ : state) benchmark::DoNotOptimize(numeric_exp_concavity(comp, 1.0));
}
BENCHMARK(BM_NumericExpConcavity)->Unit(benchmark::kMillisecond);

static void BM_LinkInvert(benchmark::State& state) {
    LinkFunction link = exp_concavifying_link(catalog_loss("boosting", 2));
    double v = link.forward(0.37);
    for (auto _ : state) benchmark::DoNotOptimize(invert_link(link, v));
}
BENCHMARK(BM_LinkInvert);

static void BM_SurrogateBuild(benchmark::State& state) {
    ProperLossSpec loss = catalog_loss("square_vector", 3);
    for (auto _ : state) benchmark::DoNotOptimize(build_surrogate(loss, 1.0, 0.05, 30));
}
BENCHMARK(BM_SurrogateBuild)->Unit(benchmark::kMillisecond);

static void BM_SurrogateSolve(benchmark::State& state) {
    SurrogateModel model = build_surrogate(catalog_loss("square_vector", 3), 1.0, 0.05, 30);
    ProbVector p({0.2, 0.3, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(surrogate_loss(model, p));
}
BENCHMARK(BM_SurrogateSolve)->Unit(benchmark::kMillisecond);

static void BM_RunGame(benchmark::State& state) {
    OutcomeSpec os;
    os.p = 0.7;
    os.T = static_cast<std::size_t>(state.range(0));
    os.seed = 1;
    std::vector<int> outcomes = generate_outcomes(os);
    ExpertPool pool = build_experts(parse_expert_setting("3"), outcomes);
    GameConfig cfg;
    cfg.loss = game_loss_from_proper(catalog_loss("square_scalar", 2));
    cfg.substitution = Substitution::inverse_loss;
    cfg.eta = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(run_game(cfg, pool, outcomes));
}
BENCHMARK(BM_RunGame)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
