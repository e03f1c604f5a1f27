#include <benchmark/benchmark.h>

#include "honeytrap/arff.hpp"
#include "honeytrap/decorate.hpp"
#include "honeytrap/eval.hpp"
#include "honeytrap/features.hpp"
#include "honeytrap/simnet.hpp"

using namespace honeytrap;

namespace {

const arff::Dataset& harvested_dataset() {
    static const arff::Dataset d = [] {
        simnet::SimConfig c;
        const auto sim = simnet::run_simulation(c);
        const auto h = simnet::harvest(sim.profiles, sim.events, c.harvest_cap, c.seed, c.control_fraction);
        std::vector<features::FeatureVector> v;
        for (const auto& p : h) {
            v.push_back(features::extract(p));
        }
        return features::project_dataset(features::build_dataset(v), features::FeatureGroup::combined());
    }();
    return d;
}

void BM_Simulate(benchmark::State& state) {
    simnet::SimConfig c;
    c.n_legitimate = state.range(0) * 2 / 3;
    c.n_spammer = state.range(0) / 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simnet::run_simulation(c));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(300)->Arg(3000)->Unit(benchmark::kMillisecond);

void BM_ArffParse(benchmark::State& state) {
    const auto text = arff::serialize(harvested_dataset());
    for (auto _ : state) {
        benchmark::DoNotOptimize(arff::parse(text));
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ArffParse);

void BM_TreeTrain(benchmark::State& state) {
    const auto& d = harvested_dataset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(decorate::DecisionTree::train(d));
    }
}
BENCHMARK(BM_TreeTrain)->Unit(benchmark::kMicrosecond);

void BM_Decorate(benchmark::State& state) {
    const auto& d = harvested_dataset();
    decorate::DecorateParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(decorate::train_decorate(d, p));
    }
}
BENCHMARK(BM_Decorate)->Unit(benchmark::kMillisecond);

void BM_CrossValidate(benchmark::State& state) {
    const auto& d = harvested_dataset();
    const decorate::DecorateParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval::cross_validate(d, p, 10, 42, "mal", static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_CrossValidate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
