#include <benchmark/benchmark.h>

#include "aversion/affect.hpp"
#include "aversion/behavior.hpp"
#include "aversion/engine.hpp"
#include "aversion/protocol.hpp"
#include "aversion/proxemics.hpp"

using namespace aversion;

namespace {

void BM_AffectStep(benchmark::State& state) {
  const auto& profile = proxemics::default_profiles().at(Relationship::Friend);
  affect::AffectState s;
  for (auto _ : state) {
    s = affect::step(s, 0.25, profile).state;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_AffectStep);

void BM_ClosedForm(benchmark::State& state) {
  std::uint64_t t = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(affect::closed_form_level(0.25, 0.7, t));
    t = t % 500 + 1;
  }
}
BENCHMARK(BM_ClosedForm);

void BM_Run(benchmark::State& state) {
  engine::ScenarioConfig cfg;
  cfg.source = sensor::SyntheticParams{sensor::Sinusoid{40.0, 35.0, 50.0}};
  cfg.max_frames = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto result = engine::run(cfg);
    benchmark::DoNotOptimize(result.events.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Run)->Arg(100)->Arg(10000);

void BM_GenerateEndurance(benchmark::State& state) {
  const auto lib = behavior::PatternLibrary::defaults();
  for (auto _ : state) {
    auto t = lib->generate_endurance(behavior::PatternKind::Jitter, 0.6);
    benchmark::DoNotOptimize(t.keyframes.data());
  }
}
BENCHMARK(BM_GenerateEndurance);

void BM_GenerateAvoidance(benchmark::State& state) {
  const auto lib = behavior::PatternLibrary::defaults();
  for (auto _ : state) {
    auto t = lib->generate_avoidance(behavior::PatternKind::Strike, 0.4);
    benchmark::DoNotOptimize(t.keyframes.data());
  }
}
BENCHMARK(BM_GenerateAvoidance);

void BM_FitWithConstraint(benchmark::State& state) {
  const proxemics::Anchor anchor[] = {{30.0, 0.56}};
  const proxemics::CrossingConstraint constraint[] = {{20.0, 0.7, 2.0, 11}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(proxemics::fit_curve(anchor, constraint));
  }
}
BENCHMARK(BM_FitWithConstraint);

void BM_EncodeTick(benchmark::State& state) {
  engine::TickEvent ev;
  ev.frame = 7;
  ev.raw_distance_cm = 30.0;
  ev.distance_cm = 30.0;
  ev.momentary = 0.25;
  ev.level = 0.76470475;
  ev.phase = affect::Phase::Avoiding;
  ev.avoidance = engine::AvoidanceRecord{behavior::PatternKind::Strike, 0.3058819};
  for (auto _ : state) {
    auto line = protocol::encode_tick(ev);
    benchmark::DoNotOptimize(line.data());
  }
}
BENCHMARK(BM_EncodeTick);

}  // namespace
BENCHMARK_MAIN();
