// Serial reference vs OpenMP: chase suite and batch speed kernel.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wip/harness.hpp"
#include "wip/speed.hpp"

namespace {

std::vector<wip::ChaseJob> make_jobs(int count) {
  std::vector<wip::ChaseJob> jobs;
  for (int i = 0; i < count; ++i) {
    wip::ChaseJob job{wip::ChaseScenario{}, wip::AgentConfig{},
                      wip::WipParams(i % 2 ? wip::Variant::Gud : wip::Variant::Shef),
                      wip::ElasticRig::none()};
    job.scenario.target_speed = 0.5 + 0.25 * (i % 12);
    job.agent.noise_sd = 0.003;
    job.agent.cadence_jitter = 0.06;
    job.agent.seed = static_cast<std::uint64_t>(i);
    jobs.push_back(job);
  }
  return jobs;
}

void BM_ChaseSuiteSerial(benchmark::State& state) {
  const auto jobs = make_jobs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wip::run_chase_suite_serial(jobs));
}

void BM_ChaseSuiteParallel(benchmark::State& state) {
  const auto jobs = make_jobs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wip::run_chase_suite(jobs));
}

struct BatchInput {
  std::vector<double> f, h, sh, v;
  explicit BatchInput(std::size_t n) : f(n), h(n), sh(n), v(n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> freq(0.0, 2.2), height(1.0, 2.5), step(0.0, 0.3);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = freq(rng);
      h[i] = height(rng);
      sh[i] = step(rng);
    }
  }
};

void BM_BatchSerial(benchmark::State& state) {
  BatchInput in(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    wip::shef_speed_batch_serial(in.f, in.h, in.sh, in.v);
    benchmark::DoNotOptimize(in.v.data());
  }
}

void BM_BatchParallel(benchmark::State& state) {
  BatchInput in(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    wip::shef_speed_batch(in.f, in.h, in.sh, in.v);
    benchmark::DoNotOptimize(in.v.data());
  }
}

}  // namespace

BENCHMARK(BM_ChaseSuiteSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChaseSuiteParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_BatchParallel)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
