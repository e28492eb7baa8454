#include <doctest.h>

#include <random>

#include "wip/harness.hpp"
#include "wip/speed.hpp"

using namespace wip;

TEST_CASE("parallel chase suite equals the serial reference") {
  std::vector<ChaseJob> jobs;
  for (int i = 0; i < 12; ++i) {
    ChaseJob job{ChaseScenario{}, AgentConfig{}, WipParams(i % 2 ? Variant::Gud : Variant::Shef),
                 i % 3 == 0 ? ElasticRig::parse("down:4") : ElasticRig::none()};
    job.scenario.target_speed = 0.5 + 0.3 * i;
    job.agent.noise_sd = 0.003;
    job.agent.cadence_jitter = 0.06;
    job.agent.seed = static_cast<std::uint64_t>(100 + i);
    jobs.push_back(job);
  }
  const auto parallel = run_chase_suite(jobs);
  const auto serial = run_chase_suite_serial(jobs);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(parallel[i] == serial[i]);
}

TEST_CASE("suite reports a failing job") {
  std::vector<ChaseJob> jobs(3);
  jobs[1].scenario.timestep = -1.0;
  CHECK_THROWS_AS(run_chase_suite(jobs), Error);
}

TEST_CASE("parallel batch kernel equals the serial reference") {
  constexpr std::size_t n = 100000;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> f(0.0, 3.0), h(1.0, 2.5), sh(0.0, 0.35);
  std::vector<double> fv(n), hv(n), shv(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    fv[i] = f(rng);
    hv[i] = h(rng);
    shv[i] = sh(rng);
  }
  shef_speed_batch(fv, hv, shv, a);
  shef_speed_batch_serial(fv, hv, shv, b);
  CHECK(a == b);

  std::vector<double> short_out(n - 1);
  CHECK_THROWS_AS(shef_speed_batch(fv, hv, shv, short_out), Error);
}
