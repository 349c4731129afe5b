#include "qberry/readout.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <random>

using namespace qberry;

namespace {

/// One-wire loop whose register |1> is an eigenvector with eigenphase theta.
LoopCircuit phase_loop(double theta) {
  LoopCircuit loop;
  loop.n_register_wires = 1;
  loop.ancilla = 1;
  loop.circuit = Circuit(2);
  loop.circuit.add(gate::controlled_matrix_1q(mat::phase(theta), 1, 0));
  return loop;
}

Eigen::VectorXcd register_one() {
  Eigen::VectorXcd v(2);
  v << 0.0, 1.0;
  return v;
}

}  // namespace

TEST_CASE("interference test on an empty loop") {
  LoopCircuit loop;
  loop.n_register_wires = 1;
  loop.ancilla = 1;
  loop.circuit = Circuit(2);
  Eigen::VectorXcd init(2);
  init << 1.0, 0.0;
  const HadamardTestResult r = hadamard_test(loop, init, 100, 1);
  REQUIRE(r.p0_exact == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(r.phase_exact == Catch::Approx(0.0).margin(1e-7));
  REQUIRE(r.counts.zeros == 100);
}

TEST_CASE("interference test reads a pure eigenphase") {
  const double theta = 2.2;
  const HadamardTestResult r = hadamard_test(phase_loop(theta), register_one(), 64, 3);
  REQUIRE(r.p0_exact == Catch::Approx(0.5 * (1.0 + std::cos(theta))).margin(1e-12));
  REQUIRE(r.phase_exact == Catch::Approx(theta).margin(1e-9));
}

TEST_CASE("interference test agrees with the dense loop amplitude") {
  AdiabaticSchedule s;
  s.n_steps = 8;
  s.dt = 2.0;
  const LoopCircuit loop = build_ssh_loop(0.5, 1.0, s);
  const Eigen::VectorXcd init = ssh_initial_state(0.5, 1.0);
  const HadamardTestResult r = hadamard_test(loop, init, 256, 11);
  const complexd a = ssh_reference_loop(0.5, 1.0, s).amplitude;
  REQUIRE(r.p0_exact == Catch::Approx(0.5 * (1.0 + a.real())).margin(1e-9));
}

TEST_CASE("interference test sampling behaviour") {
  const LoopCircuit loop = phase_loop(1.1);
  const Eigen::VectorXcd init = register_one();
  const HadamardTestResult a = hadamard_test(loop, init, 4096, 42);
  const HadamardTestResult b = hadamard_test(loop, init, 4096, 42);
  REQUIRE(a.counts.zeros == b.counts.zeros);  // same seed, same tallies
  REQUIRE(a.shot_error ==
          Catch::Approx(std::sqrt(a.p0_sampled * (1.0 - a.p0_sampled) / 4096.0)));
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const HadamardTestResult r = hadamard_test(loop, init, 4096, seed);
    const double sigma = std::sqrt(r.p0_exact * (1.0 - r.p0_exact) / 4096.0);
    if (std::abs(r.p0_sampled - r.p0_exact) <= 3.0 * sigma) ++within;
  }
  REQUIRE(within >= 97);
}

TEST_CASE("register state does not shift the interference signal of a det-1 loop") {
  AdiabaticSchedule s;
  s.n_steps = 8;
  s.dt = 1.3;
  const LoopCircuit loop = build_ssh_loop(1.7, 1.0, s);
  std::mt19937_64 rng(5);
  const Eigen::VectorXcd psi_a = test_helpers::random_state(2, rng);
  const Eigen::VectorXcd psi_b = test_helpers::random_state(2, rng);
  const HadamardTestResult ra = hadamard_test(loop, psi_a, 16, 1);
  const HadamardTestResult rb = hadamard_test(loop, psi_b, 16, 1);
  // each step has determinant 1, so Re<psi|U|psi> = tr(U)/2 for every psi
  REQUIRE(ra.p0_exact == Catch::Approx(rb.p0_exact).margin(1e-10));
}

TEST_CASE("iterative estimation recovers an exact 4-bit fraction") {
  const double theta = 2.0 * pi * 5.0 / 16.0;
  const IpeaResult r = ipea(phase_loop(theta), register_one(), 4, 32, 9);
  REQUIRE(r.bits == std::vector<int>{0, 1, 0, 1});
  REQUIRE(r.phase_estimate == Catch::Approx(theta).margin(1e-12));
  REQUIRE_FALSE(r.tie_warning);
  REQUIRE(r.per_iteration_counts.size() == 4);
  // exact fraction: every iteration is deterministic
  for (const ShotCounts& c : r.per_iteration_counts)
    REQUIRE((c.zeros == 32 || c.ones == 32));
}

TEST_CASE("iterative estimation rounds a non-dyadic phase to the grid") {
  const double theta = 2.0 * pi * 0.3;
  const IpeaResult r = ipea(phase_loop(theta), register_one(), 4, 8192, 17);
  REQUIRE(std::abs(r.phase_estimate - theta) <= 2.0 * pi / 16.0);
  REQUIRE(r.phase_estimate == Catch::Approx(2.0 * pi * 5.0 / 16.0).margin(1e-12));
}

TEST_CASE("iterative estimation is deterministic in the seed") {
  const LoopCircuit loop = phase_loop(0.9);
  const IpeaResult a = ipea(loop, register_one(), 3, 64, 123);
  const IpeaResult b = ipea(loop, register_one(), 3, 64, 123);
  REQUIRE(a.bits == b.bits);
  for (std::size_t i = 0; i < a.per_iteration_counts.size(); ++i)
    REQUIRE(a.per_iteration_counts[i].zeros == b.per_iteration_counts[i].zeros);
  REQUIRE(a.phase_estimate == Catch::Approx(b.phase_estimate));
}

TEST_CASE("iterative estimation flags a fair-coin tie") {
  const LoopCircuit loop = phase_loop(2.0 * pi * 0.25);  // P(0) = 1/2 at k = 1
  bool found_tie = false;
  for (std::uint64_t seed = 0; seed < 200 && !found_tie; ++seed) {
    const IpeaResult r = ipea(loop, register_one(), 1, 2, seed);
    if (r.per_iteration_counts[0].zeros == 1) {
      REQUIRE(r.tie_warning);
      REQUIRE(r.bits[0] == 0);  // ties resolve toward zero
      found_tie = true;
    }
  }
  REQUIRE(found_tie);
}

TEST_CASE("iterative estimation validates its arguments") {
  const LoopCircuit loop = phase_loop(0.4);
  REQUIRE_THROWS_AS(ipea(loop, register_one(), 0, 16, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(ipea(loop, register_one(), 21, 16, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(ipea(loop, register_one(), 4, 0, 1), std::invalid_argument);
  Eigen::VectorXcd wrong_size = Eigen::VectorXcd::Zero(4);
  REQUIRE_THROWS_AS(ipea(loop, wrong_size, 4, 16, 1), std::invalid_argument);
}

TEST_CASE("outcome tree from per-iteration tallies") {
  const std::vector<ShotCounts> counts = {
      {6953, 8192 - 6953}, {7442, 8192 - 7442}, {7614, 8192 - 7614}, {7731, 8192 - 7731}};
  const std::vector<int> bits = {0, 0, 0, 0};
  const std::vector<double> dist = complete_distribution(counts, bits);
  REQUIRE(dist.size() == 16);
  double sum = 0.0;
  for (double p : dist) sum += p;
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(dist[0] == Catch::Approx(0.676318).margin(1e-6));
  // 1110 deviates first at the phi3 iteration: f4 * (1 - f3) * (1/2)^2
  const double expected_1110 = (6953.0 / 8192.0) * (1.0 - 7442.0 / 8192.0) * 0.25;
  REQUIRE(expected_1110 == Catch::Approx(0.019426457584).margin(1e-9));
  REQUIRE(dist[14] == Catch::Approx(expected_1110).margin(1e-12));
  // marginal over the measured prefix phi4 phi3 phi2 = 000 reproduces the
  // empirical zero-frequencies of the first three iterations
  const double marginal = dist[0] + dist[8];
  const double f4 = 6953.0 / 8192.0, f3 = 7442.0 / 8192.0, f2 = 7614.0 / 8192.0;
  REQUIRE(marginal == Catch::Approx(f4 * f3 * f2).margin(1e-12));
  // the concentrated outcome keeps the circular estimate near zero (wrapped)
  const CircularStats stats = circular_statistics(dist);
  REQUIRE_FALSE(stats.infinite_dispersion);
  const double wrapped = std::min(stats.phase_hat, 1.0 - stats.phase_hat);
  REQUIRE(wrapped < 1.0 / 16.0);
  REQUIRE_THROWS_AS(complete_distribution(counts, {0, 0}), std::invalid_argument);
}

TEST_CASE("circular statistics") {
  SECTION("point mass") {
    std::vector<double> dist(16, 0.0);
    dist[4] = 1.0;
    const CircularStats s = circular_statistics(dist);
    REQUIRE(s.phase_hat == Catch::Approx(0.25));
    REQUIRE(s.std == Catch::Approx(0.0).margin(1e-7));
    REQUIRE(s.r_bar_magnitude == Catch::Approx(1.0));
    REQUIRE(s.variance == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("uniform distribution has no direction") {
    std::vector<double> dist(16, 1.0 / 16.0);
    REQUIRE(circular_statistics(dist).infinite_dispersion);
  }
  SECTION("antipodal mixture has no direction") {
    std::vector<double> dist(16, 0.0);
    dist[0] = 0.5;
    dist[8] = 0.5;
    REQUIRE(circular_statistics(dist).infinite_dispersion);
  }
  SECTION("rotation shifts the mean and keeps the spread") {
    std::vector<double> dist(16, 0.0);
    dist[2] = 0.6;
    dist[3] = 0.4;
    std::vector<double> rotated(16, 0.0);
    for (int m = 0; m < 16; ++m) rotated[(m + 5) % 16] = dist[m];
    const CircularStats a = circular_statistics(dist);
    const CircularStats b = circular_statistics(rotated);
    REQUIRE(b.r_bar_magnitude == Catch::Approx(a.r_bar_magnitude));
    REQUIRE(b.std == Catch::Approx(a.std));
    REQUIRE(b.phase_hat == Catch::Approx(std::fmod(a.phase_hat + 5.0 / 16.0, 1.0)));
  }
  SECTION("empty input is rejected") {
    REQUIRE_THROWS_AS(circular_statistics({}), std::invalid_argument);
  }
}

TEST_CASE("estimation run attaches a normalized outcome tree") {
  const IpeaResult r = ipea(phase_loop(2.0 * pi * 0.3), register_one(), 4, 512, 21);
  REQUIRE(r.distribution.size() == 16);
  double sum = 0.0;
  for (double p : r.distribution) sum += p;
  REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(r.stats.r_bar_magnitude > 0.0);
}
