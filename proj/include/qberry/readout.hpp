#pragma once

#include "qberry/adiabatic.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace qberry {

/// Hadamard-test readout of a controlled loop. P(0) on the ancilla equals
/// (1 + Re<psi|U_loop|psi>)/2; the phase estimate arccos(2 p0 - 1) folds the
/// loop phase to [0, pi].
struct HadamardTestResult {
  double p0_exact = 0.0;
  double p0_sampled = 0.0;
  double phase_exact = 0.0;    // from p0_exact, in [0, pi]
  double phase_sampled = 0.0;  // from p0_sampled, in [0, pi]
  double shot_error = 0.0;     // sqrt(p0 (1 - p0) / shots), probability units
  ShotCounts counts;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double phase_from_p0(double p0) {
  return std::acos(std::clamp(2.0 * p0 - 1.0, -1.0, 1.0));
}

/// |0>_ancilla (x) register_init over the loop's wires.
inline StateVector loop_input_state(const LoopCircuit& loop,
                                    const Eigen::VectorXcd& register_init) {
  const Eigen::Index sub = Eigen::Index{1} << loop.n_register_wires;
  if (register_init.size() != sub)
    throw std::invalid_argument("loop readout: register size mismatch");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(sub * 2);
  amps.segment(0, sub) = register_init;
  return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace detail

inline HadamardTestResult hadamard_test(const LoopCircuit& loop,
                                        const Eigen::VectorXcd& register_init,
                                        std::int64_t shots, std::uint64_t seed) {
  StateVector sv = detail::loop_input_state(loop, register_init);
  sv.apply_1q(mat::hadamard(), loop.ancilla);
  run_circuit(sv, loop.circuit);
  sv.apply_1q(mat::hadamard(), loop.ancilla);

  HadamardTestResult r;
  r.shots = shots;
  r.seed = seed;
  r.p0_exact = sv.probability_zero(loop.ancilla);
  r.phase_exact = detail::phase_from_p0(r.p0_exact);
  r.counts = sv.sample_wire(loop.ancilla, shots, seed);
  r.p0_sampled = static_cast<double>(r.counts.zeros) / static_cast<double>(shots);
  r.phase_sampled = detail::phase_from_p0(r.p0_sampled);
  r.shot_error = std::sqrt(r.p0_sampled * (1.0 - r.p0_sampled) / static_cast<double>(shots));
  return r;
}

/// Directional statistics of a distribution over R-bit phase fractions.
/// phase_hat and std are fractions of a turn (divide-by-2pi convention).
struct CircularStats {
  double r_bar_magnitude = 0.0;
  double phase_hat = 0.0;    // arg(R_bar)/(2 pi) in [0, 1)
  double variance = 0.0;     // 1 - |R_bar|
  double std = 0.0;          // sqrt(-2 ln |R_bar|) / (2 pi)
  bool infinite_dispersion = false;
};

/// distribution[m] is the probability of the phase fraction m / 2^R, with m
/// holding the measured bits most-significant-first.
inline CircularStats circular_statistics(const std::vector<double>& distribution) {
  if (distribution.empty())
    throw std::invalid_argument("circular_statistics: empty distribution");
  const double n = static_cast<double>(distribution.size());
  complexd r_bar = 0.0;
  for (std::size_t m = 0; m < distribution.size(); ++m)
    r_bar += distribution[m] * std::exp(complexd(0, 2.0 * pi * static_cast<double>(m) / n));
  CircularStats s;
  s.r_bar_magnitude = std::abs(r_bar);
  s.variance = 1.0 - s.r_bar_magnitude;
  if (s.r_bar_magnitude < 1e-12) {
    s.infinite_dispersion = true;
    return s;
  }
  double frac = std::arg(r_bar) / (2.0 * pi);
  if (frac < 0) frac += 1.0;
  s.phase_hat = frac;
  s.std = std::sqrt(-2.0 * std::log(s.r_bar_magnitude)) / (2.0 * pi);
  return s;
}

/// Iterative phase estimation of the loop eigenphase. bits[i] is the i-th
/// fraction bit phi_{i+1} (most significant first); phase_estimate =
/// 2 pi * 0.phi_1...phi_R.
struct IpeaResult {
  int r_iterations = 0;
  std::vector<int> bits;
  std::vector<ShotCounts> per_iteration_counts;  // execution order k = R..1
  bool tie_warning = false;
  double phase_estimate = 0.0;  // radians in [0, 2 pi)
  std::vector<double> distribution;
  CircularStats stats;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Fills in the probability tree over all 2^R outcomes from the per-iteration
/// tallies: along the measured-majority prefix the empirical frequencies are
/// used; once an outcome leaves that prefix, later iterations contribute an
/// uninformed 1/2 per bit. counts must be in execution order (k = R down
/// to 1); bits most-significant-first as in IpeaResult.
inline std::vector<double> complete_distribution(const std::vector<ShotCounts>& counts,
                                                 const std::vector<int>& bits) {
  const int r = static_cast<int>(bits.size());
  if (counts.size() != bits.size())
    throw std::invalid_argument("complete_distribution: counts/bits length mismatch");
  if (r < 1 || r > 20)
    throw std::invalid_argument("complete_distribution: iteration count out of range");
  std::vector<double> dist(std::size_t{1} << r, 0.0);
  for (std::size_t m = 0; m < dist.size(); ++m) {
    auto bit_of = [&](int position) {  // position 1..r, 1 = most significant
      return static_cast<int>((m >> (r - position)) & 1u);
    };
    double p = 1.0;
    for (int k = r; k >= 1; --k) {
      bool on_prefix = true;
      for (int j = k + 1; j <= r; ++j)
        if (bit_of(j) != bits[j - 1]) on_prefix = false;
      if (on_prefix) {
        const ShotCounts& c = counts[r - k];  // execution order
        const double total = static_cast<double>(c.shots());
        p *= (bit_of(k) == 0 ? c.zeros : c.ones) / total;
      } else {
        p *= 0.5;
      }
    }
    dist[m] = p;
  }
  return dist;
}

/// Runs R feedback iterations: iteration k applies the controlled loop
/// 2^{k-1} times (by circuit repetition), a feedback phase
/// omega_k = -2 pi (0.0 phi_{k+1} ... phi_R) on the ancilla, and measures the
/// majority bit. Ties resolve to 0 and set tie_warning.
inline IpeaResult ipea(const LoopCircuit& loop, const Eigen::VectorXcd& register_init,
                       int r_iterations, std::int64_t shots, std::uint64_t seed) {
  if (r_iterations < 1 || r_iterations > 20)
    throw std::invalid_argument("ipea: r_iterations out of range [1, 20]");
  if (shots < 1) throw std::invalid_argument("ipea: shots must be >= 1");

  IpeaResult result;
  result.r_iterations = r_iterations;
  result.bits.assign(r_iterations, 0);
  result.shots = shots;
  result.seed = seed;
  std::mt19937_64 master(seed);

  for (int k = r_iterations; k >= 1; --k) {
    double omega = 0.0;
    for (int m = k + 1; m <= r_iterations; ++m)
      omega -= 2.0 * pi * result.bits[m - 1] * std::pow(2.0, -(m - k + 1));

    StateVector sv = detail::loop_input_state(loop, register_init);
    sv.apply_1q(mat::hadamard(), loop.ancilla);
    const std::int64_t repetitions = std::int64_t{1} << (k - 1);
    for (std::int64_t rep = 0; rep < repetitions; ++rep) run_circuit(sv, loop.circuit);
    sv.apply_1q(mat::phase(omega), loop.ancilla);
    sv.apply_1q(mat::hadamard(), loop.ancilla);

    const ShotCounts counts = sv.sample_wire(loop.ancilla, shots, master());
    result.per_iteration_counts.push_back(counts);
    if (counts.ones > counts.zeros) {
      result.bits[k - 1] = 1;
    } else {
      result.bits[k - 1] = 0;
      if (counts.ones == counts.zeros) result.tie_warning = true;
    }
  }

  double fraction = 0.0;
  for (int m = 1; m <= r_iterations; ++m)
    fraction += result.bits[m - 1] * std::pow(2.0, -m);
  result.phase_estimate = 2.0 * pi * fraction;
  result.distribution = complete_distribution(result.per_iteration_counts, result.bits);
  result.stats = circular_statistics(result.distribution);
  return result;
}

}  // namespace qberry
