#pragma once

#include "qberry/readout.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace qberry {

/// One sampled point of the energy regression.
struct EnergyPoint {
  double t = 0.0;
  double phase_fraction = 0.0;   // raw IPEA estimate in [0, 1)
  double phase_unwrapped = 0.0;  // radians, continuous across the grid
};

/// Result of estimating the ground-state energy from the slope of the
/// propagator eigenphase over a time grid.
struct EnergyCheckResult {
  std::vector<EnergyPoint> points;
  double slope = 0.0;            // d(theta)/dt from the least-squares fit
  double energy_estimate = 0.0;  // -slope
  double reference_energy = 0.0; // from exact diagonalization
  double standard_error = 0.0;   // of the slope estimate
  double resolution_bound = 0.0; // 2 pi 2^{-R} / t_max
  bool passed = false;           // |estimate - reference| <= SE + resolution bound
};

namespace detail {

/// Least-squares line fit y = a + b x; returns (b, SE_b). SE_b is 0 for a
/// two-point fit (no residual degrees of freedom).
inline std::pair<double, double> fit_slope(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double b = sxy / sxx;
  if (n <= 2) return {b, 0.0};
  const double a = my - b * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (a + b * x[i]);
    ss_res += r * r;
  }
  const double se = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
  return {b, se};
}

}  // namespace detail

/// Estimates the ground-state energy of the (untwisted unless configured)
/// ring by running IPEA on the controlled exact propagator exp(-i H t) over a
/// time grid, unwrapping the phases, and fitting the slope: theta(t) = -E t.
/// The register is initialized through the compiled state-preparation circuit
/// for the diagonalized ground state. With an empty t_grid an 8-point grid is
/// chosen so that |E_ref| * t_max ~ pi/2 (no phase wrapping).
inline EnergyCheckResult energy_check(const HeisenbergParams& params, int r_iterations,
                                      std::int64_t shots, std::uint64_t seed,
                                      std::vector<double> t_grid = {}) {
  const int n = params.n_spins;
  const SpectralData spectral =
      exact_diagonalize(hamiltonian_matrix(heisenberg_terms(params), n), params.coupling);
  const Eigen::VectorXcd gs = ground_state(spectral);
  const double e_ref = spectral.energies(0);

  if (t_grid.empty()) {
    const double t_max = 0.5 * pi / std::max(std::abs(e_ref), 1e-6);
    for (int i = 1; i <= 8; ++i) t_grid.push_back(t_max * i / 8.0);
  }
  if (t_grid.size() < 2)
    throw std::invalid_argument("energy_check: need at least two time points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw std::invalid_argument("energy_check: t_grid must be positive and ascending");
    const double step = i == 0 ? t_grid[0] : t_grid[i] - t_grid[i - 1];
    if (std::abs(e_ref) * step > pi)
      throw std::invalid_argument("energy_check: t_grid too coarse for |E|, phase aliases");
  }

  // Initialize the register through the compiled preparation circuit.
  const PrepReport prep = prepare_state(gs);
  StateVector reg(n);
  run_circuit(reg, prep.circuit);
  const Eigen::VectorXcd register_init = reg.amplitudes();

  const Eigen::MatrixXcd h = hamiltonian_matrix(heisenberg_terms(params), n);
  EnergyCheckResult result;
  result.reference_energy = e_ref;
  std::mt19937_64 master(seed);
  double previous = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    LoopCircuit lc;
    lc.n_register_wires = n;
    lc.ancilla = n;
    lc.circuit = Circuit(n + 1);
    lc.circuit.add(gate::controlled_register_unitary(exact_propagator(h, t_grid[i]), n));
    const IpeaResult est = ipea(lc, register_init, r_iterations, shots, master());

    EnergyPoint point;
    point.t = t_grid[i];
    point.phase_fraction = est.phase_estimate / (2.0 * pi);
    double theta = est.phase_estimate;  // [0, 2 pi)
    if (i == 0) {
      if (theta > pi) theta -= 2.0 * pi;  // map the first point to (-pi, pi]
    } else {
      while (theta - previous > pi) theta -= 2.0 * pi;
      while (theta - previous < -pi) theta += 2.0 * pi;
    }
    point.phase_unwrapped = theta;
    previous = theta;
    result.points.push_back(point);
  }

  std::vector<double> ts, thetas;
  for (const EnergyPoint& p : result.points) {
    ts.push_back(p.t);
    thetas.push_back(p.phase_unwrapped);
  }
  const auto [slope, se] = detail::fit_slope(ts, thetas);
  result.slope = slope;
  result.energy_estimate = -slope;
  result.standard_error = se;
  result.resolution_bound =
      2.0 * pi * std::pow(2.0, -r_iterations) / t_grid.back();
  result.passed = std::abs(result.energy_estimate - result.reference_energy) <=
                  result.standard_error + result.resolution_bound;
  return result;
}

/// Parity fan-in over a register state.
struct ParityCheckResult {
  double p_zero_exact = 0.0;  // probability the ancilla reads 0 (even parity)
  ShotCounts counts;
  int expected_bit = 0;       // (1 - (-1)^{n_up}) / 2 for the dominant basis state
  int measured_bit = 0;       // majority of the sampled ancilla
  bool definite = false;      // register has definite parity to 1e-9
  bool passed = false;
};

/// CNOTs every register wire into a fresh ancilla and samples it: the ancilla
/// reads the total-occupation parity, which the ring Hamiltonian conserves.
inline ParityCheckResult parity_check(const Eigen::VectorXcd& register_init,
                                      std::int64_t shots, std::uint64_t seed) {
  if (!detail::is_power_of_two(register_init.size()))
    throw std::invalid_argument("parity_check: register dimension must be a power of two");
  const int n = detail::log2_exact(register_init.size());
  const Eigen::Index sub = register_init.size();

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(sub * 2);
  amps.segment(0, sub) = register_init;
  StateVector sv = StateVector::from_amplitudes(std::move(amps));
  for (int w = 0; w < n; ++w) sv.apply_cnot(w, n);

  ParityCheckResult r;
  r.p_zero_exact = sv.probability_zero(n);
  r.counts = sv.sample_wire(n, shots, seed);
  r.measured_bit = r.counts.ones > r.counts.zeros ? 1 : 0;
  r.definite = std::min(r.p_zero_exact, 1.0 - r.p_zero_exact) < 1e-9;

  Eigen::Index dominant = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < sub; ++i) {
    const double m = std::abs(register_init(i));
    if (m > best + 1e-12) {
      best = m;
      dominant = i;
    }
  }
  const int n_up = std::popcount(static_cast<std::uint64_t>(dominant));
  r.expected_bit = n_up % 2;
  r.passed = r.measured_bit == r.expected_bit;
  return r;
}

}  // namespace qberry
