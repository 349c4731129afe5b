#pragma once

#include "qberry/heisenberg.hpp"
#include "qberry/ssh.hpp"

#include <vector>

namespace qberry {

/// How the closed parameter loop is traversed in time.
///  - half_forward_half_backward: +dt for the first half of the steps, -dt for
///    the second half, so the dynamical phase cancels between mirror steps.
///  - single_direction: +dt throughout; the dynamical phase survives.
///  - double_loop: the whole loop twice, second pass with -dt; the dynamical
///    phase cancels exactly while the geometric phase doubles.
enum class LoopSplit { half_forward_half_backward, single_direction, double_loop };

/// Which discrete angle grid samples the loop. The midpoint grid pairs every
/// step with its reflection (angle <-> 2 pi - angle), which together with the
/// models' H(2 pi - angle) = conj(H(angle)) symmetry pins the
/// half-forward/half-backward loop phase to exactly {0, pi}. The endpoint grid
/// leaves the angle = pi and angle = 2 pi steps self-paired, so a residual of
/// order (E(pi) - E(0)) * dt survives.
enum class GridKind { midpoint, endpoint };

struct AdiabaticSchedule {
  int n_steps = 64;
  double dt = 1.0;
  int n_trotter = 1;
  LoopSplit split = LoopSplit::half_forward_half_backward;
};

/// One evolution step: Hamiltonian angle (momentum k or twist rho) and the
/// signed time step.
struct LoopStep {
  double angle = 0.0;
  double time_step = 0.0;
};

inline void validate_schedule(const AdiabaticSchedule& s) {
  if (s.dt <= 0.0) throw std::invalid_argument("AdiabaticSchedule: dt must be positive");
  if (s.n_trotter < 1)
    throw std::invalid_argument("AdiabaticSchedule: n_trotter must be >= 1");
  if (s.split == LoopSplit::half_forward_half_backward) {
    if (s.n_steps < 2 || s.n_steps % 2 != 0)
      throw std::invalid_argument(
          "AdiabaticSchedule: half/half split needs an even step count >= 2");
  } else if (s.n_steps < 1) {
    throw std::invalid_argument("AdiabaticSchedule: n_steps must be >= 1");
  }
}

/// Expands a schedule into the ordered step list. Angles sweep 0..2 pi once
/// (twice for double_loop, the second pass time-reversed).
inline std::vector<LoopStep> loop_steps(const AdiabaticSchedule& s, GridKind grid) {
  validate_schedule(s);
  const int n = s.n_steps;
  auto angle_of = [&](int j) {  // j = 1..n
    return grid == GridKind::midpoint ? 2.0 * pi * (j - 0.5) / n : 2.0 * pi * j / n;
  };
  std::vector<LoopStep> steps;
  switch (s.split) {
    case LoopSplit::half_forward_half_backward:
      for (int j = 1; j <= n; ++j)
        steps.push_back({angle_of(j), j <= n / 2 ? s.dt : -s.dt});
      break;
    case LoopSplit::single_direction:
      for (int j = 1; j <= n; ++j) steps.push_back({angle_of(j), s.dt});
      break;
    case LoopSplit::double_loop:
      for (int j = 1; j <= n; ++j) steps.push_back({angle_of(j), s.dt});
      for (int j = 1; j <= n; ++j) steps.push_back({angle_of(j), -s.dt});
      break;
  }
  return steps;
}

/// A compiled interferometric loop: ancilla-controlled step unitaries over a
/// register, ready for Hadamard-test or phase-estimation readout.
struct LoopCircuit {
  Circuit circuit{0};
  int n_register_wires = 0;
  int ancilla = 0;  // always the top wire
};

inline GridKind ssh_default_grid() { return GridKind::midpoint; }
inline GridKind heisenberg_default_grid() { return GridKind::endpoint; }

/// Ground state of the k = 0 Bloch Hamiltonian, the loop's initial state.
inline Eigen::Vector2cd ssh_initial_state(double v, double w) {
  return ssh_ground_state(v, w, 0.0);
}

/// Controlled momentum-space loop for the two-band chain: one wire of
/// register, one ancilla; each step is the exact 2x2 step unitary compiled
/// through the ZYZ controlled-gate network.
inline LoopCircuit build_ssh_loop(double v, double w, const AdiabaticSchedule& s,
                                  GridKind grid = ssh_default_grid()) {
  if (v < 0.0 || w <= 0.0)
    throw std::invalid_argument("build_ssh_loop: hoppings must satisfy v >= 0, w > 0");
  LoopCircuit loop;
  loop.n_register_wires = 1;
  loop.ancilla = 1;
  loop.circuit = Circuit(2);
  for (const LoopStep& step : loop_steps(s, grid))
    append_controlled_1q(loop.circuit, ssh_step_unitary(v, w, step.angle, step.time_step),
                         loop.ancilla, 0);
  return loop;
}

/// Controlled twist-angle loop for the spin ring: n_spins register wires plus
/// the ancilla; each step is a first-order product formula over the
/// twisted-bond group and the remaining bonds.
inline LoopCircuit build_heisenberg_loop(const HeisenbergParams& params,
                                         const AdiabaticSchedule& s,
                                         GridKind grid = heisenberg_default_grid()) {
  LoopCircuit loop;
  loop.n_register_wires = params.n_spins;
  loop.ancilla = params.n_spins;
  loop.circuit = Circuit(params.n_spins + 1);
  for (const LoopStep& step : loop_steps(s, grid)) {
    HeisenbergParams at_step = params;
    at_step.twist = step.angle;
    append_controlled_trotter_step(loop.circuit, heisenberg_terms(at_step), step.time_step,
                                   s.n_trotter, loop.ancilla);
  }
  return loop;
}

/// Loop amplitude <psi_init | U_loop | psi_init> evaluated by running the
/// compiled circuit with the ancilla clamped to |1> (so every controlled gate
/// fires, including its global-phase bookkeeping gates).
inline complexd circuit_loop_amplitude(const LoopCircuit& loop,
                                       const Eigen::VectorXcd& register_init) {
  const Eigen::Index sub = Eigen::Index{1} << loop.n_register_wires;
  if (register_init.size() != sub)
    throw std::invalid_argument("circuit_loop_amplitude: register size mismatch");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(sub * 2);
  amps.segment(sub, sub) = register_init;
  StateVector sv = StateVector::from_amplitudes(std::move(amps));
  run_circuit(sv, loop.circuit);
  return register_init.dot(sv.amplitudes().segment(sub, sub));
}

/// Noiseless loop-phase readout with the final-state fidelity that qualifies
/// it. phase is arg of the amplitude mapped to [0, 2 pi); fidelity is
/// |<psi_init|psi_final>|^2.
struct LoopPhaseResult {
  double phase = 0.0;
  double fidelity = 0.0;
  complexd amplitude;
};

namespace detail {

inline double wrap_to_2pi(double angle) {
  double a = std::fmod(angle, 2.0 * pi);
  if (a < 0) a += 2.0 * pi;
  return a;
}

inline LoopPhaseResult amplitude_to_result(complexd a) {
  LoopPhaseResult r;
  r.amplitude = a;
  r.fidelity = std::norm(a);
  r.phase = wrap_to_2pi(std::arg(a));
  return r;
}

}  // namespace detail

/// Folds a phase to [0, pi]: wrap to (-pi, pi], take the magnitude. The two
/// topological sectors land on 0 and pi.
inline double fold_phase(double angle) {
  double a = std::fmod(angle, 2.0 * pi);
  if (a > pi) a -= 2.0 * pi;
  if (a <= -pi) a += 2.0 * pi;
  return std::abs(a);
}

/// Reference loop phase from the exact 2x2 step unitaries (no gate
/// compilation). Never throws on poor adiabaticity; callers decide.
inline LoopPhaseResult ssh_reference_loop(double v, double w, const AdiabaticSchedule& s,
                                          GridKind grid = ssh_default_grid()) {
  Eigen::Vector2cd psi = ssh_initial_state(v, w);
  const Eigen::Vector2cd psi0 = psi;
  for (const LoopStep& step : loop_steps(s, grid))
    psi = ssh_step_unitary(v, w, step.angle, step.time_step) * psi;
  return detail::amplitude_to_result(psi0.dot(psi));
}

/// Ground state of the untwisted ring, the loop's initial state. Also reports
/// the spectral data so callers can reuse energies and degeneracy flags.
inline SpectralData heisenberg_initial_spectral(const HeisenbergParams& params) {
  HeisenbergParams p0 = params;
  p0.twist = 0.0;
  return exact_diagonalize(hamiltonian_matrix(heisenberg_terms(p0), p0.n_spins),
                           params.coupling);
}

/// Reference loop phase from exact step propagators (no Trotterization, no
/// gates). Never throws on poor adiabaticity; callers decide.
inline LoopPhaseResult heisenberg_reference_loop(const HeisenbergParams& params,
                                                 const AdiabaticSchedule& s,
                                                 GridKind grid = heisenberg_default_grid()) {
  const Eigen::VectorXcd psi0 = ground_state(heisenberg_initial_spectral(params));
  Eigen::VectorXcd psi = psi0;
  for (const LoopStep& step : loop_steps(s, grid)) {
    HeisenbergParams at_step = params;
    at_step.twist = step.angle;
    const Eigen::MatrixXcd h = hamiltonian_matrix(heisenberg_terms(at_step), params.n_spins);
    psi = (exact_propagator(h, step.time_step) * psi).eval();
  }
  return detail::amplitude_to_result(psi0.dot(psi));
}

/// Throwing wrapper: errors when the loop has drifted too far from the
/// instantaneous ground state for the phase to be trustworthy.
inline LoopPhaseResult checked_loop_phase(const LoopPhaseResult& result) {
  if (result.fidelity < 0.99)
    throw std::domain_error(
        "loop phase rejected: final-state fidelity to the initial state is below 0.99");
  return result;
}

}  // namespace qberry
