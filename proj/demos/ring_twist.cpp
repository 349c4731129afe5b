// Twist-loop phase of the dimerized spin ring for both dimerization signs,
// plus the finite-size trend of the deviation from pi.

#include "qberry/checks.hpp"

#include <cstdio>

using namespace qberry;

int main() {
  AdiabaticSchedule schedule;
  schedule.n_steps = 100;
  schedule.dt = 0.6;
  schedule.n_trotter = 10;

  std::printf("four-spin ring, twist loop:\n");
  std::printf("%8s %14s %14s\n", "delta", "circuit", "reference");
  for (double delta : {-0.4, -0.2, 0.2, 0.4}) {
    HeisenbergParams params;
    params.dimerization = delta;
    const Eigen::VectorXcd psi0 = ground_state(heisenberg_initial_spectral(params));
    const LoopCircuit loop = build_heisenberg_loop(params, schedule);
    const double circuit = fold_phase(std::arg(circuit_loop_amplitude(loop, psi0)));
    const double reference = fold_phase(heisenberg_reference_loop(params, schedule).phase);
    std::printf("%8.2f %14.10f %14.10f\n", delta, circuit, reference);
  }

  std::printf("\ndeviation from pi as the ring grows (delta = -0.2):\n");
  AdiabaticSchedule fs;
  fs.n_steps = 64;
  fs.dt = 2.0;
  for (int n : {4, 6, 8}) {
    HeisenbergParams params;
    params.n_spins = n;
    params.dimerization = -0.2;
    const LoopPhaseResult r = heisenberg_reference_loop(params, fs);
    std::printf("  n = %d: |pi - phase| = %.6f (fidelity %.4f)\n", n,
                std::abs(pi - fold_phase(r.phase)), r.fidelity);
  }

  HeisenbergParams params;
  params.dimerization = 0.5;
  const EnergyCheckResult energy = energy_check(params, 8, 8192, 5);
  std::printf("\nground-energy regression: estimate %.6f vs exact %.6f (%s)\n",
              energy.energy_estimate, energy.reference_energy,
              energy.passed ? "within resolution" : "OUT OF RESOLUTION");
  return 0;
}
