#pragma once

#include "qberry/circuit.hpp"

#include <cmath>

namespace qberry {

/// Two-band dimerized-chain Bloch Hamiltonian at momentum k:
///   H(k) = [[0, v + w e^{-ik}], [v + w e^{+ik}, 0]]
/// with intracell hopping v and intercell hopping w (both >= 0).
inline Eigen::Matrix2cd ssh_hamiltonian(double v, double w, double k) {
  Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
  const complexd z = v + w * std::exp(complexd(0, k));
  h(0, 1) = std::conj(z);
  h(1, 0) = z;
  return h;
}

/// |v + w e^{ik}|; the band energies are -gap/2 and +gap/2 with gap = 2*this.
inline double ssh_band_magnitude(double v, double w, double k) {
  return std::abs(v + w * std::exp(complexd(0, k)));
}

/// Lower-band eigenstate (1, -e^{i arg(v + w e^{ik})}) / sqrt(2); the first
/// amplitude is real positive, which fixes the gauge. Errors when the gap
/// closes at this momentum.
inline Eigen::Vector2cd ssh_ground_state(double v, double w, double k) {
  const complexd z = v + w * std::exp(complexd(0, k));
  if (std::abs(z) < 1e-12)
    throw std::domain_error("ssh_ground_state: band gap closes at this momentum");
  Eigen::Vector2cd psi;
  psi << 1.0, -z / std::abs(z);
  return psi / std::numbers::sqrt2_v<double>;
}

/// Zak phase of the lower band: pi times the winding number of
/// z(k) = v + w e^{ik} around the origin, computed by accumulating the
/// argument of z along a fine momentum grid.
inline double ssh_berry_phase_analytic(double v, double w) {
  constexpr int kGridPoints = 4096;
  if (std::abs(v - w) < 1e-9)
    throw std::domain_error("ssh_berry_phase_analytic: v = w sits on the phase boundary");
  double total = 0.0;
  complexd z_prev = v + w;  // k = 0
  for (int j = 1; j <= kGridPoints; ++j) {
    const double k = 2.0 * pi * j / kGridPoints;
    const complexd z = v + w * std::exp(complexd(0, k));
    total += std::arg(z / z_prev);
    z_prev = z;
  }
  const int winding = static_cast<int>(std::lround(total / (2.0 * pi)));
  return pi * std::abs(winding);
}

/// exp(-i H(k) dt) in closed form: H is traceless with H^2 = |z|^2 I, so
/// U = cos(|z| dt) I - i sin(|z| dt) H/|z|.
inline Eigen::Matrix2cd ssh_step_unitary(double v, double w, double k, double dt) {
  const Eigen::Matrix2cd h = ssh_hamiltonian(v, w, k);
  const double m = ssh_band_magnitude(v, w, k);
  if (m < 1e-15) return Eigen::Matrix2cd::Identity();
  return std::cos(m * dt) * Eigen::Matrix2cd::Identity() -
         complexd(0, std::sin(m * dt)) * (h / m);
}

}  // namespace qberry
