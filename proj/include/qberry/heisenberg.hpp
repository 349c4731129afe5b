#pragma once

#include "qberry/compile.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <optional>
#include <vector>

namespace qberry {

/// Dimerized spin-1/2 ring with a twist angle on one bond. Bond b couples
/// sites (b, b+1 mod n) with strength J + delta for even b and J - delta for
/// odd b; each bond contributes (J_b/4)(XX + YY + ZZ). The twisted bond
/// carries the flux insertion: its transverse part becomes
/// cos(rho)(XX + YY) + sin(rho)(YX - XY), leaving ZZ untouched.
struct HeisenbergParams {
  int n_spins = 4;
  double coupling = 1.0;       // J
  double dimerization = 0.0;   // delta
  double twist = 0.0;          // rho
  int twisted_bond = -1;       // -1 selects the wrap-around bond (n-1, 0)
  bool periodic = true;        // open chains drop the wrap-around bond
};

/// One two-site Pauli product c * sigma^{axis_a}_{wire_a} sigma^{axis_b}_{wire_b}.
struct PauliTerm {
  double coeff = 0.0;
  int wire_a = 0;
  char axis_a = 'z';
  int wire_b = 0;
  char axis_b = 'z';
};

namespace detail {

inline void validate_heisenberg(const HeisenbergParams& p) {
  if (p.n_spins < 2 || p.n_spins % 2 != 0)
    throw std::invalid_argument("HeisenbergParams: n_spins must be even and >= 2");
  if (std::abs(p.dimerization) > std::abs(p.coupling))
    throw std::invalid_argument("HeisenbergParams: |dimerization| must not exceed |coupling|");
  const int wrap = p.n_spins - 1;
  const int twisted = p.twisted_bond < 0 ? wrap : p.twisted_bond;
  if (twisted >= p.n_spins)
    throw std::invalid_argument("HeisenbergParams: twisted_bond out of range");
  if (!p.periodic && twisted == wrap && p.twist != 0.0)
    throw std::invalid_argument(
        "HeisenbergParams: open chain has no wrap-around bond to twist");
}

inline double bond_coupling(const HeisenbergParams& p, int bond) {
  return 0.25 * (p.coupling + (bond % 2 == 0 ? p.dimerization : -p.dimerization));
}

}  // namespace detail

/// Term list in the fixed evolution order: the twisted bond's five-term group
/// first (XX, YY, YX, XY, ZZ with coefficients c cos, c cos, c sin, -c sin, c),
/// then the remaining bonds ascending, (XX, YY, ZZ) each. Terms with an exactly
/// zero coefficient are dropped.
inline std::vector<PauliTerm> heisenberg_terms(const HeisenbergParams& p) {
  detail::validate_heisenberg(p);
  const int n = p.n_spins;
  const int wrap = n - 1;
  const int twisted = p.twisted_bond < 0 ? wrap : p.twisted_bond;
  std::vector<PauliTerm> terms;
  auto push = [&terms](double coeff, int i, char a, int j, char b) {
    if (coeff != 0.0) terms.push_back({coeff, i, a, j, b});
  };
  if (p.periodic || twisted != wrap) {
    const int i = twisted, j = (twisted + 1) % n;
    const double c = detail::bond_coupling(p, twisted);
    const double cc = c * std::cos(p.twist);
    const double cs = c * std::sin(p.twist);
    push(cc, i, 'x', j, 'x');
    push(cc, i, 'y', j, 'y');
    push(cs, i, 'y', j, 'x');
    push(-cs, i, 'x', j, 'y');
    push(c, i, 'z', j, 'z');
  }
  for (int b = 0; b < n; ++b) {
    if (b == twisted) continue;
    if (!p.periodic && b == wrap) continue;
    const int i = b, j = (b + 1) % n;
    const double c = detail::bond_coupling(p, b);
    push(c, i, 'x', j, 'x');
    push(c, i, 'y', j, 'y');
    push(c, i, 'z', j, 'z');
  }
  return terms;
}

namespace detail {

inline Eigen::Matrix2cd pauli_by_letter(char axis) {
  switch (axis) {
    case 'x': return mat::pauli_x();
    case 'y': return mat::pauli_y();
    case 'z': return mat::pauli_z();
  }
  throw std::logic_error("pauli_by_letter: unknown axis");
}

inline ExchangeAxis exchange_axis(char a, char b) {
  if (a == 'x' && b == 'x') return ExchangeAxis::xx;
  if (a == 'y' && b == 'y') return ExchangeAxis::yy;
  if (a == 'z' && b == 'z') return ExchangeAxis::zz;
  if (a == 'y' && b == 'x') return ExchangeAxis::yx;
  if (a == 'x' && b == 'y') return ExchangeAxis::xy;
  throw std::logic_error("exchange_axis: unsupported axis pair");
}

}  // namespace detail

/// Dense matrix of one Pauli term on an n-wire register (little-endian).
inline Eigen::MatrixXcd pauli_term_matrix(const PauliTerm& term, int n) {
  if (term.wire_a == term.wire_b || term.wire_a < 0 || term.wire_b < 0 ||
      term.wire_a >= n || term.wire_b >= n)
    throw std::invalid_argument("pauli_term_matrix: bad wire pair");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int w = 0; w < n; ++w) {
    Eigen::Matrix2cd op = Eigen::Matrix2cd::Identity();
    if (w == term.wire_a) op = detail::pauli_by_letter(term.axis_a);
    if (w == term.wire_b) op = detail::pauli_by_letter(term.axis_b);
    m = Eigen::kroneckerProduct(op, m).eval();
  }
  return term.coeff * m;
}

inline Eigen::MatrixXcd hamiltonian_matrix(const std::vector<PauliTerm>& terms, int n) {
  if (n > 12) throw std::invalid_argument("hamiltonian_matrix: register too large");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const PauliTerm& t : terms) h += pauli_term_matrix(t, n);
  return h;
}

/// Eigen-decomposition with degeneracy guards on the ground state.
struct SpectralData {
  Eigen::VectorXd energies;   // ascending
  Eigen::MatrixXcd vectors;   // columns match energies
  double gap = 0.0;           // E1 - E0
  bool near_degenerate = false;
};

/// Full diagonalization (n <= 12). A ground-state gap below 1e-10 is a hard
/// error; below 1e-3 * energy_scale it sets the near_degenerate warning flag.
inline SpectralData exact_diagonalize(const Eigen::MatrixXcd& h, double energy_scale) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("exact_diagonalize: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::domain_error("exact_diagonalize: eigensolver failed");
  SpectralData out;
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.gap = out.energies.size() > 1 ? out.energies(1) - out.energies(0) : 0.0;
  if (out.gap < 1e-10)
    throw std::domain_error("exact_diagonalize: ground state is degenerate");
  out.near_degenerate = out.gap < 1e-3 * std::abs(energy_scale);
  return out;
}

/// Ground-state column with the gauge fixed by making the largest-magnitude
/// amplitude real positive (ties broken by lowest index).
inline Eigen::VectorXcd ground_state(const SpectralData& spectral) {
  Eigen::VectorXcd psi = spectral.vectors.col(0);
  Eigen::Index best = 0;
  double best_mag = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double m = std::abs(psi(i));
    if (m > best_mag + 1e-12) {
      best_mag = m;
      best = i;
    }
  }
  const complexd ph = psi(best) / std::abs(psi(best));
  return psi / ph;
}

/// exp(-i H t) through the eigen-decomposition of H.
inline Eigen::MatrixXcd exact_propagator(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::domain_error("exact_propagator: eigensolver failed");
  const Eigen::VectorXd& e = solver.eigenvalues();
  Eigen::VectorXcd phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases(i) = std::exp(complexd(0, -e(i) * t));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Appends one first-order product-formula step for exp(-i H tau), tau =
/// time_step / n_trotter repeated n_trotter times, honoring the canonical term
/// order. Each term becomes one exchange exponential with theta = 2 c tau.
inline void append_trotter_step(Circuit& c, const std::vector<PauliTerm>& terms,
                                double time_step, int n_trotter) {
  if (n_trotter < 1)
    throw std::invalid_argument("append_trotter_step: n_trotter must be >= 1");
  const double tau = time_step / n_trotter;
  for (int slice = 0; slice < n_trotter; ++slice)
    for (const PauliTerm& t : terms)
      append_exchange(c, detail::exchange_axis(t.axis_a, t.axis_b), 2.0 * t.coeff * tau,
                      t.wire_a, t.wire_b);
}

/// Controlled variant used inside interferometric loops.
inline void append_controlled_trotter_step(Circuit& c, const std::vector<PauliTerm>& terms,
                                           double time_step, int n_trotter, int control) {
  if (n_trotter < 1)
    throw std::invalid_argument("append_controlled_trotter_step: n_trotter must be >= 1");
  const double tau = time_step / n_trotter;
  for (int slice = 0; slice < n_trotter; ++slice)
    for (const PauliTerm& t : terms)
      append_controlled_exchange(c, detail::exchange_axis(t.axis_a, t.axis_b),
                                 2.0 * t.coeff * tau, control, t.wire_a, t.wire_b);
}

}  // namespace qberry
