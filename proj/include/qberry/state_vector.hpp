#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace qberry {

using complexd = std::complex<double>;

namespace detail {

/// Uniform double in [0, 1) with the full 53 bits of mantissa, so sampled
/// results are bit-stable across platforms for a given seed.
inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool is_power_of_two(Eigen::Index x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_exact(Eigen::Index x) {
  int k = 0;
  while ((Eigen::Index{1} << k) < x) ++k;
  return k;
}

}  // namespace detail

/// Bernoulli tallies from repeatedly sampling one wire of a fixed state.
struct ShotCounts {
  std::int64_t zeros = 0;
  std::int64_t ones = 0;
  std::int64_t shots() const { return zeros + ones; }
};

/// Dense state vector over `n_qubits` wires, little-endian: wire 0 is the
/// least significant bit of the basis index.
class StateVector {
 public:
  explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 26)
      throw std::invalid_argument("StateVector: qubit count out of range [1, 26]");
    amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    amps_(0) = 1.0;
  }

  /// Wraps explicit amplitudes; dimension must be a power of two and the
  /// vector must be normalized to 1e-6.
  static StateVector from_amplitudes(Eigen::VectorXcd amps) {
    if (!detail::is_power_of_two(amps.size()))
      throw std::invalid_argument("StateVector: dimension must be a power of two");
    const double norm = amps.norm();
    if (std::abs(norm - 1.0) > 1e-6)
      throw std::invalid_argument("StateVector: amplitudes are not normalized");
    StateVector sv(detail::log2_exact(amps.size()));
    sv.amps_ = std::move(amps);
    return sv;
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }

  /// In-place 2x2 update on one wire (stride iteration, no matrix build).
  void apply_1q(const Eigen::Matrix2cd& u, int wire) {
    check_wire(wire);
    const Eigen::Index stride = Eigen::Index{1} << wire;
    const complexd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (Eigen::Index base = 0; base < dim(); base += 2 * stride) {
      for (Eigen::Index i = base; i < base + stride; ++i) {
        const complexd a0 = amps_(i);
        const complexd a1 = amps_(i + stride);
        amps_(i) = u00 * a0 + u01 * a1;
        amps_(i + stride) = u10 * a0 + u11 * a1;
      }
    }
  }

  /// 2x2 update on `target`, active only where `control` reads 1.
  void apply_controlled_1q(const Eigen::Matrix2cd& u, int control, int target) {
    check_wire(control);
    check_wire(target);
    if (control == target)
      throw std::invalid_argument("apply_controlled_1q: control equals target");
    const Eigen::Index cbit = Eigen::Index{1} << control;
    const Eigen::Index tbit = Eigen::Index{1} << target;
    const complexd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (Eigen::Index i = 0; i < dim(); ++i) {
      if ((i & cbit) && !(i & tbit)) {
        const complexd a0 = amps_(i);
        const complexd a1 = amps_(i | tbit);
        amps_(i) = u00 * a0 + u01 * a1;
        amps_(i | tbit) = u10 * a0 + u11 * a1;
      }
    }
  }

  void apply_cnot(int control, int target) {
    check_wire(control);
    check_wire(target);
    if (control == target)
      throw std::invalid_argument("apply_cnot: control equals target");
    const Eigen::Index cbit = Eigen::Index{1} << control;
    const Eigen::Index tbit = Eigen::Index{1} << target;
    for (Eigen::Index i = 0; i < dim(); ++i)
      if ((i & cbit) && !(i & tbit)) std::swap(amps_(i), amps_(i | tbit));
  }

  /// Applies a dense 2^k x 2^k unitary to wires [0, k). Because those are the
  /// low-order bits, each block of 2^k consecutive amplitudes transforms
  /// independently.
  void apply_register_unitary(const Eigen::MatrixXcd& u) {
    const Eigen::Index block = u.rows();
    if (u.cols() != block || !detail::is_power_of_two(block) || block > dim())
      throw std::invalid_argument("apply_register_unitary: bad matrix dimension");
    for (Eigen::Index base = 0; base < dim(); base += block)
      amps_.segment(base, block) = u * amps_.segment(base, block);
  }

  /// Dense unitary on all wires except `control`, active where `control`
  /// reads 1. The matrix acts on the remaining wires in ascending order.
  void apply_controlled_register_unitary(const Eigen::MatrixXcd& u, int control) {
    check_wire(control);
    const Eigen::Index sub = dim() / 2;
    if (u.rows() != sub || u.cols() != sub)
      throw std::invalid_argument(
          "apply_controlled_register_unitary: matrix must cover all non-control wires");
    const Eigen::Index cbit = Eigen::Index{1} << control;
    const Eigen::Index low_mask = cbit - 1;
    Eigen::VectorXcd gathered(sub);
    for (Eigen::Index r = 0; r < sub; ++r) {
      const Eigen::Index i = ((r & ~low_mask) << 1) | cbit | (r & low_mask);
      gathered(r) = amps_(i);
    }
    gathered = u * gathered;
    for (Eigen::Index r = 0; r < sub; ++r) {
      const Eigen::Index i = ((r & ~low_mask) << 1) | cbit | (r & low_mask);
      amps_(i) = gathered(r);
    }
  }

  /// Probability of reading 0 on `wire` (no collapse).
  double probability_zero(int wire) const {
    check_wire(wire);
    const Eigen::Index bit = Eigen::Index{1} << wire;
    double p = 0.0;
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (!(i & bit)) p += std::norm(amps_(i));
    return p;
  }

  /// Draws `shots` independent Bernoulli samples of `wire` with
  /// P(0) = probability_zero(wire). Deterministic for a given seed; the state
  /// is not collapsed.
  ShotCounts sample_wire(int wire, std::int64_t shots, std::uint64_t seed) const {
    if (shots < 1) throw std::invalid_argument("sample_wire: shots must be >= 1");
    const double p0 = probability_zero(wire);
    std::mt19937_64 rng(seed);
    ShotCounts counts;
    for (std::int64_t s = 0; s < shots; ++s) {
      if (detail::uniform53(rng) < p0)
        ++counts.zeros;
      else
        ++counts.ones;
    }
    return counts;
  }

  double norm() const { return amps_.norm(); }

 private:
  void check_wire(int wire) const {
    if (wire < 0 || wire >= n_qubits_)
      throw std::invalid_argument("StateVector: wire index out of range");
  }

  int n_qubits_;
  Eigen::VectorXcd amps_;
};

/// <a|b> with the physics convention (conjugate the first argument).
inline complexd inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner_product: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace qberry
