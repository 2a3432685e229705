// Shared fixtures and test-only oracles.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qmarg/classical.hpp"
#include "qmarg/state.hpp"

namespace qmarg::testing {

inline PureState ghz(Complex a = std::sqrt(0.5), Complex b = std::sqrt(0.5)) {
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = a;
  v(7) = b;
  return PureState::normalized({2, 2, 2}, v);
}

/// a|000> + b|001> + c|010> + d|100> + e|111>, normalized.
inline PureState canonical_five(Complex a, Complex b, Complex c, Complex d, Complex e) {
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = a;
  v(1) = b;
  v(2) = c;
  v(4) = d;
  v(7) = e;
  return PureState::normalized({2, 2, 2}, v);
}

inline PureState generic_five() { return canonical_five(1, 2, 3, 4, 5); }

inline PureState bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return PureState({2, 2}, v);
}

inline DensityMatrix singlet() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = std::sqrt(0.5);
  v(2) = -std::sqrt(0.5);
  return density_from_pure(PureState({2, 2}, v));
}

inline std::vector<ComplexMatrix> local_unitaries(std::size_t n, Rng& rng) {
  std::vector<ComplexMatrix> us;
  for (std::size_t i = 0; i < n; ++i) us.push_back(haar_unitary(2, rng));
  return us;
}

/// Partial trace by explicit contraction with basis vectors of the traced
/// factors: Σ_t (1 ⊗ <t|) X (1 ⊗ |t>), with the traced factors permuted last.
/// Independent of the index-table implementation.
inline ComplexMatrix reference_partial_trace(const ComplexMatrix& op, const Dims& dims,
                                             const Subsystems& keep) {
  Subsystems order = keep;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) order.push_back(i);
  const ComplexMatrix moved = permute_subsystems(op, dims, order);
  std::size_t kept = 1;
  for (std::size_t s : keep) kept *= dims[s];
  const std::size_t traced = total_dim(dims) / kept;
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (std::size_t t = 0; t < traced; ++t) {
    ComplexVector e = ComplexVector::Zero(traced);
    e(t) = 1.0;
    const ComplexMatrix proj = kron(ComplexMatrix::Identity(kept, kept), ComplexMatrix(e));
    out += proj.adjoint() * moved * proj;
  }
  return out;
}

/// Entropy by diagonalizing with an independent route (complex Schur form).
inline double reference_entropy_bits(const ComplexMatrix& rho) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()(i).real();
    if (l > 1e-12) s -= l * std::log2(l);
  }
  return s;
}

/// Three-bit distribution whose entries are multiples of 2^-20, so sums and
/// differences of entries and grid-aligned shifts are exact in double.
inline constexpr double kDyadicUnit = 1.0 / (1 << 20);

inline classical::JointDistribution dyadic_distribution(Rng& rng) {
  std::uniform_int_distribution<int> weight(1, 1000);
  std::vector<long> w(8);
  long total = 0;
  for (auto& x : w) total += (x = weight(rng));
  std::vector<double> probs(8);
  long assigned = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const long units = (w[i] << 20) / total;
    probs[i] = static_cast<double>(units) * kDyadicUnit;
    assigned += units;
  }
  probs[7] = static_cast<double>((1L << 20) - assigned) * kDyadicUnit;
  return classical::JointDistribution(3, probs);
}

/// 0.9 of the positive or negative end of the admissible δ interval, rounded
/// toward zero onto the 2^-20 grid.
inline double dyadic_delta(const classical::JointDistribution& p, bool positive) {
  const auto [lo, hi] = classical::delta_range(p);
  const double target = 0.9 * (positive ? hi : lo);
  return std::trunc(target / kDyadicUnit) * kDyadicUnit;
}

}  // namespace qmarg::testing
