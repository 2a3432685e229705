// Pure states, density matrices and the spectral functions on them.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "qmarg/linalg.hpp"

namespace qmarg {

using Rng = std::mt19937_64;

/// Normalized amplitude vector over a list of subsystem dimensions.
class PureState {
 public:
  /// Requires |‖amplitudes‖² − 1| ≤ 1e-9 and renormalizes away the drift.
  PureState(Dims dims, ComplexVector amplitudes);

  /// Accepts any nonzero vector and normalizes it.
  static PureState normalized(Dims dims, ComplexVector amplitudes);

  /// Computational basis state with the given digits.
  static PureState basis(Dims dims, std::span<const std::size_t> digits);

  const Dims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t subsystems() const { return dims_.size(); }
  Complex operator[](std::size_t index) const { return amplitudes_(index); }

 private:
  Dims dims_;
  ComplexVector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates hermiticity, trace and positivity to kTolerance.
  DensityMatrix(Dims dims, ComplexMatrix matrix);

  const Dims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t subsystems() const { return dims_.size(); }

 private:
  Dims dims_;
  ComplexMatrix matrix_;
};

/// Validation failure for a state that violates a DensityMatrix or PureState
/// invariant.
class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

DensityMatrix density_from_pure(const PureState& state);

/// Reduced state on `keep`, subsystem order preserved. Duplicates in `keep`
/// are ignored.
DensityMatrix partial_trace(const DensityMatrix& rho, const Subsystems& keep);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> perm);
PureState permute_subsystems(const PureState& psi, std::span<const std::size_t> perm);

/// −Σ λ log₂ λ over eigenvalues above kSupportCutoff. Throws InvalidState when
/// an eigenvalue is below −1e-8.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const ComplexMatrix& rho);
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Natural log on the support; zero on the kernel.
ComplexMatrix log_on_support(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Maximally mixed state on `dims`.
DensityMatrix maximally_mixed(Dims dims);

// Random sampling. All generators are explicit so results are reproducible.

/// Independent standard complex Gaussian amplitudes, normalized.
PureState haar_state(Dims dims, Rng& rng);
/// Haar unitary via QR of a complex Ginibre matrix with phase correction.
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);
/// G G† / Tr(G G†) with G a dim × rank complex Ginibre matrix.
DensityMatrix random_density(Dims dims, Rng& rng, std::size_t rank = 0);
ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// U_1 ⊗ U_2 ⊗ ... applied to a state; one unitary per subsystem.
PureState apply_local(const PureState& psi, std::span<const ComplexMatrix> unitaries);

/// Derives an independent stream seed for stream `index` from `base`.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

}  // namespace qmarg
