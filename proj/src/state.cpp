#include "qmarg/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmarg {
namespace {

void check_dims(const Dims& dims) {
  if (dims.empty()) throw InvalidState("state needs at least one subsystem");
  for (std::size_t d : dims)
    if (d < 2) throw InvalidState("subsystem dimension must be at least 2");
}

}  // namespace

PureState::PureState(Dims dims, ComplexVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  check_dims(dims_);
  if (static_cast<std::size_t>(amplitudes_.size()) != total_dim(dims_))
    throw InvalidState("amplitude count " + std::to_string(amplitudes_.size()) +
                       " does not match dims product " + std::to_string(total_dim(dims_)));
  const double norm2 = amplitudes_.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-9)
    throw InvalidState("pure state not normalized: |psi|^2 = " + std::to_string(norm2));
  amplitudes_ /= std::sqrt(norm2);
}

PureState PureState::normalized(Dims dims, ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidState("cannot normalize a zero vector");
  return PureState(std::move(dims), amplitudes / norm);
}

PureState PureState::basis(Dims dims, std::span<const std::size_t> digits) {
  if (digits.size() != dims.size()) throw InvalidState("basis digits do not match dims");
  std::size_t index = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] >= dims[i]) throw InvalidState("basis digit out of range");
    index = index * dims[i] + digits[i];
  }
  ComplexVector amps = ComplexVector::Zero(total_dim(dims));
  amps(index) = 1.0;
  return PureState(std::move(dims), std::move(amps));
}

DensityMatrix::DensityMatrix(Dims dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  check_dims(dims_);
  const std::size_t dim = total_dim(dims_);
  if (matrix_.rows() != matrix_.cols() || static_cast<std::size_t>(matrix_.rows()) != dim)
    throw InvalidState("density matrix size does not match dims product " + std::to_string(dim));
  if (!matrix_.allFinite()) throw InvalidState("density matrix has non-finite entries");
  if (const double h = hermiticity_defect(matrix_); h > kTolerance)
    throw InvalidState("density matrix not Hermitian (defect " + std::to_string(h) + ")");
  if (const double t = std::abs(matrix_.trace() - 1.0); t > kTolerance)
    throw InvalidState("density matrix trace deviates from 1 by " + std::to_string(t));
  if (const double low = eigh(matrix_).values.minCoeff(); low < -kTolerance)
    throw InvalidState("density matrix not positive semidefinite (eigenvalue " +
                       std::to_string(low) + ")");
}

DensityMatrix density_from_pure(const PureState& state) {
  const ComplexVector& psi = state.amplitudes();
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-9) throw InvalidState("pure state not normalized");
  return DensityMatrix(state.dims(), psi * psi.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Subsystems& keep) {
  const Subsystems k = normalize_subsystems(keep, rho.subsystems());
  if (k.size() == rho.subsystems()) return rho;
  return DensityMatrix(restrict_dims(rho.dims(), k), partial_trace(rho.matrix(), rho.dims(), k));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(std::move(dims), kron(a.matrix(), b.matrix()));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  Dims dims;
  for (std::size_t p : perm) dims.push_back(rho.dims().at(p));
  return DensityMatrix(std::move(dims), permute_subsystems(rho.matrix(), rho.dims(), perm));
}

PureState permute_subsystems(const PureState& psi, std::span<const std::size_t> perm) {
  Dims dims;
  for (std::size_t p : perm) dims.push_back(psi.dims().at(p));
  return PureState(std::move(dims), permute_subsystems(psi.amplitudes(), psi.dims(), perm));
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -1e-8) throw InvalidState("negative eigenvalue " + std::to_string(l));
    if (l > kSupportCutoff) s -= l * std::log2(l);
  }
  return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) { return entropy_of_spectrum(eigh(rho).values); }

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

ComplexMatrix log_on_support(const DensityMatrix& rho) {
  return from_spectrum(eigh(rho.matrix()),
                       [](double l) { return l > kSupportCutoff ? std::log(l) : 0.0; });
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("trace_distance: dims mismatch");
  return half_trace_norm(a.matrix() - b.matrix());
}

DensityMatrix maximally_mixed(Dims dims) {
  const auto dim = static_cast<Eigen::Index>(total_dim(dims));
  ComplexMatrix m = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(std::move(dims), std::move(m));
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

PureState haar_state(Dims dims, Rng& rng) {
  const std::size_t dim = total_dim(dims);
  ComplexVector v = ginibre(dim, 1, rng).col(0);
  return PureState::normalized(std::move(dims), std::move(v));
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  const ComplexMatrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

DensityMatrix random_density(Dims dims, Rng& rng, std::size_t rank) {
  const std::size_t dim = total_dim(dims);
  const ComplexMatrix g = ginibre(dim, rank == 0 ? dim : rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(dims), std::move(rho));
}

PureState apply_local(const PureState& psi, std::span<const ComplexMatrix> unitaries) {
  if (unitaries.size() != psi.subsystems())
    throw std::invalid_argument("apply_local: need one unitary per subsystem");
  ComplexMatrix u = unitaries[0];
  for (std::size_t i = 1; i < unitaries.size(); ++i) u = kron(u, unitaries[i]);
  return PureState::normalized(psi.dims(), u * psi.amplitudes());
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace qmarg
