// Dense complex linear algebra on tensor-product spaces.
//
// Operators are Eigen::MatrixXcd. Subsystem indices are big-endian: the first
// subsystem is the most significant digit of a basis index.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qmarg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

using Dims = std::vector<std::size_t>;
using Subsystems = std::vector<std::size_t>;

/// Eigenvalues at or below this are treated as the kernel.
inline constexpr double kSupportCutoff = 1e-12;

std::size_t total_dim(std::span<const std::size_t> dims);

/// Sorted, deduplicated copy of `keep`; throws on an empty set or an index
/// outside [0, n).
Subsystems normalize_subsystems(Subsystems keep, std::size_t n);

Dims restrict_dims(std::span<const std::size_t> dims, const Subsystems& keep);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Precomputed index tables for reducing to (and embedding from) a fixed
/// subsystem set. Reuse one when the same reduction runs in a loop.
class Reduction {
 public:
  /// `keep` must be normalized.
  Reduction(std::span<const std::size_t> dims, const Subsystems& keep);

  ComplexMatrix trace_out(const ComplexMatrix& op) const;
  ComplexMatrix embed(const ComplexMatrix& op) const;
  std::size_t kept_dim() const { return kept_dim_; }
  std::size_t full_dim() const { return full_dim_; }

 private:
  std::size_t full_dim_, kept_dim_;
  // full indices grouped by their traced-out digits; position within a
  // group is the kept index
  std::vector<std::vector<std::size_t>> groups_;
};

/// Tr over every subsystem not in `keep`. `keep` must be normalized.
ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const std::size_t> dims,
                            const Subsystems& keep);

/// Adjoint of partial_trace: places `op` on `subsystems` and the identity on
/// the rest.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims,
                    const Subsystems& subsystems);

/// Reorders tensor factors: new subsystem i is old subsystem perm[i].
ComplexMatrix permute_subsystems(const ComplexMatrix& op, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);
ComplexVector permute_subsystems(const ComplexVector& psi, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);

struct Spectrum {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns
};

/// Hermitian eigendecomposition. Only the lower triangle is read.
Spectrum eigh(const ComplexMatrix& hermitian);

ComplexMatrix from_spectrum(const Spectrum& s, const std::function<double(double)>& f);

/// exp(H) for Hermitian H.
ComplexMatrix exp_hermitian(const ComplexMatrix& h);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_defect(const ComplexMatrix& m);

/// Half the trace norm of a Hermitian matrix.
double half_trace_norm(const ComplexMatrix& hermitian);

}  // namespace qmarg
