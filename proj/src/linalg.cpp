#include "qmarg/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qmarg {
namespace {

// Digit decomposition of basis indices for a fixed dims list.
class IndexCodec {
 public:
  explicit IndexCodec(std::span<const std::size_t> dims) : dims_(dims.begin(), dims.end()) {
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * dims_[i];
  }

  std::size_t digit(std::size_t index, std::size_t subsystem) const {
    return (index / strides_[subsystem]) % dims_[subsystem];
  }

  // Index over the subsystems in `subset` only (big-endian in subset order).
  std::size_t sub_index(std::size_t index, const Subsystems& subset) const {
    std::size_t out = 0;
    for (std::size_t s : subset) out = out * dims_[s] + digit(index, s);
    return out;
  }

 private:
  Dims dims_;
  std::vector<std::size_t> strides_;
};

Subsystems complement(const Subsystems& keep, std::size_t n) {
  Subsystems rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) rest.push_back(i);
  return rest;
}

void check_square(const ComplexMatrix& op, std::size_t dim, const char* what) {
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != dim)
    throw std::invalid_argument(std::string(what) + ": operator size " + std::to_string(op.rows()) +
                                "x" + std::to_string(op.cols()) + " does not match dims (" +
                                std::to_string(dim) + ")");
}

}  // namespace

std::size_t total_dim(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

Subsystems normalize_subsystems(Subsystems keep, std::size_t n) {
  if (keep.empty()) throw std::invalid_argument("subsystem set must be nonempty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= n)
    throw std::invalid_argument("subsystem index " + std::to_string(keep.back()) +
                                " out of range for " + std::to_string(n) + " subsystems");
  return keep;
}

Dims restrict_dims(std::span<const std::size_t> dims, const Subsystems& keep) {
  Dims out;
  out.reserve(keep.size());
  for (std::size_t s : keep) out.push_back(dims[s]);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Reduction::Reduction(std::span<const std::size_t> dims, const Subsystems& keep)
    : full_dim_(total_dim(dims)), kept_dim_(total_dim(restrict_dims(dims, keep))) {
  const Subsystems rest = complement(keep, dims.size());
  const IndexCodec codec(dims);
  groups_.assign(full_dim_ / kept_dim_, std::vector<std::size_t>(kept_dim_));
  for (std::size_t i = 0; i < full_dim_; ++i)
    groups_[codec.sub_index(i, rest)][codec.sub_index(i, keep)] = i;
}

ComplexMatrix Reduction::trace_out(const ComplexMatrix& op) const {
  check_square(op, full_dim_, "partial_trace");
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim_, kept_dim_);
  for (const auto& g : groups_)
    for (std::size_t a = 0; a < kept_dim_; ++a)
      for (std::size_t b = 0; b < kept_dim_; ++b) out(a, b) += op(g[a], g[b]);
  return out;
}

ComplexMatrix Reduction::embed(const ComplexMatrix& op) const {
  check_square(op, kept_dim_, "embed");
  ComplexMatrix out = ComplexMatrix::Zero(full_dim_, full_dim_);
  for (const auto& g : groups_)
    for (std::size_t a = 0; a < kept_dim_; ++a)
      for (std::size_t b = 0; b < kept_dim_; ++b) out(g[a], g[b]) = op(a, b);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& op, std::span<const std::size_t> dims,
                            const Subsystems& keep) {
  return Reduction(dims, keep).trace_out(op);
}

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims,
                    const Subsystems& subsystems) {
  return Reduction(dims, subsystems).embed(op);
}

namespace {

std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims,
                                         std::span<const std::size_t> perm) {
  if (perm.size() != dims.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (std::size_t p : perm) {
    if (p >= dims.size() || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
  // new index -> old index
  const IndexCodec old_codec(dims);
  Dims new_dims;
  for (std::size_t p : perm) new_dims.push_back(dims[p]);
  const IndexCodec new_codec(new_dims);
  const std::size_t dim = total_dim(dims);
  std::vector<std::size_t> map(dim);
  std::vector<std::size_t> old_strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) old_strides[i - 1] = old_strides[i] * dims[i];
  for (std::size_t n = 0; n < dim; ++n) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) old += new_codec.digit(n, k) * old_strides[perm[k]];
    map[n] = old;
  }
  return map;
}

}  // namespace

ComplexMatrix permute_subsystems(const ComplexMatrix& op, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
  check_square(op, total_dim(dims), "permute_subsystems");
  const auto map = permutation_map(dims, perm);
  ComplexMatrix out(op.rows(), op.cols());
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t j = 0; j < map.size(); ++j) out(i, j) = op(map[i], map[j]);
  return out;
}

ComplexVector permute_subsystems(const ComplexVector& psi, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
  if (static_cast<std::size_t>(psi.size()) != total_dim(dims))
    throw std::invalid_argument("permute_subsystems: vector length does not match dims");
  const auto map = permutation_map(dims, perm);
  ComplexVector out(psi.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(i) = psi(map[i]);
  return out;
}

Spectrum eigh(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix from_spectrum(const Spectrum& s, const std::function<double(double)>& f) {
  RealVector mapped = s.values.unaryExpr(f);
  return s.vectors * mapped.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

ComplexMatrix exp_hermitian(const ComplexMatrix& h) {
  return from_spectrum(eigh(h), [](double x) { return std::exp(x); });
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double half_trace_norm(const ComplexMatrix& hermitian) {
  return 0.5 * eigh(hermitian).values.cwiseAbs().sum();
}

}  // namespace qmarg
