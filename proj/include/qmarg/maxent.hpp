// Maximum-entropy reconstruction from marginals, the irreducible-correlation
// measure, and marginal feasibility.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmarg/optimize.hpp"
#include "qmarg/parallel.hpp"
#include "qmarg/state.hpp"

namespace qmarg {

struct Marginal {
  Subsystems subsystems;  // sorted
  DensityMatrix state;
};

/// Labeled reduced states over a common set of subsystems. Construction checks
/// each part's dims against its subset; overlap consistency is a query, since
/// callers need to report inconsistent sets rather than fail to build them.
class MarginalSet {
 public:
  MarginalSet(Dims dims, std::vector<Marginal> parts);

  /// All marginals of `rho` on the given subsets.
  static MarginalSet from_state(const DensityMatrix& rho, const std::vector<Subsystems>& subsets);
  /// All marginals of `rho` on subsets of size `arity`, in lexicographic order.
  static MarginalSet from_state(const DensityMatrix& rho, std::size_t arity);

  const Dims& dims() const { return dims_; }
  const std::vector<Marginal>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }

  /// Largest max-entry disagreement between two parts reduced to their
  /// common subsystems. Zero when no two parts overlap.
  double overlap_mismatch() const;
  bool overlap_consistent(double tol = 1e-8) const { return overlap_mismatch() <= tol; }

  /// Max over parts of the Frobenius distance between the marginal of `rho`
  /// and the target.
  double max_frobenius_residual(const ComplexMatrix& rho) const;
  /// Σ over parts of the squared Frobenius distance.
  double squared_residual(const ComplexMatrix& rho) const;
  /// Squared residual plus its derivative ∂/∂ρ, accumulated into `grad`.
  double squared_residual(const ComplexMatrix& rho, ComplexMatrix& grad) const;

  /// Marginal of a full operator on part `index`, and the adjoint map.
  ComplexMatrix reduce(std::size_t index, const ComplexMatrix& op) const {
    return reductions_[index].trace_out(op);
  }
  ComplexMatrix embed(std::size_t index, const ComplexMatrix& op) const {
    return reductions_[index].embed(op);
  }

 private:
  Dims dims_;
  std::vector<Marginal> parts_;
  std::vector<Reduction> reductions_;
};

/// All subsets of {0..n-1} of size k, lexicographic.
std::vector<Subsystems> subsets_of_size(std::size_t n, std::size_t k);

std::string subsystem_label(const Subsystems& s);

/// ρ_A ⊗ ρ_B: the closed-form two-party reconstruction.
DensityMatrix maxent_two_party(const DensityMatrix& rho_a, const DensityMatrix& rho_b);

enum class MaxEntMethod { Dual, PrimalPenalty };

struct Multiplier {
  Subsystems subsystems;
  ComplexMatrix lambda;  // Hermitian
};

struct MaxEntResult {
  DensityMatrix state;
  /// ρ̃ = exp(Σ Λ ⊗ 1 − ln Z); empty for the primal method.
  std::vector<Multiplier> multipliers;
  double log_partition = 0.0;
  double residual = 0.0;  // max Frobenius distance over parts
  int iterations = 0;
  bool converged = false;
  MaxEntMethod method = MaxEntMethod::Dual;
  double entropy = 0.0;  // bits
};

struct DualConfig {
  int max_iterations = 5000;
  double step_size = 1.0;
  double tolerance = 1e-8;
};

/// Non-finite iterate or objective in a solver.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gradient descent on g(Λ) = ln Tr exp(Σ Λ_p ⊗ 1) − Σ Tr(Λ_p T_p). The first
/// trial step is cfg.step_size, later ones use the Barzilai-Borwein length;
/// each is halved until g does not increase. Rank-deficient targets push Λ to
/// infinity and usually exhaust max_iterations with converged = false.
MaxEntResult maxent_from_marginals(const MarginalSet& targets, const DualConfig& cfg = {});

struct PenaltyConfig {
  std::vector<double> schedule = default_penalty_schedule();
  int iterations_per_stage = 3000;
  /// Max-Frobenius residual accepted as converged.
  double tolerance = 1e-4;
};

/// Maximizes S(ρ) − μ Σ‖marginal − target‖²_F over density matrices for each
/// μ in the schedule. Reaches rank-deficient optima the dual cannot.
MaxEntResult maxent_primal(const MarginalSet& targets, const PenaltyConfig& cfg = {});

enum class CorrelationMethod { Auto, Dual, PrimalPenalty };

struct CorrelationConfig {
  CorrelationMethod method = CorrelationMethod::Auto;
  DualConfig dual{};
  PenaltyConfig penalty{};
};

struct CorrelationReport {
  double bits = 0.0;  // S(ρ̃) − S(ρ)
  bool converged = false;
  MaxEntResult reconstruction;
  /// Auxiliary: trace distance between ρ̃ and ρ.
  double trace_distance = 0.0;
};

/// Entropy gap between ρ and its max-entropy reconstruction from all
/// `arity`-party marginals. Auto runs the dual and falls back to the primal
/// penalty method when the dual does not converge.
CorrelationReport irreducible_correlation(const DensityMatrix& rho, std::size_t arity,
                                          const CorrelationConfig& cfg = {});

struct FeasibilityConfig {
  std::size_t restarts = 8;
  double tolerance = 1e-6;  // on the squared residual
  std::uint64_t seed = 42;
  int max_iterations = 3000;
  Execution execution = Execution::Parallel;
};

struct FeasibilityReport {
  bool feasible = false;
  double best_residual = 0.0;  // Σ‖marginal − target‖²_F of the witness
  DensityMatrix witness;
  std::size_t restarts_used = 0;
  std::size_t best_restart = 0;
  bool overlap_inconsistent = false;
};

/// Minimizes the squared marginal residual from `restarts` random starts.
/// Overlap-inconsistent targets are reported infeasible without search.
FeasibilityReport marginal_feasibility(const MarginalSet& targets, const FeasibilityConfig& cfg = {});

}  // namespace qmarg
