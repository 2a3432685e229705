// Is a pure three-qubit state the only state with its two-party marginals?
//
// classify() decides this in closed form from three pair invariants per
// grouping; uniqueness_search() is the numerical oracle that looks for a
// different state (pure or mixed) with the same marginals.
#pragma once

#include <array>
#include <optional>

#include "qmarg/maxent.hpp"

namespace qmarg {

/// Which qubit plays the role of the environment-paired index: e ↔ C,
/// f ↔ B, g ↔ A.
enum class Grouping { E, F, G };

const char* grouping_name(Grouping g);

struct PairInvariants {
  Grouping grouping = Grouping::E;
  Complex alpha, beta, gamma;
};

/// α = a011 a101 − a111 a001
/// β = a000 a110 − a100 a010
/// γ = a000 a111 + a001 a110 − a100 a011 − a101 a010
/// evaluated on the coefficient tensor with the grouping's qubit moved to the
/// last index: e uses (A,B,C), f uses (A,C,B), g uses (B,C,A). The formulas
/// are symmetric in the first two indices, so only the last slot matters.
std::array<PairInvariants, 3> pair_invariants(const PureState& state);

struct DConditions {
  bool modulus_equal = false;   // |α| = |β|
  bool phase_positive = false;  // γ̄²αβ real and ≥ 0
  bool both() const { return modulus_equal && phase_positive; }
};

DConditions d_conditions(const PairInvariants& inv, double tol = 1e-8);

enum class VerdictKind { UniqueGeneric, ProductSplit, SchmidtGhzClass };

const char* verdict_name(VerdictKind k);

struct ClassificationVerdict {
  VerdictKind kind = VerdictKind::UniqueGeneric;
  std::array<PairInvariants, 3> invariants;
  std::array<DConditions, 3> conditions;
  std::optional<std::size_t> product_cut;
  /// Every α, β, γ vanishes; the conditions hold vacuously.
  bool degenerate = false;
};

/// PRODUCT_SPLIT when some single-qubit marginal is pure, SCHMIDT_GHZ_CLASS
/// when every grouping passes both D-conditions, UNIQUE_GENERIC otherwise.
ClassificationVerdict classify(const PureState& state, double tol = 1e-8);

/// Rebuilds |ψ⟩⟨ψ| from the marginal on `cut` and the marginal on the other
/// two qubits. Exact when qubit `cut` factors out.
DensityMatrix reconstruct_product(const PureState& state, std::size_t cut);

/// The pure projector of a|000⟩ + b|111⟩ and the diagonal mixture
/// |a|²|000⟩⟨000| + |b|²|111⟩⟨111|. Both have the same two-party marginals.
/// Throws std::domain_error when a or b vanishes.
std::pair<DensityMatrix, DensityMatrix> ghz_counterexample(Complex a, Complex b);

struct SearchConfig {
  std::size_t restarts = 8;
  /// 0 picks 2 for three qubits and 16 for four.
  std::size_t env_dim = 0;
  double tolerance = 1e-8;     // on Σ‖marginal − target‖²_F
  double distinctness = 1e-3;  // trace distance
  std::uint64_t seed = 42;
  /// Runs two stages past the maxent schedule. Along nearly flat marginal
  /// directions a μ = 1e6 optimum can sit 2e-3 away from a unique input with
  /// residual 1e-9, which would pass as an alternative.
  std::vector<double> schedule = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
  int iterations_per_stage = 2000;
  Execution execution = Execution::Parallel;
};

struct SearchReport {
  bool alternative_found = false;
  std::optional<DensityMatrix> alternative;
  double trace_distance_to_input = 0.0;
  double marginal_residual = 0.0;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  std::size_t env_dim = 0;
};

/// Purifies a candidate on qubits ⊗ environment and maximizes 1 − ⟨η|ω|η⟩
/// under a penalty on the two-party marginal residual. Supports 3 or 4 qubits.
SearchReport uniqueness_search(const PureState& state, const SearchConfig& cfg = {});

}  // namespace qmarg
