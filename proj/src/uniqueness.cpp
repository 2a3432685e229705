#include "qmarg/uniqueness.hpp"

#include <cmath>
#include <stdexcept>

namespace qmarg {
namespace {

constexpr double kGuard = 1e-12;

bool is_three_qubits(const Dims& dims) { return dims == Dims{2, 2, 2}; }

// a(i,j,k) over the grouping's index order.
PairInvariants invariants_for(const PureState& s, Grouping g) {
  auto a = [&](int i, int j, int k) -> Complex {
    switch (g) {
      case Grouping::E: return s[4 * i + 2 * j + k];
      case Grouping::F: return s[4 * i + 2 * k + j];  // (A,C,B)
      case Grouping::G: return s[4 * k + 2 * i + j];  // (B,C,A)
    }
    return {};
  };
  PairInvariants out;
  out.grouping = g;
  out.alpha = a(0, 1, 1) * a(1, 0, 1) - a(1, 1, 1) * a(0, 0, 1);
  out.beta = a(0, 0, 0) * a(1, 1, 0) - a(1, 0, 0) * a(0, 1, 0);
  out.gamma = a(0, 0, 0) * a(1, 1, 1) + a(0, 0, 1) * a(1, 1, 0) - a(1, 0, 0) * a(0, 1, 1) -
              a(1, 0, 1) * a(0, 1, 0);
  return out;
}

}  // namespace

const char* grouping_name(Grouping g) {
  switch (g) {
    case Grouping::E: return "e";
    case Grouping::F: return "f";
    case Grouping::G: return "g";
  }
  return "?";
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::UniqueGeneric: return "UNIQUE_GENERIC";
    case VerdictKind::ProductSplit: return "PRODUCT_SPLIT";
    case VerdictKind::SchmidtGhzClass: return "SCHMIDT_GHZ_CLASS";
  }
  return "?";
}

std::array<PairInvariants, 3> pair_invariants(const PureState& state) {
  if (!is_three_qubits(state.dims()))
    throw std::invalid_argument("pair invariants need a three-qubit state");
  return {invariants_for(state, Grouping::E), invariants_for(state, Grouping::F),
          invariants_for(state, Grouping::G)};
}

DConditions d_conditions(const PairInvariants& inv, double tol) {
  const double ma = std::abs(inv.alpha), mb = std::abs(inv.beta), mg = std::abs(inv.gamma);
  DConditions c;
  c.modulus_equal = std::abs(ma - mb) <= tol * std::max({ma, mb, kGuard});
  const Complex x = std::conj(inv.gamma) * std::conj(inv.gamma) * inv.alpha * inv.beta;
  const double bound = tol * mg * mg * ma * mb + kGuard;
  c.phase_positive = std::abs(x.imag()) <= bound && x.real() >= -bound;
  return c;
}

ClassificationVerdict classify(const PureState& state, double tol) {
  ClassificationVerdict v;
  v.invariants = pair_invariants(state);
  for (std::size_t g = 0; g < 3; ++g) v.conditions[g] = d_conditions(v.invariants[g], tol);

  v.degenerate = true;
  for (const auto& inv : v.invariants)
    if (std::abs(inv.alpha) > kGuard || std::abs(inv.beta) > kGuard || std::abs(inv.gamma) > kGuard)
      v.degenerate = false;

  const DensityMatrix rho = density_from_pure(state);
  for (std::size_t q = 0; q < 3; ++q) {
    if (purity(partial_trace(rho, {q})) >= 1.0 - 1e-10) {
      v.kind = VerdictKind::ProductSplit;
      v.product_cut = q;
      return v;
    }
  }
  const bool all = v.conditions[0].both() && v.conditions[1].both() && v.conditions[2].both();
  v.kind = all ? VerdictKind::SchmidtGhzClass : VerdictKind::UniqueGeneric;
  return v;
}

DensityMatrix reconstruct_product(const PureState& state, std::size_t cut) {
  if (!is_three_qubits(state.dims()))
    throw std::invalid_argument("reconstruct_product needs a three-qubit state");
  if (cut > 2) throw std::invalid_argument("product cut must be 0, 1 or 2");
  const DensityMatrix rho = density_from_pure(state);
  Subsystems rest;
  for (std::size_t q = 0; q < 3; ++q)
    if (q != cut) rest.push_back(q);

  auto top_vector = [](const DensityMatrix& m) -> ComplexVector {
    const Spectrum s = eigh(m.matrix());
    return s.vectors.col(s.values.size() - 1);
  };
  const ComplexVector single = top_vector(partial_trace(rho, {cut}));
  const ComplexVector pair = top_vector(partial_trace(rho, rest));
  ComplexVector joined(8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) joined(4 * i + j) = single(i) * pair(j);

  // joined is ordered (cut, rest...); undo that ordering
  const std::array<std::size_t, 3> order{cut, rest[0], rest[1]};
  std::array<std::size_t, 3> inverse{};
  for (std::size_t k = 0; k < 3; ++k) inverse[order[k]] = k;
  const PureState assembled = PureState::normalized(
      {2, 2, 2}, permute_subsystems(joined, Dims{2, 2, 2}, inverse));
  return density_from_pure(assembled);
}

std::pair<DensityMatrix, DensityMatrix> ghz_counterexample(Complex a, Complex b) {
  if (std::abs(a) < kGuard || std::abs(b) < kGuard)
    throw std::domain_error("GHZ counterexample needs both a and b nonzero");
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::domain_error("GHZ coefficients must satisfy |a|^2 + |b|^2 = 1");
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0) = a;
  psi(7) = b;
  DensityMatrix pure = density_from_pure(PureState({2, 2, 2}, psi));
  ComplexMatrix mixed = ComplexMatrix::Zero(8, 8);
  mixed(0, 0) = pure.matrix()(0, 0);
  mixed(7, 7) = pure.matrix()(7, 7);
  return {std::move(pure), DensityMatrix({2, 2, 2}, std::move(mixed))};
}

SearchReport uniqueness_search(const PureState& state, const SearchConfig& cfg) {
  const std::size_t n = state.subsystems();
  if ((n != 3 && n != 4) || state.dims() != Dims(n, 2))
    throw std::invalid_argument("uniqueness search supports three or four qubits");
  if (cfg.restarts == 0) throw std::invalid_argument("uniqueness search needs at least one restart");
  const std::size_t env = cfg.env_dim != 0 ? cfg.env_dim : (n == 3 ? 2 : 16);
  const std::size_t dim = total_dim(state.dims());

  const DensityMatrix input = density_from_pure(state);
  const MarginalSet targets = MarginalSet::from_state(input, 2);
  const ComplexMatrix& projector = input.matrix();

  // minimize ⟨η|ω|η⟩ + μ Σ‖ω_pair − target‖²
  auto objective_for = [&](double mu) -> DensityObjective {
    return [&targets, &projector, mu](const ComplexMatrix& omega, ComplexMatrix& grad) {
      ComplexMatrix penalty = ComplexMatrix::Zero(omega.rows(), omega.cols());
      const double r = targets.squared_residual(omega, penalty);
      grad = projector + mu * penalty;
      return (projector * omega).trace().real() + mu * r;
    };
  };
  MinimizeOptions opts;
  opts.max_iterations = cfg.iterations_per_stage;

  struct Candidate {
    double residual;
    double distance;
    ComplexMatrix omega;
  };
  const auto runs = indexed_map(cfg.restarts, cfg.execution, [&](std::size_t r) {
    Rng rng(stream_seed(cfg.seed, r));
    const MinimizeResult res =
        minimize_with_penalty(objective_for, ginibre(dim, env, rng), cfg.schedule, opts);
    ComplexMatrix omega = density_from_factor(res.factor);
    const double residual = targets.squared_residual(omega);
    const double distance = half_trace_norm(omega - projector);
    return Candidate{residual, distance, std::move(omega)};
  });

  // Prefer the most distant marginal-matching candidate; otherwise the one
  // closest to matching. Ties go to the lowest restart index.
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < runs.size(); ++r)
    if (runs[r].residual <= cfg.tolerance && (!best || runs[r].distance > runs[*best].distance))
      best = r;
  if (!best) {
    best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
      if (runs[r].residual < runs[*best].residual) best = r;
  }

  const Candidate& c = runs[*best];
  SearchReport report;
  report.restarts = runs.size();
  report.best_restart = *best;
  report.env_dim = env;
  report.marginal_residual = c.residual;
  report.trace_distance_to_input = c.distance;
  report.alternative_found = c.residual <= cfg.tolerance && c.distance >= cfg.distinctness;
  if (report.alternative_found) report.alternative.emplace(state.dims(), c.omega);
  return report;
}

}  // namespace qmarg
