#include "qmarg/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qmarg {

MarginalSet::MarginalSet(Dims dims, std::vector<Marginal> parts)
    : dims_(std::move(dims)), parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("marginal set is empty");
  for (auto& part : parts_) {
    part.subsystems = normalize_subsystems(part.subsystems, dims_.size());
    if (part.state.dims() != restrict_dims(dims_, part.subsystems))
      throw std::invalid_argument("marginal on " + subsystem_label(part.subsystems) +
                                  " has dims that do not match its subsystems");
    reductions_.emplace_back(dims_, part.subsystems);
  }
}

MarginalSet MarginalSet::from_state(const DensityMatrix& rho, const std::vector<Subsystems>& subsets) {
  std::vector<Marginal> parts;
  parts.reserve(subsets.size());
  for (const auto& s : subsets) {
    const Subsystems keep = normalize_subsystems(s, rho.subsystems());
    parts.push_back({keep, partial_trace(rho, keep)});
  }
  return MarginalSet(rho.dims(), std::move(parts));
}

MarginalSet MarginalSet::from_state(const DensityMatrix& rho, std::size_t arity) {
  if (arity == 0 || arity > rho.subsystems())
    throw std::invalid_argument("marginal arity must be in 1..number of subsystems");
  return from_state(rho, subsets_of_size(rho.subsystems(), arity));
}

double MarginalSet::overlap_mismatch() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    for (std::size_t j = i + 1; j < parts_.size(); ++j) {
      const auto& a = parts_[i];
      const auto& b = parts_[j];
      Subsystems common;
      std::set_intersection(a.subsystems.begin(), a.subsystems.end(), b.subsystems.begin(),
                            b.subsystems.end(), std::back_inserter(common));
      if (common.empty()) continue;
      // positions of the common subsystems inside each part
      auto local = [&](const Subsystems& within) {
        Subsystems pos;
        for (std::size_t s : common)
          pos.push_back(static_cast<std::size_t>(
              std::lower_bound(within.begin(), within.end(), s) - within.begin()));
        return pos;
      };
      const ComplexMatrix ra =
          qmarg::partial_trace(a.state.matrix(), a.state.dims(), local(a.subsystems));
      const ComplexMatrix rb =
          qmarg::partial_trace(b.state.matrix(), b.state.dims(), local(b.subsystems));
      worst = std::max(worst, max_abs_diff(ra, rb));
    }
  }
  return worst;
}

double MarginalSet::max_frobenius_residual(const ComplexMatrix& rho) const {
  double worst = 0.0;
  for (std::size_t p = 0; p < parts_.size(); ++p)
    worst = std::max(worst, (reduce(p, rho) - parts_[p].state.matrix()).norm());
  return worst;
}

double MarginalSet::squared_residual(const ComplexMatrix& rho) const {
  double total = 0.0;
  for (std::size_t p = 0; p < parts_.size(); ++p)
    total += (reduce(p, rho) - parts_[p].state.matrix()).squaredNorm();
  return total;
}

double MarginalSet::squared_residual(const ComplexMatrix& rho, ComplexMatrix& grad) const {
  double total = 0.0;
  for (std::size_t p = 0; p < parts_.size(); ++p) {
    const ComplexMatrix diff = reduce(p, rho) - parts_[p].state.matrix();
    total += diff.squaredNorm();
    grad += 2.0 * embed(p, diff);
  }
  return total;
}

std::vector<Subsystems> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<Subsystems> out;
  if (k == 0 || k > n) return out;
  Subsystems cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    auto i = static_cast<std::ptrdiff_t>(k) - 1;
    while (i >= 0 && cur[i] == n - k + static_cast<std::size_t>(i)) --i;
    if (i < 0) return out;
    ++cur[i];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

std::string subsystem_label(const Subsystems& s) {
  std::string out;
  for (std::size_t i : s) out += i < 26 ? static_cast<char>('A' + i) : '?';
  return out;
}

DensityMatrix maxent_two_party(const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  return tensor(rho_a, rho_b);
}

// ---- dual solver ---------------------------------------------------------

namespace {

struct DualPoint {
  double value = 0.0;
  double log_partition = 0.0;
  ComplexMatrix rho;
  std::vector<ComplexMatrix> gradients;
  double residual = 0.0;
  double gradient_norm2 = 0.0;
};

DualPoint evaluate_dual(const MarginalSet& targets, const std::vector<ComplexMatrix>& lambdas) {
  const auto& dims = targets.dims();
  const std::size_t dim = total_dim(dims);
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t p = 0; p < lambdas.size(); ++p)
    h += targets.embed(p, lambdas[p]);

  const Spectrum spec = eigh(h);
  const double shift = spec.values.maxCoeff();
  const RealVector weights = (spec.values.array() - shift).exp();
  const double z = weights.sum();

  DualPoint pt;
  pt.log_partition = shift + std::log(z);
  pt.rho = spec.vectors * (weights / z).cast<Complex>().asDiagonal() * spec.vectors.adjoint();
  pt.value = pt.log_partition;
  for (std::size_t p = 0; p < lambdas.size(); ++p) {
    const auto& part = targets.parts()[p];
    pt.value -= (lambdas[p] * part.state.matrix()).trace().real();
    pt.gradients.push_back(targets.reduce(p, pt.rho) - part.state.matrix());
    pt.residual = std::max(pt.residual, pt.gradients.back().norm());
    pt.gradient_norm2 += pt.gradients.back().squaredNorm();
  }
  if (!std::isfinite(pt.value) || !pt.rho.allFinite())
    throw SolverError("max-entropy dual produced a non-finite iterate (log Z = " +
                      std::to_string(pt.log_partition) + ")");
  return pt;
}

DensityMatrix hermitian_state(const Dims& dims, const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  h /= h.trace().real();
  return DensityMatrix(dims, std::move(h));
}

}  // namespace

MaxEntResult maxent_from_marginals(const MarginalSet& targets, const DualConfig& cfg) {
  if (const double mismatch = targets.overlap_mismatch(); mismatch > 1e-8)
    throw std::invalid_argument("marginals disagree on their overlaps (mismatch " +
                                std::to_string(mismatch) + ")");
  std::vector<ComplexMatrix> lambdas;
  for (const auto& part : targets.parts())
    lambdas.push_back(ComplexMatrix::Zero(part.state.dim(), part.state.dim()));

  DualPoint pt = evaluate_dual(targets, lambdas);
  int it = 0;
  bool converged = pt.residual <= cfg.tolerance;
  double step = cfg.step_size;
  for (; it < cfg.max_iterations && !converged; ++it) {
    bool accepted = false;
    while (step > 1e-14) {
      std::vector<ComplexMatrix> trial(lambdas.size());
      for (std::size_t p = 0; p < lambdas.size(); ++p) {
        trial[p] = lambdas[p] - step * pt.gradients[p];
        trial[p] = (0.5 * (trial[p] + trial[p].adjoint())).eval();
      }
      DualPoint next = evaluate_dual(targets, trial);
      // Near the optimum the dual decrease drops below rounding; there the
      // gradient norm decides.
      const double noise = 1e-13 * std::max(1.0, std::abs(pt.value));
      const bool decreased = next.value < pt.value - noise ||
                             (next.value <= pt.value + noise && next.gradient_norm2 < pt.gradient_norm2);
      if (decreased) {
        // Barzilai-Borwein length for the next trial step.
        double ss = 0.0, sy = 0.0;
        for (std::size_t p = 0; p < lambdas.size(); ++p) {
          const ComplexMatrix s = trial[p] - lambdas[p];
          ss += s.squaredNorm();
          sy += s.cwiseProduct((next.gradients[p] - pt.gradients[p]).conjugate()).sum().real();
        }
        lambdas = std::move(trial);
        pt = std::move(next);
        accepted = true;
        step = sy > 0.0 ? ss / sy : 2.0 * step;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at rounding level
    converged = pt.residual <= cfg.tolerance;
  }

  MaxEntResult out{hermitian_state(targets.dims(), pt.rho), {}};
  for (std::size_t p = 0; p < lambdas.size(); ++p)
    out.multipliers.push_back({targets.parts()[p].subsystems, std::move(lambdas[p])});
  out.log_partition = pt.log_partition;
  out.residual = targets.max_frobenius_residual(out.state.matrix());
  out.iterations = it;
  out.converged = out.residual <= cfg.tolerance;
  out.method = MaxEntMethod::Dual;
  out.entropy = von_neumann_entropy(out.state);
  return out;
}

// ---- primal penalty oracle -----------------------------------------------

MaxEntResult maxent_primal(const MarginalSet& targets, const PenaltyConfig& cfg) {
  if (const double mismatch = targets.overlap_mismatch(); mismatch > 1e-8)
    throw std::invalid_argument("marginals disagree on their overlaps (mismatch " +
                                std::to_string(mismatch) + ")");
  const auto dim = static_cast<Eigen::Index>(total_dim(targets.dims()));

  auto objective_for = [&targets](double mu) -> DensityObjective {
    return [&targets, mu](const ComplexMatrix& rho, ComplexMatrix& grad) {
      // −S in bits, derivative log₂ ρ (+ a multiple of 1 that the
      // trace-preserving parametrization ignores)
      const Spectrum spec = eigh(rho);
      double neg_entropy = 0.0;
      RealVector logs(spec.values.size());
      for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
        const double l = std::max(spec.values(i), 1e-300);
        logs(i) = std::log2(l);
        if (spec.values(i) > 0.0) neg_entropy += spec.values(i) * logs(i);
      }
      grad = spec.vectors * logs.cast<Complex>().asDiagonal() * spec.vectors.adjoint();
      ComplexMatrix penalty_grad = ComplexMatrix::Zero(rho.rows(), rho.cols());
      const double r = targets.squared_residual(rho, penalty_grad);
      grad += mu * penalty_grad;
      return neg_entropy + mu * r;
    };
  };

  MinimizeOptions opts;
  opts.max_iterations = cfg.iterations_per_stage;
  const MinimizeResult res = minimize_with_penalty(
      objective_for, ComplexMatrix::Identity(dim, dim), cfg.schedule, opts);

  MaxEntResult out{DensityMatrix(targets.dims(), density_from_factor(res.factor)), {}};
  out.residual = targets.max_frobenius_residual(out.state.matrix());
  out.iterations = res.iterations;
  out.converged = out.residual <= cfg.tolerance;
  out.method = MaxEntMethod::PrimalPenalty;
  out.entropy = von_neumann_entropy(out.state);
  return out;
}

// ---- correlation measure -------------------------------------------------

CorrelationReport irreducible_correlation(const DensityMatrix& rho, std::size_t arity,
                                          const CorrelationConfig& cfg) {
  if (arity == 0 || arity >= rho.subsystems())
    throw std::invalid_argument("marginal arity must be in 1..(number of subsystems − 1)");
  const MarginalSet targets = MarginalSet::from_state(rho, arity);

  auto primal = [&] { return maxent_primal(targets, cfg.penalty); };
  MaxEntResult recon = [&] {
    switch (cfg.method) {
      case CorrelationMethod::PrimalPenalty:
        return primal();
      case CorrelationMethod::Dual:
        return maxent_from_marginals(targets, cfg.dual);
      case CorrelationMethod::Auto:
        break;
    }
    MaxEntResult dual = maxent_from_marginals(targets, cfg.dual);
    return dual.converged ? dual : primal();
  }();

  CorrelationReport report{0.0, recon.converged, recon};
  report.bits = recon.entropy - von_neumann_entropy(rho);
  report.trace_distance = trace_distance(recon.state, rho);
  return report;
}

// ---- feasibility ---------------------------------------------------------

FeasibilityReport marginal_feasibility(const MarginalSet& targets, const FeasibilityConfig& cfg) {
  const std::size_t dim = total_dim(targets.dims());
  if (!targets.overlap_consistent()) {
    DensityMatrix mixed = maximally_mixed(targets.dims());
    const double r = targets.squared_residual(mixed.matrix());
    return {false, r, std::move(mixed), 0, 0, true};
  }

  const DensityObjective objective = [&targets](const ComplexMatrix& rho, ComplexMatrix& grad) {
    return targets.squared_residual(rho, grad);
  };
  MinimizeOptions opts;
  opts.max_iterations = cfg.max_iterations;
  opts.function_tolerance = 0.0;

  const auto runs = indexed_map(cfg.restarts, cfg.execution, [&](std::size_t r) {
    Rng rng(stream_seed(cfg.seed, r));
    const MinimizeResult res = minimize_density(objective, ginibre(dim, dim, rng), opts);
    ComplexMatrix rho = density_from_factor(res.factor);
    const double residual = targets.squared_residual(rho);
    return std::pair{residual, std::move(rho)};
  });
  if (runs.empty()) throw std::invalid_argument("feasibility search needs at least one restart");

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].first < runs[best].first) best = r;
  DensityMatrix witness(targets.dims(), runs[best].second);
  const double residual = targets.squared_residual(witness.matrix());
  return {residual <= cfg.tolerance, residual, std::move(witness), runs.size(), best, false};
}

}  // namespace qmarg
