// Smooth minimization over density matrices through the parametrization
// ρ = G G† / Tr(G G†), G a dim × rank complex matrix.
#pragma once

#include <functional>
#include <vector>

#include "qmarg/linalg.hpp"

namespace qmarg {

/// Returns f(ρ) and writes the Hermitian derivative ∂f/∂ρ into `grad`.
using DensityObjective = std::function<double(const ComplexMatrix& rho, ComplexMatrix& grad)>;

struct MinimizeOptions {
  int max_iterations = 2000;
  double function_tolerance = 1e-15;
  double gradient_tolerance = 1e-14;
  double parameter_tolerance = 1e-14;
};

struct MinimizeResult {
  ComplexMatrix factor;  // G
  double value = 0.0;
  int iterations = 0;
};

ComplexMatrix density_from_factor(const ComplexMatrix& factor);

/// L-BFGS on the real and imaginary parts of G, starting from `start`.
MinimizeResult minimize_density(const DensityObjective& f, ComplexMatrix start,
                                const MinimizeOptions& opts = {});

/// Penalty weights μ = 10, 10², …, 10⁶.
std::vector<double> default_penalty_schedule();

/// Runs minimize_density once per penalty weight, warm-starting each stage
/// from the previous factor. `objective_for` builds the stage objective.
MinimizeResult minimize_with_penalty(const std::function<DensityObjective(double mu)>& objective_for,
                                     ComplexMatrix start, const std::vector<double>& schedule,
                                     const MinimizeOptions& opts = {});

}  // namespace qmarg
