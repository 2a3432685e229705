#include "qmarg/optimize.hpp"

#include <cmath>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

namespace qmarg {
namespace {

class FactorCost final : public ceres::FirstOrderFunction {
 public:
  FactorCost(const DensityObjective& f, Eigen::Index rows, Eigen::Index cols)
      : f_(f), rows_(rows), cols_(cols) {}

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    ComplexMatrix g(rows_, cols_);
    for (Eigen::Index k = 0; k < g.size(); ++k) g(k) = Complex(params[2 * k], params[2 * k + 1]);
    const double t = g.squaredNorm();
    if (!(t > 0.0) || !std::isfinite(t)) return false;
    const ComplexMatrix rho = g * g.adjoint() / t;

    ComplexMatrix drho = ComplexMatrix::Zero(rows_, rows_);
    *cost = f_(rho, drho);
    if (!std::isfinite(*cost)) return false;
    if (gradient != nullptr) {
      // df = Re Tr(D† dG) with D = (2/t)(F G − Tr(F ρ) G)
      const Complex mean = (drho * rho).trace();
      const ComplexMatrix d = (2.0 / t) * (drho * g - mean.real() * g);
      for (Eigen::Index k = 0; k < d.size(); ++k) {
        gradient[2 * k] = d(k).real();
        gradient[2 * k + 1] = d(k).imag();
      }
    }
    return true;
  }

  int NumParameters() const override { return static_cast<int>(2 * rows_ * cols_); }

 private:
  const DensityObjective& f_;
  Eigen::Index rows_, cols_;
};

}  // namespace

ComplexMatrix density_from_factor(const ComplexMatrix& factor) {
  ComplexMatrix rho = factor * factor.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

MinimizeResult minimize_density(const DensityObjective& f, ComplexMatrix start,
                                const MinimizeOptions& opts) {
  const Eigen::Index rows = start.rows(), cols = start.cols();
  // Keep |G| near 1 so the tolerances are scale free.
  start /= start.norm();
  std::vector<double> params(static_cast<std::size_t>(2 * start.size()));
  for (Eigen::Index k = 0; k < start.size(); ++k) {
    params[2 * k] = start(k).real();
    params[2 * k + 1] = start(k).imag();
  }

  ceres::GradientProblem problem(new FactorCost(f, rows, cols));
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = opts.max_iterations;
  options.function_tolerance = opts.function_tolerance;
  options.gradient_tolerance = opts.gradient_tolerance;
  options.parameter_tolerance = opts.parameter_tolerance;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, params.data(), &summary);

  MinimizeResult out;
  out.factor.resize(rows, cols);
  for (Eigen::Index k = 0; k < out.factor.size(); ++k)
    out.factor(k) = Complex(params[2 * k], params[2 * k + 1]);
  out.value = summary.final_cost;
  out.iterations = static_cast<int>(summary.iterations.size());
  return out;
}

std::vector<double> default_penalty_schedule() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}; }

MinimizeResult minimize_with_penalty(const std::function<DensityObjective(double mu)>& objective_for,
                                     ComplexMatrix start, const std::vector<double>& schedule,
                                     const MinimizeOptions& opts) {
  MinimizeResult result{std::move(start), 0.0, 0};
  int total = 0;
  for (double mu : schedule) {
    const DensityObjective f = objective_for(mu);
    result = minimize_density(f, std::move(result.factor), opts);
    total += result.iterations;
  }
  result.iterations = total;
  return result;
}

}  // namespace qmarg
