#include "doctest.h"
#include "qmarg/maxent.hpp"
#include "qmarg/pauli.hpp"
#include "support.hpp"

using namespace qmarg;
using qmarg::testing::ghz;

namespace {

DensityMatrix ket_projector(Dims dims, std::vector<std::size_t> digits) {
  return density_from_pure(PureState::basis(std::move(dims), digits));
}

DensityMatrix plus_state() {
  ComplexMatrix m = ComplexMatrix::Constant(2, 2, 0.5);
  return DensityMatrix({2}, m);
}

DensityMatrix ghz_mixture() {
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  m(0, 0) = m(7, 7) = 0.5;
  return DensityMatrix({2, 2, 2}, m);
}

double mutual_information(const DensityMatrix& rho) {
  return von_neumann_entropy(partial_trace(rho, {0})) + von_neumann_entropy(partial_trace(rho, {1})) -
         von_neumann_entropy(rho);
}

// Every state with the GHZ pair marginals lives on span{|000>,|111>} with
// diagonal 1/2, 1/2, so the feasible set is the disk |c| <= 1/2 of
// off-diagonal values. Grid search for the entropy maximizer.
struct DiskOptimum {
  Complex coherence;
  double entropy;
};

DiskOptimum ghz_disk_oracle() {
  DiskOptimum best{0.0, -1.0};
  for (int ri = 0; ri <= 50; ++ri)
    for (int ti = 0; ti < 36; ++ti) {
      const Complex c = std::polar(0.5 * ri / 50.0, 2.0 * M_PI * ti / 36.0);
      ComplexMatrix m = ComplexMatrix::Zero(8, 8);
      m(0, 0) = m(7, 7) = 0.5;
      m(0, 7) = c;
      m(7, 0) = std::conj(c);
      const double s = von_neumann_entropy(m);
      if (s > best.entropy) best = {c, s};
    }
  return best;
}

}  // namespace

TEST_SUITE("maxent_two_party") {
  TEST_CASE("maximally mixed factors") {
    CHECK(max_abs_diff(maxent_two_party(maximally_mixed({2}), maximally_mixed({2})).matrix(),
                       ComplexMatrix::Identity(4, 4) / 4.0) == 0.0);
  }

  TEST_CASE("pure factors") {
    const auto zero = ket_projector({2}, {0});
    const auto out = maxent_two_party(zero, plus_state());
    CHECK(max_abs_diff(out.matrix(), kron(zero.matrix(), plus_state().matrix())) == 0.0);
    CHECK(von_neumann_entropy(out) == doctest::Approx(0.0));
  }

  TEST_CASE("Bell pair has a two-bit gap") {
    const auto bell = density_from_pure(qmarg::testing::bell());
    const auto tilde = maxent_two_party(partial_trace(bell, {0}), partial_trace(bell, {1}));
    CHECK(max_abs_diff(tilde.matrix(), ComplexMatrix::Identity(4, 4) / 4.0) < 1e-15);
    CHECK(von_neumann_entropy(tilde) - von_neumann_entropy(bell) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("the dual agrees with the closed form") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_density({2, 2}, rng);
      const auto closed = maxent_two_party(partial_trace(rho, {0}), partial_trace(rho, {1}));
      const auto dual = maxent_from_marginals(MarginalSet::from_state(rho, 1));
      REQUIRE(dual.converged);
      CHECK(max_abs_diff(dual.state.matrix(), closed.matrix()) <= 1e-8);
    }
  }
}

TEST_SUITE("maxent_from_marginals") {
  TEST_CASE("product of full-rank factors is its own reconstruction") {
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = tensor(tensor(random_density({2}, rng), random_density({2}, rng)), random_density({2}, rng));
      const auto r = maxent_from_marginals(MarginalSet::from_state(rho, 2));
      CHECK(r.converged);
      CHECK(r.residual <= 1e-8);
      CHECK(max_abs_diff(r.state.matrix(), rho.matrix()) <= 1e-7);
    }
  }

  TEST_CASE("maximally mixed marginals give I/8 and zero multipliers") {
    const auto r = maxent_from_marginals(MarginalSet::from_state(maximally_mixed({2, 2, 2}), 2));
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.residual == doctest::Approx(0.0));
    CHECK(max_abs_diff(r.state.matrix(), ComplexMatrix::Identity(8, 8) / 8.0) < 1e-15);
    REQUIRE(r.multipliers.size() == 3);
    for (const auto& m : r.multipliers) CHECK(m.lambda.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.log_partition == doctest::Approx(3.0 * std::log(2.0)));
  }

  TEST_CASE("exponential form and result invariants") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_density({2, 2, 2}, rng);
      const auto targets = MarginalSet::from_state(rho, 2);
      const auto r = maxent_from_marginals(targets);
      REQUIRE(r.converged);
      CHECK(std::abs(targets.max_frobenius_residual(r.state.matrix()) - r.residual) <= 1e-12);

      ComplexMatrix exponent = -r.log_partition * ComplexMatrix::Identity(8, 8);
      for (std::size_t p = 0; p < r.multipliers.size(); ++p) {
        CHECK(hermiticity_defect(r.multipliers[p].lambda) <= 1e-10);
        exponent += embed(r.multipliers[p].lambda, rho.dims(), r.multipliers[p].subsystems);
      }
      CHECK(max_abs_diff(exp_hermitian(exponent), r.state.matrix()) <= 1e-10);

      CHECK(pauli_expansion_of_operator(log_on_support(r.state)).max_abs_three_body() <= 1e-6);
      CHECK(r.entropy >= von_neumann_entropy(rho) - 1e-6);
    }
  }

  TEST_CASE("rank-deficient targets report the achieved residual honestly") {
    const auto targets = MarginalSet::from_state(density_from_pure(ghz()), 2);
    DualConfig cfg;
    cfg.max_iterations = 20;
    const auto r = maxent_from_marginals(targets, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 20);
    CHECK(r.residual > cfg.tolerance);
    CHECK(r.residual == doctest::Approx(targets.max_frobenius_residual(r.state.matrix())));
  }

  TEST_CASE("overlap-inconsistent targets are rejected") {
    const MarginalSet bad({2, 2, 2}, {{{0, 1}, ket_projector({2, 2}, {0, 0})},
                                      {{1, 2}, ket_projector({2, 2}, {1, 1})}});
    CHECK(bad.overlap_mismatch() == doctest::Approx(1.0));
    CHECK_THROWS_AS(maxent_from_marginals(bad), std::invalid_argument);
    CHECK_THROWS_AS(maxent_primal(bad), std::invalid_argument);
  }

  TEST_CASE("marginal dims must match the subset") {
    CHECK_THROWS_AS(MarginalSet({2, 2, 2}, {{{0, 1}, maximally_mixed({2})}}), std::invalid_argument);
  }
}

TEST_SUITE("primal penalty oracle") {
  TEST_CASE("disk oracle puts the GHZ optimum at the diagonal mixture") {
    const auto best = ghz_disk_oracle();
    CHECK(std::abs(best.coherence) == 0.0);
    CHECK(best.entropy == doctest::Approx(1.0));
  }

  TEST_CASE("GHZ pair marginals reconstruct to the diagonal mixture") {
    const auto targets = MarginalSet::from_state(density_from_pure(ghz()), 2);
    const auto r = maxent_primal(targets);
    CHECK(r.converged);
    CHECK(r.method == MaxEntMethod::PrimalPenalty);
    CHECK(r.residual <= 1e-4);
    CHECK(r.entropy == doctest::Approx(ghz_disk_oracle().entropy).epsilon(5e-3));
    CHECK(trace_distance(r.state, ghz_mixture()) <= 5e-3);
  }
}

TEST_SUITE("irreducible_correlation") {
  TEST_CASE("GHZ carries one bit") {
    CorrelationConfig primal;
    primal.method = CorrelationMethod::PrimalPenalty;
    const auto rep = irreducible_correlation(density_from_pure(ghz()), 2, primal);
    CHECK(rep.converged);
    CHECK(rep.reconstruction.method == MaxEntMethod::PrimalPenalty);
    CHECK(rep.bits == doctest::Approx(1.0).epsilon(5e-3));

    const auto automatic = irreducible_correlation(density_from_pure(ghz()), 2);
    CHECK(automatic.converged);
    CHECK(automatic.bits == doctest::Approx(1.0).epsilon(5e-3));
  }

  TEST_CASE("product pure state carries none") {
    const auto rep = irreducible_correlation(ket_projector({2, 2, 2}, {0, 0, 0}), 2);
    CHECK(rep.bits <= 5e-3);
    CHECK(rep.bits >= -1e-4);
  }

  TEST_CASE("generic five-term state is nearly determined") {
    const auto rep = irreducible_correlation(density_from_pure(qmarg::testing::generic_five()), 2);
    CHECK(rep.bits <= 5e-3);
  }

  TEST_CASE("two parties, k = 1, is the mutual information") {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_density({2, 2}, rng);
      const auto rep = irreducible_correlation(rho, 1);
      CHECK(rep.converged);
      CHECK(std::abs(rep.bits - mutual_information(rho)) <= 1e-6);
    }
  }

  TEST_CASE("invariant under local unitaries") {
    Rng rng(18);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_density({2, 2, 2}, rng);
      const auto us = qmarg::testing::local_unitaries(3, rng);
      const ComplexMatrix u = kron(kron(us[0], us[1]), us[2]);
      const DensityMatrix rotated({2, 2, 2}, u * rho.matrix() * u.adjoint());
      const auto a = irreducible_correlation(rho, 2);
      const auto b = irreducible_correlation(rotated, 2);
      REQUIRE(a.converged);
      REQUIRE(b.converged);
      CHECK(std::abs(a.bits - b.bits) <= 1e-5);
      CHECK(a.bits >= -1e-6);
    }
  }

  TEST_CASE("arity must be below the party count") {
    CHECK_THROWS_AS(irreducible_correlation(maximally_mixed({2, 2, 2}), 3), std::invalid_argument);
    CHECK_THROWS_AS(irreducible_correlation(maximally_mixed({2, 2, 2}), 0), std::invalid_argument);
  }
}

TEST_SUITE("marginal_feasibility") {
  TEST_CASE("marginals of a real state are feasible") {
    Rng rng(19);
    for (int trial = 0; trial < 5; ++trial) {
      const auto targets = MarginalSet::from_state(random_density({2, 2, 2}, rng), 2);
      const auto rep = marginal_feasibility(targets);
      CHECK(rep.feasible);
      CHECK(rep.best_residual <= 1e-8);
      CHECK(std::abs(targets.squared_residual(rep.witness.matrix()) - rep.best_residual) <= 1e-10);
    }
  }

  TEST_CASE("three singlets are infeasible") {
    const auto s = qmarg::testing::singlet();
    const MarginalSet targets({2, 2, 2}, {{{0, 1}, s}, {{1, 2}, s}, {{0, 2}, s}});
    CHECK(targets.overlap_consistent());
    FeasibilityConfig cfg;
    cfg.restarts = 20;
    const auto rep = marginal_feasibility(targets, cfg);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.restarts_used == 20);
    CHECK(rep.best_residual == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(targets.squared_residual(rep.witness.matrix()) - rep.best_residual) <= 1e-10);
  }

  TEST_CASE("a single Bell pair with a free third party is feasible") {
    const MarginalSet targets({2, 2, 2}, {{{0, 1}, density_from_pure(qmarg::testing::bell())}});
    const auto rep = marginal_feasibility(targets);
    CHECK(rep.feasible);
    CHECK(rep.best_residual <= 1e-8);
  }

  TEST_CASE("overlap inconsistency is reported without search") {
    const MarginalSet bad({2, 2, 2}, {{{0, 1}, ket_projector({2, 2}, {0, 0})},
                                      {{1, 2}, ket_projector({2, 2}, {1, 1})}});
    const auto rep = marginal_feasibility(bad);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.overlap_inconsistent);
    CHECK(rep.restarts_used == 0);
  }
}

TEST_CASE("subset helpers") {
  const auto s = subsets_of_size(4, 2);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == Subsystems{0, 1});
  CHECK(s.back() == Subsystems{2, 3});
  CHECK(subsystem_label({0, 2}) == "AC");
}
