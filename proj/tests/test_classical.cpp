#include "doctest.h"
#include "qmarg/classical.hpp"
#include "qmarg/maxent.hpp"
#include "support.hpp"

using namespace qmarg::classical;
using qmarg::Rng;

namespace {

JointDistribution ghz_diagonal() { return JointDistribution(3, {0.5, 0, 0, 0, 0, 0, 0, 0.5}); }

JointDistribution random_distribution(Rng& rng) {
  std::gamma_distribution<double> g(1.0);
  std::vector<double> w(8);
  double total = 0.0;
  for (auto& x : w) total += (x = g(rng));
  for (auto& x : w) x /= total;
  return JointDistribution(3, w);
}

JointDistribution product(double px, double py, double pz) {
  std::vector<double> w(8);
  for (std::size_t i = 0; i < 8; ++i)
    w[i] = (i & 4 ? px : 1 - px) * (i & 2 ? py : 1 - py) * (i & 1 ? pz : 1 - pz);
  return JointDistribution(3, w);
}

bool same_pair_marginals(const JointDistribution& a, const JointDistribution& b) {
  const auto ma = pair_marginals(a), mb = pair_marginals(b);
  return ma.xy.probs() == mb.xy.probs() && ma.xz.probs() == mb.xz.probs() &&
         ma.yz.probs() == mb.yz.probs();
}

double max_marginal_gap(const JointDistribution& a, const JointDistribution& b) {
  const auto ma = pair_marginals(a), mb = pair_marginals(b);
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    d = std::max({d, std::abs(ma.xy[i] - mb.xy[i]), std::abs(ma.xz[i] - mb.xz[i]),
                  std::abs(ma.yz[i] - mb.yz[i])});
  return d;
}

// The distributions sharing p's pair marginals are exactly the δ-line through
// p, so the entropy maximizer is a one-dimensional search.
struct LineOptimum {
  double delta;
  double entropy;
};

LineOptimum delta_line_oracle(const JointDistribution& p) {
  auto [lo, hi] = delta_range(p);
  auto h = [&](double d) { return shannon_entropy(delta_family(p, d)); };
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    if (h(a) < h(b))
      lo = a;
    else
      hi = b;
  }
  const double d = 0.5 * (lo + hi);
  return {d, h(d)};
}

qmarg::DensityMatrix diagonal_state(const JointDistribution& p) {
  qmarg::RealVector d(8);
  for (std::size_t i = 0; i < 8; ++i) d(static_cast<Eigen::Index>(i)) = p[i];
  return qmarg::DensityMatrix({2, 2, 2}, d.cast<qmarg::Complex>().asDiagonal());
}

}  // namespace

TEST_SUITE("JointDistribution") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(JointDistribution(3, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(JointDistribution(1, {1.1, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(JointDistribution(1, {0.5, 0.4}), std::invalid_argument);
    CHECK_NOTHROW(JointDistribution(1, {0.5, 0.5}));
  }

  TEST_CASE("marginalize") {
    CHECK(marginalize(JointDistribution::uniform(3), {0, 1}).probs() == std::vector<double>(4, 0.25));
    CHECK(marginalize(JointDistribution::point_mass(3, 0), {2}).probs() == std::vector<double>{1.0, 0.0});
    CHECK(marginalize(ghz_diagonal(), {0, 1}).probs() == std::vector<double>{0.5, 0, 0, 0.5});
    CHECK_THROWS_AS(marginalize(ghz_diagonal(), {}), std::invalid_argument);
    CHECK_THROWS_AS(marginalize(ghz_diagonal(), {3}), std::invalid_argument);
  }

  TEST_CASE("marginalize keeps variable order and total mass") {
    Rng rng(51);
    const auto p = random_distribution(rng);
    const auto xz = marginalize(p, {0, 2});
    CHECK(xz[1] == doctest::Approx(p[1] + p[3]));  // x=0, z=1
    double total = 0.0;
    for (double x : xz.probs()) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_SUITE("delta_family") {
  TEST_CASE("uniform with delta 1/8 is parity supported") {
    const auto q = delta_family(JointDistribution::uniform(3), 0.125);
    CHECK(q.probs() == std::vector<double>{0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0});
    CHECK(same_pair_marginals(q, JointDistribution::uniform(3)));
    for (const auto& m : {pair_marginals(q).xy, pair_marginals(q).xz, pair_marginals(q).yz})
      CHECK(m.probs() == std::vector<double>(4, 0.25));
  }

  TEST_CASE("zero delta is the identity") {
    Rng rng(52);
    const auto p = random_distribution(rng);
    CHECK(delta_family(p, 0.0).probs() == p.probs());
  }

  TEST_CASE("point mass admits no shift") {
    const auto p = JointDistribution::point_mass(3, 0);
    CHECK_THROWS_AS(delta_family(p, 0.01), DeltaOutOfRange);
    CHECK_THROWS_AS(delta_family(p, -0.01), DeltaOutOfRange);
    try {
      delta_family(p, 0.01);
    } catch (const DeltaOutOfRange& e) {
      CHECK(e.index() == 1);  // q001 = -δ
    }
  }

  TEST_CASE("exact marginal equality on dyadic distributions") {
    Rng rng(53);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = qmarg::testing::dyadic_distribution(rng);
      for (bool positive : {true, false}) {
        const double delta = qmarg::testing::dyadic_delta(p, positive);
        REQUIRE(delta != 0.0);
        const auto q = delta_family(p, delta);
        CHECK(same_pair_marginals(p, q));
        CHECK(q.probs() != p.probs());
      }
    }
  }

  TEST_CASE("marginal equality to rounding on arbitrary distributions") {
    Rng rng(54);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_distribution(rng);
      const auto [lo, hi] = delta_range(p);
      CHECK(max_marginal_gap(p, delta_family(p, 0.9 * hi)) <= 1e-15);
      CHECK(max_marginal_gap(p, delta_family(p, 0.9 * lo)) <= 1e-15);
    }
  }

  TEST_CASE("accepts exactly the admissible interval") {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_distribution(rng);
      const auto [lo, hi] = delta_range(p);
      CHECK_NOTHROW(delta_family(p, lo));
      CHECK_NOTHROW(delta_family(p, hi));
      CHECK_THROWS_AS(delta_family(p, hi * (1 + 1e-9) + 1e-15), DeltaOutOfRange);
      CHECK_THROWS_AS(delta_family(p, lo * (1 + 1e-9) - 1e-15), DeltaOutOfRange);
    }
  }
}

TEST_SUITE("delta_range") {
  TEST_CASE("examples") {
    CHECK(delta_range(JointDistribution::uniform(3)) == std::pair{-0.125, 0.125});
    CHECK(delta_range(JointDistribution::point_mass(3, 0)) == std::pair{0.0, 0.0});
    std::vector<double> w(8, 1.0 / 14.0);
    w[0] = 0.5;
    const auto [lo, hi] = delta_range(JointDistribution(3, w));
    CHECK(lo == doctest::Approx(-1.0 / 14.0));
    CHECK(hi == doctest::Approx(1.0 / 14.0));
  }
}

TEST_SUITE("classical_maxent_ipf") {
  TEST_CASE("uniform marginals give the uniform joint") {
    const auto r = classical_maxent_ipf(pair_marginals(JointDistribution::uniform(3)));
    CHECK(r.converged);
    CHECK(r.distribution.probs() == JointDistribution::uniform(3).probs());
  }

  TEST_CASE("products are fixed points") {
    const auto p = product(0.2, 0.7, 0.4);
    const auto r = classical_maxent_ipf(pair_marginals(p));
    CHECK(r.converged);
    for (std::size_t i = 0; i < 8; ++i) CHECK(r.distribution[i] == doctest::Approx(p[i]).epsilon(1e-12));
  }

  TEST_CASE("GHZ-diagonal marginals") {
    const auto p = ghz_diagonal();
    const auto r = classical_maxent_ipf(pair_marginals(p));
    CHECK(r.converged);
    CHECK(r.residual <= 1e-10);
    CHECK(shannon_entropy(r.distribution) >= 1.0 - 1e-12);
    CHECK(shannon_entropy(r.distribution) == doctest::Approx(delta_line_oracle(p).entropy).epsilon(1e-9));
  }

  TEST_CASE("matches the delta-line entropy maximizer") {
    Rng rng(56);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_distribution(rng);
      const auto r = classical_maxent_ipf(pair_marginals(p));
      REQUIRE(r.converged);
      CHECK(r.residual <= 1e-10);
      CHECK(max_marginal_gap(r.distribution, p) <= 1e-10);
      const auto best = delta_line_oracle(p);
      CHECK(std::abs(shannon_entropy(r.distribution) - best.entropy) <= 1e-9);
      CHECK(shannon_entropy(r.distribution) >= shannon_entropy(p) - 1e-9);
      const auto q = delta_family(p, best.delta);
      for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(r.distribution[i] - q[i]) <= 1e-6);
    }
  }

  TEST_CASE("inconsistent marginals do not converge") {
    PairMarginals bad = pair_marginals(JointDistribution::uniform(3));
    bad.xy = JointDistribution(2, {1.0, 0.0, 0.0, 0.0});
    IpfConfig cfg;
    cfg.max_sweeps = 200;
    const auto r = classical_maxent_ipf(bad, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.residual > 1e-3);
  }

  TEST_CASE("quantum diagonal embedding has the same entropy gap") {
    Rng rng(57);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_distribution(rng);
      const double classical_gap = shannon_entropy(classical_maxent_ipf(pair_marginals(p)).distribution) -
                                   shannon_entropy(p);
      const auto quantum = qmarg::irreducible_correlation(diagonal_state(p), 2);
      REQUIRE(quantum.converged);
      CHECK(std::abs(quantum.bits - classical_gap) <= 1e-6);
    }
  }
}
