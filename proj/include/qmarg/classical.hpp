// Joint distributions of binary variables and their pairwise marginals.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qmarg::classical {

/// Probabilities over n bits, big-endian: variable 0 is the most significant
/// bit of the index.
class JointDistribution {
 public:
  JointDistribution(std::size_t n, std::vector<double> probs);

  static JointDistribution uniform(std::size_t n);
  static JointDistribution point_mass(std::size_t n, std::size_t index);

  std::size_t variables() const { return n_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::size_t n_;
  std::vector<double> probs_;
};

/// Raised by delta_family when δ leaves the admissible interval.
class DeltaOutOfRange : public std::domain_error {
 public:
  DeltaOutOfRange(std::size_t index, double value);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Sums out every variable not in `keep` (kept variables stay in order).
JointDistribution marginalize(const JointDistribution& p, std::vector<std::size_t> keep);

/// q_ijk = p_ijk + δ(−1)^parity(ijk). Every two-variable marginal of q
/// equals that of p.
JointDistribution delta_family(const JointDistribution& p, double delta);

/// Interval of δ for which delta_family stays a distribution:
/// [−min over even-parity cells, min over odd-parity cells].
std::pair<double, double> delta_range(const JointDistribution& p);

double shannon_entropy(const JointDistribution& p);

struct PairMarginals {
  JointDistribution xy, xz, yz;
};

PairMarginals pair_marginals(const JointDistribution& p);

struct IpfConfig {
  int max_sweeps = 10000;
  double tolerance = 1e-12;
};

struct IpfResult {
  JointDistribution distribution;
  double residual;  // max abs marginal mismatch
  int sweeps;
  bool converged;
};

/// Iterative proportional fitting from the uniform start, scaling to XY, XZ,
/// YZ in that order each sweep. Zero cells stay zero.
IpfResult classical_maxent_ipf(const PairMarginals& targets, const IpfConfig& cfg = {});

}  // namespace qmarg::classical
