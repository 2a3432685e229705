#include "qmarg/classical.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qmarg::classical {
namespace {

bool odd_parity(std::size_t index) { return std::popcount(index) % 2 == 1; }

void require_three_bits(const JointDistribution& p, const char* what) {
  if (p.variables() != 3) throw std::invalid_argument(std::string(what) + " needs three variables");
}

}  // namespace

JointDistribution::JointDistribution(std::size_t n, std::vector<double> probs)
    : n_(n), probs_(std::move(probs)) {
  if (n_ == 0 || n_ > 16) throw std::invalid_argument("distribution needs 1..16 variables");
  if (probs_.size() != (std::size_t{1} << n_))
    throw std::invalid_argument("expected " + std::to_string(std::size_t{1} << n_) +
                                " probabilities, got " + std::to_string(probs_.size()));
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
      throw std::invalid_argument("probability at index " + std::to_string(i) + " is negative");
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities sum to " + std::to_string(total));
}

JointDistribution JointDistribution::uniform(std::size_t n) {
  const std::size_t size = std::size_t{1} << n;
  return JointDistribution(n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

JointDistribution JointDistribution::point_mass(std::size_t n, std::size_t index) {
  std::vector<double> p(std::size_t{1} << n, 0.0);
  p.at(index) = 1.0;
  return JointDistribution(n, std::move(p));
}

DeltaOutOfRange::DeltaOutOfRange(std::size_t index, double value)
    : std::domain_error("delta leaves the simplex: entry " + std::to_string(index) +
                        " would be " + std::to_string(value)),
      index_(index) {}

JointDistribution marginalize(const JointDistribution& p, std::vector<std::size_t> keep) {
  const std::size_t n = p.variables();
  if (keep.empty()) throw std::invalid_argument("marginalize: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.back() >= n) throw std::invalid_argument("marginalize: variable index out of range");

  std::vector<double> out(std::size_t{1} << keep.size(), 0.0);
  for (std::size_t i = 0; i < p.probs().size(); ++i) {
    std::size_t sub = 0;
    for (std::size_t v : keep) sub = (sub << 1) | ((i >> (n - 1 - v)) & 1u);
    out[sub] += p[i];
  }
  return JointDistribution(keep.size(), std::move(out));
}

JointDistribution delta_family(const JointDistribution& p, double delta) {
  require_three_bits(p, "delta_family");
  std::vector<double> q(p.probs());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] += odd_parity(i) ? -delta : delta;
    if (q[i] < 0.0) throw DeltaOutOfRange(i, q[i]);
  }
  return JointDistribution(3, std::move(q));
}

std::pair<double, double> delta_range(const JointDistribution& p) {
  require_three_bits(p, "delta_range");
  double even = std::numeric_limits<double>::infinity(), odd = even;
  for (std::size_t i = 0; i < 8; ++i) {
    double& slot = odd_parity(i) ? odd : even;
    slot = std::min(slot, p[i]);
  }
  return {-even, odd};
}

double shannon_entropy(const JointDistribution& p) {
  double h = 0.0;
  for (double x : p.probs())
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

PairMarginals pair_marginals(const JointDistribution& p) {
  require_three_bits(p, "pair_marginals");
  return {marginalize(p, {0, 1}), marginalize(p, {0, 2}), marginalize(p, {1, 2})};
}

IpfResult classical_maxent_ipf(const PairMarginals& targets, const IpfConfig& cfg) {
  for (const auto* m : {&targets.xy, &targets.xz, &targets.yz})
    if (m->variables() != 2) throw std::invalid_argument("pair marginals must be two-variable");

  // cell (i,j,k) -> index into each pair table
  auto xy = [](std::size_t c) { return c >> 1; };
  auto xz = [](std::size_t c) { return ((c >> 2) << 1) | (c & 1u); };
  auto yz = [](std::size_t c) { return c & 3u; };
  const std::array<std::pair<const JointDistribution*, std::size_t (*)(std::size_t)>, 3> steps{
      {{&targets.xy, +xy}, {&targets.xz, +xz}, {&targets.yz, +yz}}};

  std::vector<double> q(8, 0.125);
  auto residual = [&] {
    double worst = 0.0;
    for (const auto& [target, key] : steps) {
      std::array<double, 4> m{};
      for (std::size_t c = 0; c < 8; ++c) m[key(c)] += q[c];
      for (std::size_t t = 0; t < 4; ++t) worst = std::max(worst, std::abs(m[t] - (*target)[t]));
    }
    return worst;
  };

  int sweep = 0;
  double res = residual();
  for (; sweep < cfg.max_sweeps && res > cfg.tolerance; ++sweep) {
    for (const auto& [target, key] : steps) {
      std::array<double, 4> m{};
      for (std::size_t c = 0; c < 8; ++c) m[key(c)] += q[c];
      for (std::size_t c = 0; c < 8; ++c) {
        const double have = m[key(c)];
        q[c] = have > 0.0 ? q[c] * (*target)[key(c)] / have : 0.0;
      }
    }
    res = residual();
  }
  // Renormalize away rounding; inconsistent targets can also leave mass off 1.
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  if (total > 0.0)
    for (double& x : q) x /= total;
  return {JointDistribution(3, std::move(q)), res, sweep, res <= cfg.tolerance};
}

}  // namespace qmarg::classical
