#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmarg/classical.hpp"
#include "qmarg/maxent.hpp"
#include "qmarg/state_file.hpp"
#include "qmarg/uniqueness.hpp"

namespace qmarg::cli {
namespace {

using nlohmann::json;

struct CommonFlags {
  std::string format = "text";
  std::uint64_t seed = 42;
  std::size_t restarts = 8;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

void print_text(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) print_text(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    for (std::size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out << prefix << ": ";
  if (j.is_number_float()) {
    out << std::setprecision(6) << j.get<double>();
  } else if (j.is_string()) {
    out << j.get<std::string>();
  } else {
    out << j.dump();
  }
  out << "\n";
}

void emit(const json& report, const CommonFlags& flags, std::ostream& out) {
  if (flags.format == "json")
    out << report.dump(2) << "\n";
  else
    print_text(report, "", out);
}

const char* method_name(MaxEntMethod m) {
  return m == MaxEntMethod::Dual ? "dual" : "primal-penalty";
}

json search_json(const SearchReport& s) {
  return {{"alternative_found", s.alternative_found},
          {"trace_distance_to_input", s.trace_distance_to_input},
          {"marginal_residual", s.marginal_residual},
          {"restarts", s.restarts},
          {"best_restart", s.best_restart},
          {"env_dim", s.env_dim}};
}

json spectrum_json(const DensityMatrix& rho) {
  json values = json::array();
  const RealVector ev = eigh(rho.matrix()).values;
  for (Eigen::Index i = ev.size(); i-- > 0;) values.push_back(ev(i));
  return values;
}

// ---- analyze ---------------------------------------------------------------

int analyze(const std::string& path, bool search, double tol, std::optional<std::size_t> arity,
            const CommonFlags& flags, std::ostream& out) {
  const StateFile file = load_state_file(path);
  json report{{"command", "analyze"}, {"kind", state_kind_name(file.kind())}};

  std::optional<PureState> pure;
  std::optional<DensityMatrix> rho;
  if (const auto* p = std::get_if<PureState>(&file.payload)) {
    if (p->dims() != Dims{2, 2, 2} && p->dims() != Dims{2, 2, 2, 2})
      throw ParseError(path, "analyze needs a three- or four-qubit pure state");
    pure = *p;
    rho = density_from_pure(*p);
  } else if (const auto* d = std::get_if<DensityMatrix>(&file.payload)) {
    if (d->dims() != Dims{2, 2, 2}) throw ParseError(path, "analyze needs a three-qubit density matrix");
    rho = *d;
  } else {
    throw ParseError(path, "analyze needs a pure or density state file");
  }
  const std::size_t n = rho->subsystems();
  report["qubits"] = n;

  if (pure && n == 3) {
    const ClassificationVerdict v = classify(*pure, tol);
    report["verdict"] = verdict_name(v.kind);
    report["degenerate"] = v.degenerate;
    report["product_cut"] = v.product_cut ? json(subsystem_label({*v.product_cut})) : json(nullptr);
    json groupings = json::array();
    for (std::size_t g = 0; g < 3; ++g) {
      const auto& inv = v.invariants[g];
      groupings.push_back({{"name", grouping_name(inv.grouping)},
                           {"alpha", complex_json(inv.alpha)},
                           {"beta", complex_json(inv.beta)},
                           {"gamma", complex_json(inv.gamma)},
                           {"modulus_equal", v.conditions[g].modulus_equal},
                           {"phase_positive", v.conditions[g].phase_positive}});
    }
    report["groupings"] = std::move(groupings);
  }

  const std::size_t k = arity.value_or(n - 1);
  const CorrelationReport corr = irreducible_correlation(*rho, k);
  report["correlation"] = {{"bits", corr.bits},
                           {"arity", k},
                           {"converged", corr.converged},
                           {"method", method_name(corr.reconstruction.method)},
                           {"residual", corr.reconstruction.residual},
                           {"trace_distance", corr.trace_distance}};
  if (!corr.converged)
    report["warning"] = "max-entropy reconstruction did not converge; value is approximate";

  if (search) {
    if (!pure) throw ParseError(path, "--search needs a pure state");
    SearchConfig cfg;
    cfg.restarts = flags.restarts;
    cfg.seed = flags.seed;
    report["search"] = search_json(uniqueness_search(*pure, cfg));
  }
  emit(report, flags, out);
  return kSuccess;
}

// ---- maxent ----------------------------------------------------------------

int maxent(const std::string& path, const std::string& out_path, double tol,
           const CommonFlags& flags, std::ostream& out) {
  const StateFile file = load_state_file(path);
  const auto* targets = std::get_if<MarginalSet>(&file.payload);
  if (targets == nullptr) throw ParseError(path, "maxent needs a marginals file");

  FeasibilityConfig fcfg;
  fcfg.restarts = flags.restarts;
  fcfg.seed = flags.seed;
  fcfg.tolerance = tol;
  const FeasibilityReport feas = marginal_feasibility(*targets, fcfg);
  json report{{"command", "maxent"},
              {"feasibility",
               {{"feasible", feas.feasible},
                {"best_residual", feas.best_residual},
                {"overlap_inconsistent", feas.overlap_inconsistent},
                {"restarts", feas.restarts_used}}}};
  if (!feas.feasible) {
    report["witness"] = {{"entropy_bits", von_neumann_entropy(feas.witness)},
                         {"eigenvalues", spectrum_json(feas.witness)}};
    emit(report, flags, out);
    return kInfeasible;
  }

  MaxEntResult result = maxent_from_marginals(*targets);
  if (!result.converged) result = maxent_primal(*targets);
  report["maxent"] = {{"method", method_name(result.method)},
                      {"converged", result.converged},
                      {"residual", result.residual},
                      {"iterations", result.iterations},
                      {"entropy_bits", result.entropy},
                      {"eigenvalues", spectrum_json(result.state)}};
  if (!result.converged) report["warning"] = "max-entropy reconstruction did not converge";
  if (!out_path.empty()) {
    save_state_file(out_path, StateFile{result.state});
    report["output"] = out_path;
  }
  emit(report, flags, out);
  return kSuccess;
}

// ---- classical -------------------------------------------------------------

int classical_cmd(const std::string& path, std::optional<double> delta, bool range, bool ipf,
                  const CommonFlags& flags, std::ostream& out) {
  const StateFile file = load_state_file(path);
  const auto* p = std::get_if<classical::JointDistribution>(&file.payload);
  if (p == nullptr || p->variables() != 3)
    throw ParseError(path, "classical needs a three-bit classical distribution");
  json report{{"command", "classical"}};

  if (delta) {
    const classical::JointDistribution q = classical::delta_family(*p, *delta);
    const auto mp = classical::pair_marginals(*p);
    const auto mq = classical::pair_marginals(q);
    double diff = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      diff = std::max(diff, std::abs(mp.xy[i] - mq.xy[i]));
      diff = std::max(diff, std::abs(mp.xz[i] - mq.xz[i]));
      diff = std::max(diff, std::abs(mp.yz[i] - mq.yz[i]));
    }
    report["delta"] = *delta;
    report["q"] = q.probs();
    report["max_marginal_diff"] = diff;
    report["marginal_check"] = diff <= 1e-15 ? "PASS" : "FAIL";
  } else if (range) {
    const auto [lo, hi] = classical::delta_range(*p);
    report["delta_min"] = lo;
    report["delta_max"] = hi;
  } else if (ipf) {
    const auto res = classical::classical_maxent_ipf(classical::pair_marginals(*p));
    report["distribution"] = res.distribution.probs();
    report["entropy_bits"] = classical::shannon_entropy(res.distribution);
    report["source_entropy_bits"] = classical::shannon_entropy(*p);
    report["residual"] = res.residual;
    report["sweeps"] = res.sweeps;
    report["converged"] = res.converged;
  }
  emit(report, flags, out);
  return kSuccess;
}

// ---- counterexample --------------------------------------------------------

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw ParseError(text, "expected RE or RE,IM");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw ParseError(text, "expected RE or RE,IM");
  }
  return {re, im};
}

int counterexample(const std::string& a_text, const std::string& b_text, const std::string& prefix,
                   const CommonFlags& flags, std::ostream& out) {
  const Complex a = parse_complex(a_text), b = parse_complex(b_text);
  const auto [pure, mixed] = ghz_counterexample(a, b);
  double diff = 0.0;
  for (const auto& pair : subsets_of_size(3, 2))
    diff = std::max(diff, max_abs_diff(partial_trace(pure, pair).matrix(),
                                       partial_trace(mixed, pair).matrix()));
  json report{{"command", "counterexample"},
              {"a", complex_json(a)},
              {"b", complex_json(b)},
              {"trace_distance", trace_distance(pure, mixed)},
              {"max_marginal_diff", diff}};
  if (!prefix.empty()) {
    save_state_file(prefix + ".pure.json", StateFile{pure});
    save_state_file(prefix + ".mixed.json", StateFile{mixed});
    report["pure"] = prefix + ".pure.json";
    report["mixed"] = prefix + ".mixed.json";
  }
  emit(report, flags, out);
  return kSuccess;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for randomized restarts")->capture_default_str();
  cmd->add_option("--restarts", flags.restarts, "Random restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyze quantum states against their reduced density matrices"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::string file, out_path;
  bool search = false, range = false, ipf = false;
  double class_tol = 1e-8, feas_tol = 1e-6;
  std::optional<double> delta;
  std::optional<std::size_t> arity;
  std::string a_text, b_text;

  auto* analyze_cmd = app.add_subcommand("analyze", "Classify a state and measure irreducible correlation");
  analyze_cmd->add_option("file", file, "State file (pure or density)")->required();
  analyze_cmd->add_flag("--search", search, "Run the numerical uniqueness search");
  analyze_cmd->add_option("--tol", class_tol, "Relative tolerance of the D-conditions")->capture_default_str();
  analyze_cmd->add_option("--arity", arity, "Marginal size for the correlation measure (default n-1)");
  add_common(analyze_cmd, flags);

  auto* maxent_cmd = app.add_subcommand("maxent", "Max-entropy reconstruction from marginals");
  maxent_cmd->add_option("file", file, "Marginals file")->required();
  maxent_cmd->add_option("--out", out_path, "Write the reconstructed state here");
  maxent_cmd->add_option("--tol", feas_tol, "Feasibility tolerance on the squared residual")->capture_default_str();
  add_common(maxent_cmd, flags);

  auto* classical_cmd_app = app.add_subcommand("classical", "Three-bit classical distributions");
  classical_cmd_app->add_option("file", file, "Classical distribution file")->required();
  auto* operation = classical_cmd_app->add_option_group("operation");
  operation->add_option("--delta", delta, "Apply the parity shift");
  operation->add_flag("--range", range, "Print the admissible delta interval");
  operation->add_flag("--ipf", ipf, "Max-entropy fit to the pair marginals");
  operation->require_option(1);
  add_common(classical_cmd_app, flags);

  auto* counter_cmd = app.add_subcommand("counterexample", "Pure and mixed states with equal marginals");
  counter_cmd->add_option("--a", a_text, "Coefficient of |000> as RE or RE,IM")->required();
  counter_cmd->add_option("--b", b_text, "Coefficient of |111> as RE or RE,IM")->required();
  counter_cmd->add_option("--out", out_path, "Write PREFIX.pure.json and PREFIX.mixed.json");
  add_common(counter_cmd, flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (analyze_cmd->parsed()) return analyze(file, search, class_tol, arity, flags, out);
    if (maxent_cmd->parsed()) return maxent(file, out_path, feas_tol, flags, out);
    if (classical_cmd_app->parsed()) return classical_cmd(file, delta, range, ipf, flags, out);
    if (counter_cmd->parsed()) return counterexample(a_text, b_text, out_path, flags, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const classical::DeltaOutOfRange& e) {
    err << "out of range: " << e.what() << " (index " << e.index() << ")\n";
    return kOutOfRange;
  } catch (const std::domain_error& e) {
    err << "out of range: " << e.what() << "\n";
    return kOutOfRange;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace qmarg::cli
