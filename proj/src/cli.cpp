#include "nbpk/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbpk/coalescent.hpp"
#include "nbpk/io.hpp"
#include "nbpk/posterior.hpp"
#include "nbpk/sampler.hpp"
#include "nbpk/validation.hpp"

namespace nbpk::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string model;
  double alpha = 0.5;
  double theta = 1.0;
  double r = 1.0;
  std::string counts;
  std::string counts_file;
  std::string out;
  double rel_tol = QuadratureSpec{}.rel_tol;
  int max_subdivisions = QuadratureSpec{}.max_subdivisions;
  bool csv = false;
  bool show_config = false;

  int n_target = 0;
  std::int64_t reps = 1;
  std::uint64_t seed = kDefaultSeed;
  bool v_trace = false;
  std::string new_block_factor = "blocks";
  std::string v_draw = "augmented";
  double grid_rel_tol = UrnOptions{}.grid_rel_tol;

  std::string phi = "total-n";
  std::vector<double> times;
  std::string h0 = "terminal";
  bool newick = false;
  bool terms = false;

  std::string suite = "all";
  int n_max = 5;
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out, bool csv) const {
    if (csv) {
      print_csv_row(out, header_);
      for (const auto& row : rows_) print_csv_row(out, row);
      return;
    }
    std::vector<std::size_t> width(header_.size());
    for (std::size_t j = 0; j < header_.size(); ++j) width[j] = header_[j].size();
    for (const auto& row : rows_) {
      for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    }
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        out << std::left << std::setw(static_cast<int>(width[j])) << row[j];
        if (j + 1 < row.size()) out << "  ";
      }
      out << '\n';
    };
    line(header_);
    for (const auto& row : rows_) line(row);
  }

 private:
  static void print_csv_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      const bool quote = row[j].find_first_of(",\"") != std::string::npos;
      if (j) out << ',';
      if (quote) {
        out << '"';
        for (char c : row[j]) out << (c == '"' ? "\"\"" : std::string(1, c));
        out << '"';
      } else {
        out << row[j];
      }
    }
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

QuadratureSpec quadrature(const RunConfig& c) {
  QuadratureSpec spec;
  spec.rel_tol = c.rel_tol;
  spec.max_subdivisions = c.max_subdivisions;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

ModelParamsR build_params(const RunConfig& c) {
  if (c.model.empty()) throw UsageError("--model is required");
  try {
    if (c.model == "stable") return ModelParamsR(LevyModel::stable(c.alpha), c.r);
    if (c.model == "gamma") return ModelParamsR(LevyModel::gamma(c.theta), c.r);
    if (c.model == "gengamma") return ModelParamsR(LevyModel::generalized_gamma(c.alpha), c.r);
    if (c.model == "truncstable") return ModelParamsR(LevyModel::truncated_stable(c.alpha), c.r);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown model '" + c.model + "'");
}

std::vector<Configuration> configurations(const RunConfig& c) {
  if (!c.counts.empty() && !c.counts_file.empty()) throw UsageError("give either --counts or --counts-file, not both");
  try {
    if (!c.counts.empty()) return {Configuration::parse(c.counts)};
    if (!c.counts_file.empty()) return read_configurations_file(c.counts_file);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("--counts or --counts-file is required");
}

RateFunction rate_function(const RunConfig& c) {
  if (c.phi == "total-n") return RateFunction::total_n();
  if (c.phi == "total-n-choose-2") return RateFunction::total_n_choose_2();
  throw UsageError("unknown --phi '" + c.phi + "'");
}

ConfigurationFunction h0_function(const RunConfig& c) {
  if (c.h0 == "terminal") return terminal_indicator;
  if (c.h0 == "one") return [](const Configuration&) { return 1.0; };
  if (c.h0 == "blocks") return [](const Configuration& s) { return static_cast<double>(s.blocks()); };
  throw UsageError("unknown --h0 '" + c.h0 + "'");
}

UrnOptions urn_options(const RunConfig& c) {
  UrnOptions options;
  options.factor = c.new_block_factor == "observations" ? NewBlockFactor::Observations : NewBlockFactor::Blocks;
  options.v_draw = c.v_draw == "posterior" ? VDraw::Posterior : VDraw::PredictiveAugmented;
  options.record_v_trace = c.v_trace;
  options.grid_rel_tol = c.grid_rel_tol;
  return options;
}

nlohmann::ordered_json show_config(const RunConfig& c, const std::string& command) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["model"] = c.model.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.model);
  j["alpha"] = c.alpha;
  j["theta"] = c.theta;
  j["r"] = c.r;
  j["seed"] = c.seed;
  j["quadrature"] = {{"rel_tol", c.rel_tol}, {"max_subdivisions", c.max_subdivisions}, {"transform", "log-sinh"}};
  j["v_grid_rel_tol"] = c.grid_rel_tol;
  j["new_block_factor"] = c.new_block_factor;
  j["v_draw"] = c.v_draw;
  j["phi"] = c.phi;
  j["h0"] = c.h0;
  j["ode_abs_tol"] = 1e-10;
  j["validate"] = {{"suite", c.suite}, {"n_max", c.n_max}};
  return j;
}

int cmd_eppf(const RunConfig& c, std::ostream& out) {
  const auto params = build_params(c);
  const auto spec = quadrature(c);
  Table table({"counts", "log_p", "p"});
  for (const auto& config : configurations(c)) {
    const double value = log_eppf(params, config, spec);
    table.add({config.to_string(), fmt(value), fmt(std::exp(value))});
  }
  table.print(out, c.csv);
  return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  const auto params = build_params(c);
  const auto spec = quadrature(c);
  Table table({"counts", "target", "log_omega", "omega", "normalized"});
  for (const auto& config : configurations(c)) {
    const auto weights = predictive_weights(params, config, spec);
    const double log_n = std::log(static_cast<double>(config.total()));
    table.add({config.to_string(), "new", fmt(weights.log_omega0), fmt(std::exp(weights.log_omega0)),
               fmt(std::exp(weights.log_omega0 - weights.log_eppf))});
    for (int i = 0; i < config.blocks(); ++i) {
      const double w = weights.log_omega[i];
      table.add({config.to_string(), "block " + std::to_string(i + 1), fmt(w), fmt(std::exp(w)),
                 fmt(std::exp(w - log_n - weights.log_eppf))});
    }
    table.add({config.to_string(), "eppf", fmt(weights.log_eppf), fmt(std::exp(weights.log_eppf)), ""});
  }
  table.print(out, c.csv);
  return kExitOk;
}

int cmd_gibbs(const RunConfig& c, std::ostream& out) {
  const auto params = build_params(c);
  if (c.n_target < 1) throw UsageError("--n must be at least 1");
  if (c.reps < 1) throw UsageError("--reps must be at least 1");
  UrnSampler sampler(params, urn_options(c));
  for (std::int64_t rep = 0; rep < c.reps; ++rep) {
    out << to_json(sampler.run_chain(c.n_target, c.seed + static_cast<std::uint64_t>(rep))).dump() << '\n';
  }
  return kExitOk;
}

int cmd_coalescent(const RunConfig& c, std::ostream& out) {
  const auto configs = configurations(c);
  if (configs.size() != 1) throw UsageError("coalescent takes a single configuration");
  const Configuration& config = configs.front();

  if (c.terms) {
    const auto params = build_params(c);
    if (config.total() < 2) throw UsageError("--terms needs at least two observations");
    const auto terms = backward_event_probabilities(params, config, quadrature(c));
    Table table({"block", "n_i", "event", "log_term", "probability", "term/p(n-e_i)"});
    for (int i = 0; i < config.blocks(); ++i) {
      table.add({std::to_string(i + 1), std::to_string(config[i]),
                 config[i] > 1 ? "coalescence" : "singleton_removal", fmt(terms.log_terms[i]),
                 fmt(terms.probabilities[i]), fmt(terms.ratios[i])});
    }
    table.add({"sum", "", "", fmt(terms.log_sum), "", ""});
    table.add({"log p(n)", "", "", fmt(terms.log_eppf), "", ""});
    table.print(out, c.csv);
    return kExitOk;
  }

  const auto phi = rate_function(c);
  if (!c.times.empty()) {
    const auto values = h_solver_exact(config, phi, h0_function(c), c.times);
    Table table({"t", "H"});
    for (std::size_t j = 0; j < values.size(); ++j) table.add({fmt(c.times[j]), fmt(values[j])});
    table.print(out, c.csv);
    return kExitOk;
  }

  if (c.reps < 1) throw UsageError("--reps must be at least 1");
  for (std::int64_t rep = 0; rep < c.reps; ++rep) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(rep);
    const auto history = simulate_backward(config, phi, seed);
    for (const auto& event : history.events) {
      auto line = to_json(event);
      line["seed"] = seed;
      out << line.dump() << '\n';
    }
    if (c.newick) {
      Rng rng = make_rng(seed, 1);
      out << nlohmann::json{{"seed", seed}, {"newick", to_newick(history, rng)}}.dump() << '\n';
    }
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  ValidationOptions options;
  options.n_max = c.n_max;
  options.quadrature = quadrature(c);
  if (!c.model.empty()) options.models.push_back(build_params(c));
  if (c.suite != "all" && std::find(validation_suites().begin(), validation_suites().end(), c.suite) ==
                              validation_suites().end()) {
    throw UsageError("unknown suite '" + c.suite + "'");
  }
  const auto results = run_validation(c.suite, options);
  Table table({"suite", "check", "residual", "tolerance", "status"});
  int passed = 0;
  for (const auto& r : results) {
    table.add({r.suite, r.label, fmt(r.residual), fmt(r.tolerance), r.passed ? "PASS" : "FAIL"});
    passed += r.passed;
  }
  table.print(out, c.csv);
  if (!c.csv) out << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<int>(results.size()) ? kExitOk : kExitNumerical;
}

void add_model_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--model", c.model, "Levy density")
      ->check(CLI::IsMember({"stable", "gamma", "gengamma", "truncstable"}));
  cmd->add_option("--alpha", c.alpha, "index for stable, gengamma, truncstable")->capture_default_str();
  cmd->add_option("--theta", c.theta, "gamma density scale")->capture_default_str();
  cmd->add_option("--r", c.r, "negative binomial shape")->capture_default_str();
  cmd->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance")->capture_default_str();
  cmd->add_option("--max-subdivisions", c.max_subdivisions, "quadrature panel budget")->capture_default_str();
}

void add_counts_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--counts", c.counts, "block sizes, e.g. 3,2,1");
  cmd->add_option("--counts-file", c.counts_file, "file with one configuration per line");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Partitions from negative binomial Poisson-Kingman models", "nbpk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--show-config", c.show_config, "print resolved settings as JSON and exit");

  auto* eppf = app.add_subcommand("eppf", "log p(n) and p(n)");
  add_model_options(eppf, c);
  add_counts_options(eppf, c);

  auto* predict = app.add_subcommand("predict", "raw and normalised prediction weights");
  add_model_options(predict, c);
  add_counts_options(predict, c);

  auto* gibbs = app.add_subcommand("gibbs", "simulate partitions with the urn scheme (JSON lines)");
  add_model_options(gibbs, c);
  gibbs->add_option("--n", c.n_target, "sample size")->required();
  gibbs->add_option("--reps", c.reps, "number of chains; chain j uses seed + j")->capture_default_str();
  gibbs->add_option("--seed", c.seed, "base seed")->capture_default_str();
  gibbs->add_flag("--v-trace", c.v_trace, "record the auxiliary variable at every step");
  gibbs->add_option("--new-block-factor", c.new_block_factor, "blocks (r+k) or observations (r+l)")
      ->check(CLI::IsMember({"blocks", "observations"}))
      ->capture_default_str();
  gibbs->add_option("--v-draw", c.v_draw, "augmented or posterior")
      ->check(CLI::IsMember({"augmented", "posterior"}))
      ->capture_default_str();
  gibbs->add_option("--grid-rel-tol", c.grid_rel_tol, "V grid refinement tolerance")->capture_default_str();

  auto* coalescent = app.add_subcommand("coalescent", "backward ancestral process");
  add_model_options(coalescent, c);
  add_counts_options(coalescent, c);
  coalescent->add_option("--reps", c.reps, "number of histories; history j uses seed + j")->capture_default_str();
  coalescent->add_option("--seed", c.seed, "base seed")->capture_default_str();
  coalescent->add_option("--phi", c.phi, "total rate: total-n or total-n-choose-2")
      ->check(CLI::IsMember({"total-n", "total-n-choose-2"}))
      ->capture_default_str();
  coalescent->add_option("--times", c.times, "solve H(n, t) at these times instead of simulating")->delimiter(',');
  coalescent->add_option("--h0", c.h0, "H(., 0): terminal, one or blocks")
      ->check(CLI::IsMember({"terminal", "one", "blocks"}))
      ->capture_default_str();
  coalescent->add_flag("--newick", c.newick, "append a bracket serialisation of each history");
  coalescent->add_flag("--terms", c.terms, "print backward event terms (needs --model)");

  auto* validate = app.add_subcommand("validate", "identity and closed-form checks");
  add_model_options(validate, c);
  validate->add_option("--suite", c.suite, "nunf, nune, pd, derivative, rindep, predictive, coalescent or all")
      ->capture_default_str();
  validate->add_option("--n-max", c.n_max, "largest sample size checked")->capture_default_str();

  for (auto* cmd : {eppf, predict, gibbs, coalescent, validate}) {
    cmd->add_option("--out", c.out, "write results to this file");
    cmd->add_flag("--csv", c.csv, "CSV instead of aligned tables");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    std::ofstream file;
    if (!c.out.empty()) {
      file.open(c.out);
      if (!file) throw UsageError("cannot write to '" + c.out + "'");
    }
    std::ostream& sink = c.out.empty() ? out : file;
    sink << std::setprecision(12);
    if (c.show_config) {
      sink << show_config(c, command).dump(2) << '\n';
      return kExitOk;
    }
    if (command == "eppf") return cmd_eppf(c, sink);
    if (command == "predict") return cmd_predict(c, sink);
    if (command == "gibbs") return cmd_gibbs(c, sink);
    if (command == "coalescent") return cmd_coalescent(c, sink);
    return cmd_validate(c, sink);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace nbpk::cli
