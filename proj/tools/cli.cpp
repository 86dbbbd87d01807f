#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "monosindex/monosindex.hpp"
#include "reports.hpp"

namespace monosindex::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kCubicNormal = "cubic-normal";

struct FitArgs {
  std::string data;
  std::string estimator;
  double mu = 0.1;
  double bw_const = 0.5;
  std::size_t starts = 20;
  std::uint64_t seed = 0;
  std::string format = "json";
};

struct SimulateArgs {
  std::string model = kCubicNormal;
  std::size_t n = 200;
  std::size_t d = 3;
  std::size_t reps = 100;
  std::string estimators = "lse,sse,ese,plse,linear,mre";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out;
  double mu = 0.1;
  double bw_const = 0.5;
  std::size_t starts = 20;
};

struct AsymptoticsArgs {
  std::string model = kCubicNormal;
  std::string estimator;
  std::string variant = "sandwich";
  std::size_t mc = kDefaultMcSamples;
  std::uint64_t seed = 0;
  std::size_t d = 3;
  std::string format = "json";
};

// Usage problems found after CLI11 has accepted the syntax.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_workers() {
  if (const char* env = std::getenv("MONOSINDEX_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::set<Estimator> parse_estimator_list(const std::string& list) {
  std::set<Estimator> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.insert(estimator_from_string(item));
    } catch (const InvalidArgument& ex) {
      throw UsageError(ex.what());
    }
  }
  if (out.empty()) throw UsageError("--estimators selects nothing");
  return out;
}

ModelSpec model_from_name(const std::string& name, std::size_t d) {
  if (name != kCubicNormal) throw UsageError("unsupported model '" + name + "'");
  if (d < 2) throw UsageError("--d must be >= 2");
  return ModelSpec::cubic_normal(d);
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  if (!(a.mu > 0.0)) throw UsageError("--mu must be positive");
  if (!(a.bw_const > 0.0)) throw UsageError("--bw-const must be positive");
  if (a.starts < 1) throw UsageError("--starts must be >= 1");
  const Estimator estimator = estimator_from_string(a.estimator);

  const Sample sample = read_dataset(fs::path(a.data));

  PipelineConfig config;
  config.estimators = {estimator};
  config.n_starts = a.starts;
  config.seed = a.seed;
  config.mu = a.mu;
  config.bandwidth.constant = a.bw_const;
  const auto results = warm_start_pipeline(sample, config);
  const EstimateResult& r = results.at(estimator);

  if (a.format == "json") {
    out << fit_json(estimator, sample, r).dump(2) << '\n';
  } else {
    write_fit_csv(out, estimator, sample, r);
  }
  return kSuccess;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path.string() + "'");
  f << content;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.reps < 2) throw UsageError("--reps must be >= 2 to form a summary");
  if (a.workers < 1) throw UsageError("--workers must be >= 1");
  if (!(a.mu > 0.0)) throw UsageError("--mu must be positive");
  if (!(a.bw_const > 0.0)) throw UsageError("--bw-const must be positive");
  if (a.starts < 1) throw UsageError("--starts must be >= 1");
  if (a.out.empty()) throw UsageError("--out is required");

  SimConfig config;
  config.spec = model_from_name(a.model, a.d);
  config.n = a.n;
  if (config.n < a.d + 1) throw UsageError("--n must be >= d + 1");
  config.reps = a.reps;
  config.estimators = parse_estimator_list(a.estimators);
  config.seed = a.seed;
  config.workers = a.workers;
  config.pipeline.mu = a.mu;
  config.pipeline.bandwidth.constant = a.bw_const;
  config.pipeline.n_starts = a.starts;

  const auto t0 = std::chrono::steady_clock::now();
  const ReplicationTable table = run_replications(config);
  SimulationSummary summary = summarize(table, config.spec.alpha0, config.n);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir.string() + "': " + ec.message());

  std::ostringstream estimates, errors, summary_csv;
  write_estimates_csv(estimates, table, a.d);
  write_scaled_errors_csv(errors, table, config.spec.alpha0, config.n);
  write_summary_csv(summary_csv, summary, a.d);
  const SimulationInfo info{a.model, a.n, a.d, a.reps, a.seed};
  write_file(dir / "estimates.csv", estimates.str());
  write_file(dir / "scaled_errors.csv", errors.str());
  write_file(dir / "summary.csv", summary_csv.str());
  write_file(dir / "summary.json", summary_json(info, summary).dump(2) + "\n");

  out << summary_csv.str();
  err << "simulate: " << a.reps << " replications in " << summary.wall_seconds
      << " s, outputs in " << dir.string() << '\n';
  return kSuccess;
}

int cmd_asymptotics(const AsymptoticsArgs& a, std::ostream& out) {
  const ModelSpec spec = model_from_name(a.model, a.d);
  if (a.mc < 2) throw UsageError("--mc must be >= 2");
  AsymptoticCovariance result;
  std::string variant;
  if (a.estimator == "sse") {
    result = asymptotic_cov_sse(spec, a.mc, a.seed);
  } else if (a.estimator == "ese") {
    result = asymptotic_cov_ese(spec, a.mc, a.seed);
  } else if (a.estimator == "linear") {
    LinearVariant v;
    try {
      v = linear_variant_from_string(a.variant);
    } catch (const InvalidArgument& ex) {
      throw UsageError(ex.what());
    }
    variant = to_string(v);
    result = asymptotic_cov_linear(spec, a.mc, a.seed, v);
  } else {
    throw UsageError("no asymptotic covariance is available for estimator '" +
                     a.estimator + "' (supported: sse, ese, linear)");
  }
  if (a.format == "json") {
    out << asymptotics_json(a.model, a.estimator, variant, result).dump(2) << '\n';
  } else {
    write_asymptotics_csv(out, result);
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index estimation in the monotone single index model"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate the index vector of a dataset");
  fit_cmd->add_option("--data", fit.data, "CSV with header X1,...,Xd,Y")->required();
  fit_cmd->add_option("--estimator", fit.estimator, "Estimator")
      ->required()
      ->check(CLI::IsMember({"lse", "sse", "ese", "plse", "linear", "mre"}));
  fit_cmd->add_option("--mu", fit.mu, "Spline penalty for plse")->capture_default_str();
  fit_cmd->add_option("--bw-const", fit.bw_const, "Bandwidth constant for ese")
      ->capture_default_str();
  fit_cmd->add_option("--starts", fit.starts, "Random LSE starts")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed for the LSE starts")->capture_default_str();
  fit_cmd->add_option("--format", fit.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  SimulateArgs sim;
  sim.workers = default_workers();
  auto* sim_cmd = app.add_subcommand("simulate", "Run a replicated simulation study");
  sim_cmd->add_option("--model", sim.model, "Simulation model")
      ->check(CLI::IsMember({kCubicNormal}))
      ->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "Sample size")->required();
  sim_cmd->add_option("--d", sim.d, "Covariate dimension")->capture_default_str();
  sim_cmd->add_option("--reps", sim.reps, "Replications")->required();
  sim_cmd->add_option("--estimators", sim.estimators, "Comma-separated estimators")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--workers", sim.workers,
                      "Worker threads (default: $MONOSINDEX_WORKERS or 1)")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--mu", sim.mu, "Spline penalty for plse")->capture_default_str();
  sim_cmd->add_option("--bw-const", sim.bw_const, "Bandwidth constant for ese")
      ->capture_default_str();
  sim_cmd->add_option("--starts", sim.starts, "Random LSE starts")->capture_default_str();

  AsymptoticsArgs asy;
  auto* asy_cmd = app.add_subcommand("asymptotics", "Limiting covariance of an estimator");
  asy_cmd->add_option("--model", asy.model, "Model")
      ->check(CLI::IsMember({kCubicNormal}))
      ->capture_default_str();
  asy_cmd->add_option("--estimator", asy.estimator, "sse, ese or linear")->required();
  asy_cmd->add_option("--variant", asy.variant, "paper_formula or sandwich (linear only)")
      ->capture_default_str();
  asy_cmd->add_option("--mc", asy.mc, "Monte Carlo samples")->capture_default_str();
  asy_cmd->add_option("--seed", asy.seed, "Monte Carlo seed")->capture_default_str();
  asy_cmd->add_option("--d", asy.d, "Covariate dimension")->capture_default_str();
  asy_cmd->add_option("--format", asy.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  if (storage.empty()) storage.emplace_back("monosindex");
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*sim_cmd) return cmd_simulate(sim, out, err);
    if (*asy_cmd) return cmd_asymptotics(asy, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace monosindex::cli
