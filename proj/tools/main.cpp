#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "frecl/consensus.hpp"
#include "frecl/csv_io.hpp"
#include "frecl/fpca.hpp"
#include "frecl/metrics.hpp"
#include "frecl/simgen.hpp"
#include "json.hpp"
#include "manifest.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace frecl;

constexpr int kInputExit = 2;
constexpr int kNumericalExit = 3;

// Flat JSON object -> CLI11 config items for the selected subcommand; keys
// are long option names.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
    json j;
    try {
      j = json::parse(is);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: expected a JSON object of key/value pairs");
    std::vector<std::string> parents;
    const auto chosen = root_->get_subcommands();
    if (!chosen.empty()) parents.push_back(chosen.front()->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return io::format_number(v.get<double>());
    throw CLI::ConversionError("config: nested values are not supported");
  }
};

std::string default_out_dir() {
  const char* env = std::getenv("FRECL_OUTPUT_DIR");
  return env && *env ? env : ".";
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::string na_or(const std::optional<double>& v) { return v ? io::format_number(*v) : "NA"; }

std::string na_or(double v) { return std::isnan(v) ? "NA" : io::format_number(v); }

// Options shared by the commands that fit models.
struct FitOptions {
  double lambda = 1e-2;
  int basis_count = 12;
  int basis_order = 4;
  std::string penalty = "ridge";
  std::string norm = "l2";
  int max_iterations = 300;

  void add(CLI::App* app) {
    app->add_option("--lambda", lambda, "Penalty strength")->capture_default_str()->check(CLI::NonNegativeNumber);
    app->add_option("--basis-count", basis_count, "B-spline basis size")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--basis-order", basis_order, "B-spline order")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--penalty", penalty, "ridge or second-difference")
        ->capture_default_str()
        ->check(CLI::IsMember({"ridge", "second-difference"}));
    app->add_option("--norm", norm, "Residual norm, l1 or l2")->capture_default_str()->check(CLI::IsMember({"l1", "l2"}));
    app->add_option("--max-iterations", max_iterations, "Iteration cap per run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  FitConfig fit() const {
    FitConfig f;
    f.lambda = lambda;
    f.basis_count = basis_count;
    f.basis_order = basis_order;
    f.penalty = penalty == "ridge" ? PenaltyKind::Ridge : PenaltyKind::SecondDifference;
    return f;
  }
  NormKind norm_kind() const { return norm == "l1" ? NormKind::L1 : NormKind::L2; }
  RunConfig run(int k) const {
    RunConfig r;
    r.k = k;
    r.max_iterations = max_iterations;
    r.norm = norm_kind();
    r.fit = fit();
    return r;
  }
};

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::uint64_t seed = 0;
  std::size_t m = 300;
  int p = 3;
  int k = 3;
  int points = 24;
  double period = 24.0;
  std::string noise = "iid";
  double sigma2 = 1.0;
  double rho = 0.5;
  double snr = 0.0;
  int harmonics = 4;
  double intercept_amplitude = 0.25;
  std::string out;
};

void cmd_simulate(const SimulateOptions& o) {
  SimSpec spec;
  spec.seed = o.seed;
  spec.m = o.m;
  spec.p = o.p;
  spec.k = o.k;
  spec.grid = TimeGrid::uniform(1.0, static_cast<double>(o.points), o.points);
  spec.period = o.period;
  spec.noise.kind = o.noise == "ar1" ? NoiseKind::Ar1 : NoiseKind::Iid;
  spec.noise.sigma2 = o.sigma2;
  spec.noise.rho = o.rho;
  if (o.snr > 0.0) spec.noise.snr = o.snr;
  spec.harmonics = o.harmonics;
  spec.intercept_amplitude = o.intercept_amplitude;
  if (o.k > static_cast<int>(o.m))
    throw InputError("K (" + std::to_string(o.k) + ") exceeds the number of observations (" + std::to_string(o.m) + ")");

  const SimResult sim = generate(spec);
  const fs::path dir = ensure_dir(o.out);
  const auto& ids = sim.data.ids();
  io::write_curves_file((dir / "Y.csv").string(), sim.data.response(), ids);
  cli::DatasetManifest man;
  man.response = "Y.csv";
  for (std::size_t j = 0; j < sim.data.predictor_count(); ++j) {
    const std::string name = "X" + std::to_string(j + 1) + ".csv";
    io::write_curves_file((dir / name).string(), sim.data.predictor(j), ids);
    man.predictors.push_back(name);
  }
  io::write_partition_file((dir / "truth.csv").string(), sim.truth, ids);
  cli::write_manifest((dir / "manifest.json").string(), man);
  std::cout << "wrote " << sim.data.size() << " observations to " << dir.string() << " (noise variance "
            << io::format_number(sim.sigma2) << ")\n";
}

// ---- cluster ----------------------------------------------------------------

struct ClusterOptions {
  std::string manifest;
  std::uint64_t seed = 0;
  int k = 3;
  int runs = 100;
  int kmeans_restarts = 10;
  int threads = 1;
  std::string out;
  FitOptions fit;
};

ConsensusConfig consensus_config(const FitOptions& f, int k, int runs, int restarts, int threads, std::uint64_t seed) {
  ConsensusConfig c;
  c.run = f.run(k);
  c.runs = runs;
  c.kmeans_restarts = restarts;
  c.threads = threads;
  c.master_seed = seed;
  return c;
}

void cmd_cluster(const ClusterOptions& o) {
  const FunctionalDataset data = cli::load_dataset(o.manifest);
  if (o.k > data.size()) throw InputError("K exceeds the number of observations");
  const FreclProblem problem(data, o.fit.fit(), o.fit.norm_kind());
  const ConsensusResult res =
      frecl_consensus(problem, consensus_config(o.fit, o.k, o.runs, o.kmeans_restarts, o.threads, o.seed));

  const fs::path dir = ensure_dir(o.out);
  io::write_partition_file((dir / "assignments.csv").string(), res.partition, data.ids());
  {
    auto os = open_out(dir / "consensus.csv");
    io::write_count_matrix(os, res.matrix.counts, data.ids());
  }
  auto os = open_out(dir / "diagnostics.csv");
  os << "run,seed,iterations,converged,mse,k_final,ari_to_final\n";
  for (std::size_t l = 0; l < res.runs.size(); ++l) {
    const RunResult& r = res.runs[l];
    os << l + 1 << ',' << res.run_seeds[l] << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
       << io::format_number(r.mse_trace.back()) << ',' << r.partition.k() << ',' << na_or(res.ari_to_final[l]) << '\n';
  }
  std::cout << res.convergent_runs << " of " << res.runs.size() << " runs converged; " << res.partition.k()
            << " clusters written to " << (dir / "assignments.csv").string() << '\n';
}

// ---- elbow ------------------------------------------------------------------

struct ElbowOptions {
  std::string manifest;
  std::uint64_t seed = 0;
  std::vector<int> k_values;
  int runs = 100;
  int kmeans_restarts = 10;
  int threads = 1;
  std::string out;
  FitOptions fit;
};

void cmd_elbow(const ElbowOptions& o) {
  const FunctionalDataset data = cli::load_dataset(o.manifest);
  for (int k : o.k_values)
    if (k > data.size()) throw InputError("K = " + std::to_string(k) + " exceeds the number of observations");
  const FreclProblem problem(data, o.fit.fit(), o.fit.norm_kind());
  const auto rows =
      elbow_table(problem, o.k_values, consensus_config(o.fit, 1, o.runs, o.kmeans_restarts, o.threads, o.seed));
  const fs::path dir = ensure_dir(o.out);
  auto os = open_out(dir / "elbow.csv");
  os << "K_requested,K_final,MSE\n";
  for (const auto& r : rows) os << r.k_requested << ',' << r.k_final << ',' << io::format_number(r.mse) << '\n';
}

// ---- metrics ----------------------------------------------------------------

struct MetricsOptions {
  std::string truth;
  std::string estimate;
  std::string csv;
};

void cmd_metrics(const MetricsOptions& o) {
  const auto a = io::read_partition_file(o.truth);
  const auto b = io::read_partition_file(o.estimate);
  if (a.ids.size() != b.ids.size())
    throw InputError("partitions have different lengths (" + std::to_string(a.ids.size()) + " and " +
                     std::to_string(b.ids.size()) + ")");
  if (a.ids != b.ids) throw InputError("partitions list different ids");
  const double ari = adjusted_rand_index(a.partition, b.partition);
  const double ri = rand_index(a.partition, b.partition);
  const ClusteringRates rates = tpr_tnr(a.partition, b.partition);
  std::cout << "ARI " << io::format_number(ari) << "\nRI " << io::format_number(ri) << "\nTPR " << na_or(rates.tpr)
            << "\nTNR " << na_or(rates.tnr) << '\n';
  if (!o.csv.empty()) {
    auto os = open_out(o.csv);
    os << "ARI,RI,TPR,TNR\n"
       << io::format_number(ari) << ',' << io::format_number(ri) << ',' << na_or(rates.tpr) << ',' << na_or(rates.tnr)
       << '\n';
  }
}

// ---- baseline ---------------------------------------------------------------

struct BaselineOptions {
  std::string manifest;
  std::string truth;
  std::uint64_t seed = 0;
  int k = 3;
  int s_min = 2;
  int s_max = 12;
  int restarts = 10;
  bool with_predictors = false;
  std::string out;
};

Partition aligned_truth(const std::string& path, const FunctionalDataset& data) {
  const auto t = io::read_partition_file(path);
  if (t.ids != data.ids()) throw InputError("truth file '" + path + "' does not list the dataset's ids in order");
  return t.partition;
}

void cmd_baseline(const BaselineOptions& o) {
  const FunctionalDataset data = cli::load_dataset(o.manifest);
  const Partition truth = aligned_truth(o.truth, data);
  std::vector<CurveSet> vars{data.response()};
  if (o.with_predictors)
    for (const auto& x : data.predictors()) vars.push_back(x);
  Rng rng(derive_seed(o.seed, 0));
  const OracleSweep sweep = oracle_sweep(vars, o.k, truth, rng, o.s_min, o.s_max, o.restarts);
  const fs::path dir = ensure_dir(o.out);
  auto os = open_out(dir / "baseline.csv");
  os << "s,ari,best\n";
  for (const auto& r : sweep.rows) os << r.s << ',' << io::format_number(r.ari) << ',' << (r.s == sweep.best_s) << '\n';
  std::cout << "best s = " << sweep.best_s << ", ARI " << io::format_number(sweep.ari) << '\n';
}

// ---- trace ------------------------------------------------------------------

struct TraceOptions {
  std::string manifest;
  std::string truth;
  std::uint64_t seed = 0;
  int k = 3;
  int runs = 10;
  std::string out;
  FitOptions fit;
};

void cmd_trace(const TraceOptions& o) {
  const FunctionalDataset data = cli::load_dataset(o.manifest);
  if (o.k > data.size()) throw InputError("K exceeds the number of observations");
  std::optional<Partition> truth;
  if (!o.truth.empty()) truth = aligned_truth(o.truth, data);
  const FreclProblem problem(data, o.fit.fit(), o.fit.norm_kind());
  RunConfig rc = o.fit.run(o.k);
  rc.record_history = true;

  const fs::path dir = ensure_dir(o.out);
  auto os = open_out(dir / "trace.csv");
  os << "run,iteration,ari,mse,k\n";
  for (int l = 0; l < o.runs; ++l) {
    Rng rng(run_seed(o.seed, static_cast<std::size_t>(l)));
    const RunResult r = frecl_run(problem, rc, rng);
    for (std::size_t it = 0; it < r.history.size(); ++it) {
      const std::string ari = truth ? io::format_number(adjusted_rand_index(*truth, r.history[it])) : "NA";
      os << l + 1 << ',' << it + 1 << ',' << ari << ',' << io::format_number(r.mse_trace[it]) << ',' << r.k_trace[it]
         << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional regression clustering (FRECL)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "frecl 0.1.0");
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file of option values for the subcommand; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  const std::string out_default = default_out_dir();

  SimulateOptions sim;
  sim.out = out_default;
  auto* s = app.add_subcommand("simulate", "Generate a synthetic clustered dataset");
  s->add_option("--seed", sim.seed, "Random seed")->required();
  s->add_option("--m", sim.m, "Observations")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--p", sim.p, "Predictors")->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--k", sim.k, "Clusters")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--points", sim.points, "Grid points t = 1..T")->capture_default_str()->check(CLI::Range(2, 100000));
  s->add_option("--period", sim.period, "Period of the Fourier predictors")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--noise", sim.noise, "iid or ar1")->capture_default_str()->check(CLI::IsMember({"iid", "ar1"}));
  s->add_option("--sigma2", sim.sigma2, "Noise (innovation) variance")->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--rho", sim.rho, "AR(1) coefficient")->capture_default_str();
  s->add_option("--snr", sim.snr, "Signal-to-noise ratio; overrides --sigma2 when positive")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  s->add_option("--harmonics", sim.harmonics, "Fourier harmonics per predictor")->capture_default_str();
  s->add_option("--intercept-amplitude", sim.intercept_amplitude, "Amplitude of the cluster intercepts")
      ->capture_default_str();
  s->add_option("--out", sim.out, "Output directory (default $FRECL_OUTPUT_DIR or .)")->capture_default_str();

  ClusterOptions cl;
  cl.out = out_default;
  auto* c = app.add_subcommand("cluster", "Consensus FRECL clustering");
  c->add_option("--manifest", cl.manifest, "Dataset manifest (JSON)")->required();
  c->add_option("--seed", cl.seed, "Master seed")->required();
  c->add_option("--k", cl.k, "Clusters")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--runs", cl.runs, "Number of FRECL runs L")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--kmeans-restarts", cl.kmeans_restarts, "K-means restarts on the consensus matrix")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--threads", cl.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--out", cl.out, "Output directory (default $FRECL_OUTPUT_DIR or .)")->capture_default_str();
  cl.fit.add(c);

  ElbowOptions el;
  el.out = out_default;
  auto* e = app.add_subcommand("elbow", "MSE of the consensus partition for each K");
  e->add_option("--manifest", el.manifest, "Dataset manifest (JSON)")->required();
  e->add_option("--seed", el.seed, "Master seed")->capture_default_str();
  e->add_option("--k-values", el.k_values, "K values, e.g. 1 2 3 or 1,2,3")->required()->delimiter(',')->check(CLI::PositiveNumber);
  e->add_option("--runs", el.runs, "Number of FRECL runs L")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--kmeans-restarts", el.kmeans_restarts, "K-means restarts")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--threads", el.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--out", el.out, "Output directory (default $FRECL_OUTPUT_DIR or .)")->capture_default_str();
  el.fit.add(e);

  MetricsOptions me;
  auto* mt = app.add_subcommand("metrics", "ARI, RI, TPR and TNR between two partition files");
  mt->add_option("truth", me.truth, "Reference partition CSV")->required();
  mt->add_option("estimate", me.estimate, "Estimated partition CSV")->required();
  mt->add_option("--csv", me.csv, "Also write the values to this CSV file");

  BaselineOptions ba;
  ba.out = out_default;
  auto* b = app.add_subcommand("baseline", "FPCA + K-means oracle sweep over s");
  b->add_option("--manifest", ba.manifest, "Dataset manifest (JSON)")->required();
  b->add_option("--truth", ba.truth, "True partition CSV")->required();
  b->add_option("--seed", ba.seed, "Seed")->capture_default_str();
  b->add_option("--k", ba.k, "Clusters")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--s-min", ba.s_min, "Smallest s")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--s-max", ba.s_max, "Largest s")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--restarts", ba.restarts, "K-means restarts")->capture_default_str()->check(CLI::PositiveNumber);
  b->add_flag("--with-predictors", ba.with_predictors, "Concatenate the predictors' scores to the response's");
  b->add_option("--out", ba.out, "Output directory (default $FRECL_OUTPUT_DIR or .)")->capture_default_str();

  TraceOptions tr;
  tr.out = out_default;
  auto* t = app.add_subcommand("trace", "Per-iteration ARI and MSE of single FRECL runs");
  t->add_option("--manifest", tr.manifest, "Dataset manifest (JSON)")->required();
  t->add_option("--truth", tr.truth, "True partition CSV (ARI is NA without it)");
  t->add_option("--seed", tr.seed, "Master seed")->capture_default_str();
  t->add_option("--k", tr.k, "Clusters")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--runs", tr.runs, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
  t->add_option("--out", tr.out, "Output directory (default $FRECL_OUTPUT_DIR or .)")->capture_default_str();
  tr.fit.add(t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInputExit;
  }

  try {
    if (*s) cmd_simulate(sim);
    else if (*c) cmd_cluster(cl);
    else if (*e) cmd_elbow(el);
    else if (*mt) cmd_metrics(me);
    else if (*b) cmd_baseline(ba);
    else if (*t) cmd_trace(tr);
  } catch (const NumericalError& err) {
    std::cerr << "frecl: numerical failure: " << err.what() << '\n';
    return kNumericalExit;
  } catch (const InputError& err) {
    std::cerr << "frecl: " << err.what() << '\n';
    return kInputExit;
  } catch (const std::exception& err) {
    std::cerr << "frecl: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
