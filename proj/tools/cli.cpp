#include "cli.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simlearn/bounds.hpp"
#include "simlearn/csv.hpp"
#include "simlearn/harness.hpp"
#include "simlearn/optimizer.hpp"
#include "simlearn/serialization.hpp"

namespace simlearn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Thrown for flag values that parse but are out of range.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  Eigen::Index m = 50;
  Eigen::Index n = 2;
  Eigen::Index k_true = 0;  // 0 means n
  double radius = 1.0;
  double map_norm = 1.0;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

struct ClassFlags {
  std::string hclass = "linear";
  double lambda_cap = 1.0;
  std::string kernel = "rbf";
  double gamma = 1.0;
  int degree = 2;
  double coef0 = 1.0;
  Eigen::Index k = 0;
};

struct OptimFlags {
  TrainConfig cfg;
  std::string config_path;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--m", f.m, "Number of sample points")->capture_default_str();
  cmd->add_option("--n", f.n, "Feature dimension N")->capture_default_str();
  cmd->add_option("--k-true", f.k_true, "Rows of the hidden map (0 = N)")->capture_default_str();
  cmd->add_option("--radius", f.radius, "Radius of the feature ball")->capture_default_str();
  cmd->add_option("--map-norm", f.map_norm, "Spectral norm of the hidden map")
      ->capture_default_str();
  cmd->add_option("--noise", f.noise, "Std. dev. of additive distance noise")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Base seed")->capture_default_str();
}

void add_class_flags(CLI::App* cmd, ClassFlags& f) {
  cmd->add_option("--class", f.hclass, "Hypothesis class")
      ->check(CLI::IsMember({"linear", "kernel"}))
      ->capture_default_str();
  cmd->add_option("--lambda-cap", f.lambda_cap, "Norm budget of the class")->capture_default_str();
  cmd->add_option("--kernel", f.kernel, "Kernel family for --class kernel")
      ->check(CLI::IsMember({"rbf", "linear", "poly", "polynomial"}))
      ->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "RBF width")->capture_default_str();
  cmd->add_option("--degree", f.degree, "Polynomial degree")->capture_default_str();
  cmd->add_option("--coef0", f.coef0, "Polynomial offset")->capture_default_str();
  cmd->add_option("--k", f.k, "Embedding dimension (0 = min(N, m))")->capture_default_str();
}

void add_optim_flags(CLI::App* cmd, OptimFlags& f) {
  cmd->add_option("--penalty", f.cfg.penalty_lambda, "Norm penalty weight")->capture_default_str();
  cmd->add_option("--step", f.cfg.step_size, "Gradient step size")->capture_default_str();
  cmd->add_option("--max-iters", f.cfg.max_iters, "Iteration budget")->capture_default_str();
  cmd->add_option("--grad-tol", f.cfg.grad_tol, "Stationarity tolerance")->capture_default_str();
  cmd->add_option("--eps", f.cfg.smoothing_eps, "Distance smoothing")->capture_default_str();
  cmd->add_option("--config", f.config_path, "JSON training config; explicit flags win");
}

// Config file values apply only to fields not given explicitly on the
// command line.
TrainConfig resolve_train_config(const CLI::App* cmd, const OptimFlags& f, std::uint64_t seed) {
  TrainConfig cfg = f.cfg;
  if (!f.config_path.empty()) {
    TrainConfig from_file = train_config_from_json(read_text_file(f.config_path), f.cfg);
    auto keep = [&](const char* flag, auto member) {
      if (cmd->count(flag) > 0) from_file.*member = cfg.*member;
    };
    keep("--penalty", &TrainConfig::penalty_lambda);
    keep("--step", &TrainConfig::step_size);
    keep("--max-iters", &TrainConfig::max_iters);
    keep("--grad-tol", &TrainConfig::grad_tol);
    keep("--eps", &TrainConfig::smoothing_eps);
    if (cmd->count("--seed") > 0) from_file.seed = seed;
    cfg = from_file;
  } else {
    cfg.seed = seed;
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

SyntheticSpec make_spec(const DataFlags& f) {
  SyntheticSpec spec;
  spec.m = f.m;
  spec.n_features = f.n;
  spec.k_true = f.k_true == 0 ? f.n : f.k_true;
  spec.radius_r = f.radius;
  spec.target_map_norm = f.map_norm;
  spec.noise_sigma = f.noise;
  spec.seed = f.seed;
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

HypothesisClass make_class(const ClassFlags& f) {
  if (!(f.lambda_cap >= 0.0)) throw UsageError("--lambda-cap must be >= 0");
  if (f.k < 0) throw UsageError("--k must be >= 0");
  if (f.hclass == "linear") return LinearClass{f.k, f.lambda_cap};
  KernelSpec spec;
  spec.family = kernel_family_from_string(f.kernel);
  spec.gamma = f.gamma;
  spec.degree = f.degree;
  spec.coef0 = f.coef0;
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  return KernelClass{spec, f.k, f.lambda_cap};
}

json data_json(const SyntheticSpec& s) {
  return {{"m", s.m},
          {"n", s.n_features},
          {"k_true", s.k_true},
          {"radius", s.radius_r},
          {"map_norm", s.target_map_norm},
          {"noise", s.noise_sigma},
          {"seed", s.seed}};
}

json class_json(const HypothesisClass& cls) {
  if (const auto* l = std::get_if<LinearClass>(&cls)) {
    return {{"class", "linear"}, {"k", l->output_dim}, {"lambda_cap", l->lambda_cap}};
  }
  const auto& k = std::get<KernelClass>(cls);
  return {{"class", "kernel"},
          {"k", k.output_dim},
          {"lambda_cap", k.lambda_cap},
          {"kernel", json::parse(kernel_spec_to_json(k.kernel))}};
}

json train_json(const TrainConfig& cfg) { return json::parse(train_config_to_json(cfg)); }

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs) {
  write_json(path, {{"command", command}, {"config", config}, {"outputs", outputs}});
}

std::pair<SampleMatrix, DistanceMatrix> load_data(const std::string& features_path,
                                                  const std::string& distances_path, double tol) {
  Matrix x = read_csv(features_path);
  Matrix d = read_csv(distances_path);
  SampleMatrix sample(std::move(x));
  DistanceMatrix dist = validate_distance_matrix(d, tol);
  if (dist.size() != sample.rows()) {
    throw ValidationError("features have " + std::to_string(sample.rows()) +
                          " rows but the distance matrix is " + std::to_string(dist.size()) + "x" +
                          std::to_string(dist.size()));
  }
  return {std::move(sample), std::move(dist)};
}

int cmd_gen(const DataFlags& f, const std::string& out_dir, std::ostream& out) {
  const SyntheticSpec spec = make_spec(f);
  const fs::path dir = prepare_out_dir(out_dir);
  const SyntheticData data = generate_synthetic(spec);
  write_csv(dir / "features.csv", data.features.values());
  write_csv(dir / "distances.csv", data.distances.values());
  write_csv(dir / "wtrue.csv", data.w_true);
  write_manifest(dir / "manifest.json", "gen", data_json(spec),
                 {"features.csv", "distances.csv", "wtrue.csv"});
  out << "wrote " << spec.m << " points to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_train(const CLI::App* cmd, const std::string& features, const std::string& distances,
              double tol, const ClassFlags& cf, const OptimFlags& of, std::uint64_t seed,
              const std::string& out_dir, std::ostream& out) {
  const HypothesisClass cls = make_class(cf);
  const TrainConfig cfg = resolve_train_config(cmd, of, seed);
  auto [sample, dist] = load_data(features, distances, tol);
  const fs::path dir = prepare_out_dir(out_dir);

  const TrainResult result = train(sample, dist, cls, cfg);

  json config = class_json(cls);
  config["train"] = train_json(cfg);
  config["seed"] = cfg.seed;
  config["features"] = features;
  config["distances"] = distances;

  json report = json::parse(train_report_to_json(result.report));
  report["config"] = config;
  write_text_file(dir / "model.json", model_to_json(result.model));
  write_json(dir / "train_report.json", report);
  write_manifest(dir / "train_manifest.json", "train", config, {"model.json", "train_report.json"});

  out << "final_risk " << result.report.final_risk << " iterations "
      << result.report.iterations_used << " converged "
      << (result.report.converged ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_certify(const std::string& model_path, const std::string& features,
                const std::string& distances, double tol, double delta,
                const std::string& out_dir, std::ostream& out) {
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("--delta must lie in (0, 1)");
  const Model model = model_from_json(read_text_file(model_path));
  auto [sample, dist] = load_data(features, distances, tol);
  const fs::path dir = prepare_out_dir(out_dir);

  const BoundCertificate cert = certify(model, sample, dist, delta);

  json config = {{"model", model_path},
                 {"features", features},
                 {"distances", distances},
                 {"delta", delta},
                 {"tol", tol}};
  json doc = json::parse(certificate_to_json(cert));
  doc["config"] = config;
  write_json(dir / "certificate.json", doc);
  write_manifest(dir / "certify_manifest.json", "certify", config, {"certificate.json"});
  out << "bound " << cert.bound << " slack " << cert.slack << "\n";
  return kExitOk;
}

int cmd_verify(const CLI::App* cmd, const DataFlags& df, const ClassFlags& cf,
               const OptimFlags& of, CoverageConfig coverage, const std::string& out_dir,
               std::ostream& out) {
  if (!(coverage.delta > 0.0 && coverage.delta < 1.0)) {
    throw UsageError("--delta must lie in (0, 1)");
  }
  if (coverage.n_trials < 1) throw UsageError("--trials must be >= 1");
  if (coverage.n_holdout != 0 && coverage.n_holdout < 2) throw UsageError("--holdout must be >= 2");
  const SyntheticSpec spec = make_spec(df);
  const HypothesisClass cls = make_class(cf);
  const TrainConfig cfg = resolve_train_config(cmd, of, df.seed);
  const fs::path dir = prepare_out_dir(out_dir);

  const ExperimentReport report = run_coverage_experiment(spec, cls, cfg, coverage);

  json config = {{"data", data_json(spec)},
                 {"hypothesis", class_json(cls)},
                 {"train", train_json(cfg)},
                 {"seed", spec.seed},
                 {"delta", coverage.delta},
                 {"trials", coverage.n_trials},
                 {"holdout", coverage.n_holdout == 0 ? 10 * spec.m : coverage.n_holdout}};
  json doc = json::parse(experiment_report_to_json(report));
  doc["config"] = config;
  write_json(dir / "report.json", doc);
  write_text_file(dir / "trials.csv", trials_to_csv(report));
  write_manifest(dir / "verify_manifest.json", "verify", config, {"report.json", "trials.csv"});

  out << "coverage_rate " << report.coverage_rate << " (required >= " << 1.0 - coverage.delta
      << ") mean_gap " << report.mean_gap << " mean_slack " << report.mean_slack << "\n";
  return report.passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity learning with Rademacher generalization certificates", "simlearn"};
  app.require_subcommand(1);

  DataFlags gen_data;
  std::string gen_out = ".";
  auto* gen = app.add_subcommand("gen", "Generate a synthetic similarity-learning dataset");
  add_data_flags(gen, gen_data);
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  std::string train_features, train_distances, train_out = ".";
  double train_tol = 1e-9;
  std::uint64_t train_seed = 0;
  ClassFlags train_class;
  OptimFlags train_optim;
  auto* trn = app.add_subcommand("train", "Fit a map whose embedding distances match D");
  trn->add_option("--features", train_features, "Feature CSV (m x N)")->required();
  trn->add_option("--distances", train_distances, "Distance CSV (m x m)")->required();
  trn->add_option("--tol", train_tol, "Symmetry tolerance for D")->capture_default_str();
  trn->add_option("--seed", train_seed, "Initialization seed")->capture_default_str();
  add_class_flags(trn, train_class);
  add_optim_flags(trn, train_optim);
  trn->add_option("--out", train_out, "Output directory")->capture_default_str();

  std::string cert_model, cert_features, cert_distances, cert_out = ".";
  double cert_delta = 0.05;
  double cert_tol = 1e-9;
  auto* crt = app.add_subcommand("certify", "Compute the generalization certificate of a model");
  crt->add_option("--model", cert_model, "Model JSON")->required();
  crt->add_option("--features", cert_features, "Feature CSV (m x N)")->required();
  crt->add_option("--distances", cert_distances, "Distance CSV (m x m)")->required();
  crt->add_option("--delta", cert_delta, "Failure probability")->capture_default_str();
  crt->add_option("--tol", cert_tol, "Symmetry tolerance for D")->capture_default_str();
  crt->add_option("--out", cert_out, "Output directory")->capture_default_str();

  DataFlags ver_data;
  ClassFlags ver_class;
  OptimFlags ver_optim;
  CoverageConfig coverage;
  std::string ver_out = ".";
  auto* ver = app.add_subcommand("verify", "Run the bound-coverage experiment");
  add_data_flags(ver, ver_data);
  add_class_flags(ver, ver_class);
  add_optim_flags(ver, ver_optim);
  ver->add_option("--trials", coverage.n_trials, "Number of trials")->capture_default_str();
  ver->add_option("--delta", coverage.delta, "Failure probability")->capture_default_str();
  ver->add_option("--holdout", coverage.n_holdout, "Holdout size (0 = 10 m)")
      ->capture_default_str();
  ver->add_option("--workers", coverage.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  ver->add_option("--out", ver_out, "Output directory")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_data, gen_out, out);
    if (trn->parsed()) {
      return cmd_train(trn, train_features, train_distances, train_tol, train_class, train_optim,
                       train_seed, train_out, out);
    }
    if (crt->parsed()) {
      return cmd_certify(cert_model, cert_features, cert_distances, cert_tol, cert_delta, cert_out,
                         out);
    }
    if (ver->parsed()) return cmd_verify(ver, ver_data, ver_class, ver_optim, coverage, ver_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace simlearn::cli
