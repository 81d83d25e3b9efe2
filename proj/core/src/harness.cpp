#include "simlearn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "rng.hpp"

namespace simlearn {

namespace {

constexpr std::uint64_t kMapStream = 1;
constexpr std::uint64_t kPointStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix sample_ball(Eigen::Index n, Eigen::Index dim, double radius, detail::Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector dir(dim);
    double norm = 0.0;
    do {
      for (Eigen::Index j = 0; j < dim; ++j) dir(j) = gauss(eng);
      norm = dir.norm();
    } while (norm == 0.0);
    const double rho = radius * std::pow(unif(eng), 1.0 / static_cast<double>(dim));
    Vector p = dir * (rho / norm);
    const double pn = p.norm();
    if (pn > radius) p *= std::nextafter(radius / pn, 0.0);
    x.row(i) = p.transpose();
  }
  return x;
}

TrialResult run_trial(const SyntheticSpec& spec, const HypothesisClass& cls,
                      const TrainConfig& cfg, double delta, Eigen::Index n_holdout, int t) {
  SyntheticSpec trial_spec = spec;
  trial_spec.seed = spec.seed + static_cast<std::uint64_t>(t);
  TrainConfig trial_cfg = cfg;
  trial_cfg.seed = cfg.seed + static_cast<std::uint64_t>(t);

  const SyntheticData data = generate_synthetic(trial_spec);
  const TrainResult fit = train(data.features, data.distances, cls, trial_cfg);
  const BoundCertificate cert = certify(fit.model, data.features, data.distances, delta);

  TrialResult r;
  r.trial = t;
  r.seed = trial_spec.seed;
  r.train_risk = fit.report.final_risk;
  r.holdout_risk = holdout_risk(fit.model, trial_spec, splitmix64(trial_spec.seed), n_holdout);
  r.gap = r.holdout_risk - r.train_risk;
  r.certificate_slack = cert.slack;
  r.certificate_bound = cert.bound;
  r.covered = r.gap <= r.certificate_slack;
  r.converged = fit.report.converged && !fit.report.diverged;
  return r;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (m < 2) throw ValidationError("SyntheticSpec: m must be >= 2");
  if (n_features < 1) throw ValidationError("SyntheticSpec: n_features must be >= 1");
  if (k_true < 1) throw ValidationError("SyntheticSpec: k_true must be >= 1");
  if (!(radius_r > 0.0) || !std::isfinite(radius_r)) {
    throw ValidationError("SyntheticSpec: radius_r must be > 0");
  }
  if (!(target_map_norm > 0.0) || !std::isfinite(target_map_norm)) {
    throw ValidationError("SyntheticSpec: target_map_norm must be > 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ValidationError("SyntheticSpec: noise_sigma must be >= 0");
  }
}

Matrix draw_target_map(const SyntheticSpec& spec) {
  spec.validate();
  auto eng = detail::make_engine(spec.seed, kMapStream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix w(spec.k_true, spec.n_features);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = gauss(eng);
    }
    norm = Eigen::JacobiSVD<Matrix>(w).singularValues()(0);
  } while (norm == 0.0);
  return w * (spec.target_map_norm / norm);
}

SyntheticData draw_sample(const SyntheticSpec& spec, std::uint64_t sample_seed, Eigen::Index n) {
  spec.validate();
  if (n < 2) throw ValidationError("draw_sample: need at least 2 points");
  const Matrix w = draw_target_map(spec);

  auto point_eng = detail::make_engine(sample_seed, kPointStream);
  Matrix x = sample_ball(n, spec.n_features, spec.radius_r, point_eng);

  Matrix d = pairwise_distances(x * w.transpose());
  if (spec.noise_sigma > 0.0) {
    auto noise_eng = detail::make_engine(sample_seed, kNoiseStream);
    std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
    const double cut = 2.0 * spec.noise_sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double z = 0.0;
        do {
          z = gauss(noise_eng);
        } while (std::abs(z) > cut);
        const double v = std::max(0.0, d(i, j) + z);
        d(i, j) = v;
        d(j, i) = v;
      }
    }
  }
  return SyntheticData{SampleMatrix(std::move(x)), validate_distance_matrix(d, 0.0), w};
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  return draw_sample(spec, spec.seed, spec.m);
}

double holdout_risk(const Model& model, const SyntheticSpec& spec, std::uint64_t sample_seed,
                    Eigen::Index n_holdout) {
  if (n_holdout < 2) throw ValidationError("holdout_risk: n_holdout must be >= 2");
  const SyntheticData fresh = draw_sample(spec, sample_seed, n_holdout);
  return empirical_risk(embedding_distance_matrix(model, fresh.features), fresh.distances);
}

ExperimentReport run_coverage_experiment(const SyntheticSpec& spec, const HypothesisClass& cls,
                                         const TrainConfig& cfg,
                                         const CoverageConfig& coverage) {
  spec.validate();
  cfg.validate();
  if (coverage.n_trials < 1) {
    throw ValidationError("run_coverage_experiment: n_trials must be >= 1");
  }
  if (!(coverage.delta > 0.0 && coverage.delta < 1.0)) {
    throw ValidationError("run_coverage_experiment: delta must lie in (0, 1)");
  }
  const Eigen::Index n_holdout = coverage.n_holdout == 0 ? 10 * spec.m : coverage.n_holdout;
  if (n_holdout < 2) throw ValidationError("run_coverage_experiment: n_holdout must be >= 2");

  const auto n = static_cast<std::size_t>(coverage.n_trials);
  unsigned workers = coverage.workers == 0 ? std::thread::hardware_concurrency() : coverage.workers;
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(n));

  std::vector<TrialResult> results(n);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t t = w; t < n; t += workers) {
        results[t] = run_trial(spec, cls, cfg, coverage.delta, n_holdout, static_cast<int>(t));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentReport report;
  report.n_trials = coverage.n_trials;
  report.delta = coverage.delta;
  int covered = 0;
  for (const TrialResult& r : results) {
    covered += r.covered ? 1 : 0;
    report.n_nonconverged += r.converged ? 0 : 1;
    report.mean_gap += r.gap;
    report.mean_slack += r.certificate_slack;
  }
  report.coverage_rate = static_cast<double>(covered) / static_cast<double>(n);
  report.mean_gap /= static_cast<double>(n);
  report.mean_slack /= static_cast<double>(n);
  report.passed = report.coverage_rate >= 1.0 - coverage.delta;
  report.trials = std::move(results);
  return report;
}

}  // namespace simlearn
