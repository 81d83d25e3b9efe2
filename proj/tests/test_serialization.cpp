#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "simlearn/serialization.hpp"

using namespace simlearn;
using nlohmann::json;

TEST_CASE("model JSON round trip preserves every coefficient") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = oracle::random_matrix(5, 3, rng);
    const Model lin = LinearMap(oracle::random_matrix(2, 3, rng) / 3.0, 1.25);
    const Model ker = KernelMap(oracle::random_matrix(2, 5, rng) / 7.0, SampleMatrix(x),
                                KernelSpec::polynomial(3, 0.5), 4.0);
    for (const Model& m : {lin, ker}) {
      const Model back = model_from_json(model_to_json(m));
      CHECK(back.index() == m.index());
      CHECK(coefficients(back) == coefficients(m));
      CHECK(lambda_cap(back) == lambda_cap(m));
    }
    const Model parsed = model_from_json(model_to_json(ker));
    const auto& kb = std::get<KernelMap>(parsed);
    CHECK(kb.anchors().values() == x);
    CHECK(kb.kernel() == KernelSpec::polynomial(3, 0.5));
  }
}

TEST_CASE("model JSON layout") {
  const json j = json::parse(model_to_json(LinearMap(Matrix::Identity(2, 2), 1.0)));
  CHECK(j["type"] == "linear");
  CHECK(j["lambda_cap"] == 1.0);
  CHECK(j["W"] == json::parse("[[1.0, 0.0], [0.0, 1.0]]"));

  const Matrix anchors = (Matrix(2, 1) << 0, 1).finished();
  const json k = json::parse(model_to_json(
      KernelMap(Matrix::Ones(1, 2), SampleMatrix(anchors), KernelSpec::rbf(0.5), 2.0)));
  CHECK(k["type"] == "kernel");
  CHECK(k["kernel"]["family"] == "rbf");
  CHECK(k["kernel"]["gamma"] == 0.5);
  CHECK(k["anchors"].size() == 2);
  CHECK(k["A"][0].size() == 2);
}

TEST_CASE("malformed model JSON is a validation error") {
  CHECK_THROWS_AS(model_from_json("{"), ValidationError);
  CHECK_THROWS_AS(model_from_json(R"({"type":"linear","W":[[1]]})"), ValidationError);
  CHECK_THROWS_AS(model_from_json(R"({"type":"mlp","lambda_cap":1})"), ValidationError);
  CHECK_THROWS_AS(model_from_json(R"({"type":"linear","lambda_cap":1,"W":[[1,2],[3]]})"),
                  ValidationError);
  CHECK_THROWS_AS(
      model_from_json(
          R"({"type":"kernel","lambda_cap":1,"A":[[1,1]],"anchors":[[0],[1]],"kernel":{"family":"rbf","gamma":-1}})"),
      ValidationError);
}

TEST_CASE("certificate JSON echoes all inputs and reproduces the bound exactly") {
  BoundCertificate c = generalization_bound(0.1, 0.04, 2.0, 100, 0.05);
  c.inputs = {BoundMode::linear, 1.0, 1.0, 0.5, 0.0};
  const json j = json::parse(certificate_to_json(c));
  for (const char* key : {"mode", "lambda_cap", "r", "beta", "q", "m", "delta", "M",
                          "rademacher_term", "slack", "bound", "empirical_risk"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["bound"].get<double>() == j["empirical_risk"].get<double>() + j["slack"].get<double>());
  CHECK(j["slack"].get<double>() ==
        j["rademacher_term"].get<double>() + j["concentration_term"].get<double>());
  CHECK(j["m"] == 100);
}

TEST_CASE("train config JSON") {
  const TrainConfig cfg = train_config_from_json(R"({"step_size":0.1,"max_iters":7,"seed":3})");
  CHECK(cfg.step_size == 0.1);
  CHECK(cfg.max_iters == 7);
  CHECK(cfg.seed == 3);
  CHECK(cfg.grad_tol == TrainConfig{}.grad_tol);

  const TrainConfig back = train_config_from_json(train_config_to_json(cfg));
  CHECK(back.step_size == cfg.step_size);
  CHECK(back.smoothing_eps == cfg.smoothing_eps);

  CHECK_THROWS_AS(train_config_from_json(R"({"stepsize":0.1})"), ValidationError);
  CHECK_THROWS_AS(train_config_from_json(R"({"step_size":-1})"), ValidationError);
  CHECK_THROWS_AS(train_config_from_json(R"([1,2])"), ValidationError);
}

TEST_CASE("experiment report JSON and CSV") {
  ExperimentReport r;
  r.n_trials = 2;
  r.delta = 0.05;
  r.coverage_rate = 0.5;
  r.trials = {TrialResult{0, 10, 0.1, 0.2, 0.1, 0.5, 0.6, true, true},
              TrialResult{1, 11, 0.1, 0.9, 0.8, 0.5, 0.6, false, false}};
  const json j = json::parse(experiment_report_to_json(r));
  CHECK(j["trials"].size() == 2);
  CHECK(j["trials"][1]["covered"] == false);

  const std::string csv = trials_to_csv(r);
  CHECK(csv.rfind("trial,train_risk,holdout_risk,gap,slack,covered\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("train report JSON encodes non-finite values as null") {
  TrainReport rep;
  rep.final_risk = std::numeric_limits<double>::infinity();
  rep.risk_trace = {1.0, std::numeric_limits<double>::quiet_NaN()};
  const json j = json::parse(train_report_to_json(rep));
  CHECK(j["final_risk"].is_null());
  CHECK(j["risk_trace"][1].is_null());
}
