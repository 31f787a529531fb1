#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "kpref/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kernelized metric and preference learning"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  std::string items_path;
  std::string queries_path;
  std::string out_path;
  std::uint64_t seed = 0;

  auto* train_pref = app.add_subcommand(
      "train-preference",
      "learn a bilinear form and ideal point from labeled pairs");
  train_pref->add_option("--config", config_path, "training config file")
      ->required();
  auto* tp_out =
      train_pref->add_option("--out", out_path, "override the model path");
  auto* tp_seed =
      train_pref->add_option("--seed", seed, "override the solver seed");

  auto* train_trip = app.add_subcommand(
      "train-triplet", "learn a bilinear form from labeled triplets");
  train_trip->add_option("--config", config_path, "training config file")
      ->required();
  auto* tt_out =
      train_trip->add_option("--out", out_path, "override the model path");
  auto* tt_seed =
      train_trip->add_option("--seed", seed, "override the solver seed");

  auto* predict = app.add_subcommand(
      "predict", "score pair or triplet queries against a stored model");
  predict->add_option("--model", model_path, "model JSON file")->required();
  predict->add_option("--queries", queries_path, "query CSV file")->required();
  auto* pr_items = predict->add_option(
      "--items", items_path, "items CSV used to resolve query ids");

  auto* verify = app.add_subcommand(
      "verify", "run the built-in verification suite and write a report");
  verify->add_option("--seed", seed, "base seed for the random instances");
  verify->add_option("--out", out_path, "report path")
      ->default_val("verify_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad usage is a configuration error
  }

  if (*train_pref || *train_trip) {
    kpref::TrainOverrides overrides;
    if (tp_out->count() || tt_out->count()) overrides.model_out = out_path;
    if (tp_seed->count() || tt_seed->count()) overrides.seed = seed;
    return *train_pref ? kpref::cmd_train_preference(config_path, overrides)
                       : kpref::cmd_train_triplet(config_path, overrides);
  }
  if (*predict) {
    std::optional<std::string> items;
    if (pr_items->count()) items = items_path;
    return kpref::cmd_predict(model_path, items, queries_path);
  }
  if (*verify) {
    if (out_path.empty()) out_path = "verify_report.json";
    return kpref::cmd_verify(seed, out_path);
  }
  return 1;
}
