#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace kpref {

/// Command-line overrides that take precedence over the config file.
struct TrainOverrides {
  std::optional<std::string> model_out;
  std::optional<std::uint64_t> seed;
};

/// Exit codes shared by all commands: 0 success, 1 bad configuration or
/// input, 2 linearly dependent base items, 3 numerical failure,
/// 4 verification failure. Every nonzero exit writes a one-line diagnostic
/// to `err`.

/// Trains an ideal-point comparison model from the config's items and pairs
/// files, writes the model JSON, and prints the final objective and
/// zero-one training error.
int cmd_train_preference(const std::string& config_path,
                         const TrainOverrides& overrides = {},
                         std::ostream& out = std::cout,
                         std::ostream& err = std::cerr);

/// Trains a relative-distance model from the config's items and triplets
/// files; otherwise as cmd_train_preference.
int cmd_train_triplet(const std::string& config_path,
                      const TrainOverrides& overrides = {},
                      std::ostream& out = std::cout,
                      std::ostream& err = std::cerr);

/// Scores queries against a stored model and prints "label,delta" CSV rows:
/// the predicted label sign(delta), printed as 0 when |delta| <= 1e-12, and
/// the distance gap delta itself. Queries reference items by id (resolved
/// against `items_csv` when given, else against the items stored in the
/// model) or carry raw coordinate blocks.
int cmd_predict(const std::string& model_path,
                const std::optional<std::string>& items_csv,
                const std::string& queries_csv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr);

/// Runs the built-in verification suite, prints one PASS/FAIL line per
/// check, and writes a JSON report to `out_path` when given. Returns 0 iff
/// every check passed, 4 otherwise.
int cmd_verify(std::uint64_t seed, const std::optional<std::string>& out_path,
               std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace kpref
