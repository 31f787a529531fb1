#include "kpref/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string_view>
#include <unordered_map>

#include "kpref/errors.hpp"

namespace kpref {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key '" + key + "': cannot parse number '" +
                      value + "'");
  return out;
}

long parse_long(const std::string& key, const std::string& value) {
  long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key '" + key + "': cannot parse integer '" +
                      value + "'");
  return out;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  std::unordered_map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key{trim(view.substr(0, eq))};
    const std::string value{trim(view.substr(eq + 1))};
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
  }

  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string{};
    std::string v = std::move(it->second);
    kv.erase(it);
    return v;
  };

  RunConfig cfg;

  // kernel
  const std::string kernel = take("kernel");
  const std::string gamma = take("gamma");
  const std::string degree = take("degree");
  const std::string coef0 = take("coef0");
  if (kernel.empty() || kernel == "linear") {
    if (!gamma.empty() || !degree.empty() || !coef0.empty())
      throw ConfigError("linear kernel takes no gamma/degree/coef0");
    cfg.kernel = KernelSpec::linear();
  } else if (kernel == "rbf") {
    if (gamma.empty()) throw ConfigError("rbf kernel requires gamma");
    if (!degree.empty() || !coef0.empty())
      throw ConfigError("rbf kernel takes no degree/coef0");
    cfg.kernel = KernelSpec::rbf(parse_double("gamma", gamma));
  } else if (kernel == "polynomial") {
    if (degree.empty()) throw ConfigError("polynomial kernel requires degree");
    const long deg = parse_long("degree", degree);
    if (deg < 1 || deg > 1000)
      throw ConfigError("polynomial degree out of range");
    const double c0 = coef0.empty() ? 0.0 : parse_double("coef0", coef0);
    if (!gamma.empty()) throw ConfigError("polynomial kernel takes no gamma");
    cfg.kernel = KernelSpec::polynomial(static_cast<int>(deg), c0);
  } else {
    throw ConfigError("unknown kernel '" + kernel + "'");
  }

  // loss
  const std::string loss = take("loss");
  const std::string margin_param = take("margin");
  if (loss.empty() || loss == "logistic") {
    if (!margin_param.empty())
      throw ConfigError("logistic loss takes no margin");
    cfg.loss = LossSpec::logistic();
  } else if (loss == "hinge") {
    cfg.loss = LossSpec::hinge(
        margin_param.empty() ? 1.0 : parse_double("margin", margin_param));
  } else if (loss == "zero_one") {
    throw ConfigError("zero_one loss cannot be trained; use hinge or logistic");
  } else {
    throw ConfigError("unknown loss '" + loss + "'");
  }

  // regularizers
  if (const auto v = take("lambda"); !v.empty()) {
    cfg.lambda = parse_double("lambda", v);
    if (!(cfg.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  }
  if (const auto v = take("trace_weight"); !v.empty()) {
    cfg.trace_weight = parse_double("trace_weight", v);
    if (!(cfg.trace_weight >= 0.0))
      throw ConfigError("trace_weight must be >= 0");
  }

  // solver
  if (const auto v = take("max_iters"); !v.empty())
    cfg.solver.max_iters = parse_long("max_iters", v);
  if (const auto v = take("step_size"); !v.empty())
    cfg.solver.step_size = parse_double("step_size", v);
  if (const auto v = take("tol_grad"); !v.empty())
    cfg.solver.tol_grad = parse_double("tol_grad", v);
  if (const auto v = take("seed"); !v.empty())
    cfg.solver.seed = static_cast<std::uint64_t>(parse_long("seed", v));
  if (const auto v = take("init"); !v.empty()) {
    if (v == "identity_zero")
      cfg.solver.init = InitKind::IdentityZero;
    else if (v == "random")
      cfg.solver.init = InitKind::Random;
    else
      throw ConfigError("init must be identity_zero or random, got '" + v +
                        "'");
  }
  if (const auto v = take("init_scale"); !v.empty())
    cfg.solver.init_scale = parse_double("init_scale", v);
  cfg.solver.validate();

  // paths, resolved against the config file's directory
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (base / fp).string();
  };
  cfg.items_csv = resolve(take("items_csv"));
  cfg.pairs_csv = resolve(take("pairs_csv"));
  cfg.triplets_csv = resolve(take("triplets_csv"));
  if (const auto v = take("model_out"); !v.empty()) cfg.model_out = resolve(v);
  else cfg.model_out = resolve(cfg.model_out);

  if (cfg.items_csv.empty()) throw ConfigError("config requires items_csv");

  if (!kv.empty())
    throw ConfigError("unknown config key '" + kv.begin()->first + "'");
  return cfg;
}

}  // namespace kpref
