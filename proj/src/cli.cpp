#include "kpref/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <unordered_map>

#include "kpref/config.hpp"
#include "kpref/csv.hpp"
#include "kpref/errors.hpp"
#include "kpref/model_io.hpp"
#include "kpref/representer_lab.hpp"

namespace kpref {

namespace {

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Runs a command body and maps exceptions onto the shared exit codes,
/// emitting a one-line diagnostic for every failure.
int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const LinearDependenceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

void print_training_summary(std::ostream& out, const std::string& model_out,
                            double final_objective, double zero_one_error) {
  out << "wrote model to " << model_out << '\n'
      << "final_objective = " << format_double(final_objective) << '\n'
      << "zero_one_train_error = " << format_double(zero_one_error) << '\n';
}

RunConfig load_with_overrides(const std::string& config_path,
                              const TrainOverrides& overrides) {
  RunConfig cfg = load_run_config(config_path);
  if (overrides.seed) cfg.solver.seed = *overrides.seed;
  if (overrides.model_out) cfg.model_out = *overrides.model_out;
  return cfg;
}

}  // namespace

int cmd_train_preference(const std::string& config_path,
                         const TrainOverrides& overrides, std::ostream& out,
                         std::ostream& err) {
  return run_guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(config_path, overrides);
    if (cfg.pairs_csv.empty())
      throw ConfigError("preference training requires pairs_csv");
    if (cfg.trace_weight != 0.0)
      throw ConfigError("trace_weight applies to triplet training only");
    const ItemTable items = read_items_csv(cfg.items_csv);
    const auto pairs = read_pairs_csv(cfg.pairs_csv, items);
    const GramBasis basis = build_basis(cfg.kernel, items.points);
    const PreferenceModel model =
        fit_preference(basis, pairs, cfg.loss, cfg.lambda, cfg.solver);
    save_model(model, items.ids, cfg.model_out);
    print_training_summary(out, cfg.model_out, model.objective_trace.back(),
                           model.zero_one_train_error);
    return 0;
  });
}

int cmd_train_triplet(const std::string& config_path,
                      const TrainOverrides& overrides, std::ostream& out,
                      std::ostream& err) {
  return run_guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(config_path, overrides);
    if (cfg.triplets_csv.empty())
      throw ConfigError("triplet training requires triplets_csv");
    if (cfg.lambda != 0.0)
      throw ConfigError("lambda applies to preference training only");
    const ItemTable items = read_items_csv(cfg.items_csv);
    const auto triplets = read_triplets_csv(cfg.triplets_csv, items);
    const GramBasis basis = build_basis(cfg.kernel, items.points);
    const TripletModel model =
        fit_triplet(basis, triplets, cfg.loss, cfg.solver, cfg.trace_weight);
    save_model(model, items.ids, cfg.model_out);
    print_training_summary(out, cfg.model_out, model.objective_trace.back(),
                           model.zero_one_train_error);
    return 0;
  });
}

int cmd_predict(const std::string& model_path,
                const std::optional<std::string>& items_csv,
                const std::string& queries_csv, std::ostream& out,
                std::ostream& err) {
  return run_guarded(err, [&] {
    const LoadedModel model = load_model(model_path);
    const QuerySet qs = read_queries_csv(queries_csv);
    if (qs.is_triplet && model.task != TaskKind::Triplet)
      throw InputError(
          "triplet queries require a model trained on triplets");
    if (!qs.is_triplet && model.task != TaskKind::Preference)
      throw InputError(
          "pair queries require a model trained on pair comparisons");

    const Index d = model.basis.point_dim();
    const Index n_blocks = qs.is_triplet ? 3 : 2;

    // assemble the raw points of every query, one block per compared slot
    std::vector<Matrix> blocks;
    if (qs.by_id) {
      // resolve ids against the caller's table, or the model's base items
      std::function<Vector(const std::string&)> point_of;
      ItemTable table;
      std::unordered_map<std::string, Index> model_index;
      if (items_csv) {
        table = read_items_csv(*items_csv);
        if (table.dim() != d)
          throw InputError("items file has " + std::to_string(table.dim()) +
                           " coordinates per item, model expects " +
                           std::to_string(d));
        point_of = [&](const std::string& id) {
          return Vector(table.points.row(table.lookup(id)).transpose());
        };
      } else {
        for (std::size_t i = 0; i < model.item_ids.size(); ++i)
          model_index.emplace(model.item_ids[i], static_cast<Index>(i));
        point_of = [&](const std::string& id) {
          const auto it = model_index.find(id);
          if (it == model_index.end())
            throw InputError("unknown item id '" + id +
                             "' (no items file given and the model does not "
                             "contain it)");
          return Vector(model.basis.items().row(it->second).transpose());
        };
      }
      const Index n = static_cast<Index>(qs.id_rows.size());
      blocks.assign(static_cast<std::size_t>(n_blocks), Matrix(n, d));
      for (Index r = 0; r < n; ++r)
        for (Index b = 0; b < n_blocks; ++b)
          blocks[static_cast<std::size_t>(b)].row(r) =
              point_of(qs.id_rows[static_cast<std::size_t>(r)]
                                 [static_cast<std::size_t>(b)])
                  .transpose();
    } else {
      if (qs.z1.cols() != d)
        throw InputError("query coordinates have " +
                         std::to_string(qs.z1.cols()) +
                         " entries per point, model expects " +
                         std::to_string(d));
      blocks = {qs.z1, qs.z2};
      if (qs.is_triplet) blocks.push_back(qs.z3);
    }

    std::vector<Matrix> coords;
    coords.reserve(blocks.size());
    for (const Matrix& b : blocks) coords.push_back(model.basis.embed_batch(b));

    out << "label,delta\n";
    const Index n = coords[0].rows();
    for (Index r = 0; r < n; ++r) {
      double delta = 0.0;
      if (qs.is_triplet) {
        delta = delta_triplet(model.form, coords[0].row(r).transpose(),
                              coords[1].row(r).transpose(),
                              coords[2].row(r).transpose());
      } else {
        delta = delta_pair(model.form, model.ideal,
                           coords[0].row(r).transpose(),
                           coords[1].row(r).transpose());
      }
      const int label =
          std::abs(delta) <= 1e-12 ? 0 : (delta > 0.0 ? +1 : -1);
      out << label << ',' << format_double(delta) << '\n';
    }
    return 0;
  });
}

int cmd_verify(std::uint64_t seed, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto reports = run_default_checks(seed);
    bool all_pass = true;
    for (const CheckReport& r : reports) {
      all_pass = all_pass && r.pass;
      out << (r.pass ? "PASS" : "FAIL") << ' ' << r.check
          << " instances=" << r.instances
          << " max_abs_error=" << format_double(r.max_abs_error) << '\n';
    }
    out << (all_pass ? "all checks passed" : "verification failed") << '\n';

    if (out_path) {
      nlohmann::ordered_json doc;
      doc["seed"] = seed;
      doc["checks"] = nlohmann::ordered_json::array();
      for (const CheckReport& r : reports) {
        nlohmann::ordered_json c;
        c["check"] = r.check;
        c["instances"] = r.instances;
        c["max_abs_error"] = r.max_abs_error;
        c["pass"] = r.pass;
        doc["checks"].push_back(std::move(c));
      }
      doc["all_pass"] = all_pass;
      std::ofstream file(*out_path, std::ios::binary);
      if (!file) throw InputError("cannot open for writing: " + *out_path);
      file << doc.dump(2) << '\n';
    }
    return all_pass ? 0 : 4;
  });
}

}  // namespace kpref
