#include "kpref/model_io.hpp"

#include <json.hpp>

#include <ctime>
#include <fstream>

#include "kpref/errors.hpp"

namespace kpref {

namespace {

using json = nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json row_major(const Matrix& M) {
  json out = json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) out.push_back(M(i, j));
  return out;
}

json rows_of(const Matrix& M) {
  json out = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json array_of(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json kernel_to_json(const KernelSpec& spec) {
  json out;
  out["kind"] = spec.name();
  if (spec.name() == "rbf") out["gamma"] = spec.gamma;
  if (spec.name() == "polynomial") {
    out["degree"] = spec.degree;
    out["coef0"] = spec.coef0;
  }
  return out;
}

double trace_last(const std::vector<double>& trace) {
  return trace.empty() ? 0.0 : trace.back();
}

void check_ids(const std::vector<std::string>& ids, Index m) {
  if (static_cast<Index>(ids.size()) != m)
    throw InputError("save_model: got " + std::to_string(ids.size()) +
                     " item ids for " + std::to_string(m) + " base items");
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw InputError("failed writing model file: " + path);
}

json common_header(TaskKind task, const GramBasis& basis,
                   const std::vector<std::string>& item_ids) {
  json doc;
  doc["task"] = task == TaskKind::Preference ? "preference" : "triplet";
  doc["created_at"] = utc_timestamp();
  doc["m"] = basis.size();
  doc["kernel"] = kernel_to_json(basis.spec());
  doc["item_ids"] = item_ids;
  doc["items"] = rows_of(basis.items());
  return doc;
}

// ---- loading helpers ----

const json& field(const json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end())
    throw InputError(std::string("model file: missing field '") + name + "'");
  return *it;
}

double num(const json& j, const char* name) {
  if (!j.is_number())
    throw InputError(std::string("model file: field '") + name +
                     "' must be a number");
  return j.get<double>();
}

Vector vector_from(const json& j, Index n, const char* name) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n)
    throw InputError(std::string("model file: field '") + name +
                     "' must be an array of length " + std::to_string(n));
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = num(j[static_cast<std::size_t>(i)], name);
  return v;
}

Matrix from_row_major(const json& j, Index m, const char* name) {
  if (!j.is_array() || static_cast<Index>(j.size()) != m * m)
    throw InputError(std::string("model file: field '") + name +
                     "' must be a flat row-major array of length " +
                     std::to_string(m * m));
  Matrix M(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < m; ++k)
      M(i, k) = num(j[static_cast<std::size_t>(i * m + k)], name);
  return M;
}

Matrix from_rows(const json& j, Index m, const char* name) {
  if (!j.is_array() || static_cast<Index>(j.size()) != m || m == 0 ||
      !j[0].is_array())
    throw InputError(std::string("model file: field '") + name +
                     "' must be an array of " + std::to_string(m) + " rows");
  const Index d = static_cast<Index>(j[0].size());
  Matrix M(m, d);
  for (Index i = 0; i < m; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d)
      throw InputError(std::string("model file: ragged rows in '") + name +
                       "'");
    for (Index c = 0; c < d; ++c)
      M(i, c) = num(row[static_cast<std::size_t>(c)], name);
  }
  return M;
}

KernelSpec kernel_from_json(const json& j) {
  const auto& kind = field(j, "kind");
  if (!kind.is_string())
    throw InputError("model file: kernel kind must be a string");
  const std::string name = kind.get<std::string>();
  if (name == "linear") return KernelSpec::linear();
  if (name == "rbf") return KernelSpec::rbf(num(field(j, "gamma"), "gamma"));
  if (name == "polynomial")
    return KernelSpec::polynomial(
        static_cast<int>(num(field(j, "degree"), "degree")),
        num(field(j, "coef0"), "coef0"));
  throw InputError("model file: unknown kernel kind '" + name + "'");
}

}  // namespace

void save_model(const PreferenceModel& model,
                const std::vector<std::string>& item_ids,
                const std::string& path) {
  check_ids(item_ids, model.basis.size());
  json doc = common_header(TaskKind::Preference, model.basis, item_ids);
  doc["A"] = row_major(model.form.matrix());
  doc["u"] = array_of(model.ideal);
  doc["lambda"] = model.lambda;
  doc["a_ij"] = row_major(model.expansion.a);
  doc["b_i"] = array_of(model.expansion.b);
  doc["objective_trace_last"] = trace_last(model.objective_trace);
  doc["zero_one_train_error"] = model.zero_one_train_error;
  write_json(doc, path);
}

void save_model(const TripletModel& model,
                const std::vector<std::string>& item_ids,
                const std::string& path) {
  check_ids(item_ids, model.basis.size());
  json doc = common_header(TaskKind::Triplet, model.basis, item_ids);
  doc["A"] = row_major(model.form.matrix());
  doc["trace_weight"] = model.trace_weight;
  doc["a_ij"] = row_major(model.kernel_coeffs);
  doc["objective_trace_last"] = trace_last(model.objective_trace);
  doc["zero_one_train_error"] = model.zero_one_train_error;
  write_json(doc, path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("model file " + path + ": " + e.what());
  }

  LoadedModel model;
  const auto& task = field(doc, "task");
  if (task == "preference")
    model.task = TaskKind::Preference;
  else if (task == "triplet")
    model.task = TaskKind::Triplet;
  else
    throw InputError("model file: task must be preference or triplet");

  const Index m = static_cast<Index>(num(field(doc, "m"), "m"));
  if (m <= 0) throw InputError("model file: m must be positive");

  const auto& ids = field(doc, "item_ids");
  if (!ids.is_array() || static_cast<Index>(ids.size()) != m)
    throw InputError("model file: item_ids must list " + std::to_string(m) +
                     " ids");
  for (const auto& id : ids) {
    if (!id.is_string())
      throw InputError("model file: item_ids entries must be strings");
    model.item_ids.push_back(id.get<std::string>());
  }

  const KernelSpec spec = kernel_from_json(field(doc, "kernel"));
  const Matrix items = from_rows(field(doc, "items"), m, "items");
  model.basis = build_basis(spec, items);

  model.form =
      MahalanobisForm::from_matrix(from_row_major(field(doc, "A"), m, "A"));
  model.kernel_coeffs_a = from_row_major(field(doc, "a_ij"), m, "a_ij");
  model.objective_trace_last =
      num(field(doc, "objective_trace_last"), "objective_trace_last");
  model.zero_one_train_error =
      num(field(doc, "zero_one_train_error"), "zero_one_train_error");

  if (model.task == TaskKind::Preference) {
    model.ideal = vector_from(field(doc, "u"), m, "u");
    model.lambda = num(field(doc, "lambda"), "lambda");
    model.kernel_coeffs_b = vector_from(field(doc, "b_i"), m, "b_i");
    if (doc.contains("trace_weight"))
      throw InputError("model file: trace_weight on a preference model");
  } else {
    model.trace_weight = num(field(doc, "trace_weight"), "trace_weight");
    if (doc.contains("u") || doc.contains("b_i") || doc.contains("lambda"))
      throw InputError("model file: ideal-point fields on a triplet model");
  }
  return model;
}

}  // namespace kpref
