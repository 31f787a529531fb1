#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "kpref/errors.hpp"
#include "kpref/model_io.hpp"
#include "kpref/rng.hpp"
#include "temp_dir.hpp"

using namespace kpref;

namespace {

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Parses a model file and drops the timestamp, the one field allowed to
/// differ between identical runs.
std::string canonical_json(const std::string& path) {
  auto doc = nlohmann::ordered_json::parse(slurp(path));
  doc.erase("created_at");
  return doc.dump();
}

struct PrefFixture {
  GramBasis basis;
  std::vector<PairedSample> pairs;
  std::vector<std::string> ids;
  PreferenceModel model;

  PrefFixture() : basis(make_basis()) {
    pairs = {{0, 1, +1}, {1, 2, -1}, {2, 3, +1}, {3, 0, -1}, {0, 2, +1}};
    ids = {"s0", "s1", "s2", "s3"};
    SolverConfig cfg;
    cfg.max_iters = 60;
    model = fit_preference(basis, pairs, LossSpec::logistic(), 0.05, cfg);
  }

  static GramBasis make_basis() {
    Rng rng(7);
    return build_basis(KernelSpec::rbf(0.5), rng.normal_matrix(4, 3));
  }
};

struct TripFixture {
  GramBasis basis;
  std::vector<TripletSample> trips;
  std::vector<std::string> ids;
  TripletModel model;

  TripFixture() : basis(PrefFixture::make_basis()) {
    trips = {{0, 1, 2, +1}, {1, 2, 3, -1}, {2, 3, 0, +1}, {3, 0, 1, -1}};
    ids = {"s0", "s1", "s2", "s3"};
    SolverConfig cfg;
    cfg.max_iters = 60;
    model = fit_triplet(basis, trips, LossSpec::logistic(), cfg, 0.01);
  }
};

}  // namespace

TEST_CASE("preference model round trip is exact") {
  TempDir dir;
  PrefFixture fx;
  const auto path = dir.at("model.json");
  save_model(fx.model, fx.ids, path);

  const LoadedModel loaded = load_model(path);
  CHECK(loaded.task == TaskKind::Preference);
  CHECK(loaded.item_ids == fx.ids);
  CHECK(loaded.lambda == 0.05);
  CHECK(loaded.trace_weight == 0.0);
  CHECK(same_bits(loaded.form.matrix(), fx.model.form.matrix()));
  CHECK(same_bits(loaded.ideal, fx.model.ideal));
  CHECK(same_bits(loaded.kernel_coeffs_a, fx.model.expansion.a));
  CHECK(same_bits(loaded.kernel_coeffs_b, fx.model.expansion.b));
  CHECK(loaded.objective_trace_last == fx.model.objective_trace.back());
  CHECK(loaded.zero_one_train_error == fx.model.zero_one_train_error);

  // the rebuilt coordinate system matches the writer's bit for bit
  CHECK(same_bits(loaded.basis.chol(), fx.basis.chol()));
  CHECK(same_bits(loaded.basis.gram(), fx.basis.gram()));
  CHECK(loaded.basis.spec().name() == "rbf");
  CHECK(loaded.basis.spec().gamma == 0.5);

  // predictions on fresh points are bit-identical
  Rng rng(99);
  for (int t = 0; t < 5; ++t) {
    const Vector x = rng.normal_vector(3);
    const Vector y = rng.normal_vector(3);
    const double d0 = delta_pair(fx.model.form, fx.model.ideal,
                                 fx.basis.embed(x), fx.basis.embed(y));
    const double d1 = delta_pair(loaded.form, loaded.ideal,
                                 loaded.basis.embed(x), loaded.basis.embed(y));
    CHECK(d0 == d1);
  }
}

TEST_CASE("triplet model round trip is exact") {
  TempDir dir;
  TripFixture fx;
  const auto path = dir.at("model.json");
  save_model(fx.model, fx.ids, path);

  const LoadedModel loaded = load_model(path);
  CHECK(loaded.task == TaskKind::Triplet);
  CHECK(loaded.item_ids == fx.ids);
  CHECK(loaded.ideal.size() == 0);
  CHECK(loaded.kernel_coeffs_b.size() == 0);
  CHECK(loaded.trace_weight == 0.01);
  CHECK(same_bits(loaded.form.matrix(), fx.model.form.matrix()));
  CHECK(same_bits(loaded.kernel_coeffs_a, fx.model.kernel_coeffs));
  CHECK(loaded.zero_one_train_error == fx.model.zero_one_train_error);

  Rng rng(5);
  const Vector a = rng.normal_vector(3);
  const Vector b = rng.normal_vector(3);
  const Vector c = rng.normal_vector(3);
  CHECK(delta_triplet(fx.model.form, fx.basis.embed(a), fx.basis.embed(b),
                      fx.basis.embed(c)) ==
        delta_triplet(loaded.form, loaded.basis.embed(a), loaded.basis.embed(b),
                      loaded.basis.embed(c)));
}

TEST_CASE("identical runs write byte-identical files modulo the timestamp") {
  TempDir dir;
  auto train_and_save = [&](const std::string& name) {
    PrefFixture fx;
    const auto path = dir.at(name);
    save_model(fx.model, fx.ids, path);
    return path;
  };
  const auto p1 = train_and_save("m1.json");
  const auto p2 = train_and_save("m2.json");
  CHECK(canonical_json(p1) == canonical_json(p2));
}

TEST_CASE("save_model validates the id count") {
  TempDir dir;
  PrefFixture fx;
  const std::vector<std::string> short_ids = {"a", "b"};
  CHECK_THROWS_AS(save_model(fx.model, short_ids, dir.at("m.json")),
                  InputError);
}

TEST_CASE("load_model rejects broken files") {
  TempDir dir;
  PrefFixture fx;
  const auto good_path = dir.at("good.json");
  save_model(fx.model, fx.ids, good_path);
  const auto good = nlohmann::ordered_json::parse(slurp(good_path));

  auto write_variant = [&](nlohmann::ordered_json doc) {
    const auto p = dir.at("bad.json");
    std::ofstream out(p);
    out << doc.dump(2);
    out.close();
    return p;
  };

  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)load_model(dir.at("none.json")), InputError);
  }
  SUBCASE("not json") {
    const auto p = dir.file("bad.json", "not json at all {");
    CHECK_THROWS_AS((void)load_model(p), InputError);
  }
  SUBCASE("missing field") {
    auto doc = good;
    doc.erase("A");
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("unknown task") {
    auto doc = good;
    doc["task"] = "ranking";
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("A with the wrong length") {
    auto doc = good;
    doc["A"].erase(0);
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("item id count mismatch") {
    auto doc = good;
    doc["item_ids"].erase(0);
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("triplet fields on a preference model") {
    auto doc = good;
    doc["trace_weight"] = 0.1;
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("unknown kernel kind") {
    auto doc = good;
    doc["kernel"]["kind"] = "sigmoid";
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
  SUBCASE("non-numeric entry") {
    auto doc = good;
    doc["u"][0] = "zero";
    CHECK_THROWS_AS((void)load_model(write_variant(doc)), InputError);
  }
}

TEST_CASE("load_model rejects ideal-point fields on triplet models") {
  TempDir dir;
  TripFixture fx;
  const auto path = dir.at("t.json");
  save_model(fx.model, fx.ids, path);
  auto doc = nlohmann::ordered_json::parse(slurp(path));
  doc["u"] = nlohmann::ordered_json::array();
  const auto bad = dir.file("bad.json", doc.dump(2));
  CHECK_THROWS_AS((void)load_model(bad), InputError);
}
