#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "kpref/cli.hpp"
#include "kpref/model_io.hpp"
#include "temp_dir.hpp"

using namespace kpref;

namespace {

constexpr const char* kItems =
    "id,x0,x1\n"
    "a,0,0\n"
    "b,1,0\n"
    "c,0,1\n"
    "d,1,1\n"
    "e,2,0.5\n";

// labels consistent with an ideal point at the origin (Euclidean distances)
constexpr const char* kPairs =
    "first_id,second_id,y\n"
    "b,a,1\n"
    "e,c,1\n"
    "a,e,-1\n"
    "c,d,-1\n"
    "d,b,1\n"
    "e,d,1\n";

constexpr const char* kTriplets =
    "anchor_id,second_id,third_id,y\n"
    "a,e,b,1\n"
    "b,c,d,1\n"
    "e,a,d,1\n"
    "c,b,a,-1\n"
    "d,e,c,1\n";

std::string pref_setup(const TempDir& dir) {
  dir.file("items.csv", kItems);
  dir.file("pairs.csv", kPairs);
  return dir.file("run.cfg",
                  "kernel = rbf\n"
                  "gamma = 1.0\n"
                  "lambda = 0.01\n"
                  "max_iters = 300\n"
                  "items_csv = items.csv\n"
                  "pairs_csv = pairs.csv\n"
                  "model_out = model.json\n");
}

std::string triplet_setup(const TempDir& dir) {
  dir.file("items.csv", kItems);
  dir.file("triplets.csv", kTriplets);
  return dir.file("run.cfg",
                  "kernel = rbf\n"
                  "gamma = 1.0\n"
                  "max_iters = 300\n"
                  "items_csv = items.csv\n"
                  "triplets_csv = triplets.csv\n"
                  "model_out = tmodel.json\n");
}

struct Captured {
  std::ostringstream out;
  std::ostringstream err;
};

}  // namespace

TEST_CASE("cmd_train_preference trains the bundled-style toy setup") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  Captured io;
  const int rc = cmd_train_preference(cfg, {}, io.out, io.err);
  CHECK(rc == 0);
  CHECK(io.err.str().empty());
  const std::string text = io.out.str();
  CHECK(text.find("wrote model to ") != std::string::npos);
  CHECK(text.find("final_objective = ") != std::string::npos);
  CHECK(text.find("zero_one_train_error = ") != std::string::npos);
  CHECK(std::ifstream(dir.at("model.json")).good());

  const LoadedModel model = load_model(dir.at("model.json"));
  CHECK(model.task == TaskKind::Preference);
  CHECK(model.item_ids.size() == 5);
}

TEST_CASE("cmd_train_preference exit codes") {
  TempDir dir;
  SUBCASE("missing items file is a config-stage failure") {
    dir.file("pairs.csv", kPairs);
    const auto cfg = dir.file("run.cfg",
                              "items_csv = absent.csv\n"
                              "pairs_csv = pairs.csv\n");
    Captured io;
    CHECK(cmd_train_preference(cfg, {}, io.out, io.err) == 1);
    CHECK(io.err.str().find("error: ") == 0);
  }
  SUBCASE("duplicated item rows force linear dependence") {
    dir.file("items.csv", "id,x0,x1\na,1,2\nb,1,2\nc,0,1\n");
    dir.file("pairs.csv", "first_id,second_id,y\na,c,1\n");
    const auto cfg = dir.file("run.cfg",
                              "kernel = rbf\n"
                              "gamma = 1.0\n"
                              "items_csv = items.csv\n"
                              "pairs_csv = pairs.csv\n");
    Captured io;
    CHECK(cmd_train_preference(cfg, {}, io.out, io.err) == 2);
    CHECK(io.err.str().find("error: ") == 0);
  }
  SUBCASE("config without pairs file") {
    dir.file("items.csv", kItems);
    const auto cfg = dir.file("run.cfg", "items_csv = items.csv\n");
    Captured io;
    CHECK(cmd_train_preference(cfg, {}, io.out, io.err) == 1);
  }
  SUBCASE("trace_weight is rejected for preference training") {
    const auto cfg = pref_setup(dir);
    std::ofstream(cfg, std::ios::app) << "trace_weight = 0.1\n";
    Captured io;
    CHECK(cmd_train_preference(cfg, {}, io.out, io.err) == 1);
  }
}

TEST_CASE("cmd_train_triplet trains and reports") {
  TempDir dir;
  const auto cfg = triplet_setup(dir);
  Captured io;
  CHECK(cmd_train_triplet(cfg, {}, io.out, io.err) == 0);
  CHECK(load_model(dir.at("tmodel.json")).task == TaskKind::Triplet);
}

TEST_CASE("cmd_train_triplet exit codes") {
  TempDir dir;
  SUBCASE("empty triplets file") {
    dir.file("items.csv", kItems);
    dir.file("triplets.csv", "anchor_id,second_id,third_id,y\n");
    const auto cfg = dir.file("run.cfg",
                              "kernel = rbf\n"
                              "gamma = 1.0\n"
                              "items_csv = items.csv\n"
                              "triplets_csv = triplets.csv\n");
    Captured io;
    CHECK(cmd_train_triplet(cfg, {}, io.out, io.err) == 1);
  }
  SUBCASE("contradictory duplicate triplets settle at half error") {
    dir.file("items.csv", kItems);
    dir.file("triplets.csv",
             "anchor_id,second_id,third_id,y\n"
             "a,b,c,1\n"
             "a,b,c,-1\n"
             "d,e,a,1\n"
             "d,e,a,-1\n");
    const auto cfg = dir.file("run.cfg",
                              "kernel = rbf\n"
                              "gamma = 1.0\n"
                              "max_iters = 200\n"
                              "items_csv = items.csv\n"
                              "triplets_csv = triplets.csv\n");
    Captured io;
    CHECK(cmd_train_triplet(cfg, {}, io.out, io.err) == 0);
    CHECK(io.out.str().find("zero_one_train_error = 0.5\n") !=
          std::string::npos);
  }
  SUBCASE("lambda is rejected for triplet training") {
    const auto cfg = triplet_setup(dir);
    std::ofstream(cfg, std::ios::app) << "lambda = 0.1\n";
    Captured io;
    CHECK(cmd_train_triplet(cfg, {}, io.out, io.err) == 1);
  }
}

TEST_CASE("training overrides redirect the model and reseed the solver") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  TrainOverrides ov;
  ov.model_out = dir.at("other.json");
  ov.seed = 123;
  Captured io;
  CHECK(cmd_train_preference(cfg, ov, io.out, io.err) == 0);
  CHECK(std::ifstream(dir.at("other.json")).good());
  CHECK(io.out.str().find("wrote model to " + dir.at("other.json")) !=
        std::string::npos);
}

TEST_CASE("cmd_predict agrees with training-time distance gaps") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_preference(cfg, {}, train_io.out, train_io.err) == 0);

  // training pair (b, a): recompute its gap from the stored model
  const LoadedModel model = load_model(dir.at("model.json"));
  const Vector ab = model.basis.embed(Vector(model.basis.items().row(1)));
  const Vector aa = model.basis.embed(Vector(model.basis.items().row(0)));
  const double train_delta = delta_pair(model.form, model.ideal, ab, aa);
  REQUIRE(std::abs(train_delta) > 1e-9);  // not a borderline tie

  const auto queries = dir.file("q.csv", "first_id,second_id\nb,a\n");
  Captured io;
  REQUIRE(cmd_predict(dir.at("model.json"), std::nullopt, queries, io.out,
                      io.err) == 0);
  std::istringstream lines(io.out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "label,delta");
  const int expected = train_delta > 0 ? 1 : -1;
  CHECK(row.substr(0, row.find(',')) == std::to_string(expected));
}

TEST_CASE("cmd_predict prints label 0 for coinciding query points") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_preference(cfg, {}, train_io.out, train_io.err) == 0);
  const auto queries = dir.file("q.csv",
                                "z1_0,z1_1,z2_0,z2_1\n"
                                "0.3,0.7,0.3,0.7\n");
  Captured io;
  REQUIRE(cmd_predict(dir.at("model.json"), std::nullopt, queries, io.out,
                      io.err) == 0);
  CHECK(io.out.str() == "label,delta\n0,0\n");
}

TEST_CASE("cmd_predict resolves ids against a caller items file") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_preference(cfg, {}, train_io.out, train_io.err) == 0);
  // fresh items, unknown to the model
  const auto items = dir.file("new_items.csv",
                              "id,x0,x1\n"
                              "p,0.1,0.1\n"
                              "q,1.9,0.6\n");
  const auto queries = dir.file("q.csv", "first_id,second_id\nq,p\n");
  Captured io;
  CHECK(cmd_predict(dir.at("model.json"), items, queries, io.out, io.err) ==
        0);
  // and the same ids are rejected without the items file
  Captured io2;
  CHECK(cmd_predict(dir.at("model.json"), std::nullopt, queries, io2.out,
                    io2.err) == 1);
}

TEST_CASE("cmd_predict is deterministic across invocations") {
  TempDir dir;
  const auto cfg = pref_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_preference(cfg, {}, train_io.out, train_io.err) == 0);
  const auto queries = dir.file("q.csv",
                                "z1_0,z1_1,z2_0,z2_1\n"
                                "0.2,0.9,1.4,-0.3\n"
                                "2,0.5,0,0\n");
  Captured io1, io2;
  REQUIRE(cmd_predict(dir.at("model.json"), std::nullopt, queries, io1.out,
                      io1.err) == 0);
  REQUIRE(cmd_predict(dir.at("model.json"), std::nullopt, queries, io2.out,
                      io2.err) == 0);
  CHECK(io1.out.str() == io2.out.str());
}

TEST_CASE("cmd_predict rejects mismatched queries") {
  TempDir dir;
  const auto pref_cfg = pref_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_preference(pref_cfg, {}, train_io.out, train_io.err) == 0);

  SUBCASE("triplet queries against a preference model") {
    const auto q = dir.file("q.csv", "anchor_id,second_id,third_id\na,b,c\n");
    Captured io;
    CHECK(cmd_predict(dir.at("model.json"), std::nullopt, q, io.out, io.err) ==
          1);
  }
  SUBCASE("wrong coordinate width") {
    const auto q = dir.file("q.csv", "z1_0,z2_0\n1,2\n");
    Captured io;
    CHECK(cmd_predict(dir.at("model.json"), std::nullopt, q, io.out, io.err) ==
          1);
  }
  SUBCASE("malformed query rows") {
    const auto q = dir.file("q.csv", "first_id,second_id\na\n");
    Captured io;
    CHECK(cmd_predict(dir.at("model.json"), std::nullopt, q, io.out, io.err) ==
          1);
  }
  SUBCASE("missing model file") {
    const auto q = dir.file("q.csv", "first_id,second_id\na,b\n");
    Captured io;
    CHECK(cmd_predict(dir.at("nope.json"), std::nullopt, q, io.out, io.err) ==
          1);
  }
}

TEST_CASE("cmd_predict scores triplet queries with a triplet model") {
  TempDir dir;
  const auto cfg = triplet_setup(dir);
  Captured train_io;
  REQUIRE(cmd_train_triplet(cfg, {}, train_io.out, train_io.err) == 0);
  const auto q = dir.file("q.csv",
                          "anchor_id,second_id,third_id\n"
                          "a,b,c\n"
                          "a,b,b\n");  // same compared items: gap exactly 0
  Captured io;
  REQUIRE(cmd_predict(dir.at("tmodel.json"), std::nullopt, q, io.out,
                      io.err) == 0);
  std::istringstream lines(io.out.str());
  std::string header, r1, r2;
  std::getline(lines, header);
  std::getline(lines, r1);
  std::getline(lines, r2);
  CHECK(header == "label,delta");
  CHECK(r2 == "0,0");
}

TEST_CASE("cmd_verify passes on default checks and writes a report") {
  TempDir dir;
  const auto report_path = dir.at("report.json");
  Captured io;
  const int rc = cmd_verify(3, report_path, io.out, io.err);
  CHECK(rc == 0);
  const std::string text = io.out.str();
  CHECK(text.find("PASS planar_fixture") != std::string::npos);
  CHECK(text.find("PASS projection_invariance") != std::string::npos);
  CHECK(text.find("PASS restriction_extension") != std::string::npos);
  CHECK(text.find("PASS regularized_representer") != std::string::npos);
  CHECK(text.find("all checks passed") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  std::ifstream in(report_path);
  REQUIRE(in.good());
  const auto doc = nlohmann::ordered_json::parse(in);
  CHECK(doc["seed"] == 3);
  CHECK(doc["all_pass"] == true);
  REQUIRE(doc["checks"].size() == 4);
  for (const auto& c : doc["checks"]) {
    CHECK(c["pass"] == true);
    CHECK(c["instances"].get<long>() > 0);
    CHECK(c["max_abs_error"].is_number());
  }
}
