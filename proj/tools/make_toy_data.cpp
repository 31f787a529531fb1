// Regenerates the bundled toy dataset in data/: ten items in R^3, with pair
// and triplet comparisons labeled by a planted model (a fixed positive
// definite form and ideal point in coordinate space). Comparisons whose
// distance gap falls in the lowest magnitudes are discarded so every kept
// label has a healthy margin, making the dataset separable by construction.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kpref/embedding.hpp"
#include "kpref/kernels.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/rng.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/solver_triplet.hpp"

using namespace kpref;

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << text;
}

/// Keeps candidates whose |gap| is above the q-th magnitude quantile.
template <typename T>
std::vector<T> filter_by_gap(std::vector<T> candidates,
                             std::vector<double> gaps, double q) {
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double cut = sorted[static_cast<std::size_t>(q * (sorted.size() - 1))];
  std::vector<T> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (gaps[i] > cut) kept.push_back(candidates[i]);
  return kept;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  constexpr int kItems = 10;
  constexpr int kDim = 3;
  constexpr int kSamples = 200;
  Rng rng(20240816);

  const Matrix points = rng.normal_matrix(kItems, kDim);
  const GramBasis basis = build_basis(KernelSpec::rbf(0.5), points);
  const Matrix coords = basis.all_item_coords();

  // planted model: a random well-conditioned form and an ideal point
  const MahalanobisForm form =
      MahalanobisForm::from_matrix(rng.pd_matrix(kItems, 0.1));
  const Vector ideal = 0.5 * rng.normal_vector(kItems);

  // items.csv
  std::string items_csv = "id";
  for (int c = 0; c < kDim; ++c) items_csv += ",x" + std::to_string(c);
  items_csv += "\n";
  for (int i = 0; i < kItems; ++i) {
    items_csv += "s" + std::to_string(i);
    for (int c = 0; c < kDim; ++c) items_csv += "," + fmt(points(i, c));
    items_csv += "\n";
  }
  write_file(out_dir / "items.csv", items_csv);

  // labeled pairs: all ordered (i, j), filtered to robust gaps
  std::vector<PairedSample> pair_pool;
  std::vector<double> pair_gaps;
  for (Index i = 0; i < kItems; ++i)
    for (Index j = 0; j < kItems; ++j) {
      if (i == j) continue;
      const double delta = delta_pair(form, ideal, coords.row(i).transpose(),
                                      coords.row(j).transpose());
      pair_pool.push_back({i, j, delta > 0 ? +1 : -1});
      pair_gaps.push_back(std::abs(delta));
    }
  const auto good_pairs = filter_by_gap(pair_pool, pair_gaps, 0.4);

  std::string pairs_csv = "first_id,second_id,y\n";
  std::vector<PairedSample> emitted_pairs;
  for (int k = 0; k < kSamples; ++k) {
    const auto& s = good_pairs[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<long>(good_pairs.size()) - 1))];
    emitted_pairs.push_back(s);
    pairs_csv += "s" + std::to_string(s.first) + ",s" +
                 std::to_string(s.second) + "," +
                 (s.y > 0 ? std::string("1") : std::string("-1")) + "\n";
  }
  write_file(out_dir / "pairs.csv", pairs_csv);

  // labeled triplets, same treatment
  std::vector<TripletSample> trip_pool;
  std::vector<double> trip_gaps;
  for (Index a = 0; a < kItems; ++a)
    for (Index s = 0; s < kItems; ++s)
      for (Index t = 0; t < kItems; ++t) {
        if (s == t) continue;
        const double delta =
            delta_triplet(form, coords.row(a).transpose(),
                          coords.row(s).transpose(), coords.row(t).transpose());
        trip_pool.push_back({a, s, t, delta > 0 ? +1 : -1});
        trip_gaps.push_back(std::abs(delta));
      }
  const auto good_trips = filter_by_gap(trip_pool, trip_gaps, 0.4);

  std::string trips_csv = "anchor_id,second_id,third_id,y\n";
  std::vector<TripletSample> emitted_trips;
  for (int k = 0; k < kSamples; ++k) {
    const auto& s = good_trips[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<long>(good_trips.size()) - 1))];
    emitted_trips.push_back(s);
    trips_csv += "s" + std::to_string(s.anchor) + ",s" +
                 std::to_string(s.second) + ",s" + std::to_string(s.third) +
                 "," + (s.y > 0 ? std::string("1") : std::string("-1")) + "\n";
  }
  write_file(out_dir / "triplets.csv", trips_csv);

  // demo query files: a few id pairs and raw coordinate pairs
  std::string qp = "first_id,second_id\n";
  for (int k = 0; k < 5; ++k) {
    const auto& s = good_pairs[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<long>(good_pairs.size()) - 1))];
    qp += "s" + std::to_string(s.first) + ",s" + std::to_string(s.second) +
          "\n";
  }
  write_file(out_dir / "queries_pairs.csv", qp);

  std::string qr = "z1_0,z1_1,z1_2,z2_0,z2_1,z2_2\n";
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 2 * kDim; ++c)
      qr += (c ? "," : "") + fmt(0.8 * rng.normal());
    qr += "\n";
  }
  write_file(out_dir / "queries_raw.csv", qr);

  std::string qt = "anchor_id,second_id,third_id\n";
  for (int k = 0; k < 5; ++k) {
    const auto& s = good_trips[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<long>(good_trips.size()) - 1))];
    qt += "s" + std::to_string(s.anchor) + ",s" + std::to_string(s.second) +
          ",s" + std::to_string(s.third) + "\n";
  }
  write_file(out_dir / "queries_triplets.csv", qt);

  write_file(out_dir / "preference.cfg",
             "# bundled toy run: pair comparisons against an ideal point\n"
             "kernel = rbf\n"
             "gamma = 0.5\n"
             "loss = logistic\n"
             "lambda = 0.001\n"
             "max_iters = 2000\n"
             "items_csv = items.csv\n"
             "pairs_csv = pairs.csv\n"
             "model_out = model_preference.json\n");
  write_file(out_dir / "triplet.cfg",
             "# bundled toy run: relative distance comparisons\n"
             "kernel = rbf\n"
             "gamma = 0.5\n"
             "loss = logistic\n"
             "max_iters = 2000\n"
             "items_csv = items.csv\n"
             "triplets_csv = triplets.csv\n"
             "model_out = model_triplet.json\n");

  // sanity: the planted model classifies its own output perfectly
  const double pair_err =
      preference_zero_one_error(form.matrix(), ideal, coords, emitted_pairs);
  const double trip_err =
      triplet_zero_one_error(form.matrix(), coords, emitted_trips);
  std::cout << "pool sizes: " << good_pairs.size() << " pairs, "
            << good_trips.size() << " triplets\n"
            << "planted-model training error: pairs " << pair_err
            << ", triplets " << trip_err << "\n"
            << "wrote toy dataset to " << out_dir.string() << "\n";
  return pair_err == 0.0 && trip_err == 0.0 ? 0 : 1;
}
