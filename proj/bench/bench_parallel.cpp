// Times the OpenMP production paths against their serial reference
// counterparts: Gram assembly, batch embedding, and the chunked
// objective/gradient accumulations. Build and run manually; the benchmark
// is not part of the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kpref/embedding.hpp"
#include "kpref/reference.hpp"
#include "kpref/rng.hpp"

using namespace kpref;

namespace {

volatile double g_sink = 0.0;

template <typename F>
double best_seconds(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    g_sink = g_sink + body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run serially\n\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "workload", "serial", "parallel",
              "speedup");

  Rng rng(2718);
  constexpr int kReps = 3;

  {
    const Matrix items = rng.normal_matrix(384, 16);
    const KernelSpec spec = KernelSpec::rbf(0.2);
    const double s = best_seconds(
        kReps, [&] { return reference::gram(spec, items).sum(); });
    const double p =
        best_seconds(kReps, [&] { return gram(spec, items).sum(); });
    report("gram 384x384 rbf", s, p);
  }

  {
    const GramBasis basis =
        build_basis(KernelSpec::rbf(0.15), rng.normal_matrix(64, 8));
    const Matrix queries = rng.normal_matrix(4000, 8);
    const double s = best_seconds(
        kReps, [&] { return reference::embed_batch(basis, queries).sum(); });
    const double p =
        best_seconds(kReps, [&] { return basis.embed_batch(queries).sum(); });
    report("embed 4000 points, m=64", s, p);
  }

  {
    const Index m = 24;
    const GramBasis basis =
        build_basis(KernelSpec::rbf(0.15), rng.normal_matrix(m, 8));
    const Matrix coords = basis.all_item_coords();
    const Matrix A = rng.pd_matrix(m, 0.5);
    const Vector u = rng.normal_vector(m);
    const LossSpec loss = LossSpec::logistic();

    std::vector<PairedSample> pairs;
    std::vector<TripletSample> trips;
    for (int k = 0; k < 30000; ++k) {
      const Index i = rng.uniform_int(0, m - 1);
      Index j = rng.uniform_int(0, m - 2);
      if (j >= i) ++j;
      pairs.push_back({i, j, rng.sign()});
      Index t = rng.uniform_int(0, m - 2);
      if (t >= j) ++t;
      trips.push_back({i, j, t, rng.sign()});
    }

    report("pair objective n=30000",
           best_seconds(kReps,
                        [&] {
                          return reference::preference_objective(
                              A, u, 0.1, coords, pairs, loss);
                        }),
           best_seconds(kReps, [&] {
             return preference_objective(A, u, 0.1, coords, pairs, loss);
           }));

    report("pair gradients n=30000",
           best_seconds(kReps,
                        [&] {
                          return reference::preference_gradients(A, u, 0.1,
                                                                 coords, pairs,
                                                                 loss)
                              .grad_A.sum();
                        }),
           best_seconds(kReps, [&] {
             return preference_gradients(A, u, 0.1, coords, pairs, loss)
                 .grad_A.sum();
           }));

    report("triplet gradient n=30000",
           best_seconds(kReps,
                        [&] {
                          return reference::triplet_gradient(A, coords, trips,
                                                             loss, 0.1)
                              .sum();
                        }),
           best_seconds(kReps, [&] {
             return triplet_gradient(A, coords, trips, loss, 0.1).sum();
           }));
  }

  std::printf("\n(checksum %g)\n", g_sink);
  return 0;
}
