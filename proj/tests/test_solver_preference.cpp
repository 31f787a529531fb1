#include <doctest.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <vector>

#include "kpref/embedding.hpp"
#include "kpref/errors.hpp"
#include "kpref/losses.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/rng.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/types.hpp"

using namespace kpref;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix planar_form() {
  Matrix A(2, 2);
  A << 1, 1, 1, 2;
  return A;
}

// The two opposite planar items used by several fixtures below.
Matrix planar_coords() {
  Matrix coords(2, 2);
  coords << 1, 0, -1, 0;
  return coords;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

GramBasis random_basis(Rng& rng, Index m) {
  // items = identity-plus-noise rows in R^m keep the linear-kernel gram
  // well-conditioned at every size we use here
  Matrix items = Matrix::Identity(m, m) + 0.3 * rng.normal_matrix(m, m);
  return build_basis(KernelSpec::linear(), items);
}

}  // namespace

TEST_CASE("delta_pair: planar form with ideal points on the vertical axis") {
  // A = [[1,1],[1,2]], items (1,0) and (-1,0), u = (0,t): gap is -4t.
  const auto form = MahalanobisForm::from_matrix(planar_form());
  for (double t : {-2.0, -0.5, 0.0, 0.7, 1.0, 3.0}) {
    const double d = delta_pair(form, vec2(0, t), vec2(1, 0), vec2(-1, 0));
    CHECK(d == doctest::Approx(-4.0 * t).epsilon(1e-14));
  }
}

TEST_CASE("delta_pair: gap is constant along the form's null direction") {
  // Moving u along (1,-1) (A-orthogonal to the item difference) leaves the
  // gap at -4*u0 for every t.
  const auto form = MahalanobisForm::from_matrix(planar_form());
  for (double u0 : {0.0, 0.5, 1.0, 2.0}) {
    for (double t : {-1.0, 0.0, 0.3, 1.0, 5.0}) {
      const Vector u = vec2(t, -t + u0);
      const double d = delta_pair(form, u, vec2(1, 0), vec2(-1, 0));
      CHECK(d == doctest::Approx(-4.0 * u0).epsilon(1e-13));
    }
  }
}

TEST_CASE("delta_pair: identical comparison points give zero gap") {
  const auto form = MahalanobisForm::identity(2);
  const Vector a = vec2(0.3, -1.2);
  CHECK(delta_pair(form, vec2(1, 1), a, a) == 0.0);
}

TEST_CASE("delta_pair validates dimensions") {
  const auto form = MahalanobisForm::identity(2);
  Vector u3 = Vector::Zero(3);
  CHECK_THROWS_AS(delta_pair(form, u3, vec2(1, 0), vec2(0, 1)), InputError);
}

TEST_CASE("preference_objective: empty data with zero ideal point is zero") {
  const Matrix A = Matrix::Identity(2, 2);
  const Vector u = Vector::Zero(2);
  const std::vector<PairedSample> data;
  CHECK(preference_objective(A, u, 1.0, planar_coords(), data,
                             LossSpec::logistic()) == 0.0);
}

TEST_CASE("preference_objective: correctly ordered pair costs nothing") {
  // gap -4 with label -1 is a correct strict comparison: zero-one loss 0.
  const Vector u = vec2(0, 1);
  const std::vector<PairedSample> data{{0, 1, -1}};
  const double f = preference_objective(planar_form(), u, 0.0,
                                        planar_coords(), data,
                                        LossSpec::zero_one());
  CHECK(f == 0.0);
}

TEST_CASE("preference_objective: hinge at zero gap plus regularizer") {
  // items (1,0), (0,1) and u = (1,1) are equidistant under the identity, so
  // the gap is 0; hinge(1) charges 1 and the regularizer adds |u|^2 = 2.
  Matrix coords(2, 2);
  coords << 1, 0, 0, 1;
  const Matrix A = Matrix::Identity(2, 2);
  const Vector u = vec2(1, 1);
  const std::vector<PairedSample> data{{0, 1, +1}};
  const double f =
      preference_objective(A, u, 1.0, coords, data, LossSpec::hinge(1.0));
  CHECK(f == 3.0);
}

TEST_CASE("preference_objective rejects out-of-range indices") {
  const std::vector<PairedSample> data{{0, 5, +1}};
  const Matrix A = Matrix::Identity(2, 2);
  const Vector u = Vector::Zero(2);
  CHECK_THROWS_AS(preference_objective(A, u, 0.0, planar_coords(), data,
                                       LossSpec::logistic()),
                  InputError);
}

TEST_CASE("preference_gradients: empty data and no regularizer give zeros") {
  const Matrix A = Matrix::Identity(2, 2);
  const Vector u = vec2(0.5, -1.0);
  const std::vector<PairedSample> data;
  const auto g = preference_gradients(A, u, 0.0, planar_coords(), data,
                                      LossSpec::logistic());
  CHECK(g.grad_A.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.grad_u.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("preference_gradients: inactive hinge sample contributes nothing") {
  // gap -4, label -1: margin 4 is beyond the hinge target 1, so g = 0.
  const Vector u = vec2(0, 1);
  const std::vector<PairedSample> data{{0, 1, -1}};
  const auto g = preference_gradients(planar_form(), u, 0.0, planar_coords(),
                                      data, LossSpec::hinge(1.0));
  CHECK(g.grad_A.cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.grad_u.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("preference_gradients match central finite differences") {
  Rng rng(101);
  const double h = 1e-5;
  for (int inst = 0; inst < 10; ++inst) {
    const Index m = 2 + static_cast<Index>(rng.uniform_int(0, 2));
    const Index n_items = m + 2;
    const Matrix coords = rng.normal_matrix(n_items, m);
    const Matrix A = rng.pd_matrix(m, 0.3);
    const Vector u = rng.normal_vector(m);
    const double lambda = rng.uniform(0.0, 2.0);
    std::vector<PairedSample> data;
    for (int i = 0; i < 12; ++i) {
      Index a = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      Index b = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      if (a == b) continue;
      data.push_back({a, b, rng.sign()});
    }
    const auto loss = LossSpec::logistic();
    auto f = [&](const Matrix& Ax, const Vector& ux) {
      return preference_objective(Ax, ux, lambda, coords, data, loss);
    };
    const auto g = preference_gradients(A, u, lambda, coords, data, loss);

    // symmetric-pair perturbations for the form gradient
    for (Index i = 0; i < m; ++i) {
      for (Index j = i; j < m; ++j) {
        Matrix P = Matrix::Zero(m, m);
        P(i, j) = 1.0;
        P(j, i) = 1.0;  // same entry when i == j
        const double fd = (f(A + h * P, u) - f(A - h * P, u)) / (2 * h);
        const double an = (i == j) ? g.grad_A(i, i) : 2.0 * g.grad_A(i, j);
        CHECK(close_rel(fd, an, 1e-4));
      }
    }
    for (Index i = 0; i < m; ++i) {
      Vector e = Vector::Zero(m);
      e(i) = 1.0;
      const double fd = (f(A, u + h * e) - f(A, u - h * e)) / (2 * h);
      CHECK(close_rel(fd, g.grad_u(i), 1e-4));
    }
  }
}

TEST_CASE("data loss is constant along the planar invariance line") {
  // With the form fixed to [[1,1],[1,2]] and items (1,0), (-1,0), every
  // ideal point u0*(0,1) + t*(1,-1) produces the same data loss: the gap
  // stays -4*u0 whatever t is.
  const Matrix A = planar_form();
  const Matrix coords = planar_coords();
  const std::vector<PairedSample> data{{0, 1, -1}, {0, 1, +1}, {1, 0, -1}};
  for (const auto& loss :
       {LossSpec::logistic(), LossSpec::hinge(1.0), LossSpec::zero_one()}) {
    for (double u0 : {0.0, 0.5, 1.0, 2.0}) {
      const double base = preference_objective(
          A, vec2(0, u0), 0.0, coords, data, loss);
      for (double t : {-3.0, -1.0, 0.2, 1.0, 4.0}) {
        const double shifted = preference_objective(
            A, vec2(t, -t + u0), 0.0, coords, data, loss);
        CHECK(std::abs(shifted - base) <= 1e-12 * (1.0 + std::abs(base)));
      }
    }
  }
}

TEST_CASE("fit_preference validates inputs") {
  Rng rng(103);
  const auto basis = random_basis(rng, 3);
  const std::vector<PairedSample> none;
  const std::vector<PairedSample> one{{0, 1, +1}};
  SolverConfig cfg;
  CHECK_THROWS_AS(
      fit_preference(basis, none, LossSpec::logistic(), 0.1, cfg),
      InputError);
  CHECK_THROWS_AS(
      fit_preference(basis, one, LossSpec::zero_one(), 0.1, cfg),
      UnsupportedOperationError);
  CHECK_THROWS_AS(
      fit_preference(basis, one, LossSpec::logistic(), -1.0, cfg),
      ConfigError);
  SolverConfig bad = cfg;
  bad.step_size = 0.0;
  CHECK_THROWS_AS(fit_preference(basis, one, LossSpec::logistic(), 0.1, bad),
                  ConfigError);
}

TEST_CASE("fit_preference reaches zero error on separable planted data") {
  Rng rng(107);
  const Index m = 5;
  const auto basis = random_basis(rng, m);
  const Matrix coords = basis.all_item_coords();

  // plant a ground-truth model and label pairs by its distance gaps,
  // keeping only comparisons with a clear margin
  const Matrix A_star = rng.pd_matrix(m, 0.2);
  const Vector u_star = rng.normal_vector(m);
  const auto form_star = MahalanobisForm::from_matrix(A_star);
  std::vector<PairedSample> data;
  int attempts = 0;
  while (data.size() < 40 && attempts < 4000) {
    ++attempts;
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    const Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) continue;
    const double gap = delta_pair(form_star, u_star,
                                  coords.row(i).transpose(),
                                  coords.row(j).transpose());
    if (std::abs(gap) < 0.5) continue;
    data.push_back({i, j, gap > 0 ? +1 : -1});
  }
  REQUIRE(data.size() == 40);

  SolverConfig cfg;
  cfg.max_iters = 2000;
  const auto model =
      fit_preference(basis, data, LossSpec::logistic(), 1e-3, cfg);
  CHECK(model.zero_one_train_error == 0.0);
}

TEST_CASE("fit_preference on contradictory data settles at half error") {
  Rng rng(109);
  const Index m = 4;
  const auto basis = random_basis(rng, m);
  std::vector<PairedSample> data;
  for (int k = 0; k < 10; ++k) {
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) j = (j + 1) % m;
    data.push_back({i, j, +1});
    data.push_back({i, j, -1});  // same comparison, flipped label
  }
  SolverConfig cfg;
  const auto model =
      fit_preference(basis, data, LossSpec::hinge(1.0), 0.0, cfg);
  CHECK(model.zero_one_train_error == 0.5);
}

TEST_CASE("fit_preference records a non-increasing objective trace") {
  Rng rng(113);
  const Index m = 4;
  const auto basis = random_basis(rng, m);
  std::vector<PairedSample> data;
  for (int k = 0; k < 30; ++k) {
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) j = (j + 1) % m;
    data.push_back({i, j, rng.sign()});
  }
  SolverConfig cfg;
  cfg.max_iters = 300;
  const auto model =
      fit_preference(basis, data, LossSpec::logistic(), 0.05, cfg);
  REQUIRE(model.objective_trace.size() >= 2);
  for (std::size_t k = 1; k < model.objective_trace.size(); ++k)
    CHECK(model.objective_trace[k] <= model.objective_trace[k - 1] + 1e-12);
  CHECK(model.objective_trace.back() ==
        objective(model, data, LossSpec::logistic()));
}

TEST_CASE("fit_preference keeps the form PSD at every iteration") {
  Rng rng(127);
  const Index m = 3;
  const auto basis = random_basis(rng, m);
  std::vector<PairedSample> data;
  for (int k = 0; k < 20; ++k) {
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) j = (j + 1) % m;
    data.push_back({i, j, rng.sign()});
  }
  SolverConfig cfg;
  cfg.max_iters = 100;
  cfg.step_size = 0.5;  // aggressive steps to stress the projection
  long observed = 0;
  const auto observer = [&](long, const Matrix& A, const Vector&, double) {
    ++observed;
    CHECK(min_eigenvalue(A) >= kEigFloor - 1e-12);
  };
  fit_preference(basis, data, LossSpec::logistic(), 0.1, cfg, observer);
  CHECK(observed >= 2);
}

TEST_CASE("fit_preference model invariants hold on the output") {
  Rng rng(131);
  const Index m = 4;
  const auto basis = random_basis(rng, m);
  std::vector<PairedSample> data;
  for (int k = 0; k < 25; ++k) {
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) j = (j + 1) % m;
    data.push_back({i, j, rng.sign()});
  }
  SolverConfig cfg;
  cfg.max_iters = 150;
  const auto model =
      fit_preference(basis, data, LossSpec::logistic(), 0.02, cfg);

  // the form stays positive definite
  CHECK(min_eigenvalue(model.form.matrix()) >= kEigFloor - 1e-12);

  // kernel-expansion coefficients round-trip through the factor:
  // L^T b = u and L^T a L = A
  const Matrix& L = basis.chol();
  const Vector u_back = L.transpose() * model.expansion.b;
  CHECK((u_back - model.ideal).cwiseAbs().maxCoeff() <= 1e-10);
  const Matrix A_back = L.transpose() * model.expansion.a * L;
  CHECK((A_back - model.form.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("random initialization is reproducible for a fixed seed") {
  Rng rng(137);
  const Index m = 3;
  const auto basis = random_basis(rng, m);
  std::vector<PairedSample> data;
  for (int k = 0; k < 15; ++k) {
    const Index i = static_cast<Index>(rng.uniform_int(0, m - 1));
    Index j = static_cast<Index>(rng.uniform_int(0, m - 1));
    if (i == j) j = (j + 1) % m;
    data.push_back({i, j, rng.sign()});
  }
  SolverConfig cfg;
  cfg.init = InitKind::Random;
  cfg.seed = 42;
  cfg.max_iters = 50;
  const auto m1 = fit_preference(basis, data, LossSpec::logistic(), 0.1, cfg);
  const auto m2 = fit_preference(basis, data, LossSpec::logistic(), 0.1, cfg);
  CHECK((m1.form.matrix() - m2.form.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m1.ideal - m2.ideal).cwiseAbs().maxCoeff() == 0.0);
  cfg.seed = 43;
  const auto m3 = fit_preference(basis, data, LossSpec::logistic(), 0.1, cfg);
  CHECK((m1.ideal - m3.ideal).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("data term is invariant under form-orthogonal ideal projection") {
  // Items spanning a proper subspace V of ambient space: replacing the
  // ideal point u by its projection onto V (orthogonal in the form's inner
  // product) leaves every distance gap, hence the data term, unchanged —
  // while the regularizer can only shrink.
  Rng rng(139);
  int instances = 0;
  while (instances < 100) {
    const Index D = 2 + static_cast<Index>(rng.uniform_int(0, 4));  // 2..6
    const Index max_m = std::min<Index>(4, D - 1);
    const Index m = 1 + static_cast<Index>(rng.uniform_int(0, max_m - 1));
    const Index n_items = 2 + static_cast<Index>(rng.uniform_int(0, 4));
    const Matrix Q = rng.orthonormal_basis(D, m);
    const Matrix item_coords = rng.normal_matrix(n_items, m);
    const Matrix X = item_coords * Q.transpose();  // items inside V

    const Matrix B = rng.pd_matrix(D, 0.1);
    const Vector u = rng.normal_vector(D);

    // normal equations of the B-orthogonal projection onto span(Q)
    const Matrix M = Q.transpose() * B * Q;
    const Vector c = Eigen::LLT<Matrix>(M).solve(Q.transpose() * (B * u));
    const Vector u_t = Q * c;

    std::vector<PairedSample> data;
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 19));
    for (int k = 0; k < n; ++k) {
      const Index i = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      Index j = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      if (i == j) j = (j + 1) % n_items;
      data.push_back({i, j, rng.sign()});
    }

    const auto loss = LossSpec::logistic();
    const double at_u = preference_objective(B, u, 0.0, X, data, loss);
    const double at_ut = preference_objective(B, u_t, 0.0, X, data, loss);
    CHECK(close_rel(at_u, at_ut, 1e-9));

    const auto formB = MahalanobisForm::from_matrix(B);
    CHECK(formB.norm_sq(u_t) <= formB.norm_sq(u) + 1e-12);
    ++instances;
  }
  CHECK(instances == 100);
}

TEST_CASE("objectives agree between subspace and ambient coordinates") {
  // A form on V extended to ambient space (identity on the complement)
  // reproduces the subspace objective exactly for items and ideal inside V.
  Rng rng(149);
  for (int inst = 0; inst < 100; ++inst) {
    const Index D = 3 + static_cast<Index>(rng.uniform_int(0, 3));  // 3..6
    const Index m = 1 + static_cast<Index>(rng.uniform_int(0, std::min<Index>(4, D - 1) - 1));
    const Index n_items = 3 + static_cast<Index>(rng.uniform_int(0, 3));
    const Matrix Q = rng.orthonormal_basis(D, m);
    const Matrix A = rng.pd_matrix(m, 0.1);
    const Matrix B = extend_ambient(A, Q);
    const Matrix item_coords = rng.normal_matrix(n_items, m);
    const Matrix X = item_coords * Q.transpose();
    const Vector u_v = rng.normal_vector(m);
    const Vector u_amb = Q * u_v;
    const double lambda = rng.uniform(0.0, 1.0);

    std::vector<PairedSample> data;
    for (int k = 0; k < 12; ++k) {
      const Index i = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      Index j = static_cast<Index>(rng.uniform_int(0, n_items - 1));
      if (i == j) j = (j + 1) % n_items;
      data.push_back({i, j, rng.sign()});
    }

    const auto loss = LossSpec::hinge(1.0);
    const double in_v =
        preference_objective(A, u_v, lambda, item_coords, data, loss);
    const double ambient =
        preference_objective(B, u_amb, lambda, X, data, loss);
    CHECK(close_rel(in_v, ambient, 1e-9));
  }
}
