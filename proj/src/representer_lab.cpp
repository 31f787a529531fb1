#include "kpref/representer_lab.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "kpref/errors.hpp"
#include "kpref/mahalanobis.hpp"

namespace kpref {

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

void AmbientInstance::validate() const {
  const Index D = ambient_dim;
  const Index m = Q.cols();
  if (Q.rows() != D || items.cols() != D || ambient_form.rows() != D ||
      ambient_form.cols() != D)
    throw InputError("AmbientInstance: inconsistent dimensions");
  if ((Q.transpose() * Q - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() >
      1e-10)
    throw InputError("AmbientInstance: basis columns are not orthonormal");
  if (min_eigenvalue(ambient_form) < kEigFloor)
    throw InputError("AmbientInstance: ambient form is not positive definite");
  // items must lie in span(Q) ...
  const Matrix residual = items - items * Q * Q.transpose();
  if (residual.cwiseAbs().maxCoeff() >
      1e-8 * (1.0 + items.cwiseAbs().maxCoeff()))
    throw InputError("AmbientInstance: items leave the subspace");
  // ... and span it: their V-coordinates must have full rank
  Eigen::FullPivLU<Matrix> lu(item_coords());
  if (lu.rank() < m)
    throw InputError("AmbientInstance: items do not span the subspace");
  if (ideal.size() != 0 && ideal.size() != D)
    throw InputError("AmbientInstance: ideal point has wrong dimension");
}

AOrthogonalSplit a_orthogonal_project(const Matrix& B, const Matrix& Q,
                                      const Vector& u) {
  const Index m = Q.cols();
  if (B.rows() != Q.rows() || B.cols() != Q.rows() || u.size() != Q.rows())
    throw InputError("a_orthogonal_project: dimension mismatch");
  const Matrix M = Q.transpose() * B * Q;
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalError(
        "a_orthogonal_project: normal equations are not positive definite");
  const Vector c = llt.solve(Q.transpose() * (B * u));

  AOrthogonalSplit split;
  split.tangent = Q * c;
  split.normal = u - split.tangent;

  // certify B-orthogonality of the remainder against every basis direction
  const double scale =
      1.0 + B.cwiseAbs().maxCoeff() * (1.0 + u.cwiseAbs().maxCoeff());
  const Vector residual = Q.transpose() * (B * split.normal);
  for (Index j = 0; j < m; ++j) {
    if (std::abs(residual(j)) > 1e-9 * scale)
      throw NumericalError(
          "a_orthogonal_project: orthogonality certification failed "
          "(ill-conditioned normal equations)");
  }
  return split;
}

void merge_report(CheckReport& aggregate, const CheckReport& one) {
  aggregate.instances += one.instances;
  aggregate.max_abs_error = std::max(aggregate.max_abs_error, one.max_abs_error);
  aggregate.pass = aggregate.pass && one.pass;
}

AmbientInstance random_ambient_instance(Rng& rng, Index max_dim,
                                        Index max_span, int max_comparisons) {
  if (max_dim < 2) throw InputError("random_ambient_instance: max_dim >= 2");
  AmbientInstance inst;
  const Index D = 2 + static_cast<Index>(rng.uniform_int(0, max_dim - 2));
  const Index span_cap = std::min<Index>(max_span, D - 1);
  const Index m = 1 + static_cast<Index>(rng.uniform_int(0, span_cap - 1));
  // more items than span dimensions, mirroring the planar worked example
  // where two opposite points span a single line
  const Index n_items = m + 1 + static_cast<Index>(rng.uniform_int(0, 1));

  inst.ambient_dim = D;
  inst.Q = rng.orthonormal_basis(D, m);
  // identity-plus-noise leading block keeps the span well-conditioned
  Matrix coords(n_items, m);
  coords.topRows(m) = Matrix::Identity(m, m) + 0.3 * rng.normal_matrix(m, m);
  coords.bottomRows(n_items - m) = rng.normal_matrix(n_items - m, m);
  inst.items = coords * inst.Q.transpose();
  inst.ambient_form = rng.pd_matrix(D, 0.1);
  inst.ideal = rng.normal_vector(D);

  const int n = 1 + static_cast<int>(rng.uniform_int(0, max_comparisons - 1));
  while (static_cast<int>(inst.pairs.size()) < n) {
    const Index i = static_cast<Index>(rng.uniform_int(0, n_items - 1));
    const Index j = static_cast<Index>(rng.uniform_int(0, n_items - 1));
    if (i == j) continue;
    inst.pairs.push_back({i, j, rng.sign()});
  }
  while (static_cast<int>(inst.triplets.size()) < n) {
    const Index a = static_cast<Index>(rng.uniform_int(0, n_items - 1));
    const Index b = static_cast<Index>(rng.uniform_int(0, n_items - 1));
    const Index c = static_cast<Index>(rng.uniform_int(0, n_items - 1));
    if (b == c) continue;
    inst.triplets.push_back({a, b, c, rng.sign()});
  }
  inst.validate();
  return inst;
}

CheckReport verify_projection_invariance(const AmbientInstance& inst,
                                         const LossSpec& loss) {
  inst.validate();
  if (inst.pairs.empty() || inst.ideal.size() == 0)
    throw InputError(
        "verify_projection_invariance: instance needs pairs and an ideal "
        "point");

  const auto split =
      a_orthogonal_project(inst.ambient_form, inst.Q, inst.ideal);
  const double at_u = preference_objective(
      inst.ambient_form, inst.ideal, 0.0, inst.items, inst.pairs, loss);
  const double at_tangent = preference_objective(
      inst.ambient_form, split.tangent, 0.0, inst.items, inst.pairs, loss);

  CheckReport report;
  report.check = "projection_invariance";
  report.instances = 1;
  report.max_abs_error = std::abs(at_u - at_tangent);
  report.pass = report.max_abs_error <=
                1e-9 * (1.0 + std::max(std::abs(at_u), std::abs(at_tangent)));
  return report;
}

CheckReport verify_restriction_extension(Index ambient_dim, Index span_dim,
                                         std::uint64_t seed) {
  if (span_dim < 1 || span_dim > ambient_dim || ambient_dim > 12)
    throw InputError(
        "verify_restriction_extension: need 1 <= m <= D <= 12");
  Rng rng(seed);
  const Index D = ambient_dim;
  const Index m = span_dim;

  CheckReport report;
  report.check = "restriction_extension";
  report.instances = 1;

  const Matrix A = rng.pd_matrix(m, 0.1);
  const Matrix Q = rng.orthonormal_basis(D, m);
  const Matrix B = extend_ambient(A, Q);

  // (i) the extension is positive definite
  if (min_eigenvalue(B) < std::min(kEigFloor, 1.0) - 1e-10)
    report.pass = false;

  // (ii) the extension reproduces the subspace inner products
  for (int rep = 0; rep < 5; ++rep) {
    const Vector x = rng.normal_vector(m);
    const Vector y = rng.normal_vector(m);
    const double in_v = y.dot(A * x);
    const double ambient = (Q * y).dot(B * (Q * x));
    const double err = rel_err(in_v, ambient);
    report.max_abs_error = std::max(report.max_abs_error, err);
    if (err > 1e-10) report.pass = false;
  }

  // (iii) restriction undoes extension
  const Matrix round_trip = restrict_form(B, Q);
  const double rt_err = (round_trip - A).cwiseAbs().maxCoeff() /
                        (1.0 + A.cwiseAbs().maxCoeff());
  report.max_abs_error = std::max(report.max_abs_error, rt_err);
  if (rt_err > 1e-12) report.pass = false;

  // converse: an arbitrary ambient PD form restricts to a PD form that
  // reproduces its inner products on the subspace
  const Matrix B2 = rng.pd_matrix(D, 0.1);
  const Matrix A2 = restrict_form(B2, Q);
  if (!(min_eigenvalue(A2) > 0.0)) report.pass = false;
  for (int rep = 0; rep < 5; ++rep) {
    const Vector x = rng.normal_vector(m);
    const Vector y = rng.normal_vector(m);
    const double err = rel_err(y.dot(A2 * x), (Q * y).dot(B2 * (Q * x)));
    report.max_abs_error = std::max(report.max_abs_error, err);
    if (err > 1e-10) report.pass = false;
  }
  return report;
}

CheckReport verify_regularized_representer(const AmbientInstance& inst,
                                           const LossSpec& loss,
                                           double lambda,
                                           std::uint64_t seed) {
  inst.validate();
  if (inst.pairs.empty())
    throw InputError("verify_regularized_representer: instance needs pairs");
  if (!(lambda >= 0.0))
    throw InputError("verify_regularized_representer: lambda must be >= 0");

  Rng rng(seed);
  const Index m = inst.Q.cols();
  const Matrix coords = inst.item_coords();

  CheckReport report;
  report.check = "regularized_representer";
  report.instances = 1;

  // value correspondence on a cloud of candidates
  for (int k = 0; k < 8; ++k) {
    const Matrix A_v = rng.pd_matrix(m, 0.1);
    const Vector u_v = rng.normal_vector(m);
    const Matrix B = extend_ambient(A_v, inst.Q);
    const Vector u_ambient = inst.Q * u_v;

    const double in_v =
        preference_objective(A_v, u_v, lambda, coords, inst.pairs, loss);
    const double ambient = preference_objective(
        B, u_ambient, lambda, inst.items, inst.pairs, loss);
    const double err = rel_err(in_v, ambient);
    report.max_abs_error = std::max(report.max_abs_error, err);
    if (err > 1e-9) report.pass = false;

    if (!inst.triplets.empty()) {
      const double t_in_v =
          triplet_objective(A_v, coords, inst.triplets, loss);
      const double t_ambient =
          triplet_objective(B, inst.items, inst.triplets, loss);
      const double t_err = rel_err(t_in_v, t_ambient);
      report.max_abs_error = std::max(report.max_abs_error, t_err);
      if (t_err > 1e-9) report.pass = false;
    }
  }

  // projecting the ideal point into the span never increases the objective
  if (inst.ideal.size() != 0) {
    const auto split =
        a_orthogonal_project(inst.ambient_form, inst.Q, inst.ideal);
    const double at_u = preference_objective(
        inst.ambient_form, inst.ideal, lambda, inst.items, inst.pairs, loss);
    const double at_tangent =
        preference_objective(inst.ambient_form, split.tangent, lambda,
                             inst.items, inst.pairs, loss);
    if (at_tangent > at_u + 1e-12) report.pass = false;
  }
  return report;
}

CheckReport fixture_planar_example() {
  Matrix A(2, 2);
  A << 1, 1, 1, 2;
  const auto form = MahalanobisForm::from_matrix(A);
  Vector x1(2), x2(2);
  x1 << 1, 0;
  x2 << -1, 0;

  CheckReport report;
  report.check = "planar_fixture";
  report.instances = 1;

  auto record = [&](double got, double want) {
    const double err = std::abs(got - want);
    report.max_abs_error = std::max(report.max_abs_error, err);
    if (err > 1e-12) report.pass = false;
  };

  for (double u0 : {0.0, 0.5, 1.0, 2.0}) {
    for (int k = 0; k <= 10; ++k) {
      const double t = static_cast<double>(k) / 10.0;
      Vector u_axis(2), u_line(2);
      u_axis << 0, t;
      u_line << t, -t + u0;
      // vertical-axis ideal points: the gap is -4t
      record(delta_pair(form, u_axis, x1, x2), -4.0 * t);
      // along the slanted line the gap is frozen at -4*u0
      record(delta_pair(form, u_line, x1, x2), -4.0 * u0);
    }
  }

  // e_1 and (1,-1) are orthogonal under this form
  Vector e1(2), w(2);
  e1 << 1, 0;
  w << 1, -1;
  record(form.inner(e1, w), 0.0);
  return report;
}

std::vector<CheckReport> run_default_checks(std::uint64_t seed) {
  std::vector<CheckReport> reports;
  reports.push_back(fixture_planar_example());

  Rng rng(seed);

  CheckReport invariance;
  invariance.check = "projection_invariance";
  for (int k = 0; k < 100; ++k) {
    const auto inst = random_ambient_instance(rng, 6, 4, 20);
    const auto loss = (k % 2 == 0) ? LossSpec::logistic() : LossSpec::hinge(1.0);
    merge_report(invariance, verify_projection_invariance(inst, loss));
  }
  reports.push_back(invariance);

  CheckReport forms;
  forms.check = "restriction_extension";
  for (int k = 0; k < 200; ++k) {
    const Index D = 1 + static_cast<Index>(rng.uniform_int(0, 11));  // 1..12
    const Index m = 1 + static_cast<Index>(rng.uniform_int(0, D - 1));
    const auto draw_seed =
        seed * 1000003ULL + static_cast<std::uint64_t>(k);
    merge_report(forms, verify_restriction_extension(D, m, draw_seed));
  }
  reports.push_back(forms);

  CheckReport representer;
  representer.check = "regularized_representer";
  for (int k = 0; k < 100; ++k) {
    const auto inst = random_ambient_instance(rng, 6, 4, 20);
    const auto loss = (k % 2 == 0) ? LossSpec::logistic() : LossSpec::hinge(1.0);
    const double lambda = rng.uniform(0.0, 1.0);
    const auto inner_seed =
        seed * 9176351ULL + static_cast<std::uint64_t>(k);
    merge_report(representer,
                 verify_regularized_representer(inst, loss, lambda, inner_seed));
  }
  reports.push_back(representer);
  return reports;
}

}  // namespace kpref
