#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpref/losses.hpp"
#include "kpref/rng.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/solver_triplet.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// A comparison problem posed in an ambient space R^D whose items span a
/// subspace V (usually proper; possibly of lower dimension than the item
/// count, as when two opposite points span a single line). Everything the
/// invariance checks below need: the items, an orthonormal basis Q of V, an
/// ambient bilinear form B, the comparisons, and optionally an ideal point
/// that may stick out of V.
struct AmbientInstance {
  Index ambient_dim = 0;  ///< D
  Matrix items;           ///< n_items x D, rows lying in and spanning V
  Matrix Q;               ///< D x dim(V), orthonormal columns spanning V
  Matrix ambient_form;    ///< B: D x D symmetric positive definite
  std::vector<PairedSample> pairs;
  std::vector<TripletSample> triplets;
  Vector ideal;           ///< u* in R^D; empty (size 0) when absent

  /// V-coordinates of the items: row i is Q^T * item_i (n_items x dim(V)).
  Matrix item_coords() const { return items * Q; }

  /// Throws InputError if Q is not orthonormal (1e-10), the ambient form is
  /// not positive definite to the eigenvalue floor, or the items do not lie
  /// in (and span) the column space of Q.
  void validate() const;
};

/// Splitting of a vector u against a subspace: u = tangent + normal with
/// tangent in span(Q) and normal orthogonal to span(Q) in the B-inner
/// product (not the Euclidean one, unless B = I).
struct AOrthogonalSplit {
  Vector tangent;
  Vector normal;
};

/// Projects u onto span(Q) orthogonally with respect to <x,y>_B = y^T B x,
/// by solving the normal equations (Q^T B Q) c = Q^T B u and setting
/// tangent = Q c. Certifies <normal, q>_B = 0 for every column q of Q within
/// 1e-9 (scaled); failure to certify raises NumericalError, as does a
/// Cholesky breakdown of Q^T B Q (impossible for genuinely PD B).
AOrthogonalSplit a_orthogonal_project(const Matrix& B, const Matrix& Q,
                                      const Vector& u);

/// Outcome of one verification: which check ran, over how many instances,
/// the largest error observed, and whether every instance passed.
struct CheckReport {
  std::string check;
  long instances = 0;
  double max_abs_error = 0.0;
  bool pass = true;
};

/// Folds another report into an aggregate: sums instances, keeps the worst
/// error, and-combines pass.
void merge_report(CheckReport& aggregate, const CheckReport& one);

/// Draws a random instance: D in [2, max_dim], a proper subspace of
/// dimension m in [1, min(max_span, D-1)], well-conditioned items, a random
/// PD ambient form, a Gaussian ideal point (generically outside V), and up
/// to max_comparisons pairs and triplets.
AmbientInstance random_ambient_instance(Rng& rng, Index max_dim = 6,
                                        Index max_span = 4,
                                        int max_comparisons = 20);

/// Checks that replacing the ideal point u* by its B-orthogonal projection
/// onto V leaves the paired data term (no regularizer) unchanged:
/// |loss(B, u*) - loss(B, u_T)| <= 1e-9 * (1 + magnitude). The report's
/// max_abs_error is the absolute difference.
CheckReport verify_projection_invariance(const AmbientInstance& inst,
                                         const LossSpec& loss);

/// One seeded draw checking the extension/restriction correspondence of
/// forms between R^m and R^D (1 <= m <= D <= 12): extend_ambient output is
/// PD; x^T A y = (Qx)^T B (Qy) to 1e-10; restrict(extend(A)) = A to 1e-12;
/// and conversely a random ambient PD form restricts to a PD form that
/// reproduces its inner products on V.
CheckReport verify_restriction_extension(Index ambient_dim, Index span_dim,
                                         std::uint64_t seed);

/// Value correspondence of the regularized paired objective: for a cloud of
/// candidate (A_V, u_V) in V-coordinates, the objective equals the ambient
/// objective of the extended candidate within 1e-9 relative; and projecting
/// the instance's own ideal point onto V never increases the full objective
/// (by more than 1e-12). Triplet candidates are checked the same way.
CheckReport verify_regularized_representer(const AmbientInstance& inst,
                                           const LossSpec& loss,
                                           double lambda,
                                           std::uint64_t seed = 0);

/// Exact reproduction of the planar worked example: items (1,0) and (-1,0)
/// with form [[1,1],[1,2]]. Asserts, to 1e-12: the gap at ideal point (0,t)
/// is -4t; the gap along the line (t, -t+u0) is the constant -4*u0; and e_1
/// is form-orthogonal to (1,-1). Grid: t in {0, 0.1, ..., 1}, u0 in
/// {0, 0.5, 1, 2}.
CheckReport fixture_planar_example();

/// The default verification battery: the planar fixture, 100 projection
/// invariance instances, 200 restriction/extension draws (D <= 12), and 100
/// regularized-representer instances, all derived from one seed. Returns
/// one aggregated report per check, in that order.
std::vector<CheckReport> run_default_checks(std::uint64_t seed);

}  // namespace kpref
