#pragma once

#include <cstdint>

#include "rminmax/minmax.hpp"
#include "rminmax/oracles.hpp"

namespace rminmax {

// ---------------------------------------------------------------------------
// Robust Karcher mean:
//   min_x max_z  sum_i w_i(z) d^2(x, a_i)/2 - (lambda_w/2) ||z||^2,
//   w(z) = u + B z,
// with u the uniform weights, B an orthonormal basis of the sum-zero
// subspace, and z confined to a Euclidean ball small enough to keep every
// weight positive. The simplex constraint thereby reduces to the same
// geodesic-ball projection as every other feasible set.

struct RobustKarcherProblem {
  MinMaxProblem problem;
  Mat anchors;  // columns are anchor points on the x-manifold
  Mat basis;    // m x (m-1), orthonormal columns, each summing to zero
  double lambda_w = 1.0;

  Vec weights(const Vec& z) const;
};

RobustKarcherProblem make_robust_karcher(ManifoldPtr mx, const Mat& anchors,
                                         const Vec& x_center, double x_radius,
                                         double z_radius, double lambda_w);

// ---------------------------------------------------------------------------
// Synthetic saddle with the saddle point pinned at (p, q):
//   f(x, y) = (a/2) d^2(p, x) - (b/2) d^2(q, y) + u(x)^T A v(y),
// where u, v are the tangent coordinates of log_p(x), log_q(y) in fixed
// orthonormal bases. Both partial gradients vanish at (p, q) by
// construction. Euclidean factors get exact constants; curved factors get
// numerically measured ones, with the safety margin applied in the direction
// that keeps every declared bound valid.

struct SyntheticSaddleConfig {
  double a = 1.0;
  double b = 1.0;
  Mat A;  // dim_x x dim_y coupling in tangent coordinates (empty = zero)
  int measure_samples = 48;
  double margin = 0.05;
  std::uint64_t seed = 7;
};

struct SyntheticSaddleProblem {
  MinMaxProblem problem;
  Vec saddle_x;
  Vec saddle_y;
  Mat basis_x;  // ambient x intrinsic-dim tangent basis at the saddle
  Mat basis_y;
  bool measured = false;
};

SyntheticSaddleProblem make_synthetic_saddle(ManifoldPtr mx, ManifoldPtr my,
                                             const Vec& p, const Vec& q,
                                             double x_radius, double y_radius,
                                             const SyntheticSaddleConfig& cfg);

// Bilinear(-plus-quadratic) saddle with exact constants:
//   f(x, y) = (a/2) d^2(p, x) - (b/2) d^2(q, y) + u(x)^T C v(y),
// where u, v are the tangent coordinates of log_p(x), log_q(y). Unlike the
// synthetic family above, a and b may be zero, which yields genuinely
// convex-concave instances for the reduction path. Exactness of the declared
// constants requires each factor's log coordinates to be affine along
// geodesics, so factors must be Euclidean of any dimension or have intrinsic
// dimension one; other factors are rejected. (p, q) is a saddle point for
// every a, b >= 0.
MinMaxProblem make_bilinear_saddle(ManifoldPtr mx, ManifoldPtr my,
                                   const Vec& p, const Vec& q, const Mat& C,
                                   double x_radius, double y_radius,
                                   double a = 0.0, double b = 0.0);

// ---------------------------------------------------------------------------
// Separable diagonal quadratic (1/2) sum_i c_i (x_i - t_i)^2 on a Euclidean
// ball, with exact constrained minimization by bisection on the multiplier.
// Its proximal oracle makes it the clean testbed for the accelerated
// proximal-point solver: one prox call per subproblem, no gradient calls.

struct DiagQuadratic {
  Vec c;
  Vec t;
  GConvexProblem problem;

  Vec minimizer() const;  // exact constrained minimizer
  double min_value() const;
};

DiagQuadratic make_diag_quadratic(const Vec& c, const Vec& t,
                                  const Vec& center, double radius);

// argmin_y (1/2) sum c_i (y_i - t_i)^2 + ||y - xc||^2/(2 lambda) over the
// ball, exact up to bisection roundoff.
Vec diag_quadratic_prox_point(const DiagQuadratic& q, const Vec& xc,
                              double lambda);

ProxSubsolver diag_quadratic_exact_prox(const DiagQuadratic& q);

// ---------------------------------------------------------------------------
// Certification oracles. All run on a detached copy of the problem with
// fresh counters, so certification work never inflates a solver's oracle
// tally.

// max_y f(x, .) to gap certificate tol (grid argmax fallback when mu_y = 0).
Vec best_response_max_y(const MinMaxProblem& p, const Vec& x,
                        double tol = 1e-12);
Vec best_response_min_x(const MinMaxProblem& p, const Vec& y,
                        double tol = 1e-12);

// Duality gap max_y f(x, .) - min_x f(., y) through the best responses;
// understates the true gap by at most 2 tol on instances with interior
// optima.
double certified_gap(const MinMaxProblem& p, const Vec& x, const Vec& y,
                     double tol = 1e-12);

// Grid-based two-sided gap with a measured Lipschitz mesh correction.
struct GridGap {
  double lower = 0.0;  // max over the y-grid minus min over the x-grid
  double upper = 0.0;  // lower plus the covering-radius correction
  double rcov_x = 0.0;
  double rcov_y = 0.0;
  double lip_x = 0.0;
  double lip_y = 0.0;
};

GridGap grid_gap(const MinMaxProblem& p, const Vec& x, const Vec& y,
                 int target_points, std::uint64_t seed);

// Empirical minimax interchange check over a product grid: the discrepancy
// |min max - max min| must not exceed the Lipschitz mesh bound
// 2 lip (rcov_x + rcov_y).
struct SionCheck {
  double minmax = 0.0;
  double maxmin = 0.0;
  double discrepancy = 0.0;
  double bound = 0.0;
  bool ok = false;
};

SionCheck sion_check(const MinMaxProblem& p, int target_points,
                     std::uint64_t seed);

// Max normalized finite-difference error over both partial gradients.
double minmax_gradient_check(const MinMaxProblem& p, const Vec& x,
                             const Vec& y, double h, int ndirs,
                             std::uint64_t seed);

}  // namespace rminmax
