#include <cmath>

#include <doctest.h>

#include "rminmax/gconvex.hpp"
#include "rminmax/manifolds.hpp"
#include "rminmax/oracles.hpp"
#include "rminmax/problems.hpp"
#include "rminmax/rng.hpp"
#include "rminmax/runner.hpp"

using namespace rminmax;

namespace {

GConvexProblem half_norm_sq(const Vec& center, double radius) {
  GConvexProblem p;
  p.manifold = make_euclidean(static_cast<int>(center.size()));
  p.feasible = make_ball(make_point(p.manifold, center), radius);
  p.f = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  p.grad = [](const Vec& x) { return x; };
  p.mu = 1.0;
  p.L = 1.0;
  p.lip = center.norm() + radius;
  return p;
}

GConvexProblem anchor_mean(ManifoldPtr m, const Mat& anchors, const Vec& w,
                           const GeodesicBall& ball) {
  GConvexProblem p;
  p.manifold = m;
  p.feasible = ball;
  Mat A = anchors;
  Vec wc = w;
  p.f = [m, A, wc](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < A.cols(); ++i) {
      double d = m->distance(A.col(i), x);
      s += 0.5 * wc(i) * d * d;
    }
    return s;
  };
  p.grad = [m, A, wc](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (int i = 0; i < A.cols(); ++i) g -= wc(i) * m->log(x, A.col(i));
    return g;
  };
  double rmax = 0.0, lip = 0.0;
  for (int i = 0; i < anchors.cols(); ++i) {
    double d = m->distance(ball.center.coords, anchors.col(i));
    rmax = std::max(rmax, d + ball.radius);
    lip += w(i) * (d + ball.radius);
  }
  p.mu = w.sum();
  p.L = w.sum() * m->zeta_at(rmax);
  p.lip = lip;
  return p;
}

}  // namespace

TEST_CASE("projected gradient lands on the constrained minimizer in one step") {
  Vec center(2);
  center << 1.5, 0.0;
  GConvexProblem p = half_norm_sq(center, 0.5);
  Vec x0(2);
  x0 << 2.0, 0.0;
  PrgdOptions opt;
  opt.epsilon = 1e-12;
  opt.cert_stop = false;
  opt.max_iter = 3;
  PrgdResult res = prgd(p, x0, opt);
  Vec expect(2);
  expect << 1.0, 0.0;
  CHECK((res.x - expect).norm() <= 1e-12);
  REQUIRE(res.trace.rows.size() == 4);
  // The full gradient step from [2,0] hits the origin and projects back to
  // the boundary point [1,0]; afterwards the iterate is fixed.
  CHECK(res.trace.rows[0].value == doctest::Approx(2.0));
  CHECK(res.trace.rows[1].value == doctest::Approx(0.5));
  CHECK(res.trace.rows[3].value == doctest::Approx(0.5));
}

TEST_CASE("an interior stationary start is a fixed point with zero gap") {
  Vec center(2);
  center << 0.5, 0.0;
  GConvexProblem p = half_norm_sq(center, 1.0);
  Vec x0 = Vec::Zero(2);
  PrgdOptions opt;
  opt.epsilon = 1e-12;
  opt.cert_stop = true;
  PrgdResult res = prgd(p, x0, opt);
  CHECK(res.iters == 0);
  CHECK((res.x - x0).norm() == 0.0);
  CHECK(res.final_cert == 0.0);
}

TEST_CASE("certificate stop honors the strong-convexity gap bound") {
  Vec center = Vec::Zero(3);
  GConvexProblem p = half_norm_sq(center, 2.0);
  Vec x0(3);
  x0 << 1.0, -0.5, 0.5;
  PrgdOptions opt;
  opt.epsilon = 1e-10;
  opt.cert_stop = true;
  PrgdResult res = prgd(p, x0, opt);
  CHECK(res.final_cert <= 1e-10);
  CHECK(p.f(res.x) - 0.0 <= 1e-10);
}

TEST_CASE("derived budget reaches the target accuracy on a curved instance") {
  auto m = make_hyperboloid(2);
  Rng rng(51);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.0);
  GeodesicBall inner = make_ball(make_point(m, manifold_origin(*m)), 0.5);
  Mat anchors(3, 3);
  Vec w(3);
  for (int i = 0; i < 3; ++i) {
    anchors.col(i) = random_point_in_ball(*m, inner, rng);
    w(i) = rng.uniform(0.5, 1.0);
  }
  GConvexProblem p = anchor_mean(m, anchors, w, ball);
  Vec x0 = random_point_in_ball(*m, ball, rng);

  PrgdOptions ref;
  ref.epsilon = 1e-13;
  ref.cert_stop = true;
  ref.record_trace = false;
  double fstar = p.f(prgd(p, x0, ref).x);

  PrgdOptions opt;
  opt.epsilon = 1e-6;
  opt.cert_stop = false;
  opt.record_trace = false;
  PrgdResult res = prgd(p, x0, opt);
  CHECK(res.iters == prgd_budget(p, 1e-6));
  CHECK(p.f(res.x) - fstar <= 1e-6 * (1.0 + 1e-6));
}

TEST_CASE("per-step value contraction matches the curvature-corrected factor") {
  auto m = make_hyperboloid(2);
  Rng rng(53);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.1);
  GeodesicBall inner = make_ball(make_point(m, manifold_origin(*m)), 0.5);
  Mat anchors(3, 3);
  Vec w(3);
  for (int i = 0; i < 3; ++i) {
    anchors.col(i) = random_point_in_ball(*m, inner, rng);
    w(i) = rng.uniform(0.4, 1.0);
  }
  GConvexProblem p = anchor_mean(m, anchors, w, ball);
  Vec x0 = random_point_in_ball(*m, ball, rng);
  PrgdOptions ref;
  ref.epsilon = 1e-13;
  ref.cert_stop = true;
  ref.record_trace = false;
  double fstar = p.f(prgd(p, x0, ref).x);

  PrgdOptions opt;
  opt.epsilon = 1e-9;
  opt.cert_stop = false;
  PrgdResult res = prgd(p, x0, opt);
  const auto& rows = res.trace.rows;
  REQUIRE(rows.size() >= 3);
  for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
    double g0 = rows[j].value - fstar;
    double g1 = rows[j + 1].value - fstar;
    if (g0 <= 1e-12) continue;
    double Rt = rows[j].grad_norm / p.L;
    double factor = 1.0 - p.mu / (4.0 * p.L * m->zeta_at(Rt));
    CHECK(g1 / g0 <= factor + 1e-8);
  }
}

TEST_CASE("iterates stay inside the feasible ball") {
  auto m = make_hyperboloid(3);
  Rng rng(55);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 0.8);
  GeodesicBall inner = make_ball(make_point(m, manifold_origin(*m)), 0.4);
  Mat anchors(4, 3);
  Vec w = Vec::Ones(3);
  for (int i = 0; i < 3; ++i) {
    anchors.col(i) = random_point_in_ball(*m, inner, rng);
  }
  GConvexProblem p = anchor_mean(m, anchors, w, ball);
  // Wrap the gradient so every point the solver visits is observed.
  GConvexProblem q = p;
  auto base = p.grad;
  bool ok = true;
  auto mm = m;
  auto bb = ball;
  q.grad = [base, mm, bb, &ok](const Vec& x) {
    if (mm->distance(bb.center.coords, x) > bb.radius + 1e-9) ok = false;
    return base(x);
  };
  Vec x0 = random_point_in_ball(*m, ball, rng);
  PrgdOptions opt;
  opt.epsilon = 1e-8;
  opt.cert_stop = true;
  prgd(q, x0, opt);
  CHECK(ok);
}

TEST_CASE("proximal schedule constants match frozen evaluations") {
  Vec center = Vec::Zero(2);
  GConvexProblem p = half_norm_sq(center, 1.0);  // diameter 2, flat, xi = 1
  p.mu = 0.1;
  ProxParams pp = make_prox_params(p, 1.0, 1e-3);
  CHECK(pp.xi == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pp.mu == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(pp.kappa == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(pp.eps_hat == doctest::Approx(3.952847075210474e-6).epsilon(1e-12));
  // Large mu_bar is clamped so that kappa never drops below 9 xi.
  p.mu = 10.0;
  ProxParams clamped = make_prox_params(p, 1.0, 1e-3);
  CHECK(clamped.mu == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(clamped.kappa == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("acceleration schedule grows as the frozen geometric sequence") {
  // With xi = 1 and kappa = 1 the growth factor is 1 + 1/(2 sqrt(1)) = 1.5,
  // so A_k = 1.5^k and a_k = A_k - A_{k-1} = 0.5 * 1.5^{k-1}.
  double xi = 1.0, kappa = 1.0;
  double c = 1.0 / (2.0 * std::sqrt(xi * kappa));
  double A_prev = 1.0;
  for (int k = 1; k <= 5; ++k) {
    double A_k = std::pow(1.0 + c, k);
    double a_k = xi * (A_k - A_prev);
    CHECK(A_k == doctest::Approx(std::pow(1.5, k)).epsilon(1e-14));
    CHECK(a_k == doctest::Approx(0.5 * std::pow(1.5, k - 1)).epsilon(1e-14));
    A_prev = A_k;
  }
}

TEST_CASE("proximal-point budget matches the frozen evaluation") {
  Vec c(3);
  c << 1.0, 4.0, 16.0;
  Vec t = Vec::Zero(3);
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(3), 1.0);
  // Dx = 2, xi = 1, lambda = 1/16, mu_bar = 1: rate = 2 sqrt(16) = 8 and
  // arg = 2*4*16/1e-6 = 1.28e8, so T = ceil(8 log2(1.28e8)) = 216.
  CHECK(riemacon_budget(q.problem, 1.0 / 16.0, 1e-6) == 216);
}

TEST_CASE("accelerated proximal point meets epsilon within its budget") {
  Rng rng(57);
  Vec c(3);
  c << 1.0, 8.0, 64.0;
  Vec t(3);
  for (int i = 0; i < 3; ++i) t(i) = rng.uniform(-0.4, 0.4);
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(3), 1.0);
  double eps = 1e-8;
  RiemaconOptions opt;
  opt.lambda = 1.0 / q.problem.L;
  opt.epsilon = eps;
  opt.record_trace = false;
  opt.eval_values = false;
  Vec x0 = Vec::Zero(3);
  x0(0) = 0.9;
  RiemaconResult res = riemacon_abs(q.problem, x0, opt,
                                    diag_quadratic_exact_prox(q));
  CHECK(res.iters <= riemacon_budget(q.problem, opt.lambda, eps));
  CHECK(q.problem.f(res.y) - q.min_value() <= eps * (1.0 + 1e-9));
  for (double n : res.dual_norms) {
    CHECK(n <= q.problem.feasible.diameter() + 1e-12);
  }
}

TEST_CASE("dual bookkeeping shapes are consistent") {
  Vec c(2);
  c << 1.0, 4.0;
  Vec t(2);
  t << 0.2, -0.1;
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(2), 1.0);
  RiemaconOptions opt;
  opt.lambda = 0.25;
  opt.T = 12;
  opt.keep_duals = true;
  opt.record_trace = false;
  opt.eval_values = false;
  Vec x0 = Vec::Zero(2);
  x0(0) = 0.5;
  RiemaconResult res = riemacon_abs(q.problem, x0, opt,
                                    diag_quadratic_exact_prox(q));
  CHECK(res.iters == 12);
  CHECK(res.y_iter.size() == 13);
  CHECK(res.dual_pre.size() == 13);
  CHECK(res.x_iter.size() == 12);
  CHECK(res.dual_norms.size() == 12);
  CHECK(res.dual_pre[0].norm() == 0.0);
}

TEST_CASE("prox subsolver fallback meets the same target as the exact prox") {
  Rng rng(59);
  Vec c(2);
  c << 1.0, 6.0;
  Vec t(2);
  for (int i = 0; i < 2; ++i) t(i) = rng.uniform(-0.3, 0.3);
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(2), 1.0);
  double eps = 1e-7;
  RiemaconOptions opt;
  opt.lambda = 1.0 / q.problem.L;
  opt.epsilon = eps;
  opt.record_trace = false;
  opt.eval_values = false;
  Vec x0 = Vec::Zero(2);
  x0(1) = 0.8;
  RiemaconResult res =
      riemacon_abs(q.problem, x0, opt, prgd_prox_subsolver());
  CHECK(q.problem.f(res.y) - q.min_value() <= eps * (1.0 + 1e-6));
}

TEST_CASE("zero modulus requires the declared distance bound") {
  GConvexProblem p = half_norm_sq(Vec::Zero(2), 1.0);
  p.mu = 0.0;
  RiemaconOptions opt;
  opt.lambda = 1.0;
  opt.epsilon = 1e-6;
  Vec x0 = Vec::Zero(2);
  CHECK_THROWS_AS(riemacon_abs(p, x0, opt, prgd_prox_subsolver()),
                  SolverError);
}

TEST_CASE("zero modulus path solves through the regularized problem") {
  // f(x) = <g, x> on a ball: linear, mu = 0; minimizer at the boundary
  // opposite g.
  GConvexProblem p;
  p.manifold = make_euclidean(2);
  p.feasible = make_ball(make_point(p.manifold, Vec::Zero(2)), 1.0);
  Vec g(2);
  g << 1.0, 0.0;
  p.f = [g](const Vec& x) { return g.dot(x); };
  p.grad = [g](const Vec&) { return g; };
  p.mu = 0.0;
  p.L = 1.0;
  p.lip = 1.0;
  RiemaconOptions opt;
  opt.lambda = 1.0;
  opt.epsilon = 1e-4;
  opt.gconvex_dist_bound = 4.0;
  opt.record_trace = false;
  opt.eval_values = false;
  Vec x0 = Vec::Zero(2);
  RiemaconResult res = riemacon_abs(p, x0, opt, prgd_prox_subsolver());
  CHECK(p.f(res.y) - (-1.0) <= 1e-4 * (1.0 + 1e-6) + 1e-12);
}

TEST_CASE("warm-start step certifies a quadratic gap bound") {
  Rng rng(61);
  Vec c(2);
  c << 2.0, 3.0;
  Vec t(2);
  t << 0.1, -0.2;
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(2), 1.0);
  Vec xbar(2);
  xbar << 0.6, 0.5;
  WarmStart ws = warm_start_gap(q.problem, xbar);
  CHECK(ws.coeff == doctest::Approx(q.problem.L / 2.0).epsilon(1e-12));
  double fprime = q.problem.f(ws.x_prime);
  for (int i = 0; i < 50; ++i) {
    Vec p = random_point_in_ball(*q.problem.manifold, q.problem.feasible, rng);
    double d = (xbar - p).norm();
    CHECK(fprime - q.problem.f(p) <= ws.coeff * d * d + 1e-10);
  }
}

TEST_CASE("relative contraction meets the distance ratio with both backends") {
  Rng rng(63);
  Vec c(2);
  c << 1.0, 9.0;
  Vec t(2);
  t << 0.25, -0.15;
  DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(2), 1.0);
  Vec xstar = q.minimizer();
  Vec x0(2);
  x0 << -0.7, 0.6;
  double d0sq = (x0 - xstar).squaredNorm();
  for (auto backend : {ContractionBackend::Prgd,
                       ContractionBackend::Accelerated}) {
    ContractionOptions opt;
    opt.rho = 1.0 / 64.0;
    opt.backend = backend;
    Vec x = relative_contraction_solve(q.problem, x0, opt);
    CHECK((x - xstar).squaredNorm() <= opt.rho * d0sq * (1.0 + 1e-6));
  }
  // Starting at the minimizer is a fixed point.
  Vec fixed = relative_contraction_solve(q.problem, xstar,
                                         ContractionOptions{});
  CHECK((fixed - xstar).norm() <= 1e-9);
}

TEST_CASE("composite steps contract the full objective") {
  GConvexProblem f = half_norm_sq(Vec::Zero(2), 1.0);
  Vec t(2);
  t << 0.5, 0.0;
  f.f = [t](const Vec& x) { return 0.5 * (x - t).squaredNorm(); };
  f.grad = [t](const Vec& x) { return (x - t).eval(); };
  double lambda = 0.5;
  Vec xc(2);
  xc << -0.5, 0.2;
  auto g_value = [xc, lambda](const Vec& x) {
    return (x - xc).squaredNorm() / (2.0 * lambda);
  };
  double mu_g = 1.0 / lambda;
  Vec xstar = (t + xc / lambda) / (1.0 + 1.0 / lambda);
  double Fstar = 0.5 * (xstar - t).squaredNorm() + g_value(xstar);
  Vec x0(2);
  x0 << 0.9, -0.3;
  CompositeResult res = composite_rgd(
      f, g_value, euclidean_composite_prox_inner(f, xc, lambda), mu_g, x0, 40,
      &xstar, Fstar);
  const auto& rows = res.trace.rows;
  REQUIRE(rows.size() == 41);
  double factor = 1.0 - mu_g / (4.0 * (f.L + 1.0 / lambda));
  for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
    double g0 = rows[j].value - Fstar;
    double g1 = rows[j + 1].value - Fstar;
    if (g0 <= 1e-14) continue;
    CHECK(g1 <= factor * g0 + 1e-12);
  }
  CHECK(rows.back().value - Fstar <= 1e-10);
}

TEST_CASE("composite inner step requires a flat model") {
  GConvexProblem p;
  p.manifold = make_hyperboloid(2);
  p.feasible = make_ball(make_point(p.manifold, manifold_origin(*p.manifold)),
                         1.0);
  CHECK_THROWS_AS(
      euclidean_composite_prox_inner(p, manifold_origin(*p.manifold), 0.5),
      SolverError);
}

TEST_CASE("solver argument validation") {
  GConvexProblem p = half_norm_sq(Vec::Zero(2), 1.0);
  Vec x0 = Vec::Zero(2);
  CHECK_THROWS_AS(prgd_budget(p, 0.0), SolverError);
  RiemaconOptions bad_lambda;
  bad_lambda.lambda = 0.0;
  bad_lambda.epsilon = 1e-6;
  CHECK_THROWS_AS(riemacon_abs(p, x0, bad_lambda, prgd_prox_subsolver()),
                  SolverError);
  ContractionOptions bad_rho;
  bad_rho.rho = 1.5;
  CHECK_THROWS_AS(relative_contraction_solve(p, x0, bad_rho), SolverError);
  CHECK_THROWS_AS(make_prox_params(p, -1.0, 1e-3), SolverError);
}
