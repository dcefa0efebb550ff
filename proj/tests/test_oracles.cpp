#include <cmath>

#include <doctest.h>

#include "rminmax/manifolds.hpp"
#include "rminmax/oracles.hpp"
#include "rminmax/rng.hpp"
#include "rminmax/runner.hpp"

using namespace rminmax;

TEST_CASE("geodesic integrator reproduces the closed-form exponential") {
  Rng rng(31);
  for (int dim : {2, 3}) {
    auto m = make_hyperboloid(dim);
    GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.2);
    for (int i = 0; i < 10; ++i) {
      Vec q = random_point_in_ball(*m, ball, rng);
      Vec v = random_unit_tangent(*m, q, rng) * rng.uniform(0.1, 1.5);
      Vec closed = m->exp(q, v);
      Vec ode = hyperboloid_ode_exp(q, v);
      CHECK((closed - ode).norm() <= 1e-8);
    }
  }
}

TEST_CASE("geodesic integrator respects the time parameter") {
  auto m = make_hyperboloid(2);
  Rng rng(33);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.0);
  Vec q = random_point_in_ball(*m, ball, rng);
  Vec v = random_unit_tangent(*m, q, rng);
  Vec half = hyperboloid_ode_exp(q, v, 0.5);
  CHECK((m->exp(q, 0.5 * v) - half).norm() <= 1e-8);
  // Integrating the zero vector stays put.
  Vec fixed = hyperboloid_ode_exp(q, Vec::Zero(q.size()));
  CHECK((fixed - q).norm() <= 1e-12);
}

TEST_CASE("ladder transport approximates the closed-form transport") {
  HyperboloidModel H(2);
  auto mp = make_hyperboloid(2);
  Rng rng(35);
  GeodesicBall ball = make_ball(make_point(mp, manifold_origin(H)), 1.0);
  for (int i = 0; i < 6; ++i) {
    Vec x = random_point_in_ball(H, ball, rng);
    Vec y = random_point_in_ball(H, ball, rng);
    Vec v = random_unit_tangent(H, x, rng) * 0.7;
    Vec exact = H.transport(x, y, v);
    Vec approx = schild_ladder_transport(H, x, y, v);
    CHECK((exact - approx).norm() <= 1e-3);
  }
}

TEST_CASE("ladder transport error shrinks with the carrier offset") {
  HyperboloidModel H(2);
  auto mp = make_hyperboloid(2);
  Rng rng(37);
  GeodesicBall ball = make_ball(make_point(mp, manifold_origin(H)), 1.0);
  Vec x = random_point_in_ball(H, ball, rng);
  Vec y = random_point_in_ball(H, ball, rng);
  Vec v = random_unit_tangent(H, x, rng) * 0.5;
  Vec exact = H.transport(x, y, v);
  // At a fixed rung count the residual is dominated by the finite offset of
  // the carried point and decays linearly with it; the rung-subdivision part
  // saturates well below that level.
  double e2 = (schild_ladder_transport(H, x, y, v, 64, 1e-2) - exact).norm();
  double e3 = (schild_ladder_transport(H, x, y, v, 64, 1e-3) - exact).norm();
  double e4 = (schild_ladder_transport(H, x, y, v, 64, 1e-4) - exact).norm();
  CHECK(e3 <= e2 / 8.0);
  CHECK(e4 <= e3 / 8.0);
  CHECK(e4 <= 2e-5);
}

TEST_CASE("curvature estimates recover the model constants") {
  Rng rng(39);
  auto orth_pair = [&rng](const Manifold& m, const Vec& p, Vec& u, Vec& w) {
    u = random_unit_tangent(m, p, rng);
    Vec c = random_unit_tangent(m, p, rng);
    Vec w2 = c - m.inner(p, c, u) * u;
    while (m.norm(p, w2) < 0.3) {
      c = random_unit_tangent(m, p, rng);
      w2 = c - m.inner(p, c, u) * u;
    }
    w = w2 / m.norm(p, w2);
  };
  {
    auto me = make_euclidean(3);
    GeodesicBall ball = make_ball(make_point(me, manifold_origin(*me)), 1.0);
    Vec p = random_point_in_ball(*me, ball, rng);
    Vec u, w;
    orth_pair(*me, p, u, w);
    CHECK(std::abs(gauss_curvature_estimate(*me, p, u, w)) <= 1e-4);
  }
  {
    auto mh = make_hyperboloid(3);
    GeodesicBall ball = make_ball(make_point(mh, manifold_origin(*mh)), 1.0);
    Vec p = random_point_in_ball(*mh, ball, rng);
    Vec u, w;
    orth_pair(*mh, p, u, w);
    CHECK(gauss_curvature_estimate(*mh, p, u, w) ==
          doctest::Approx(-1.0).epsilon(1e-2));
  }
}

TEST_CASE("finite differences confirm a correct gradient and expose a wrong one") {
  auto m = make_euclidean(3);
  Vec t(3);
  t << 0.3, -0.2, 0.1;
  auto f = [t](const Vec& x) { return 0.5 * (x - t).squaredNorm(); };
  auto grad = [t](const Vec& x) { return (x - t).eval(); };
  Rng rng(41);
  Vec q(3);
  q << 0.5, 0.4, -0.3;
  CHECK(finite_diff_gradient_check(*m, f, grad, q, 1e-5, 8, rng) <= 1e-6);
  auto bad = [t](const Vec& x) { return (1.05 * (x - t)).eval(); };
  CHECK(finite_diff_gradient_check(*m, f, bad, q, 1e-5, 16, rng) > 1e-3);
}

TEST_CASE("second differences sample the Hessian quadratic form") {
  auto m = make_euclidean(2);
  Vec c(2);
  c << 2.0, 5.0;
  auto f = [c](const Vec& x) {
    return 0.5 * (c.array() * x.array().square()).sum();
  };
  Vec q(2);
  q << 0.3, -0.2;
  Vec e1(2), e2(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 1.0;
  CHECK(second_difference(*m, f, q, e1, 1e-4) ==
        doctest::Approx(2.0).epsilon(1e-5));
  CHECK(second_difference(*m, f, q, e2, 1e-4) ==
        doctest::Approx(5.0).epsilon(1e-5));
}

TEST_CASE("geodesic grid covers the ball") {
  auto m = make_hyperboloid(2);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 0.8);
  std::vector<Vec> grid = geodesic_grid(*m, ball, 200);
  CHECK(grid.size() >= 100);
  for (const Vec& g : grid) {
    CHECK(ball_contains(ball, g, 1e-6));
  }
  Rng rng(43);
  double rcov = covering_radius_estimate(*m, ball, grid, 200, rng);
  CHECK(rcov > 0.0);
  CHECK(rcov < 0.4);
  // A denser grid covers at least as well.
  std::vector<Vec> dense = geodesic_grid(*m, ball, 2000);
  Rng rng2(43);
  double rcov2 = covering_radius_estimate(*m, ball, dense, 200, rng2);
  CHECK(rcov2 <= rcov + 1e-12);
}

TEST_CASE("random ball samples are feasible") {
  Rng rng(45);
  for (auto m : {make_euclidean(3), make_hyperboloid(2)}) {
    GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.3);
    for (int i = 0; i < 50; ++i) {
      Vec q = random_point_in_ball(*m, ball, rng);
      CHECK(ball_contains(ball, q));
    }
  }
}

TEST_CASE("measured gradient bound dominates sampled norms") {
  auto m = make_euclidean(2);
  GeodesicBall ball = make_ball(make_point(m, Vec::Zero(2)), 1.0);
  auto grad = [](const Vec& x) { return (3.0 * x).eval(); };
  Rng rng(47);
  double bound = measured_grad_norm_bound(*m, ball, grad, 200, rng);
  CHECK(bound <= 3.0 + 1e-9);
  CHECK(bound >= 2.0);
}
