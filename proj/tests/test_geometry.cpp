#include <cmath>

#include <doctest.h>

#include "rminmax/geometry.hpp"
#include "rminmax/manifolds.hpp"
#include "rminmax/oracles.hpp"
#include "rminmax/rng.hpp"
#include "rminmax/runner.hpp"

using namespace rminmax;

TEST_CASE("curvature distortion coefficients match frozen evaluations") {
  CHECK(zeta(1.0, -1.0) == doctest::Approx(1.3130352854993313).epsilon(1e-14));
  CHECK(zeta(0.3, -4.0) ==
        doctest::Approx(1.1172153128319997).epsilon(1e-14));
  CHECK(zeta(2.0, -0.25) ==
        doctest::Approx(1.3130352854993313).epsilon(1e-14));
  CHECK(delta(0.5, 1.0) ==
        doctest::Approx(0.9152438608562260).epsilon(1e-14));
  double pi4 = std::atan(1.0);
  CHECK(delta(pi4, 1.0) ==
        doctest::Approx(0.78539816339744831).epsilon(1e-14));
}

TEST_CASE("distortion coefficients degenerate to one") {
  CHECK(zeta(0.0, -1.0) == 1.0);
  CHECK(zeta(1.0, 0.0) == 1.0);
  CHECK(zeta(1.5, 0.3) == 1.0);  // nonnegative lower bound contributes nothing
  CHECK(delta(0.0, 1.0) == 1.0);
  CHECK(delta(1.0, 0.0) == 1.0);
  CHECK(delta(1.5, -0.3) == 1.0);
  // Tiny arguments must take the series branch without cancellation.
  CHECK(zeta(1e-10, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(delta(1e-10, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("delta rejects arguments past the conjugate radius") {
  CHECK_THROWS_AS(delta(3.15, 1.0), GeometryError);
  CHECK_THROWS_AS(delta(1.0, 9.9), GeometryError);
  CHECK_NOTHROW(delta(3.14, 1.0));
}

TEST_CASE("negative radius is rejected") {
  CHECK_THROWS_AS(zeta(-0.5, -1.0), GeometryError);
  CHECK_THROWS_AS(delta(-0.5, 1.0), GeometryError);
}

TEST_CASE("hyperboloid points and tangents satisfy the model constraints") {
  auto m = make_hyperboloid(2);
  Rng rng(3);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.5);
  for (int i = 0; i < 20; ++i) {
    Vec q = random_point_in_ball(*m, ball, rng);
    CHECK(m->membership_error(q) <= 1e-9);
    Vec v = random_unit_tangent(*m, q, rng);
    CHECK(m->tangency_error(q, v) <= 1e-9);
    CHECK(m->norm(q, v) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("exp and log invert each other on flat and curved models") {
  Rng rng(5);
  for (auto m : {make_euclidean(3), make_hyperboloid(2), make_hyperboloid(4)}) {
    GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.4);
    for (int i = 0; i < 25; ++i) {
      Vec q = random_point_in_ball(*m, ball, rng);
      Vec r = random_point_in_ball(*m, ball, rng);
      Vec v = random_unit_tangent(*m, q, rng) * rng.uniform(0.0, 1.2);
      CHECK(m->norm(q, m->log(q, m->exp(q, v)) - v) <= 1e-9);
      CHECK(m->distance(m->exp(q, m->log(q, r)), r) <= 1e-9);
      CHECK(m->norm(q, m->log(q, r)) ==
            doctest::Approx(m->distance(q, r)).epsilon(1e-10));
    }
  }
}

TEST_CASE("parallel transport is an isometry and inverts along the way back") {
  Rng rng(7);
  auto m = make_hyperboloid(3);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.4);
  for (int i = 0; i < 25; ++i) {
    Vec q = random_point_in_ball(*m, ball, rng);
    Vec r = random_point_in_ball(*m, ball, rng);
    Vec v = random_unit_tangent(*m, q, rng) * rng.uniform(0.1, 2.0);
    Vec u = random_unit_tangent(*m, q, rng) * rng.uniform(0.1, 2.0);
    Vec tv = m->transport(q, r, v);
    Vec tu = m->transport(q, r, u);
    CHECK(m->tangency_error(r, tv) <= 1e-9);
    CHECK(m->inner(r, tv, tu) == doctest::Approx(m->inner(q, v, u)).epsilon(1e-9));
    CHECK(m->norm(q, m->transport(r, q, tv) - v) <= 1e-9);
  }
}

TEST_CASE("transport along a geodesic keeps the velocity radial") {
  auto m = make_hyperboloid(2);
  Rng rng(9);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.2);
  for (int i = 0; i < 10; ++i) {
    Vec q = random_point_in_ball(*m, ball, rng);
    Vec r = random_point_in_ball(*m, ball, rng);
    if (m->distance(q, r) < 1e-6) continue;
    Vec v = m->log(q, r);
    Vec tv = m->transport(q, r, v);
    Vec back = -m->log(r, q);
    CHECK(m->norm(r, tv - back) <= 1e-8);
  }
}

TEST_CASE("cosine-law triangle inequalities hold on random hyperbolic triangles") {
  Rng rng(11);
  auto m = make_hyperboloid(2);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.5);
  double worst = 1.0;
  for (int i = 0; i < 200; ++i) {
    ManifoldPoint x = make_point(m, random_point_in_ball(*m, ball, rng));
    ManifoldPoint y = make_point(m, random_point_in_ball(*m, ball, rng));
    ManifoldPoint p = make_point(m, random_point_in_ball(*m, ball, rng));
    double slack = 0.0;
    CHECK(check_cosine_laws(x, y, p, 3.0, &slack));
    worst = std::min(worst, slack);
  }
  CHECK(worst >= -1e-8);
}

TEST_CASE("squared-distance second differences sit between the curvature bounds") {
  auto m = make_hyperboloid(2);
  Rng rng(13);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.2);
  for (int i = 0; i < 10; ++i) {
    Vec p = random_point_in_ball(*m, ball, rng);
    Vec q = random_point_in_ball(*m, ball, rng);
    double R = m->distance(p, q);
    if (R < 0.2) continue;
    auto f = [&](const Vec& x) {
      double d = m->distance(p, x);
      return 0.5 * d * d;
    };
    Vec e = random_unit_tangent(*m, q, rng);
    double sd = second_difference(*m, f, q, e, 1e-3);
    CHECK(sd >= 1.0 - 1e-4);
    CHECK(sd <= m->zeta_at(R) + 1e-4);
  }
}

TEST_CASE("ball projection clamps to the boundary and fixes interior points") {
  auto m = make_hyperboloid(2);
  GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 0.5);
  Rng rng(15);
  GeodesicBall wide = make_ball(make_point(m, manifold_origin(*m)), 2.0);
  for (int i = 0; i < 20; ++i) {
    Vec q = random_point_in_ball(*m, wide, rng);
    Vec pq = project_ball_raw(ball, q);
    double dc = m->distance(ball.center.coords, q);
    if (dc <= ball.radius) {
      CHECK(m->distance(pq, q) <= 1e-9);
    } else {
      CHECK(m->distance(ball.center.coords, pq) ==
            doctest::Approx(ball.radius).epsilon(1e-9));
      // Metric projection lands on the geodesic toward the center.
      double through = m->distance(q, pq) + m->distance(pq, ball.center.coords);
      CHECK(through == doctest::Approx(dc).epsilon(1e-8));
    }
    CHECK(ball_contains(ball, pq));
  }
}

TEST_CASE("product model adds squared distances and splits exp and log") {
  auto mh = make_hyperboloid(2);
  auto me = make_euclidean(2);
  auto prod = make_product(mh, me);
  CHECK(prod->dim() == 4);
  CHECK(prod->ambient_dim() == 5);
  CHECK(prod->curvature().kmin == -1.0);
  CHECK(prod->curvature().kmax == 0.0);

  Rng rng(17);
  GeodesicBall bh = make_ball(make_point(mh, manifold_origin(*mh)), 1.0);
  for (int i = 0; i < 10; ++i) {
    Vec a1 = random_point_in_ball(*mh, bh, rng);
    Vec a2 = random_point_in_ball(*mh, bh, rng);
    Vec b1(2), b2(2);
    for (int j = 0; j < 2; ++j) {
      b1[j] = rng.uniform(-1.0, 1.0);
      b2[j] = rng.uniform(-1.0, 1.0);
    }
    Vec j1 = prod->join(a1, b1);
    Vec j2 = prod->join(a2, b2);
    double dh = mh->distance(a1, a2);
    double de = (b1 - b2).norm();
    CHECK(prod->distance(j1, j2) ==
          doctest::Approx(std::sqrt(dh * dh + de * de)).epsilon(1e-12));
    Vec lg = prod->log(j1, j2);
    CHECK((prod->left_part(lg) - mh->log(a1, a2)).norm() <= 1e-10);
    CHECK((prod->right_part(lg) - (b2 - b1)).norm() <= 1e-12);
    CHECK(prod->distance(prod->exp(j1, lg), j2) <= 1e-9);
  }
  CHECK(prod->zeta_at(2.0) == doctest::Approx(zeta(2.0, -1.0)).epsilon(1e-14));
  CHECK(prod->delta_at(2.0) == 1.0);
}

TEST_CASE("euclidean model distortion is exactly one") {
  auto m = make_euclidean(5);
  CHECK(m->zeta_at(10.0) == 1.0);
  CHECK(m->delta_at(10.0) == 1.0);
  CHECK(m->curvature().kmin == 0.0);
  CHECK(m->curvature().kmax == 0.0);
}

TEST_CASE("tangent basis is orthonormal") {
  for (auto m : {make_euclidean(3), make_hyperboloid(3)}) {
    Rng rng(19);
    GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.0);
    Vec q = random_point_in_ball(*m, ball, rng);
    Mat B = tangent_basis(*m, q);
    CHECK(B.cols() == m->dim());
    CHECK(B.rows() == m->ambient_dim());
    for (int i = 0; i < B.cols(); ++i) {
      CHECK(m->tangency_error(q, B.col(i)) <= 1e-9);
      for (int j = 0; j < B.cols(); ++j) {
        double want = i == j ? 1.0 : 0.0;
        CHECK(m->inner(q, B.col(i), B.col(j)) ==
              doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("invalid model constructions are rejected") {
  CHECK_THROWS_AS(make_euclidean(0), GeometryError);
  CHECK_THROWS_AS(make_hyperboloid(0), GeometryError);
  CHECK_THROWS_AS(make_ball(make_point(make_euclidean(2), Vec::Zero(2)), -1.0),
                  GeometryError);
}
