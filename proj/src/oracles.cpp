#include "rminmax/oracles.hpp"

#include <cmath>

namespace rminmax {

namespace {

Vec lorentz_accel(const Vec& z, const Vec& w) {
  return HyperboloidModel::lorentz(w, w) * z;
}

}  // namespace

Vec hyperboloid_ode_exp(const Vec& x, const Vec& v, double t_end, int steps) {
  double speed = std::sqrt(std::max(0.0, HyperboloidModel::lorentz(v, v)));
  if (steps <= 0) {
    steps = std::max(200, static_cast<int>(std::ceil(speed * t_end / 1e-3)));
  }
  double dt = t_end / steps;
  Vec z = x, w = v;
  for (int i = 0; i < steps; ++i) {
    Vec k1z = w;
    Vec k1w = lorentz_accel(z, w);
    Vec k2z = w + 0.5 * dt * k1w;
    Vec k2w = lorentz_accel(z + 0.5 * dt * k1z, w + 0.5 * dt * k1w);
    Vec k3z = w + 0.5 * dt * k2w;
    Vec k3w = lorentz_accel(z + 0.5 * dt * k2z, w + 0.5 * dt * k2w);
    Vec k4z = w + dt * k3w;
    Vec k4w = lorentz_accel(z + dt * k3z, w + dt * k3w);
    z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
  return z;
}

Vec schild_ladder_transport(const HyperboloidModel& H, const Vec& x,
                            const Vec& y, const Vec& v, int rungs,
                            double h) {
  // Subdivide the x->y geodesic by iterated closed-form midpoints into
  // 2^levels segments.
  int levels = 0;
  while ((1 << levels) < rungs) ++levels;
  int K = 1 << levels;
  std::vector<Vec> g(static_cast<size_t>(K) + 1);
  g[0] = x;
  g[K] = y;
  for (int l = 0; l < levels; ++l) {
    int stride = K >> l;
    for (int s = 0; s + stride <= K; s += stride) {
      g[s + stride / 2] = H.midpoint(g[s], g[s + stride]);
    }
  }
  // Carry the vector as the point a ~ exp_x(h v); only the initial lift uses
  // the independent geodesic integrator.
  Vec a = hyperboloid_ode_exp(x, H.project_tangent(x, v), h);
  for (int i = 0; i < K; ++i) {
    // One rung: the diagonal midpoint m of (a, g_{i+1}); extending g_i
    // through m to double length closes the geodesic parallelogram.
    Vec m = H.midpoint(a, g[i + 1]);
    a = H.reflect(m, g[i]);
  }
  // Chord extraction: the tangent projection of a - y equals the exact log
  // direction with norm sinh(d) instead of d, a relative error of
  // (h||v||)^2/6 at this scale.
  Vec u = H.project_tangent(y, a - y);
  return u / h;
}

double finite_diff_gradient_check(
    const Manifold& m, const std::function<double(const Vec&)>& f,
    const std::function<Vec(const Vec&)>& grad, const Vec& q, double h,
    int ndirs, Rng& rng) {
  Vec g = grad(q);
  double worst = 0.0;
  for (int i = 0; i < ndirs; ++i) {
    Vec e = random_unit_tangent(m, q, rng);
    double fd = (f(m.exp(q, h * e)) - f(m.exp(q, -h * e))) / (2.0 * h);
    double claimed = m.inner(q, g, e);
    double err = std::abs(fd - claimed) / (1.0 + std::abs(claimed));
    worst = std::max(worst, err);
  }
  return worst;
}

namespace {

double triangle_angle(const Manifold& m, const Vec& at, const Vec& b,
                      const Vec& c) {
  Vec u = m.log(at, b);
  Vec w = m.log(at, c);
  double cosang = m.inner(at, u, w) / (m.norm(at, u) * m.norm(at, w));
  return std::acos(std::clamp(cosang, -1.0, 1.0));
}

double angle_defect_curvature(const Manifold& m, const Vec& p, const Vec& u,
                              const Vec& w, double h) {
  // Symmetric triangle with vertices at distance h from p in the (u, w)
  // plane. Angle sum minus pi equals K times the area for geodesic sides;
  // Heron area on the measured side lengths is exact to the order kept.
  Vec dirs[3];
  for (int i = 0; i < 3; ++i) {
    double a = 2.0943951023931953 * i;  // 2 pi / 3
    dirs[i] = std::cos(a) * u + std::sin(a) * w;
  }
  Vec A = m.exp(p, h * dirs[0]);
  Vec B = m.exp(p, h * dirs[1]);
  Vec C = m.exp(p, h * dirs[2]);
  double a = m.distance(B, C);
  double b = m.distance(C, A);
  double c = m.distance(A, B);
  double s = 0.5 * (a + b + c);
  double area = std::sqrt(std::max(0.0, s * (s - a) * (s - b) * (s - c)));
  double sum = triangle_angle(m, A, B, C) + triangle_angle(m, B, C, A) +
               triangle_angle(m, C, A, B);
  return (sum - 3.14159265358979323846) / area;
}

}  // namespace

double gauss_curvature_estimate(const Manifold& m, const Vec& p, const Vec& u,
                                const Vec& w, double h) {
  // Orthonormalize the spanning pair at p.
  Vec e1 = m.project_tangent(p, u);
  e1 /= m.norm(p, e1);
  Vec e2 = m.project_tangent(p, w);
  e2 -= m.inner(p, e1, e2) * e1;
  double n2 = m.norm(p, e2);
  if (n2 < 1e-12) throw GeometryError("gauss_curvature_estimate: collinear pair");
  e2 /= n2;
  double kh = angle_defect_curvature(m, p, e1, e2, h);
  double kh2 = angle_defect_curvature(m, p, e1, e2, h / 2.0);
  // The estimator's error is even in h: Richardson removes the h^2 term.
  return (4.0 * kh2 - kh) / 3.0;
}

double second_difference(const Manifold& m,
                         const std::function<double(const Vec&)>& f,
                         const Vec& q, const Vec& e, double h) {
  return (f(m.exp(q, h * e)) - 2.0 * f(q) + f(m.exp(q, -h * e))) / (h * h);
}

std::vector<Vec> geodesic_grid(const Manifold& m, const GeodesicBall& ball,
                               int target_points) {
  int d = m.dim();
  const Vec& c = ball.center.coords;
  double R = ball.radius;
  Mat B = tangent_basis(m, c);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(target_points));
  if (d == 1) {
    int n = std::max(2, target_points);
    for (int i = 0; i < n; ++i) {
      double t = -R + 2.0 * R * i / (n - 1);
      out.push_back(m.exp(c, t * B.col(0)));
    }
  } else if (d == 2) {
    // Polar rings with node counts proportional to the ring index: about
    // 3 nr^2 nodes total.
    int nr = std::max(2, static_cast<int>(std::ceil(
                             std::sqrt(target_points / 3.0))));
    out.push_back(c);
    for (int i = 1; i <= nr; ++i) {
      double r = R * i / nr;
      int mcount = 6 * i;
      for (int j = 0; j < mcount; ++j) {
        double a = 2.0 * 3.14159265358979323846 * j / mcount;
        Vec dir = std::cos(a) * B.col(0) + std::sin(a) * B.col(1);
        out.push_back(m.exp(c, r * dir));
      }
    }
  } else if (d == 3) {
    // Radial shells carrying Fibonacci-sphere nodes.
    int nr = std::max(2, static_cast<int>(std::ceil(
                             std::cbrt(target_points / 2.0))));
    out.push_back(c);
    double golden = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
    for (int i = 1; i <= nr; ++i) {
      double r = R * i / nr;
      int mcount = std::max(6, 2 * i * i);
      for (int j = 0; j < mcount; ++j) {
        double z = 1.0 - 2.0 * (j + 0.5) / mcount;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double a = golden * j;
        Vec dir = rho * std::cos(a) * B.col(0) + rho * std::sin(a) * B.col(1) +
                  z * B.col(2);
        out.push_back(m.exp(c, r * dir));
      }
    }
  } else {
    throw GeometryError("geodesic_grid: supported for dimension <= 3 only");
  }
  return out;
}

double covering_radius_estimate(const Manifold& m, const GeodesicBall& ball,
                                const std::vector<Vec>& grid, int nsamples,
                                Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    Vec p = random_point_in_ball(m, ball, rng);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& g : grid) best = std::min(best, m.distance(p, g));
    worst = std::max(worst, best);
  }
  return worst;
}

Vec random_unit_tangent(const Manifold& m, const Vec& q, Rng& rng) {
  Mat B = tangent_basis(m, q);
  Vec coef(B.cols());
  for (int i = 0; i < coef.size(); ++i) coef[i] = rng.normal();
  Vec v = B * coef;
  double n = m.norm(q, v);
  if (n < 1e-12) {
    v = B.col(0);
    n = m.norm(q, v);
  }
  return v / n;
}

Vec random_point_in_ball(const Manifold& m, const GeodesicBall& ball, Rng& rng) {
  const Vec& c = ball.center.coords;
  Vec dir = random_unit_tangent(m, c, rng);
  double u = rng.uniform();
  double r = ball.radius * std::pow(u, 1.0 / m.dim());
  return m.exp(c, r * dir);
}

double measured_grad_norm_bound(const Manifold& m, const GeodesicBall& ball,
                                const std::function<Vec(const Vec&)>& grad,
                                int nsamples, Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    Vec p = random_point_in_ball(m, ball, rng);
    worst = std::max(worst, m.norm(p, grad(p)));
  }
  return worst;
}

}  // namespace rminmax
