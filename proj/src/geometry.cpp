#include "rminmax/geometry.hpp"

#include <cmath>

namespace rminmax {

double zeta(double R, double kmin) {
  if (R < 0.0) throw GeometryError("zeta: negative radius");
  if (kmin >= 0.0 || R == 0.0) return 1.0;
  double s = R * std::sqrt(-kmin);
  // s*coth(s) -> 1 as s -> 0; the direct quotient loses digits below ~1e-8.
  if (s < 1e-8) return 1.0 + s * s / 3.0;
  return s * (std::cosh(s) / std::sinh(s));
}

double delta(double R, double kmax) {
  if (R < 0.0) throw GeometryError("delta: negative radius");
  if (kmax <= 0.0 || R == 0.0) return 1.0;
  double s = R * std::sqrt(kmax);
  if (s >= 3.14159265358979323846) {
    throw GeometryError("delta: R*sqrt(kmax) >= pi, constant undefined");
  }
  if (s < 1e-8) return 1.0 - s * s / 3.0;
  return s * (std::cos(s) / std::sin(s));
}

ManifoldPoint make_point(ManifoldPtr m, const Vec& coords) {
  if (!m) throw GeometryError("make_point: null manifold");
  if (coords.size() != m->ambient_dim()) {
    throw GeometryError("make_point: ambient dimension mismatch");
  }
  Vec q = coords;
  if (m->membership_error(q) > kMembershipTol) {
    q = m->project_point(q);
    if (m->membership_error(q) > kMembershipTol) {
      throw GeometryError("make_point: coordinates violate the membership equation");
    }
  }
  return ManifoldPoint{std::move(m), std::move(q)};
}

TangentVector make_tangent(ManifoldPtr m, const Vec& base, const Vec& vec) {
  ManifoldPoint p = make_point(m, base);
  Vec v = vec;
  if (p.manifold->tangency_error(p.coords, v) > kMembershipTol) {
    v = p.manifold->project_tangent(p.coords, v);
    if (p.manifold->tangency_error(p.coords, v) > kMembershipTol) {
      throw GeometryError("make_tangent: vector violates the tangency constraint");
    }
  }
  return TangentVector{p.manifold, std::move(p.coords), std::move(v)};
}

static void require_same_manifold(const ManifoldPtr& a, const ManifoldPtr& b,
                                  const char* what) {
  if (a.get() != b.get()) {
    throw GeometryError(std::string(what) + ": operands on different manifolds");
  }
}

ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) {
  require_same_manifold(x.manifold, v.manifold, "exp_map");
  if ((x.coords - v.base).norm() > 1e-7) {
    throw GeometryError("exp_map: tangent vector based at a different point");
  }
  return make_point(x.manifold, x.manifold->exp(x.coords, v.vec));
}

TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) {
  require_same_manifold(x.manifold, y.manifold, "log_map");
  return make_tangent(x.manifold, x.coords, x.manifold->log(x.coords, y.coords));
}

TangentVector parallel_transport(const TangentVector& v, const ManifoldPoint& to) {
  require_same_manifold(v.manifold, to.manifold, "parallel_transport");
  return make_tangent(v.manifold, to.coords,
                      v.manifold->transport(v.base, to.coords, v.vec));
}

double distance(const ManifoldPoint& x, const ManifoldPoint& y) {
  require_same_manifold(x.manifold, y.manifold, "distance");
  return x.manifold->distance(x.coords, y.coords);
}

double inner(const TangentVector& u, const TangentVector& v) {
  require_same_manifold(u.manifold, v.manifold, "inner");
  if ((u.base - v.base).norm() > 1e-7) {
    throw GeometryError("inner: vectors in different tangent spaces");
  }
  return u.manifold->inner(u.base, u.vec, v.vec);
}

double norm(const TangentVector& v) { return v.manifold->norm(v.base, v.vec); }

GeodesicBall make_ball(const ManifoldPoint& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError("make_ball: radius must be finite and positive");
  }
  return GeodesicBall{center, radius};
}

Vec project_ball_raw(const GeodesicBall& ball, const Vec& p) {
  const Manifold& m = *ball.center.manifold;
  double d = m.distance(ball.center.coords, p);
  if (d <= ball.radius) return p;
  Vec v = m.log(ball.center.coords, p);
  return m.exp(ball.center.coords, v * (ball.radius / d));
}

ManifoldPoint project_ball(const GeodesicBall& ball, const ManifoldPoint& p) {
  require_same_manifold(ball.center.manifold, p.manifold, "project_ball");
  return make_point(p.manifold, project_ball_raw(ball, p.coords));
}

bool ball_contains(const GeodesicBall& ball, const Vec& p, double slack) {
  return ball.center.manifold->distance(ball.center.coords, p) <=
         ball.radius + slack;
}

bool check_cosine_laws(const ManifoldPoint& x, const ManifoldPoint& y,
                       const ManifoldPoint& p, double D, double* worst_slack) {
  const Manifold& m = *x.manifold;
  double zd = m.zeta_at(D);
  double dd = m.delta_at(D);
  double dxy2 = std::pow(m.distance(x.coords, y.coords), 2);
  double dpx2 = std::pow(m.distance(p.coords, x.coords), 2);
  double dpy2 = std::pow(m.distance(p.coords, y.coords), 2);
  Vec ly = m.log(x.coords, y.coords);
  Vec lp = m.log(x.coords, p.coords);
  double ip = m.inner(x.coords, ly, lp);
  double base = 0.5 * dpx2 - 0.5 * dpy2;
  double upper_slack = zd / 2.0 * dxy2 + base - ip;
  double lower_slack = ip - (dd / 2.0 * dxy2 + base);
  double w = std::min(upper_slack, lower_slack);
  if (worst_slack) *worst_slack = w;
  return w >= -1e-8;
}

}  // namespace rminmax
