#include "rminmax/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace rminmax {

namespace {

MinMaxProblem detached(const MinMaxProblem& p) {
  MinMaxProblem q = p;
  q.counters = std::make_shared<OracleCounters>();
  return q;
}

// Gradient at x of z |-> <w, log_p(z)>_p for a tangent w at p. On a constant
// curvature -k model the differential of log_p scales Jacobi components, so
// the adjoint transports w and rescales its component orthogonal to the
// radial direction by s/sinh(s), s = sqrt(k) d(p, x).
Vec log_linear_grad(const Manifold& m, const Vec& p, const Vec& x,
                    const Vec& w) {
  Vec wt = m.transport(p, x, w);
  double k = -m.curvature().kmin;
  if (k <= 0.0) return wt;
  double r = m.distance(p, x);
  if (r < 1e-12) return wt;
  Vec rad = (-1.0 / r) * m.log(x, p);
  double comp = m.inner(x, wt, rad);
  Vec perp = wt - comp * rad;
  double s = std::sqrt(k) * r;
  return comp * rad + (s / std::sinh(s)) * perp;
}

// Coordinates of a tangent vector in the columns of basis, with respect to
// the model's inner product at q.
Vec tangent_coords(const Manifold& m, const Vec& q, const Mat& basis,
                   const Vec& v) {
  Vec out(basis.cols());
  for (int i = 0; i < basis.cols(); ++i) out[i] = m.inner(q, basis.col(i), v);
  return out;
}

Vec from_coords(const Mat& basis, const Vec& coeffs) {
  return basis * coeffs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Robust Karcher mean.

Vec RobustKarcherProblem::weights(const Vec& z) const {
  int m = static_cast<int>(anchors.cols());
  return Vec::Constant(m, 1.0 / m) + basis * z;
}

RobustKarcherProblem make_robust_karcher(ManifoldPtr mx, const Mat& anchors,
                                         const Vec& x_center, double x_radius,
                                         double z_radius, double lambda_w) {
  int m = static_cast<int>(anchors.cols());
  if (m < 2) throw SolverError("robust_karcher: need at least two anchors");
  if (!(lambda_w > 0.0)) {
    throw SolverError("robust_karcher: lambda_w must be positive");
  }
  if (!(z_radius > 0.0) || z_radius >= 1.0 / m) {
    std::ostringstream os;
    os << "robust_karcher: z_radius must lie in (0, 1/m) to keep weights "
          "positive (m = "
       << m << ")";
    throw SolverError(os.str());
  }

  RobustKarcherProblem rk;
  rk.anchors = anchors;
  rk.lambda_w = lambda_w;
  // Orthonormal sum-zero basis by Gram-Schmidt on e_i - e_m.
  Mat B = Mat::Zero(m, m - 1);
  for (int i = 0; i < m - 1; ++i) {
    Vec v = Vec::Zero(m);
    v[i] = 1.0;
    v[m - 1] = -1.0;
    for (int j = 0; j < i; ++j) v -= B.col(j).dot(v) * B.col(j);
    B.col(i) = v / v.norm();
  }
  rk.basis = B;

  MinMaxProblem p;
  p.mx = mx;
  p.my = make_euclidean(m - 1);
  p.ball_x = make_ball(make_point(mx, x_center), x_radius);
  p.ball_y = make_ball(make_point(p.my, Vec::Zero(m - 1)), z_radius);

  Mat A = anchors;
  ManifoldPtr mxl = mx;
  double lw = lambda_w;
  Vec u = Vec::Constant(m, 1.0 / m);
  p.f = [A, B, mxl, lw, u](const Vec& x, const Vec& z) {
    Vec w = u + B * z;
    double s = 0.0;
    for (int i = 0; i < A.cols(); ++i) {
      double d = mxl->distance(x, A.col(i));
      s += w[i] * 0.5 * d * d;
    }
    return s - 0.5 * lw * z.squaredNorm();
  };
  p.grad_x = [A, B, mxl, u](const Vec& x, const Vec& z) {
    Vec w = u + B * z;
    Vec g = Vec::Zero(x.size());
    for (int i = 0; i < A.cols(); ++i) g -= w[i] * mxl->log(x, A.col(i));
    return g;
  };
  p.grad_y = [A, B, mxl, lw](const Vec& x, const Vec& z) {
    Vec cost(A.cols());
    for (int i = 0; i < A.cols(); ++i) {
      double d = mxl->distance(x, A.col(i));
      cost[i] = 0.5 * d * d;
    }
    return (B.transpose() * cost - lw * z).eval();
  };

  double dmax = 0.0, dsumsq = 0.0;
  for (int i = 0; i < m; ++i) {
    double d = mx->distance(x_center, anchors.col(i)) + x_radius;
    dmax = std::max(dmax, d);
    dsumsq += d * d;
  }
  p.mu_x = 1.0;  // weights sum to one; each half squared distance is 1-strong
  p.L_x = mx->zeta_at(dmax);
  p.mu_y = lambda_w;
  p.L_y = lambda_w;
  p.L_xy = std::sqrt(dsumsq);
  p.lip_x = dmax;
  p.lip_y = std::sqrt(dsumsq) * dmax / 2.0 + lambda_w * z_radius;
  rk.problem = p;
  return rk;
}

// ---------------------------------------------------------------------------
// Synthetic saddle.

namespace {

void measure_saddle_constants(MinMaxProblem& p,
                              const SyntheticSaddleConfig& cfg) {
  Rng rng(cfg.seed);
  const double h = 1e-4;
  double mu_x = std::numeric_limits<double>::infinity();
  double mu_y = std::numeric_limits<double>::infinity();
  double L_x = 0.0, L_y = 0.0, L_xy = 0.0, lip_x = 0.0, lip_y = 0.0;
  for (int s = 0; s < cfg.measure_samples; ++s) {
    Vec x = random_point_in_ball(*p.mx, p.ball_x, rng);
    Vec y = random_point_in_ball(*p.my, p.ball_y, rng);
    Vec ex = random_unit_tangent(*p.mx, x, rng);
    Vec ey = random_unit_tangent(*p.my, y, rng);
    auto fx = [&](const Vec& xx) { return p.f(xx, y); };
    auto fy = [&](const Vec& yy) { return -p.f(x, yy); };
    double qx = second_difference(*p.mx, fx, x, ex, h);
    double qy = second_difference(*p.my, fy, y, ey, h);
    mu_x = std::min(mu_x, qx);
    L_x = std::max(L_x, std::fabs(qx));
    mu_y = std::min(mu_y, qy);
    L_y = std::max(L_y, std::fabs(qy));
    double t = 1e-4;
    Vec y2 = p.my->exp(y, t * ey);
    Vec dg = p.grad_x(x, y2) - p.grad_x(x, y);
    L_xy = std::max(L_xy, p.mx->norm(x, dg) / t);
    Vec x2 = p.mx->exp(x, t * ex);
    Vec dgy = p.grad_y(x2, y) - p.grad_y(x, y);
    L_xy = std::max(L_xy, p.my->norm(y, dgy) / t);
    lip_x = std::max(lip_x, p.mx->norm(x, p.grad_x(x, y)));
    lip_y = std::max(lip_y, p.my->norm(y, p.grad_y(x, y)));
  }
  double lo = 1.0 - cfg.margin, hi = 1.0 + cfg.margin;
  p.mu_x = mu_x * lo;
  p.mu_y = mu_y * lo;
  p.L_x = L_x * hi;
  p.L_y = L_y * hi;
  p.L_xy = L_xy * hi;
  p.lip_x = lip_x * hi;
  p.lip_y = lip_y * hi;
  if (p.mu_x <= 0.0 || p.mu_y <= 0.0) {
    throw SolverError(
        "synthetic saddle: measured convexity modulus is nonpositive; weaken "
        "the coupling or shrink the feasible balls");
  }
}

}  // namespace

SyntheticSaddleProblem make_synthetic_saddle(ManifoldPtr mx, ManifoldPtr my,
                                             const Vec& p0, const Vec& q0,
                                             double x_radius, double y_radius,
                                             const SyntheticSaddleConfig& cfg) {
  if (!(cfg.a > 0.0) || !(cfg.b > 0.0)) {
    throw SolverError("synthetic saddle: a and b must be positive");
  }
  SyntheticSaddleProblem sp;
  sp.saddle_x = mx->project_point(p0);
  sp.saddle_y = my->project_point(q0);
  sp.basis_x = tangent_basis(*mx, sp.saddle_x);
  sp.basis_y = tangent_basis(*my, sp.saddle_y);
  Mat A = cfg.A;
  if (A.size() == 0) A = Mat::Zero(sp.basis_x.cols(), sp.basis_y.cols());
  if (A.rows() != sp.basis_x.cols() || A.cols() != sp.basis_y.cols()) {
    throw SolverError(
        "synthetic saddle: coupling matrix shape must match the intrinsic "
        "dimensions");
  }

  MinMaxProblem p;
  p.mx = mx;
  p.my = my;
  p.ball_x = make_ball(make_point(mx, sp.saddle_x), x_radius);
  p.ball_y = make_ball(make_point(my, sp.saddle_y), y_radius);

  Vec ps = sp.saddle_x, qs = sp.saddle_y;
  Mat Bx = sp.basis_x, By = sp.basis_y;
  double a = cfg.a, b = cfg.b;
  p.f = [mx, my, ps, qs, Bx, By, A, a, b](const Vec& x, const Vec& y) {
    double dx = mx->distance(ps, x);
    double dy = my->distance(qs, y);
    Vec u = tangent_coords(*mx, ps, Bx, mx->log(ps, x));
    Vec v = tangent_coords(*my, qs, By, my->log(qs, y));
    return 0.5 * a * dx * dx - 0.5 * b * dy * dy + u.dot(A * v);
  };
  p.grad_x = [mx, my, ps, qs, Bx, By, A, a](const Vec& x, const Vec& y) {
    Vec v = tangent_coords(*my, qs, By, my->log(qs, y));
    Vec w = from_coords(Bx, A * v);
    return (-a * mx->log(x, ps) + log_linear_grad(*mx, ps, x, w)).eval();
  };
  p.grad_y = [mx, my, ps, qs, Bx, By, A, b](const Vec& x, const Vec& y) {
    Vec u = tangent_coords(*mx, ps, Bx, mx->log(ps, x));
    Vec w = from_coords(By, A.transpose() * u);
    return (b * my->log(y, qs) + log_linear_grad(*my, qs, y, w)).eval();
  };

  bool flat = mx->curvature().kmin == 0.0 && my->curvature().kmin == 0.0;
  double anorm = 0.0;
  if (A.size() > 0) {
    Eigen::JacobiSVD<Mat> svd(A);
    anorm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  }
  if (flat) {
    p.mu_x = a;
    p.L_x = a;
    p.mu_y = b;
    p.L_y = b;
    p.L_xy = anorm;
    p.lip_x = a * x_radius + anorm * y_radius;
    p.lip_y = b * y_radius + anorm * x_radius;
    sp.measured = false;
  } else {
    sp.measured = true;
  }
  sp.problem = p;
  if (sp.measured) measure_saddle_constants(sp.problem, cfg);
  return sp;
}

MinMaxProblem make_bilinear_saddle(ManifoldPtr mx, ManifoldPtr my,
                                   const Vec& p0, const Vec& q0, const Mat& C,
                                   double x_radius, double y_radius, double a,
                                   double b) {
  auto affine_logs = [](const Manifold& m) {
    return m.curvature().kmin == 0.0 || m.dim() == 1;
  };
  if (!affine_logs(*mx) || !affine_logs(*my)) {
    throw SolverError(
        "bilinear saddle: factors must be flat or one-dimensional so the "
        "tangent coordinates stay affine along geodesics");
  }
  if (a < 0.0 || b < 0.0) {
    throw SolverError("bilinear saddle: a and b must be nonnegative");
  }
  MinMaxProblem p;
  p.mx = mx;
  p.my = my;
  Vec ps = mx->project_point(p0);
  Vec qs = my->project_point(q0);
  p.ball_x = make_ball(make_point(mx, ps), x_radius);
  p.ball_y = make_ball(make_point(my, qs), y_radius);
  Mat Bx = tangent_basis(*mx, ps);
  Mat By = tangent_basis(*my, qs);
  if (C.rows() != Bx.cols() || C.cols() != By.cols()) {
    throw SolverError(
        "bilinear saddle: coupling matrix shape must match the intrinsic "
        "dimensions");
  }
  p.f = [mx, my, ps, qs, Bx, By, C, a, b](const Vec& x, const Vec& y) {
    double dx = mx->distance(ps, x);
    double dy = my->distance(qs, y);
    Vec u = tangent_coords(*mx, ps, Bx, mx->log(ps, x));
    Vec v = tangent_coords(*my, qs, By, my->log(qs, y));
    return 0.5 * a * dx * dx - 0.5 * b * dy * dy + u.dot(C * v);
  };
  p.grad_x = [mx, my, ps, qs, Bx, By, C, a](const Vec& x, const Vec& y) {
    Vec v = tangent_coords(*my, qs, By, my->log(qs, y));
    Vec w = from_coords(Bx, C * v);
    return (-a * mx->log(x, ps) + log_linear_grad(*mx, ps, x, w)).eval();
  };
  p.grad_y = [mx, my, ps, qs, Bx, By, C, b](const Vec& x, const Vec& y) {
    Vec u = tangent_coords(*mx, ps, Bx, mx->log(ps, x));
    Vec w = from_coords(By, C.transpose() * u);
    return (b * my->log(y, qs) + log_linear_grad(*my, qs, y, w)).eval();
  };
  double cnorm = 0.0;
  if (C.size() > 0) {
    Eigen::JacobiSVD<Mat> svd(C);
    cnorm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  }
  p.mu_x = a;
  p.L_x = a;
  p.mu_y = b;
  p.L_y = b;
  p.L_xy = cnorm;
  p.lip_x = a * x_radius + cnorm * y_radius;
  p.lip_y = b * y_radius + cnorm * x_radius;
  return p;
}

// ---------------------------------------------------------------------------
// Diagonal quadratic with exact ball prox.

namespace {

// argmin_y (1/2) sum_i cw_i (y_i - tw_i)^2 subject to ||y - b0|| <= r, by
// bisection on the multiplier of the ball constraint.
Vec weighted_ball_argmin(const Vec& cw, const Vec& tw, const Vec& b0,
                         double r) {
  auto point = [&](double nu) {
    Vec y(cw.size());
    for (int i = 0; i < cw.size(); ++i) {
      y[i] = (cw[i] * tw[i] + nu * b0[i]) / (cw[i] + nu);
    }
    return y;
  };
  Vec y0 = point(0.0);
  double over = (y0 - b0).norm();
  if (over <= r) return y0;
  double lo = 0.0, hi = 1.0;
  while ((point(hi) - b0).norm() > r) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((point(mid) - b0).norm() > r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return point(hi);
}

}  // namespace

DiagQuadratic make_diag_quadratic(const Vec& c, const Vec& t,
                                  const Vec& center, double radius) {
  if (c.size() != t.size() || c.size() != center.size()) {
    throw SolverError("diag_quadratic: dimension mismatch");
  }
  if (c.minCoeff() <= 0.0) {
    throw SolverError("diag_quadratic: curvatures c must be positive");
  }
  DiagQuadratic q;
  q.c = c;
  q.t = t;
  GConvexProblem gp;
  gp.manifold = make_euclidean(static_cast<int>(c.size()));
  gp.feasible = make_ball(make_point(gp.manifold, center), radius);
  Vec cc = c, tt = t;
  gp.f = [cc, tt](const Vec& x) {
    return 0.5 * (cc.array() * (x - tt).array().square()).sum();
  };
  gp.grad = [cc, tt](const Vec& x) {
    return (cc.array() * (x - tt).array()).matrix().eval();
  };
  gp.mu = c.minCoeff();
  gp.L = c.maxCoeff();
  gp.lip = (c.array() * (center - t).array()).matrix().norm() +
           c.maxCoeff() * radius;
  q.problem = gp;
  return q;
}

Vec DiagQuadratic::minimizer() const {
  return weighted_ball_argmin(c, t, problem.feasible.center.coords,
                              problem.feasible.radius);
}

double DiagQuadratic::min_value() const { return problem.f(minimizer()); }

Vec diag_quadratic_prox_point(const DiagQuadratic& q, const Vec& xc,
                              double lambda) {
  Vec cw = q.c.array() + 1.0 / lambda;
  Vec tw(q.c.size());
  for (int i = 0; i < q.c.size(); ++i) {
    tw[i] = (q.c[i] * q.t[i] + xc[i] / lambda) / cw[i];
  }
  return weighted_ball_argmin(cw, tw, q.problem.feasible.center.coords,
                              q.problem.feasible.radius);
}

ProxSubsolver diag_quadratic_exact_prox(const DiagQuadratic& q) {
  DiagQuadratic copy = q;
  ProxSubsolver s;
  s.solve = [copy](const GConvexProblem&, const Vec& xk, double lambda,
                   double, const Vec&) {
    return diag_quadratic_prox_point(copy, xk, lambda);
  };
  return s;
}

// ---------------------------------------------------------------------------
// Certification oracles.

Vec best_response_max_y(const MinMaxProblem& p, const Vec& x, double tol) {
  MinMaxProblem q = detached(p);
  GConvexProblem sec = y_section(q, x);
  if (sec.mu > 0.0) {
    PrgdOptions po;
    po.epsilon = tol;
    po.cert_stop = true;
    po.record_trace = false;
    return prgd(sec, q.ball_y.center.coords, po).x;
  }
  auto grid = geodesic_grid(*q.my, q.ball_y, 2000);
  double best = std::numeric_limits<double>::infinity();
  Vec arg = q.ball_y.center.coords;
  for (const Vec& g : grid) {
    double v = sec.f(g);
    if (v < best) {
      best = v;
      arg = g;
    }
  }
  return arg;
}

Vec best_response_min_x(const MinMaxProblem& p, const Vec& y, double tol) {
  MinMaxProblem q = detached(p);
  GConvexProblem sec = x_section(q, y);
  if (sec.mu > 0.0) {
    PrgdOptions po;
    po.epsilon = tol;
    po.cert_stop = true;
    po.record_trace = false;
    return prgd(sec, q.ball_x.center.coords, po).x;
  }
  auto grid = geodesic_grid(*q.mx, q.ball_x, 2000);
  double best = std::numeric_limits<double>::infinity();
  Vec arg = q.ball_x.center.coords;
  for (const Vec& g : grid) {
    double v = sec.f(g);
    if (v < best) {
      best = v;
      arg = g;
    }
  }
  return arg;
}

double certified_gap(const MinMaxProblem& p, const Vec& x, const Vec& y,
                     double tol) {
  Vec ybest = best_response_max_y(p, x, tol);
  Vec xbest = best_response_min_x(p, y, tol);
  return p.f(x, ybest) - p.f(xbest, y);
}

GridGap grid_gap(const MinMaxProblem& p, const Vec& x, const Vec& y,
                 int target_points, std::uint64_t seed) {
  MinMaxProblem q = detached(p);
  Rng rng(seed);
  auto gx = geodesic_grid(*q.mx, q.ball_x, target_points);
  auto gy = geodesic_grid(*q.my, q.ball_y, target_points);
  GridGap out;
  double maxy = -std::numeric_limits<double>::infinity();
  for (const Vec& g : gy) maxy = std::max(maxy, q.f(x, g));
  double minx = std::numeric_limits<double>::infinity();
  for (const Vec& g : gx) minx = std::min(minx, q.f(g, y));
  out.lower = maxy - minx;
  out.rcov_x = covering_radius_estimate(*q.mx, q.ball_x, gx, 400, rng);
  out.rcov_y = covering_radius_estimate(*q.my, q.ball_y, gy, 400, rng);
  auto gradx = [&q, y](const Vec& xx) { return q.grad_x(xx, y); };
  auto grady = [&q, x](const Vec& yy) { return q.grad_y(x, yy); };
  out.lip_x = measured_grad_norm_bound(*q.mx, q.ball_x, gradx, 200, rng);
  out.lip_y = measured_grad_norm_bound(*q.my, q.ball_y, grady, 200, rng);
  out.upper = out.lower + out.lip_x * out.rcov_x + out.lip_y * out.rcov_y;
  return out;
}

SionCheck sion_check(const MinMaxProblem& p, int target_points,
                     std::uint64_t seed) {
  MinMaxProblem q = detached(p);
  Rng rng(seed);
  auto gx = geodesic_grid(*q.mx, q.ball_x, target_points);
  auto gy = geodesic_grid(*q.my, q.ball_y, target_points);
  SionCheck out;
  double minmax = std::numeric_limits<double>::infinity();
  for (const Vec& a : gx) {
    double inner = -std::numeric_limits<double>::infinity();
    for (const Vec& b : gy) inner = std::max(inner, q.f(a, b));
    minmax = std::min(minmax, inner);
  }
  double maxmin = -std::numeric_limits<double>::infinity();
  for (const Vec& b : gy) {
    double inner = std::numeric_limits<double>::infinity();
    for (const Vec& a : gx) inner = std::min(inner, q.f(a, b));
    maxmin = std::max(maxmin, inner);
  }
  out.minmax = minmax;
  out.maxmin = maxmin;
  out.discrepancy = std::fabs(minmax - maxmin);
  double rx = covering_radius_estimate(*q.mx, q.ball_x, gx, 400, rng);
  double ry = covering_radius_estimate(*q.my, q.ball_y, gy, 400, rng);
  double lip = 0.0;
  for (int s = 0; s < 200; ++s) {
    Vec a = random_point_in_ball(*q.mx, q.ball_x, rng);
    Vec b = random_point_in_ball(*q.my, q.ball_y, rng);
    double nx = q.mx->norm(a, q.grad_x(a, b));
    double ny = q.my->norm(b, q.grad_y(a, b));
    lip = std::max(lip, std::sqrt(nx * nx + ny * ny));
  }
  out.bound = 2.0 * lip * (rx + ry);
  out.ok = out.discrepancy <= out.bound + 1e-12;
  return out;
}

double minmax_gradient_check(const MinMaxProblem& p, const Vec& x,
                             const Vec& y, double h, int ndirs,
                             std::uint64_t seed) {
  MinMaxProblem q = detached(p);
  Rng rng(seed);
  auto fx = [&q, y](const Vec& xx) { return q.f(xx, y); };
  auto gxf = [&q, y](const Vec& xx) { return q.grad_x(xx, y); };
  double ex = finite_diff_gradient_check(*q.mx, fx, gxf, x, h, ndirs, rng);
  auto fy = [&q, x](const Vec& yy) { return q.f(x, yy); };
  auto gyf = [&q, x](const Vec& yy) { return q.grad_y(x, yy); };
  double ey = finite_diff_gradient_check(*q.my, fy, gyf, y, h, ndirs, rng);
  return std::max(ex, ey);
}

}  // namespace rminmax
