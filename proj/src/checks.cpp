#include "rminmax/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "rminmax/config.hpp"
#include "rminmax/manifolds.hpp"
#include "rminmax/oracles.hpp"
#include "rminmax/problems.hpp"
#include "rminmax/rng.hpp"
#include "rminmax/trace.hpp"

namespace rminmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Runs the check body and converts any escape into a failed item, so one
// broken check cannot abort a whole suite.
template <typename F>
CheckItem guarded(const std::string& name, F body) {
  CheckItem it;
  it.name = name;
  it.pass = true;
  try {
    body(it);
  } catch (const std::exception& e) {
    it.pass = false;
    it.slack = kInf;
    it.detail = std::string("exception: ") + e.what();
  }
  return it;
}

// Tracks the worst (largest) violation of a family of "lhs <= rhs + tol"
// conditions; slack stays negative while everything holds with margin.
struct Worst {
  double v = -kInf;
  void add(double excess) { v = std::max(v, excess); }
};

// Weighted anchor objective f(x) = sum_i w_i (1/2) d^2(a_i, x) on a geodesic
// ball. Each term has Hessian eigenvalues in [1, zeta_{d(a_i, x)}] on the
// nonpositively curved models, so the declared constants below are valid.
GConvexProblem make_anchor_objective(ManifoldPtr m, const Mat& anchors,
                                     const Vec& w, const GeodesicBall& ball) {
  GConvexProblem p;
  p.manifold = m;
  p.feasible = ball;
  const Mat A = anchors;
  const Vec wc = w;
  ManifoldPtr mm = m;
  p.f = [mm, A, wc](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < A.cols(); ++i) {
      double d = mm->distance(A.col(i), x);
      s += 0.5 * wc(i) * d * d;
    }
    return s;
  };
  p.grad = [mm, A, wc](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    for (int i = 0; i < A.cols(); ++i) {
      g -= wc(i) * mm->log(x, A.col(i));
    }
    return g;
  };
  double wsum = w.sum();
  double rmax = 0.0;
  double lip = 0.0;
  for (int i = 0; i < anchors.cols(); ++i) {
    double d = m->distance(ball.center.coords, anchors.col(i));
    rmax = std::max(rmax, d + ball.radius);
    lip += w(i) * (d + ball.radius);
  }
  p.mu = wsum;
  p.L = wsum * m->zeta_at(rmax);
  p.lip = lip;
  return p;
}

// Synthetic saddle with a seeded Gaussian coupling rescaled so its largest
// singular value equals `scale`.
SyntheticSaddleProblem make_synth_instance(ManifoldPtr mx, ManifoldPtr my,
                                           double a, double b, double scale,
                                           double rx, double ry,
                                           std::uint64_t seed) {
  Vec p = manifold_origin(*mx);
  Vec q = manifold_origin(*my);
  SyntheticSaddleConfig cfg;
  cfg.a = a;
  cfg.b = b;
  cfg.seed = seed;
  Mat A = Mat::Zero(mx->dim(), my->dim());
  if (scale > 0.0) {
    Rng rng(seed + 101);
    for (int i = 0; i < A.rows(); ++i) {
      for (int j = 0; j < A.cols(); ++j) A(i, j) = rng.normal();
    }
    Eigen::JacobiSVD<Mat> svd(A);
    double smax = svd.singularValues()(0);
    if (smax > 0.0) A *= scale / smax;
  }
  cfg.A = A;
  return make_synthetic_saddle(mx, my, p, q, rx, ry, cfg);
}

MinMaxProblem make_bilinear_cc(ManifoldPtr mx, ManifoldPtr my, const Mat& C,
                               double rx, double ry) {
  return make_bilinear_saddle(mx, my, manifold_origin(*mx),
                              manifold_origin(*my), C, rx, ry);
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  int n = static_cast<int>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-12) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / det;
}

}  // namespace

// ---------------------------------------------------------------------------
// Geometry scope.

CheckItem check_zeta_delta_values() {
  return guarded("zeta_delta_values", [](CheckItem& it) {
    Worst w;
    w.add(std::abs(zeta(1.0, -1.0) - 1.3130352854993313) - 1e-9);
    double pi4 = std::atan(1.0);
    w.add(std::abs(delta(pi4, 1.0) - 0.78539816339744831) - 1e-9);
    w.add(std::abs(zeta(1e-10, -1.0) - 1.0) - 1e-12);
    w.add(std::abs(zeta(0.0, -1.0) - 1.0));
    auto me = make_euclidean(2);
    w.add(std::abs(me->zeta_at(3.0) - 1.0));
    w.add(std::abs(me->delta_at(3.0) - 1.0));
    bool threw = false;
    try {
      delta(3.15, 1.0);
    } catch (const GeometryError&) {
      threw = true;
    }
    it.slack = w.v;
    it.pass = threw && w.v <= 0.0;
    it.detail = threw ? "spot values and domain guard ok"
                      : "delta(3.15, 1) did not reject R sqrt(kmax) >= pi";
  });
}

CheckItem check_roundtrips(std::uint64_t seed) {
  return guarded("exp_log_transport_roundtrips", [seed](CheckItem& it) {
    std::vector<ManifoldPtr> models = {make_euclidean(3), make_hyperboloid(2),
                                       make_hyperboloid(3),
                                       make_hyperboloid(4)};
    Rng rng(seed);
    Worst w;
    int count = 0;
    for (const auto& m : models) {
      GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.5);
      for (int i = 0; i < 100; ++i) {
        Vec q = random_point_in_ball(*m, ball, rng);
        Vec r = random_point_in_ball(*m, ball, rng);
        Vec v = random_unit_tangent(*m, q, rng) * rng.uniform(0.0, 1.5);
        Vec u = m->log(q, m->exp(q, v));
        w.add(m->norm(q, u - v) - 1e-8);
        w.add(m->distance(m->exp(q, m->log(q, r)), r) - 1e-8);
        Vec t = m->transport(q, r, v);
        w.add(std::abs(m->norm(r, t) - m->norm(q, v)) - 1e-8);
        Vec back = m->transport(r, q, t);
        w.add(m->norm(q, back - v) - 1e-8);
        ++count;
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = num(count) + " samples over 4 models, tol 1e-8";
  });
}

CheckItem check_cosine_laws(int ntriangles, std::uint64_t seed) {
  return guarded("cosine_law_inequalities", [=](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    int bad = 0;
    for (int i = 0; i < ntriangles; ++i) {
      ManifoldPtr m = (i % 2 == 0) ? make_hyperboloid(2) : make_hyperboloid(3);
      GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.5);
      ManifoldPoint x = make_point(m, random_point_in_ball(*m, ball, rng));
      ManifoldPoint y = make_point(m, random_point_in_ball(*m, ball, rng));
      ManifoldPoint p = make_point(m, random_point_in_ball(*m, ball, rng));
      double slack = 0.0;
      if (!check_cosine_laws(x, y, p, 3.0, &slack)) ++bad;
      w.add(-slack - 1e-8);
    }
    it.slack = w.v;
    it.pass = bad == 0;
    it.detail = num(ntriangles) + " triangles, " + num(bad) + " violations";
  });
}

CheckItem check_distance_hessian_bounds(std::uint64_t seed) {
  return guarded("distance_hessian_bounds", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    auto mh = make_hyperboloid(2);
    GeodesicBall ball = make_ball(make_point(mh, manifold_origin(*mh)), 1.2);
    for (int i = 0; i < 20; ++i) {
      Vec p = random_point_in_ball(*mh, ball, rng);
      Vec q = random_point_in_ball(*mh, ball, rng);
      double R = mh->distance(p, q);
      if (R < 0.1) {
        --i;
        continue;
      }
      auto f = [&mh, p](const Vec& x) {
        double d = mh->distance(p, x);
        return 0.5 * d * d;
      };
      Vec e = random_unit_tangent(*mh, q, rng);
      double sd = second_difference(*mh, f, q, e, 1e-3);
      w.add(1.0 - sd - 1e-4);
      w.add(sd - mh->zeta_at(R) - 1e-4);
    }
    auto me = make_euclidean(3);
    GeodesicBall eball = make_ball(make_point(me, manifold_origin(*me)), 1.2);
    for (int i = 0; i < 5; ++i) {
      Vec p = random_point_in_ball(*me, eball, rng);
      Vec q = random_point_in_ball(*me, eball, rng);
      auto f = [p](const Vec& x) { return 0.5 * (x - p).squaredNorm(); };
      Vec e = random_unit_tangent(*me, q, rng);
      double sd = second_difference(*me, f, q, e, 1e-3);
      w.add(std::abs(sd - 1.0) - 1e-6);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "squared-distance second differences within [delta, zeta]";
  });
}

CheckItem check_exp_ode(std::uint64_t seed) {
  return guarded("exp_vs_geodesic_ode", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    for (int dim : {2, 3}) {
      auto m = make_hyperboloid(dim);
      GeodesicBall ball = make_ball(make_point(m, manifold_origin(*m)), 1.2);
      for (int i = 0; i < 25; ++i) {
        Vec q = random_point_in_ball(*m, ball, rng);
        Vec v = random_unit_tangent(*m, q, rng) * rng.uniform(0.0, 1.5);
        Vec closed = m->exp(q, v);
        Vec ode = hyperboloid_ode_exp(q, v);
        w.add((closed - ode).norm() - 1e-8);
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "closed-form exponential vs RK4 geodesic integration, tol 1e-8";
  });
}

CheckItem check_schild_ladder(std::uint64_t seed) {
  return guarded("schild_ladder_transport", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    HyperboloidModel H(2);
    GeodesicBall ball = make_ball(
        make_point(make_hyperboloid(2), manifold_origin(H)), 1.0);
    for (int i = 0; i < 10; ++i) {
      Vec x = random_point_in_ball(H, ball, rng);
      Vec y = random_point_in_ball(H, ball, rng);
      Vec v = random_unit_tangent(H, x, rng) * 0.7;
      Vec exact = H.transport(x, y, v);
      Vec approx = schild_ladder_transport(H, x, y, v);
      w.add((exact - approx).norm() - 1e-3);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "ladder with 1024 rungs vs closed-form transport, tol 1e-3";
  });
}

CheckItem check_curvature_estimates(std::uint64_t seed) {
  return guarded("sectional_curvature_estimates", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    auto orth_pair = [&rng](const Manifold& m, const Vec& p, Vec& u, Vec& v) {
      u = random_unit_tangent(m, p, rng);
      for (int tries = 0; tries < 50; ++tries) {
        Vec cand = random_unit_tangent(m, p, rng);
        Vec w2 = cand - m.inner(p, cand, u) * u;
        double n = m.norm(p, w2);
        if (n > 0.3) {
          v = w2 / n;
          return;
        }
      }
      throw GeometryError("could not draw an independent tangent direction");
    };
    {
      auto me = make_euclidean(3);
      GeodesicBall ball = make_ball(make_point(me, manifold_origin(*me)), 1.0);
      for (int i = 0; i < 5; ++i) {
        Vec p = random_point_in_ball(*me, ball, rng);
        Vec u, v;
        orth_pair(*me, p, u, v);
        w.add(std::abs(gauss_curvature_estimate(*me, p, u, v)) - 1e-4);
      }
    }
    for (int dim : {2, 3}) {
      auto mh = make_hyperboloid(dim);
      GeodesicBall ball = make_ball(make_point(mh, manifold_origin(*mh)), 1.0);
      for (int i = 0; i < 5; ++i) {
        Vec p = random_point_in_ball(*mh, ball, rng);
        Vec u, v;
        orth_pair(*mh, p, u, v);
        w.add(std::abs(gauss_curvature_estimate(*mh, p, u, v) + 1.0) - 1e-2);
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "flat model near 0, hyperbolic models near -1";
  });
}

CheckItem check_product_metric(std::uint64_t seed) {
  return guarded("product_metric", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    auto mh = make_hyperboloid(2);
    auto me = make_euclidean(2);
    auto prod = make_product(mh, me);
    GeodesicBall bh = make_ball(make_point(mh, manifold_origin(*mh)), 1.0);
    GeodesicBall be = make_ball(make_point(me, manifold_origin(*me)), 1.0);
    for (int i = 0; i < 25; ++i) {
      Vec a1 = random_point_in_ball(*mh, bh, rng);
      Vec a2 = random_point_in_ball(*mh, bh, rng);
      Vec b1 = random_point_in_ball(*me, be, rng);
      Vec b2 = random_point_in_ball(*me, be, rng);
      Vec j1 = prod->join(a1, b1);
      Vec j2 = prod->join(a2, b2);
      double dh = mh->distance(a1, a2);
      double de = me->distance(b1, b2);
      double dp = prod->distance(j1, j2);
      w.add(std::abs(dp * dp - dh * dh - de * de) - 1e-12);
      Vec lg = prod->log(j1, j2);
      w.add((prod->left_part(lg) - mh->log(a1, a2)).norm() - 1e-10);
      w.add((prod->right_part(lg) - me->log(b1, b2)).norm() - 1e-10);
      Vec ex = prod->exp(j1, lg);
      w.add(prod->distance(ex, j2) - 1e-9);
      w.add((prod->left_part(j1) - a1).norm() + (prod->right_part(j1) - b1).norm());
    }
    w.add(std::abs(prod->zeta_at(2.0) - zeta(2.0, -1.0)) - 1e-14);
    w.add(std::abs(prod->delta_at(2.0) - 1.0) - 1e-14);
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "additive squared distances, blockwise exp/log, merged "
                "curvature range";
  });
}

// ---------------------------------------------------------------------------
// Solver scope.

CheckItem check_prgd_contraction(int ninstances, std::uint64_t seed) {
  return guarded("prgd_per_step_contraction", [=](CheckItem& it) {
    Rng rng(seed);
    Worst wcontract;
    Worst wreach;
    std::int64_t steps = 0;
    for (int inst = 0; inst < ninstances; ++inst) {
      ManifoldPtr m = make_hyperboloid(2 + (inst % 2));
      Vec origin = manifold_origin(*m);
      GeodesicBall ball = make_ball(make_point(m, origin), 1.2);
      GeodesicBall inner = make_ball(make_point(m, origin), 0.6);
      int k = 3;
      Mat anchors(m->ambient_dim(), k);
      Vec wts(k);
      for (int j = 0; j < k; ++j) {
        anchors.col(j) = random_point_in_ball(*m, inner, rng);
        wts(j) = rng.uniform(0.3, 1.0);
      }
      GConvexProblem p = make_anchor_objective(m, anchors, wts, ball);
      GeodesicBall start = make_ball(make_point(m, origin), 1.14);
      Vec x0 = random_point_in_ball(*m, start, rng);

      PrgdOptions ref;
      ref.epsilon = 1e-14;
      ref.cert_stop = true;
      ref.record_trace = false;
      PrgdResult rres = prgd(p, x0, ref);
      double fstar = p.f(rres.x);

      PrgdOptions po;
      po.epsilon = 1e-8;
      po.cert_stop = false;
      po.record_trace = true;
      PrgdResult res = prgd(p, x0, po);

      double best = kInf;
      double floor = 1e-11 * std::max(1.0, std::abs(fstar));
      const auto& rows = res.trace.rows;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        best = std::min(best, rows[j].value - fstar);
        if (j + 1 < rows.size() && rows[j + 1].iter == rows[j].iter + 1) {
          double g0 = rows[j].value - fstar;
          double g1 = rows[j + 1].value - fstar;
          if (g0 <= floor) continue;
          double Rt = rows[j].grad_norm / p.L;
          double factor = 1.0 - p.mu / (4.0 * p.L * m->zeta_at(Rt));
          wcontract.add(g1 / g0 - factor - 1e-8);
          ++steps;
        }
      }
      wreach.add(best - 1e-8 * 1.01);
    }
    it.slack = std::max(wcontract.v, wreach.v);
    it.pass = it.slack <= 0.0;
    it.detail = num(ninstances) + " instances, " + num(double(steps)) +
                " logged steps; worst contraction excess " + num(wcontract.v) +
                ", worst budget-gap excess " + num(wreach.v);
  });
}

CheckItem check_riemacon_budget_and_duals(std::uint64_t seed) {
  return guarded("riemacon_budget_and_duals", [seed](CheckItem& it) {
    Worst w;
    double pre_worst = 0.0;
    struct Spec {
      int dim;
      double kappa;
    };
    std::vector<Spec> specs = {{2, 4.0}, {3, 64.0}, {4, 256.0}, {3, 16.0},
                               {2, 64.0}};
    int idx = 0;
    for (const auto& s : specs) {
      Rng rng(seed + idx);
      Vec c(s.dim);
      for (int i = 0; i < s.dim; ++i) {
        c(i) = s.dim == 1 ? s.kappa
                          : std::pow(s.kappa, double(i) / double(s.dim - 1));
      }
      Vec t(s.dim);
      for (int i = 0; i < s.dim; ++i) t(i) = rng.uniform(-0.35, 0.35);
      DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(s.dim), 1.0);
      double eps = 1e-9;
      RiemaconOptions ro;
      ro.lambda = 1.0 / q.problem.L;
      ro.epsilon = eps;
      ro.record_trace = false;
      ro.eval_values = false;
      Vec x0 = Vec::Zero(s.dim);
      x0(0) = 0.9;
      RiemaconResult res = riemacon_abs(q.problem, x0, ro,
                                        diag_quadratic_exact_prox(q));
      double gap = q.problem.f(res.y) - q.min_value();
      w.add(gap - eps * (1.0 + 1e-6) - 1e-15);
      std::int64_t budget = riemacon_budget(q.problem, ro.lambda, eps);
      w.add(double(res.iters - budget));
      double Dx = q.problem.feasible.diameter();
      for (double n : res.dual_norms) w.add(n - Dx - 1e-12);
      for (std::size_t k = 0; k < res.dual_pre.size(); ++k) {
        pre_worst = std::max(pre_worst, res.dual_pre[k].norm() - Dx);
      }
      ++idx;
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "gap <= eps within theorem budget on 5 quadratics; "
                "max pre-projection dual excess " +
                num(pre_worst);
  });
}

CheckItem check_riemacon_kappa_slope(std::uint64_t seed) {
  return guarded("riemacon_kappa_slope", [seed](CheckItem& it) {
    std::vector<double> kappas = {4.0, 16.0, 64.0, 256.0};
    std::vector<double> lnk, ln_riemacon, ln_prgd;
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      double kappa = kappas[i];
      int dim = 3;
      Rng rng(seed + i);
      Vec c(dim);
      for (int j = 0; j < dim; ++j) {
        c(j) = std::pow(kappa, double(j) / double(dim - 1));
      }
      Vec t(dim);
      for (int j = 0; j < dim; ++j) t(j) = rng.uniform(-0.3, 0.3);
      DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(dim), 1.0);
      double eps = 1e-8;

      RiemaconOptions ro;
      ro.lambda = 1.0 / q.problem.L;
      ro.epsilon = eps;
      ro.record_trace = false;
      ro.eval_values = false;
      Vec x0 = Vec::Zero(dim);
      x0(0) = 0.9;
      RiemaconResult rr = riemacon_abs(q.problem, x0, ro,
                                       diag_quadratic_exact_prox(q));

      PrgdOptions po;
      po.epsilon = eps;
      po.cert_stop = true;
      po.record_trace = false;
      PrgdResult pr = prgd(q.problem, x0, po);

      lnk.push_back(std::log(kappa));
      ln_riemacon.push_back(std::log(double(std::max<std::int64_t>(1, rr.iters))));
      ln_prgd.push_back(std::log(double(std::max<std::int64_t>(1, pr.iters))));
    }
    double s_r = ls_slope(lnk, ln_riemacon);
    double s_p = ls_slope(lnk, ln_prgd);
    it.slack = s_r - 0.6;
    it.pass = s_r <= 0.6 && s_p >= 0.75;
    it.detail = "prox-call slope " + num(s_r) +
                " (<= 0.6 required), gradient-descent slope " + num(s_p) +
                " (>= 0.75 required)";
  });
}

CheckItem check_riemacon_lyapunov(std::uint64_t seed) {
  return guarded("riemacon_lyapunov_and_subgradients", [seed](CheckItem& it) {
    Rng rng(seed);
    int dim = 3;
    double kappa = 16.0;
    Vec c(dim);
    for (int j = 0; j < dim; ++j) {
      c(j) = std::pow(kappa, double(j) / double(dim - 1));
    }
    Vec t(dim);
    for (int j = 0; j < dim; ++j) t(j) = rng.uniform(-0.3, 0.3);
    DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(dim), 1.0);
    double eps = 1e-6;
    RiemaconOptions ro;
    ro.lambda = 1.0 / q.problem.L;
    ro.epsilon = eps;
    ro.keep_duals = true;
    ro.record_trace = false;
    ro.eval_values = false;
    Vec x0 = Vec::Zero(dim);
    x0(0) = 0.9;
    RiemaconResult res = riemacon_abs(q.problem, x0, ro,
                                      diag_quadratic_exact_prox(q));

    double mu = res.params.mu;
    double kap = res.params.kappa;
    double xi = res.params.xi;
    double eps_hat = res.params.eps_hat;
    double cc = 1.0 / (2.0 * std::sqrt(xi * kap));
    Vec xstar = q.minimizer();
    double fstar = q.min_value();

    Worst w;
    double prev_psi = 0.0;
    for (std::size_t k = 0; k < res.y_iter.size(); ++k) {
      double Ak = std::pow(1.0 + cc, double(k));
      const Vec& yk = res.y_iter[k];
      const Vec& z = res.dual_pre[k];
      double fy = q.problem.f(yk);
      double quad = (z - (xstar - yk)).squaredNorm();
      double psi = Ak * (fy - fstar + 0.25 * mu * quad);
      if (k > 0) {
        double allow = prev_psi + 2.0 * (kap + 1.0) * Ak * eps_hat +
                       1e-12 * (1.0 + std::abs(prev_psi));
        w.add(psi - allow);
      }
      prev_psi = psi;
    }

    double vbound = 2.0 / (ro.lambda * mu) + 2.0;
    for (std::size_t k = 1; k < res.y_iter.size(); ++k) {
      const Vec& xk = res.x_iter[k - 1];
      const Vec& yk = res.y_iter[k];
      Vec v = (xk - yk) / ro.lambda;
      double fy = q.problem.f(yk);
      for (int s = 0; s < 30; ++s) {
        Vec x(dim);
        for (int j = 0; j < dim; ++j) x(j) = rng.uniform(-0.9, 0.9);
        double lhs = q.problem.f(x);
        double rhs = fy + v.dot(x - yk) + 0.25 * mu * (x - yk).squaredNorm() -
                     vbound * eps_hat;
        w.add(rhs - lhs - 1e-8);
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = num(double(res.iters)) +
                " iterations; potential decrease and approximate subgradient "
                "inequalities hold";
  });
}

CheckItem check_rceg_stay_in_ball(int ninstances, std::uint64_t seed) {
  return guarded("rceg_stay_in_ball", [=](CheckItem& it) {
    Rng rng(seed);
    Worst wprimary;
    Worst wsecondary;
    Worst wcontract;
    for (int inst = 0; inst < ninstances; ++inst) {
      ManifoldPtr mx, my;
      switch (inst % 4) {
        case 0:
          mx = make_euclidean(2);
          my = make_euclidean(2);
          break;
        case 1:
          mx = make_hyperboloid(2);
          my = make_euclidean(2);
          break;
        case 2:
          mx = make_hyperboloid(2);
          my = make_hyperboloid(2);
          break;
        default:
          mx = make_euclidean(3);
          my = make_hyperboloid(3);
          break;
      }
      double a = rng.uniform(0.6, 1.8);
      double b = rng.uniform(0.6, 1.8);
      double scale = 0.5 * std::sqrt(a * b);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, a, b, scale, 1.0, 1.0, seed + 40 + inst);
      const MinMaxProblem& p = sp.problem;

      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      GeodesicBall sy = make_ball(make_point(my, sp.saddle_y), 0.9);
      Vec x0 = random_point_in_ball(*mx, sx, rng);
      Vec y0 = random_point_in_ball(*my, sy, rng);
      double dx0 = mx->distance(x0, sp.saddle_x);
      double dy0 = my->distance(y0, sp.saddle_y);
      double frak = std::sqrt(dx0 * dx0 + dy0 * dy0);

      RcegOptions ro;
      ro.mode = RcegMode::StronglyConvexConcave;
      ro.T = 25;
      ro.D = 4.0 * frak + 1e-9;
      ro.keep_iterates = true;
      ro.record_trace = true;
      ro.ref_x = &sp.saddle_x;
      ro.ref_y = &sp.saddle_y;
      RcegResult res = rceg(p, x0, y0, ro);

      for (std::size_t tstep = 0; tstep < res.xs.size(); ++tstep) {
        double dxs = mx->distance(res.xs[tstep], sp.saddle_x);
        double dys = my->distance(res.ys[tstep], sp.saddle_y);
        wprimary.add(std::sqrt(dxs * dxs + dys * dys) - frak - 1e-8);
        double dws = mx->distance(res.ws[tstep], sp.saddle_x);
        double dzs = my->distance(res.zs[tstep], sp.saddle_y);
        wsecondary.add(std::sqrt(dws * dws + dzs * dzs) - 2.0 * frak - 1e-8);
      }

      double mu = rceg_mu(p);
      double factor = 1.0 - 0.5 * mu * res.eta + 1e-8;
      const auto& rows = res.trace.rows;
      for (std::size_t j = 0; j + 1 < rows.size(); ++j) {
        double v0 = rows[j].dist_sq;
        double v1 = rows[j + 1].dist_sq;
        if (!(v0 > 1e-13 * (frak * frak + 1.0))) continue;
        wcontract.add(v1 - factor * v0);
      }
    }
    it.slack = std::max({wprimary.v, wsecondary.v, wcontract.v});
    it.pass = it.slack <= 0.0;
    it.detail = num(ninstances) + " instances; primary excess " +
                num(wprimary.v) + ", secondary excess " + num(wsecondary.v) +
                ", contraction excess " + num(wcontract.v);
  });
}

CheckItem check_rabr_lyapunov(std::uint64_t seed) {
  return guarded("rabr_lyapunov_contraction", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    struct Inst {
      bool curved;
      double scale;
    };
    std::vector<Inst> insts = {{false, 0.3}, {true, 0.25}};
    int idx = 0;
    for (const auto& cse : insts) {
      ManifoldPtr mx = cse.curved ? make_hyperboloid(2) : make_euclidean(2);
      ManifoldPtr my = cse.curved ? make_hyperboloid(2) : make_euclidean(2);
      SyntheticSaddleProblem sp = make_synth_instance(
          mx, my, 1.0, 1.0, cse.scale, 1.0, 1.0, seed + 60 + idx);
      const MinMaxProblem& p = sp.problem;

      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      GeodesicBall sy = make_ball(make_point(my, sp.saddle_y), 0.9);
      Vec x0 = random_point_in_ball(*mx, sx, rng);
      Vec y0 = random_point_in_ball(*my, sy, rng);

      RabrOptions ro;
      ro.T = 8;
      ro.keep_iterates = true;
      ro.record_trace = false;
      RabrResult res = rabr(p, x0, y0, ro);

      double Cw = p.mu_y / p.mu_x;
      auto lyap = [&](const Vec& x, const Vec& y) {
        double dx = mx->distance(x, sp.saddle_x);
        double dy = my->distance(y, sp.saddle_y);
        return dx * dx + Cw * dy * dy;
      };
      double prev = lyap(x0, y0);
      for (std::size_t tstep = 0; tstep < res.xs.size(); ++tstep) {
        double cur = lyap(res.xs[tstep], res.ys[tstep]);
        if (prev > 1e-16) w.add(cur / prev - (0.6 + 0.02));
        prev = cur;
      }
      ++idx;
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "per-sweep Lyapunov ratio vs 3/5 + 0.02 on flat and curved "
                "weak-coupling instances";
  });
}

CheckItem check_rabr_decoupling(std::uint64_t seed) {
  return guarded("rabr_zero_coupling_decoupling", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    for (int curved = 0; curved < 2; ++curved) {
      ManifoldPtr mx = curved ? make_hyperboloid(2) : make_euclidean(2);
      ManifoldPtr my = curved ? make_hyperboloid(2) : make_euclidean(2);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, 1.0, 1.0, 0.0, 1.0, 1.0, seed + 70 + curved);
      const MinMaxProblem& p = sp.problem;
      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      GeodesicBall sy = make_ball(make_point(my, sp.saddle_y), 0.9);
      Vec x0 = random_point_in_ball(*mx, sx, rng);
      Vec y0 = random_point_in_ball(*my, sy, rng);
      double v0 = std::pow(mx->distance(x0, sp.saddle_x), 2) +
                  (p.mu_y / p.mu_x) * std::pow(my->distance(y0, sp.saddle_y), 2);

      RabrOptions ro;
      ro.T = 1;
      ro.rho = 1e-8;
      ro.record_trace = false;
      RabrResult res = rabr(p, x0, y0, ro);
      double v1 = std::pow(mx->distance(res.x, sp.saddle_x), 2) +
                  (p.mu_y / p.mu_x) * std::pow(my->distance(res.y, sp.saddle_y), 2);
      w.add(v1 - 1e-6 * v0 - 1e-18);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "single sweep with zero coupling collapses both distances";
  });
}

CheckItem check_gap_toolkit(int npoints, std::uint64_t seed) {
  return guarded("gap_toolkit_inequalities", [=](CheckItem& it) {
    Rng rng(seed);
    auto mx = make_euclidean(2);
    auto my = make_euclidean(2);
    double a = 1.2, b = 0.8;
    SyntheticSaddleProblem sp =
        make_synth_instance(mx, my, a, b, 0.45 * std::sqrt(a * b), 1.0, 1.0,
                            seed + 80);
    const MinMaxProblem& p = sp.problem;
    const Mat& Bx = sp.basis_x;
    const Mat& By = sp.basis_y;
    Mat A = Bx.transpose() * Bx;  // placeholder, replaced below
    {
      // Recover the tangent-coordinate coupling from the oracle itself:
      // grad_x at saddle_x with y displaced along basis column j equals
      // Bx A e_j scaled by the displacement.
      A = Mat::Zero(Bx.cols(), By.cols());
      for (int j = 0; j < By.cols(); ++j) {
        Vec y = sp.saddle_y + By.col(j);
        Vec gx = p.grad_x(sp.saddle_x, y);
        A.col(j) = Bx.transpose() * gx;
      }
    }
    Vec px = sp.saddle_x;
    Vec qy = sp.saddle_y;
    double fstar = p.f(px, qy);

    auto uco = [&](const Vec& x) { return (Bx.transpose() * (x - px)).eval(); };
    auto vco = [&](const Vec& y) { return (By.transpose() * (y - qy)).eval(); };
    auto phi = [&](const Vec& x) {
      Vec u = uco(x);
      return fstar + 0.5 * a * u.squaredNorm() +
             0.5 / b * (A.transpose() * u).squaredNorm();
    };
    auto psi = [&](const Vec& y) {
      Vec v = vco(y);
      return fstar - 0.5 * b * v.squaredNorm() -
             0.5 / a * (A * v).squaredNorm();
    };
    auto xstar_of = [&](const Vec& y) {
      return (px - Bx * (A * vco(y)) / a).eval();
    };
    auto ystar_of = [&](const Vec& x) {
      return (qy + By * (A.transpose() * uco(x)) / b).eval();
    };

    GeodesicBall sx = make_ball(make_point(mx, px), 0.9);
    GeodesicBall sy = make_ball(make_point(my, qy), 0.9);
    Worst w;
    for (int i = 0; i < npoints; ++i) {
      Vec xb = random_point_in_ball(*mx, sx, rng);
      Vec yb = random_point_in_ball(*my, sy, rng);
      double fv = p.f(xb, yb);
      double gap_x = phi(xb) - fv;
      double gap_y = fv - psi(yb);
      double gap = phi(xb) - psi(yb);

      w.add(gap_x - gap - 1e-8);
      w.add(gap_y - gap - 1e-8);
      w.add(std::abs(gap - gap_x - gap_y) - 1e-8);

      double dxs = (xb - px).squaredNorm();
      double dys = (yb - qy).squaredNorm();
      w.add(dxs - primal_dist_sq_bound(phi(xb) - fstar, p.mu_x) - 1e-8);
      w.add(dys - primal_dist_sq_bound(fstar - psi(yb), p.mu_y) - 1e-8);

      double eps_dual = fstar - psi(yb);
      Vec xopt = xstar_of(yb);
      Vec delta = Vec::Zero(2);
      for (int j = 0; j < 2; ++j) delta(j) = rng.normal();
      delta *= rng.uniform(0.0, 0.05) / std::max(delta.norm(), 1e-12);
      Vec xprime = xopt + delta;
      double eps_hat = p.f(xprime, yb) - p.f(xopt, yb);
      double lhs = (xprime - px).squaredNorm() + dys;
      double rhs = saddle_dist_sq_bound(eps_hat, eps_dual, p.mu_x, p.mu_y,
                                        p.L_xy);
      w.add(lhs - rhs - 1e-8);

      double bound = gap_upper_from_distances(
          (xb - px).norm(), (yb - qy).norm(), p.lip_x, p.lip_y, p.L_xy,
          p.mu_x, p.mu_y);
      w.add(gap - bound - 1e-8);
    }
    for (int i = 0; i < 3; ++i) {
      Vec xb = random_point_in_ball(*mx, sx, rng);
      Vec ybr = best_response_max_y(p, xb, 1e-12);
      w.add((ybr - ystar_of(xb)).norm() - 1e-5);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = num(npoints) + " points; all four gap/distance conversions "
                "hold, closed-form and solver best responses agree";
  });
}

CheckItem check_envelope_strong_convexity(std::uint64_t seed) {
  return guarded("envelope_strong_convexity", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    {
      auto mx = make_euclidean(2);
      auto my = make_euclidean(2);
      double a = 1.2, b = 0.8;
      SyntheticSaddleProblem sp = make_synth_instance(
          mx, my, a, b, 0.45 * std::sqrt(a * b), 1.0, 1.0, seed + 80);
      const MinMaxProblem& p = sp.problem;
      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      double tol = 1e-10;
      auto phi = [&](const Vec& x) {
        Vec yb = best_response_max_y(p, x, tol);
        return p.f(x, yb);
      };
      for (int i = 0; i < 10; ++i) {
        Vec x1 = random_point_in_ball(*mx, sx, rng);
        Vec x2 = random_point_in_ball(*mx, sx, rng);
        Vec mid = 0.5 * (x1 + x2);
        double d = (x1 - x2).norm();
        double lhs = phi(mid);
        double rhs = 0.5 * phi(x1) + 0.5 * phi(x2) - p.mu_x / 8.0 * d * d;
        w.add(lhs - rhs - 1e-7 - 3.0 * tol);
      }
    }
    {
      auto mx = make_hyperboloid(2);
      auto my = make_euclidean(2);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, 1.0, 1.0, 0.3, 1.0, 1.0, seed + 81);
      const MinMaxProblem& p = sp.problem;
      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      double tol = 1e-10;
      auto phi = [&](const Vec& x) {
        Vec yb = best_response_max_y(p, x, tol);
        return p.f(x, yb);
      };
      for (int i = 0; i < 10; ++i) {
        Vec x1 = random_point_in_ball(*mx, sx, rng);
        Vec x2 = random_point_in_ball(*mx, sx, rng);
        Vec mid = mx->exp(x1, 0.5 * mx->log(x1, x2));
        double d = mx->distance(x1, x2);
        double lhs = phi(mid);
        double rhs = 0.5 * phi(x1) + 0.5 * phi(x2) - p.mu_x / 8.0 * d * d;
        w.add(lhs - rhs - 1e-7 - 3.0 * tol);
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "max-envelope midpoint inequality with the declared x-side "
                "modulus, flat and curved";
  });
}

CheckItem check_sion_grids(int ninstances, std::uint64_t seed) {
  return guarded("sion_minmax_equals_maxmin", [=](CheckItem& it) {
    Worst w;
    int ok_count = 0;
    double graderr = 0.0;
    for (int i = 0; i < ninstances; ++i) {
      Rng rng(seed + i);
      ManifoldPtr mx, my;
      switch (i % 5) {
        case 0:
          mx = make_euclidean(1);
          my = make_euclidean(1);
          break;
        case 1:
          mx = make_hyperboloid(1);
          my = make_euclidean(1);
          break;
        case 2:
          mx = make_euclidean(1);
          my = make_hyperboloid(1);
          break;
        case 3:
          mx = make_hyperboloid(1);
          my = make_hyperboloid(1);
          break;
        default:
          mx = make_euclidean(2);
          my = make_hyperboloid(1);
          break;
      }
      Mat C(mx->dim(), my->dim());
      for (int r = 0; r < C.rows(); ++r) {
        for (int cl = 0; cl < C.cols(); ++cl) {
          C(r, cl) = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        }
      }
      MinMaxProblem p = make_bilinear_cc(mx, my, C, 0.8, 0.8);
      if (i == 0) {
        Rng grng(seed + 900);
        GeodesicBall bx = p.ball_x;
        GeodesicBall by = p.ball_y;
        Vec xs = random_point_in_ball(*mx, bx, grng);
        Vec ys = random_point_in_ball(*my, by, grng);
        graderr = minmax_gradient_check(p, xs, ys, 1e-5, 8, seed + 901);
        w.add(graderr - 1e-5);
      }
      SionCheck sc = sion_check(p, 81, seed + 300 + i);
      if (sc.ok) ++ok_count;
      w.add(sc.discrepancy - sc.bound);
    }
    it.slack = w.v;
    it.pass = ok_count == ninstances && w.v <= 0.0;
    it.detail = num(ok_count) + "/" + num(ninstances) +
                " grid instances within the Lipschitz-mesh bound; bilinear "
                "gradient check " +
                num(graderr);
  });
}

CheckItem check_best_response_lipschitz(int npairs, std::uint64_t seed) {
  return guarded("best_response_lipschitz", [=](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    int half = npairs / 2;
    for (int block = 0; block < 2; ++block) {
      ManifoldPtr mx = block ? make_hyperboloid(2) : make_euclidean(2);
      ManifoldPtr my = block ? make_hyperboloid(2) : make_euclidean(2);
      double a = block ? 1.0 : 1.1;
      double b = block ? 1.0 : 0.9;
      double scale = (block ? 0.3 : 0.45) * std::sqrt(a * b);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, a, b, scale, 1.0, 1.0, seed + 90 + block);
      const MinMaxProblem& p = sp.problem;
      double lipbr = best_response_lipschitz(p.L_xy, p.mu_y);
      GeodesicBall sx = make_ball(make_point(mx, sp.saddle_x), 0.9);
      int n = block == 0 ? half : npairs - half;
      for (int i = 0; i < n; ++i) {
        Vec x = random_point_in_ball(*mx, sx, rng);
        Vec z = random_point_in_ball(*mx, sx, rng);
        Vec yx = best_response_max_y(p, x, 1e-16);
        Vec yz = best_response_max_y(p, z, 1e-16);
        double lhs = my->distance(yx, yz);
        double rhs = lipbr * mx->distance(x, z) + 1e-6;
        w.add(lhs - rhs);
      }
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = num(npairs) + " pairs across flat and curved instances, "
                "allowance 1e-6";
  });
}

CheckItem check_ramma_schedule_invariants(std::uint64_t seed) {
  return guarded("meta_schedule_invariants", [seed](CheckItem& it) {
    Worst w;
    {
      MinMaxProblem p;
      p.mx = make_euclidean(2);
      p.my = make_euclidean(2);
      p.ball_x = make_ball(make_point(p.mx, Vec::Zero(2)), 1.0);
      p.ball_y = make_ball(make_point(p.my, Vec::Zero(2)), 1.0);
      p.f = [](const Vec&, const Vec&) { return 0.0; };
      p.grad_x = [](const Vec& x, const Vec&) { return Vec(Vec::Zero(x.size())); };
      p.grad_y = [](const Vec&, const Vec& y) { return Vec(Vec::Zero(y.size())); };
      p.mu_x = 1.0;
      p.mu_y = 1.0;
      p.L_x = 2.0;
      p.L_y = 2.0;
      p.L_xy = 2.0;
      p.lip_x = 4.0;
      p.lip_y = 4.0;
      RammaSchedule s = make_ramma_schedule(p, 1e-3);
      w.add(std::abs(s.eta_x - 1.0 / 11.0) - 1e-15);
      w.add(std::abs(s.eta_y - 1.0 / 11.0) - 1e-15);
      w.add(std::abs(s.lambda_y - 1.0 / 11.0) - 1e-15);
      w.add(std::abs(s.lambda_hat - 1.0 / 121.0) - 1e-15);
      w.add(std::abs(s.xi - 1.0) - 1e-15);
    }
    for (int i = 0; i < 10; ++i) {
      Rng rng(seed + i);
      auto mx = make_euclidean(2);
      auto my = make_euclidean(2);
      double a = rng.uniform(0.5, 2.0);
      double b = rng.uniform(0.5, 2.0);
      double scale = rng.uniform(0.1, 1.0) * std::sqrt(a * b);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, a, b, scale, 1.0, 1.0, seed + 200 + i);
      RammaSchedule s = make_ramma_schedule(sp.problem, 1e-4);
      for (double v : {s.eta_x, s.eta_y, s.lambda_y, s.lambda_hat, s.eps1,
                       s.eps1_hat, s.eps2, s.eps3, s.eps3_hat, s.eps4, s.eps5,
                       s.C, s.C_k, s.C_l}) {
        if (!(v > 0.0) || !std::isfinite(v)) w.add(1.0);
      }
      for (std::int64_t T : {s.T1, s.T2, s.T3, s.T4, s.T5}) {
        if (T < 1) w.add(1.0);
      }
      double decouple = 0.5 / std::sqrt(s.eta_x * s.eta_y);
      w.add(sp.problem.L_xy - decouple * (1.0 + 1e-12));
      if (!(s.total_calls() > 0.0)) w.add(1.0);
    }
    {
      auto mx = make_euclidean(1);
      auto my = make_euclidean(1);
      Mat C(1, 1);
      C(0, 0) = 1.0;
      MinMaxProblem p = make_bilinear_cc(mx, my, C, 0.5, 0.5);
      Vec x0 = Vec::Zero(1);
      Vec y0 = Vec::Zero(1);
      ReducedProblem r = reduce_to_scsc(p, 0.1, x0, y0);
      w.add(std::abs(r.coeff - 0.025) - 1e-15);
      w.add(std::abs(r.problem.mu_x - 0.05) - 1e-15);
      w.add(std::abs(r.problem.mu_y - 0.05) - 1e-15);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "frozen step sizes, positivity and decoupling over random "
                "schedules, reduction coefficient";
  });
}

CheckItem check_gradient_oracles(std::uint64_t seed) {
  return guarded("gradient_oracles", [seed](CheckItem& it) {
    Rng rng(seed);
    Worst w;
    double worst_err = 0.0;
    {
      Vec c(3);
      c << 1.0, 3.0, 10.0;
      Vec t(3);
      t << 0.2, -0.1, 0.3;
      DiagQuadratic q = make_diag_quadratic(c, t, Vec::Zero(3), 1.0);
      for (int i = 0; i < 3; ++i) {
        Vec x = random_point_in_ball(*q.problem.manifold, q.problem.feasible,
                                     rng);
        double err = finite_diff_gradient_check(*q.problem.manifold, q.problem.f,
                                                q.problem.grad, x, 1e-5, 8, rng);
        worst_err = std::max(worst_err, err);
        w.add(err - 1e-5);
      }
      auto bad_grad = [&q](const Vec& x) {
        Vec g = q.problem.grad(x);
        g(0) *= 1.1;
        return g;
      };
      Vec x = Vec::Zero(3);
      x(0) = 0.5;
      x(1) = 0.4;
      double err = finite_diff_gradient_check(*q.problem.manifold, q.problem.f,
                                              bad_grad, x, 1e-5, 16, rng);
      if (err <= 1e-4) w.add(1.0);
    }
    {
      auto mh = make_hyperboloid(2);
      Vec origin = manifold_origin(*mh);
      GeodesicBall inner = make_ball(make_point(mh, origin), 0.7);
      Mat anchors(mh->ambient_dim(), 3);
      for (int j = 0; j < 3; ++j) {
        anchors.col(j) = random_point_in_ball(*mh, inner, rng);
      }
      RobustKarcherProblem kp =
          make_robust_karcher(mh, anchors, origin, 1.2, 0.15, 1.0);
      Vec x = random_point_in_ball(*mh, kp.problem.ball_x, rng);
      Vec z = random_point_in_ball(*kp.problem.my, kp.problem.ball_y, rng);
      double err = minmax_gradient_check(kp.problem, x, z, 1e-5, 8, seed + 5);
      worst_err = std::max(worst_err, err);
      w.add(err - 1e-5);
    }
    {
      auto mx = make_euclidean(2);
      auto my = make_hyperboloid(2);
      SyntheticSaddleProblem sp =
          make_synth_instance(mx, my, 1.0, 1.0, 0.4, 1.0, 1.0, seed + 6);
      Vec x = random_point_in_ball(*mx, sp.problem.ball_x, rng);
      Vec y = random_point_in_ball(*my, sp.problem.ball_y, rng);
      double err = minmax_gradient_check(sp.problem, x, y, 1e-5, 8, seed + 7);
      worst_err = std::max(worst_err, err);
      w.add(err - 1e-5);
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = "central differences vs declared gradients, worst error " +
                num(worst_err) + "; corrupted oracle detected";
  });
}

CheckItem check_determinism() {
  return guarded("seeded_rerun_determinism", [](CheckItem& it) {
    auto run_csv = [](const std::string& text) {
      Config cfg = Config::parse_string(text, "<determinism>");
      ExperimentResult r = run_experiment(cfg);
      return trace_to_csv(r.trace);
    };
    std::string quad_cfg =
        "problem.name = quadratic\n"
        "problem.dim = 3\n"
        "problem.kappa = 30\n"
        "problem.seed = 5\n"
        "solver.name = prgd\n"
        "solver.epsilon = 1e-10\n";
    std::string synth_cfg =
        "problem.name = synthetic\n"
        "problem.manifold_x = hyperboloid\n"
        "problem.manifold_y = euclidean\n"
        "problem.dim_x = 2\n"
        "problem.dim_y = 2\n"
        "problem.a = 1.0\n"
        "problem.b = 1.0\n"
        "problem.coupling_scale = 0.3\n"
        "problem.seed = 2\n"
        "solver.name = rceg\n"
        "solver.T = 10\n";
    bool same_quad = run_csv(quad_cfg) == run_csv(quad_cfg);
    bool same_synth = run_csv(synth_cfg) == run_csv(synth_cfg);

    std::string csv = run_csv(quad_cfg);
    RunTrace parsed = parse_trace_csv(csv);
    bool roundtrip = trace_to_csv(parsed) == csv;

    it.pass = same_quad && same_synth && roundtrip;
    it.slack = it.pass ? -1.0 : 1.0;
    it.detail = std::string("quadratic rerun ") +
                (same_quad ? "identical" : "DIFFERS") + ", saddle rerun " +
                (same_synth ? "identical" : "DIFFERS") + ", csv round-trip " +
                (roundtrip ? "identical" : "DIFFERS");
  });
}

CheckItem check_shipped_configs(const std::string& config_dir) {
  return guarded("shipped_configs", [config_dir](CheckItem& it) {
    namespace fs = std::filesystem;
    if (config_dir.empty() || !fs::exists(config_dir)) {
      it.pass = true;
      it.detail = "no config directory; skipped";
      return;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config_dir)) {
      if (entry.path().extension() == ".cfg") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      it.pass = true;
      it.detail = "no configs found; skipped";
      return;
    }
    Worst w;
    std::ostringstream detail;
    double max_seconds = 0.0;
    for (const auto& file : files) {
      Config cfg = Config::parse_file(file.string());
      auto t0 = std::chrono::steady_clock::now();
      ExperimentResult r = run_experiment(cfg);
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      max_seconds = std::max(max_seconds, secs);
      bool meta = cfg.get_string("solver.name", "") == "ramma";
      double eps = cfg.get_double("solver.epsilon", 0.0);
      if (meta && eps > 0.0) {
        w.add(r.certificate.gap - eps);
      }
      if (secs >= 300.0) w.add(secs - 300.0);
      detail << file.filename().string() << " gap=" << num(r.certificate.gap)
             << " t=" << num(secs) << "s; ";
    }
    it.slack = w.v;
    it.pass = w.v <= 0.0;
    it.detail = detail.str() + "max " + num(max_seconds) + "s";
  });
}

bool CheckReport::all_pass() const {
  for (const auto& item : items) {
    if (!item.pass) return false;
  }
  return true;
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  for (const auto& item : items) {
    os << (item.pass ? "PASS" : "FAIL") << " " << item.name;
    if (std::isfinite(item.slack)) os << " (slack " << num(item.slack) << ")";
    if (!item.detail.empty()) os << " - " << item.detail;
    os << "\n";
  }
  os << (all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
  return os.str();
}

CheckReport validate_suite(const std::string& scope,
                           const std::string& config_dir) {
  bool geo = scope == "geometry" || scope == "all";
  bool sol = scope == "solvers" || scope == "all";
  if (!geo && !sol) {
    throw ConfigError("unknown check scope '" + scope +
                      "' (expected geometry, solvers, or all)");
  }
  CheckReport rep;
  if (geo) {
    rep.items.push_back(check_zeta_delta_values());
    rep.items.push_back(check_roundtrips(11));
    rep.items.push_back(check_cosine_laws(10000, 12));
    rep.items.push_back(check_distance_hessian_bounds(13));
    rep.items.push_back(check_exp_ode(14));
    rep.items.push_back(check_schild_ladder(15));
    rep.items.push_back(check_curvature_estimates(16));
    rep.items.push_back(check_product_metric(17));
  }
  if (sol) {
    rep.items.push_back(check_prgd_contraction(20, 21));
    rep.items.push_back(check_riemacon_budget_and_duals(22));
    rep.items.push_back(check_riemacon_kappa_slope(23));
    rep.items.push_back(check_riemacon_lyapunov(24));
    rep.items.push_back(check_rceg_stay_in_ball(20, 25));
    rep.items.push_back(check_rabr_lyapunov(26));
    rep.items.push_back(check_rabr_decoupling(27));
    rep.items.push_back(check_gap_toolkit(1000, 28));
    rep.items.push_back(check_envelope_strong_convexity(29));
    rep.items.push_back(check_sion_grids(10, 30));
    rep.items.push_back(check_best_response_lipschitz(500, 31));
    rep.items.push_back(check_ramma_schedule_invariants(32));
    rep.items.push_back(check_gradient_oracles(33));
    rep.items.push_back(check_determinism());
    rep.items.push_back(check_shipped_configs(config_dir));
  }
  return rep;
}

}  // namespace rminmax
