#include "rminmax/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rminmax/log.hpp"
#include "rminmax/rng.hpp"

namespace rminmax {

namespace {

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string g6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string json_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return g17(v);
}

ManifoldPtr make_named_manifold(const std::string& key, const std::string& name,
                                std::int64_t dim) {
  if (dim < 1) {
    throw ConfigError("config: key '" + key + "' needs dimension >= 1");
  }
  if (name == "euclidean") return make_euclidean(static_cast<int>(dim));
  if (name == "hyperboloid") return make_hyperboloid(static_cast<int>(dim));
  throw ConfigError("config: key '" + key + "' names unknown manifold '" +
                    name + "' (euclidean, hyperboloid)");
}

Vec cfg_vec(const Config& cfg, const std::string& key, Eigen::Index size) {
  std::vector<double> v = cfg.get_vector(key);
  if (static_cast<Eigen::Index>(v.size()) != size) {
    throw ConfigError("config: key '" + key + "' expects " +
                      std::to_string(size) + " numbers, got " +
                      std::to_string(v.size()));
  }
  return Eigen::Map<Vec>(v.data(), size);
}

Vec cfg_point(const Config& cfg, const std::string& key, const Manifold& m) {
  Vec raw = cfg_vec(cfg, key, m.ambient_dim());
  Vec proj = m.project_point(raw);
  if ((raw - proj).norm() > 1e-6) {
    throw ConfigError("config: key '" + key +
                      "' is not on the declared manifold");
  }
  return proj;
}

void build_quadratic(const Config& cfg, ExperimentSetup& s) {
  std::int64_t dim = cfg.get_int("problem.dim", 2);
  if (dim < 1) throw ConfigError("config: key 'problem.dim' must be >= 1");
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("problem.seed", 1));
  double radius = cfg.get_double("problem.radius", 1.0);
  if (!(radius > 0)) {
    throw ConfigError("config: key 'problem.radius' must be positive");
  }
  ManifoldPtr em = make_euclidean(static_cast<int>(dim));
  Vec center = cfg.has("problem.center") ? cfg_vec(cfg, "problem.center", dim)
                                         : Vec::Zero(dim).eval();
  Vec c;
  if (cfg.has("problem.coeffs")) {
    c = cfg_vec(cfg, "problem.coeffs", dim);
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      if (c[i] < 0) {
        throw ConfigError("config: key 'problem.coeffs' must be nonnegative");
      }
    }
  } else {
    double kappa = cfg.get_double("problem.kappa", 10.0);
    if (!(kappa >= 1.0)) {
      throw ConfigError("config: key 'problem.kappa' must be >= 1");
    }
    c = Vec::Ones(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      double fr = dim > 1 ? static_cast<double>(i) / static_cast<double>(dim - 1)
                          : 1.0;
      c[i] = std::pow(kappa, fr);
    }
  }
  Vec target;
  if (cfg.has("problem.target")) {
    target = cfg_vec(cfg, "problem.target", dim);
  } else {
    Rng rng(seed);
    GeodesicBall inner = make_ball(make_point(em, center), 0.4 * radius);
    target = random_point_in_ball(*em, inner, rng);
  }
  s.quad = std::make_shared<DiagQuadratic>(
      make_diag_quadratic(c, target, center, radius));
  s.gproblem = s.quad->problem;
  s.has_ref = true;
  s.ref_x = s.quad->minimizer();
  s.ref_value = s.quad->min_value();
  if (cfg.has("problem.start")) {
    s.x0 = cfg_vec(cfg, "problem.start", dim);
  } else {
    Rng rng(seed + 1);
    GeodesicBall b = make_ball(make_point(em, center), 0.9 * radius);
    s.x0 = random_point_in_ball(*em, b, rng);
  }
}

void build_karcher(const Config& cfg, ExperimentSetup& s) {
  std::string mname = cfg.get_string("problem.manifold", "hyperboloid");
  std::int64_t dim = cfg.get_int("problem.dim", 2);
  ManifoldPtr mx = make_named_manifold("problem.manifold", mname, dim);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("problem.seed", 1));
  double spread = cfg.get_double("problem.spread", 0.8);
  double lambda_w = cfg.get_double("problem.lambda_w", 1.0);
  Vec base = cfg.has("problem.x_center")
                 ? cfg_point(cfg, "problem.x_center", *mx)
                 : manifold_origin(*mx);

  Mat anchors;
  std::vector<std::string> inline_keys = cfg.keys_with_prefix("problem.anchor.");
  if (cfg.has("problem.anchors_csv")) {
    std::vector<Vec> pts = read_points_csv(cfg.get_string("problem.anchors_csv"));
    anchors.resize(mx->ambient_dim(), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != mx->ambient_dim()) {
        throw ConfigError(
            "config: key 'problem.anchors_csv' rows must have the ambient "
            "width " +
            std::to_string(mx->ambient_dim()));
      }
      anchors.col(static_cast<Eigen::Index>(i)) = mx->project_point(pts[i]);
    }
  } else if (!inline_keys.empty()) {
    anchors.resize(mx->ambient_dim(),
                   static_cast<Eigen::Index>(inline_keys.size()));
    for (std::size_t i = 0; i < inline_keys.size(); ++i) {
      anchors.col(static_cast<Eigen::Index>(i)) =
          cfg_point(cfg, inline_keys[i], *mx);
    }
  } else {
    std::int64_t m = cfg.get_int("problem.m", 3);
    if (m < 2) throw ConfigError("config: key 'problem.m' must be >= 2");
    Rng rng(seed);
    GeodesicBall b = make_ball(make_point(mx, base), spread);
    anchors.resize(mx->ambient_dim(), m);
    for (std::int64_t i = 0; i < m; ++i) {
      anchors.col(i) = random_point_in_ball(*mx, b, rng);
    }
  }
  std::int64_t m = anchors.cols();
  double x_radius = cfg.get_double("problem.x_radius", spread + 0.7);
  double z_radius =
      cfg.get_double("problem.z_radius", 0.5 / static_cast<double>(m));
  s.karcher = std::make_shared<RobustKarcherProblem>(make_robust_karcher(
      mx, anchors, base, x_radius, z_radius, lambda_w));
  s.mproblem = s.karcher->problem;
  s.minmax = true;
  if (cfg.has("problem.start_x")) {
    s.x0 = cfg_point(cfg, "problem.start_x", *mx);
  } else {
    Rng rng(seed + 17);
    GeodesicBall b = make_ball(make_point(mx, base), 0.9 * x_radius);
    s.x0 = random_point_in_ball(*mx, b, rng);
  }
  s.y0 = cfg.has("problem.start_y")
             ? cfg_vec(cfg, "problem.start_y", m - 1)
             : Vec::Zero(m - 1).eval();
}

void build_synthetic(const Config& cfg, ExperimentSetup& s) {
  std::string shared = cfg.get_string("problem.manifold", "euclidean");
  std::string mxname = cfg.get_string("problem.manifold_x", shared);
  std::string myname = cfg.get_string("problem.manifold_y", shared);
  std::int64_t shared_dim = cfg.get_int("problem.dim", 2);
  std::int64_t dim_x = cfg.get_int("problem.dim_x", shared_dim);
  std::int64_t dim_y = cfg.get_int("problem.dim_y", shared_dim);
  ManifoldPtr mx = make_named_manifold("problem.manifold_x", mxname, dim_x);
  ManifoldPtr my = make_named_manifold("problem.manifold_y", myname, dim_y);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("problem.seed", 1));

  SyntheticSaddleConfig sc;
  sc.a = cfg.get_double("problem.a", 1.0);
  sc.b = cfg.get_double("problem.b", 1.0);
  if (sc.a < 0 || sc.b < 0) {
    throw ConfigError("config: keys 'problem.a'/'problem.b' must be >= 0");
  }
  sc.margin = cfg.get_double("problem.margin", 0.05);
  sc.measure_samples = static_cast<int>(cfg.get_int("problem.samples", 48));
  sc.seed = seed;
  double rx = cfg.get_double("problem.x_radius", 1.0);
  double ry = cfg.get_double("problem.y_radius", 1.0);

  if (cfg.has("problem.coupling")) {
    Vec flat = cfg_vec(cfg, "problem.coupling", dim_x * dim_y);
    sc.A.resize(dim_x, dim_y);
    for (Eigen::Index i = 0; i < dim_x; ++i) {
      for (Eigen::Index j = 0; j < dim_y; ++j) {
        sc.A(i, j) = flat[i * dim_y + j];
      }
    }
  } else {
    double dflt = (sc.a > 0 && sc.b > 0) ? 0.4 * std::sqrt(sc.a * sc.b) : 1.0;
    double scale = cfg.get_double("problem.coupling_scale", dflt);
    if (scale < 0) {
      throw ConfigError("config: key 'problem.coupling_scale' must be >= 0");
    }
    sc.A = Mat::Zero(dim_x, dim_y);
    if (scale > 0) {
      Rng rng(seed + 3);
      Mat g(dim_x, dim_y);
      for (Eigen::Index i = 0; i < dim_x; ++i) {
        for (Eigen::Index j = 0; j < dim_y; ++j) g(i, j) = rng.normal();
      }
      double smax = g.jacobiSvd().singularValues()(0);
      if (smax > 0) sc.A = g * (scale / smax);
    }
  }

  Vec p = cfg.has("problem.p") ? cfg_point(cfg, "problem.p", *mx)
                               : manifold_origin(*mx);
  Vec q = cfg.has("problem.q") ? cfg_point(cfg, "problem.q", *my)
                               : manifold_origin(*my);
  s.synthetic = std::make_shared<SyntheticSaddleProblem>(
      make_synthetic_saddle(mx, my, p, q, rx, ry, sc));
  s.mproblem = s.synthetic->problem;
  s.minmax = true;
  s.has_ref = true;
  s.ref_x = s.synthetic->saddle_x;
  s.ref_y = s.synthetic->saddle_y;
  s.ref_value = s.mproblem.f(s.ref_x, s.ref_y);
  if (cfg.has("problem.start_x")) {
    s.x0 = cfg_point(cfg, "problem.start_x", *mx);
  } else {
    Rng rng(seed + 5);
    s.x0 = random_point_in_ball(*mx, make_ball(make_point(mx, p), 0.9 * rx),
                                rng);
  }
  if (cfg.has("problem.start_y")) {
    s.y0 = cfg_point(cfg, "problem.start_y", *my);
  } else {
    Rng rng(seed + 6);
    s.y0 = random_point_in_ball(*my, make_ball(make_point(my, q), 0.9 * ry),
                                rng);
  }
}

void build_bilinear(const Config& cfg, ExperimentSetup& s) {
  std::string shared = cfg.get_string("problem.manifold", "euclidean");
  std::string mxname = cfg.get_string("problem.manifold_x", shared);
  std::string myname = cfg.get_string("problem.manifold_y", shared);
  std::int64_t shared_dim = cfg.get_int("problem.dim", 2);
  std::int64_t dim_x = cfg.get_int("problem.dim_x", shared_dim);
  std::int64_t dim_y = cfg.get_int("problem.dim_y", shared_dim);
  ManifoldPtr mx = make_named_manifold("problem.manifold_x", mxname, dim_x);
  ManifoldPtr my = make_named_manifold("problem.manifold_y", myname, dim_y);
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("problem.seed", 1));

  double a = cfg.get_double("problem.a", 0.0);
  double b = cfg.get_double("problem.b", 0.0);
  double rx = cfg.get_double("problem.x_radius", 1.0);
  double ry = cfg.get_double("problem.y_radius", 1.0);

  Mat C;
  if (cfg.has("problem.coupling")) {
    Vec flat = cfg_vec(cfg, "problem.coupling", dim_x * dim_y);
    C.resize(dim_x, dim_y);
    for (Eigen::Index i = 0; i < dim_x; ++i) {
      for (Eigen::Index j = 0; j < dim_y; ++j) C(i, j) = flat[i * dim_y + j];
    }
  } else {
    double scale = cfg.get_double("problem.coupling_scale", 1.0);
    if (!(scale > 0)) {
      throw ConfigError("config: key 'problem.coupling_scale' must be positive");
    }
    Rng rng(seed + 3);
    C.resize(dim_x, dim_y);
    for (Eigen::Index i = 0; i < dim_x; ++i) {
      for (Eigen::Index j = 0; j < dim_y; ++j) C(i, j) = rng.normal();
    }
    double smax = C.jacobiSvd().singularValues()(0);
    if (smax > 0) C *= scale / smax;
  }

  Vec p = cfg.has("problem.p") ? cfg_point(cfg, "problem.p", *mx)
                               : manifold_origin(*mx);
  Vec q = cfg.has("problem.q") ? cfg_point(cfg, "problem.q", *my)
                               : manifold_origin(*my);
  s.mproblem = make_bilinear_saddle(mx, my, p, q, C, rx, ry, a, b);
  s.minmax = true;
  s.has_ref = true;
  s.ref_x = s.mproblem.ball_x.center.coords;
  s.ref_y = s.mproblem.ball_y.center.coords;
  s.ref_value = s.mproblem.f(s.ref_x, s.ref_y);
  if (cfg.has("problem.start_x")) {
    s.x0 = cfg_point(cfg, "problem.start_x", *mx);
  } else {
    Rng rng(seed + 5);
    s.x0 = random_point_in_ball(*mx, make_ball(make_point(mx, p), 0.9 * rx),
                                rng);
  }
  if (cfg.has("problem.start_y")) {
    s.y0 = cfg_point(cfg, "problem.start_y", *my);
  } else {
    Rng rng(seed + 6);
    s.y0 = random_point_in_ball(*my, make_ball(make_point(my, q), 0.9 * ry),
                                rng);
  }
}

SaddleCertificate certify_minmax(const MinMaxProblem& p, const Vec& x,
                                 const Vec& y, bool has_ref, const Vec& ref_x,
                                 const Vec& ref_y, double tol) {
  SaddleCertificate c;
  Vec yb = best_response_max_y(p, x, tol);
  Vec xb = best_response_min_x(p, y, tol);
  double fxy = p.f(x, y);
  c.gap_x = p.f(x, yb) - fxy;
  c.gap_y = fxy - p.f(xb, y);
  c.gap = c.gap_x + c.gap_y;
  c.method = "brute_force";
  if (has_ref) {
    c.dist_sq = std::pow(p.mx->distance(x, ref_x), 2) +
                std::pow(p.my->distance(y, ref_y), 2);
  } else if (p.mu_x > 0 && p.mu_y > 0 && c.gap >= 0) {
    c.dist_sq = primal_dist_sq_bound(c.gap, p.mu_x) +
                primal_dist_sq_bound(c.gap, p.mu_y);
  }
  return c;
}

SaddleCertificate certify_gconvex(const GConvexProblem& p, const Vec& x,
                                  bool has_ref, const Vec& ref_x,
                                  double ref_value) {
  SaddleCertificate c;
  c.gap_y = 0.0;
  if (has_ref) {
    c.gap = p.f(x) - ref_value;
    c.gap_x = c.gap;
    c.dist_sq = std::pow(p.manifold->distance(x, ref_x), 2);
    c.method = "reference_value";
  } else if (p.mu > 0) {
    double gn = p.manifold->norm(x, p.grad(x));
    c.gap = strong_convexity_gap_cert(gn, p.mu);
    c.gap_x = c.gap;
    c.dist_sq = 2.0 * c.gap / p.mu;
    c.method = "grad_norm_cert";
  } else {
    c.method = "none";
  }
  return c;
}

}  // namespace

Vec manifold_origin(const Manifold& m) {
  if (m.ambient_dim() == m.dim()) return Vec::Zero(m.ambient_dim());
  Vec o = Vec::Zero(m.ambient_dim());
  o[0] = 1.0;
  return m.project_point(o);
}

ExperimentSetup build_problem(const Config& cfg) {
  ExperimentSetup s;
  s.problem_name = cfg.get_string("problem.name");
  if (s.problem_name == "quadratic") {
    build_quadratic(cfg, s);
  } else if (s.problem_name == "karcher") {
    build_karcher(cfg, s);
  } else if (s.problem_name == "synthetic") {
    build_synthetic(cfg, s);
  } else if (s.problem_name == "bilinear") {
    build_bilinear(cfg, s);
  } else {
    throw ConfigError("config: key 'problem.name' names unknown problem '" +
                      s.problem_name +
                      "' (quadratic, karcher, synthetic, bilinear)");
  }
  return s;
}

std::string SaddleCertificate::to_json() const {
  std::ostringstream os;
  os << "{\"gap\": " << json_number(gap) << ", \"gap_x\": " << json_number(gap_x)
     << ", \"gap_y\": " << json_number(gap_y)
     << ", \"dist_sq\": " << json_number(dist_sq) << ", \"method\": \""
     << method << "\"}";
  return os.str();
}

ExperimentResult run_experiment(const Config& cfg) {
  ExperimentResult res;
  res.setup = build_problem(cfg);
  ExperimentSetup& s = res.setup;
  res.solver = cfg.get_string("solver.name");

  if (cfg.has("solver.epsilon") && !(cfg.get_double("solver.epsilon") > 0)) {
    throw ConfigError("config: key 'solver.epsilon' must be positive");
  }
  double eps = cfg.get_double("solver.epsilon", 0.0);
  std::int64_t T = cfg.get_int("solver.T", -1);
  double gap_tol = cfg.get_double("solver.gap_tol", 1e-10);
  bool timing = cfg.get_bool("output.timing", false);
  WallClock clk;
  WallClock* clock = timing ? &clk : nullptr;

  bool is_minimization =
      res.solver == "prgd" || res.solver == "riemacon_abs";
  bool is_saddle = res.solver == "rceg" || res.solver == "rabr" ||
                   res.solver == "ramma";
  if (!is_minimization && !is_saddle) {
    throw ConfigError("config: key 'solver.name' names unknown solver '" +
                      res.solver +
                      "' (prgd, riemacon_abs, rceg, rabr, ramma)");
  }
  if (is_minimization && s.minmax) {
    throw ConfigError("config: solver '" + res.solver +
                      "' needs a minimization problem, got a saddle problem");
  }
  if (is_saddle && !s.minmax) {
    throw ConfigError("config: solver '" + res.solver +
                      "' needs a saddle problem, got a minimization problem");
  }
  if (eps <= 0 && T < 0) {
    throw ConfigError(
        "config: need key 'solver.epsilon' or key 'solver.T' for solver '" +
        res.solver + "'");
  }

  std::int64_t iters = 0;
  if (res.solver == "prgd") {
    PrgdOptions o;
    o.epsilon = eps;
    o.max_iter = T;
    o.cert_stop = cfg.get_bool("solver.cert_stop", true);
    if (s.has_ref) {
      o.reference = &s.ref_x;
      o.ref_value = s.ref_value;
    }
    o.clock = clock;
    PrgdResult r = prgd(s.gproblem, s.x0, o);
    res.x = r.x;
    res.trace = std::move(r.trace);
    iters = r.iters;
  } else if (res.solver == "riemacon_abs") {
    RiemaconOptions o;
    o.lambda =
        cfg.get_double("solver.lambda", 1.0 / std::max(s.gproblem.L, 1e-12));
    if (!(o.lambda > 0)) {
      throw ConfigError("config: key 'solver.lambda' must be positive");
    }
    o.epsilon = eps;
    o.T = T;
    o.cert_stop = cfg.get_bool("solver.cert_stop", false);
    o.gconvex_dist_bound =
        cfg.get_double("solver.dist_bound", s.gproblem.feasible.diameter());
    if (s.has_ref) {
      o.reference = &s.ref_x;
      o.ref_value = s.ref_value;
    }
    o.clock = clock;
    std::string prox =
        cfg.get_string("solver.prox", s.quad ? "exact" : "prgd");
    ProxSubsolver sub;
    if (prox == "exact") {
      if (!s.quad) {
        throw ConfigError(
            "config: key 'solver.prox' = exact needs the separable quadratic "
            "problem");
      }
      sub = diag_quadratic_exact_prox(*s.quad);
    } else if (prox == "prgd") {
      sub = prgd_prox_subsolver();
    } else {
      throw ConfigError("config: key 'solver.prox' must be exact or prgd, got '" +
                        prox + "'");
    }
    RiemaconResult r = riemacon_abs(s.gproblem, s.x0, o, sub);
    res.x = r.y;
    res.trace = std::move(r.trace);
    iters = r.iters;
  } else if (res.solver == "rceg") {
    RcegOptions o;
    o.epsilon = eps;
    o.T = T;
    o.D = cfg.get_double("solver.D", 0.0);
    std::string mode = cfg.get_string("solver.mode", "auto");
    if (mode == "auto") {
      o.mode = RcegMode::Auto;
    } else if (mode == "scsc") {
      o.mode = RcegMode::StronglyConvexConcave;
    } else if (mode == "cc") {
      o.mode = RcegMode::ConvexConcave;
    } else {
      throw ConfigError(
          "config: key 'solver.mode' must be auto, scsc or cc, got '" + mode +
          "'");
    }
    if (s.has_ref) {
      o.ref_x = &s.ref_x;
      o.ref_y = &s.ref_y;
    }
    o.clock = clock;
    RcegResult r = rceg(s.mproblem, s.x0, s.y0, o);
    res.x = r.x;
    res.y = r.y;
    res.trace = std::move(r.trace);
    iters = r.iters;
  } else if (res.solver == "rabr") {
    MinMaxProblem target = s.mproblem;
    double teps = eps;
    bool reduced = s.mproblem.mu_x <= 0 || s.mproblem.mu_y <= 0;
    if (reduced) {
      if (!(eps > 0)) {
        throw ConfigError(
            "config: the convexity reduction needs key 'solver.epsilon'");
      }
      target = reduce_to_scsc(s.mproblem, eps, s.x0, s.y0).problem;
      teps = eps / 2;
    }
    RabrOptions o;
    o.epsilon = teps;
    o.T = T;
    o.rho = cfg.get_double("solver.rho", kRabrSubsolveRatio);
    if (!(o.rho > 0 && o.rho < 1)) {
      throw ConfigError("config: key 'solver.rho' must lie in (0, 1)");
    }
    std::string backend = cfg.get_string("solver.backend", "prgd");
    if (backend == "prgd") {
      o.backend = ContractionBackend::Prgd;
    } else if (backend == "accelerated") {
      o.backend = ContractionBackend::Accelerated;
    } else {
      throw ConfigError(
          "config: key 'solver.backend' must be prgd or accelerated, got '" +
          backend + "'");
    }
    if (s.has_ref && !reduced) {
      o.ref_x = &s.ref_x;
      o.ref_y = &s.ref_y;
    }
    o.clock = clock;
    RabrResult r = rabr(target, s.x0, s.y0, o);
    res.x = r.x;
    res.y = r.y;
    res.trace = std::move(r.trace);
    iters = r.iters;
  } else {  // ramma
    MinMaxProblem target = s.mproblem;
    double teps = eps;
    bool reduced = s.mproblem.mu_x <= 0 || s.mproblem.mu_y <= 0;
    if (reduced) {
      if (!(eps > 0)) {
        throw ConfigError(
            "config: the convexity reduction needs key 'solver.epsilon'");
      }
      target = reduce_to_scsc(s.mproblem, eps, s.x0, s.y0).problem;
      teps = eps / 2;
    }
    RammaOptions o;
    o.epsilon = teps;
    std::string mode = cfg.get_string("solver.mode", "practical");
    if (mode == "practical") {
      o.mode = RammaMode::Practical;
    } else if (mode == "certified") {
      o.mode = RammaMode::Certified;
    } else {
      throw ConfigError(
          "config: key 'solver.mode' must be practical or certified, got '" +
          mode + "'");
    }
    o.lipschitz_override = cfg.get_double("solver.lipschitz_override", 0.0);
    o.budget_cap = cfg.get_int("solver.budget_cap", -1);
    o.max_refine = static_cast<int>(cfg.get_int("solver.max_refine", 6));
    std::string oracle = cfg.get_string("solver.gap_oracle", "auto");
    if (oracle == "auto") {
      MinMaxProblem oracle_target = target;
      o.gap_oracle = [oracle_target, gap_tol](const Vec& x, const Vec& y) {
        return certified_gap(oracle_target, x, y, gap_tol);
      };
    } else if (oracle != "none") {
      throw ConfigError(
          "config: key 'solver.gap_oracle' must be auto or none, got '" +
          oracle + "'");
    }
    if (s.has_ref && !reduced) {
      o.ref_x = &s.ref_x;
      o.ref_y = &s.ref_y;
    }
    o.clock = clock;
    RammaResult r = ramma(target, s.x0, s.y0, o);
    res.x = r.x;
    res.y = r.y;
    res.trace = std::move(r.trace);
    iters = r.outer_iters;
  }

  OracleCounters counters =
      s.minmax ? *s.mproblem.counters : *s.gproblem.counters;

  if (s.minmax) {
    res.certificate = certify_minmax(s.mproblem, res.x, res.y, s.has_ref,
                                     s.ref_x, s.ref_y, gap_tol);
  } else {
    res.certificate =
        certify_gconvex(s.gproblem, res.x, s.has_ref, s.ref_x, s.ref_value);
  }

  res.fit_iter = rate_fit(res.trace, RateAxis::Iter, RateValue::GapUpper);
  res.fit_column = "gap_upper";
  RateValue fitted = RateValue::GapUpper;
  if (res.fit_iter.npoints < 3) {
    RateFit alt = rate_fit(res.trace, RateAxis::Iter, RateValue::DistSq);
    if (alt.npoints >= 3) {
      res.fit_iter = alt;
      res.fit_column = "dist_sq";
      fitted = RateValue::DistSq;
    } else {
      res.fit_column = "none";
    }
  }
  res.fit_calls = rate_fit(res.trace, RateAxis::GradCalls, fitted);

  double final_value =
      s.minmax ? s.mproblem.f(res.x, res.y) : s.gproblem.f(res.x);
  {
    std::ostringstream os;
    os << "problem: " << s.problem_name << "\n";
    os << "solver: " << res.solver << "\n";
    os << "iters: " << iters << "\n";
    os << "oracle calls: grad " << counters.grad << ", proj " << counters.proj
       << ", value " << counters.value << ", prox " << counters.prox << "\n";
    os << "final value: " << g6(final_value) << "\n";
    os << "certificate: " << res.certificate.to_json() << "\n";
    if (res.fit_column != "none") {
      os << "rate fit (" << res.fit_column
         << "): ln-slope " << g6(res.fit_iter.slope) << " per iteration over "
         << res.fit_iter.npoints << " rows";
      if (res.fit_calls.npoints >= 2) {
        os << ", " << g6(res.fit_calls.slope) << " per gradient call";
      }
      os << "\n";
    } else {
      os << "rate fit: insufficient positive rows\n";
    }
    res.summary = os.str();
  }

  if (cfg.has("output.csv")) {
    write_trace_csv(res.trace, cfg.get_string("output.csv"));
  }
  if (cfg.has("output.plot")) {
    PlotSeries series;
    series.trace = &res.trace;
    series.label = res.solver;
    series.axis = RateAxis::Iter;
    series.value = fitted;
    PlotOptions po;
    po.title = s.problem_name + " / " + res.solver;
    po.y_label = res.fit_column == "dist_sq" ? "dist^2 to reference"
                                             : "certified gap bound";
    write_convergence_svg({series}, po, cfg.get_string("output.plot"));
  }
  if (cfg.has("output.fixture")) {
    std::ofstream f(cfg.get_string("output.fixture"), std::ios::binary);
    if (!f) {
      throw ConfigError("config: cannot write fixture file '" +
                        cfg.get_string("output.fixture") + "'");
    }
    f << "problem = " << s.problem_name << "\n";
    f << "solver = " << res.solver << "\n";
    f << "iters = " << iters << "\n";
    f << "grad_calls = " << counters.grad << "\n";
    f << "proj_calls = " << counters.proj << "\n";
    f << "value_calls = " << counters.value << "\n";
    f << "prox_calls = " << counters.prox << "\n";
    f << "final_value = " << g17(final_value) << "\n";
    f << "certificate = " << res.certificate.to_json() << "\n";
    f << "fit_column = " << res.fit_column << "\n";
    f << "fit_iter_slope = " << g17(res.fit_iter.slope) << "\n";
    f << "fit_calls_slope = " << g17(res.fit_calls.slope) << "\n";
  }

  for (const std::string& k : cfg.unused_keys()) {
    log_info("config key not used by this run: " + k);
  }
  return res;
}

}  // namespace rminmax
