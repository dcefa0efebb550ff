#include "rminmax/gconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rminmax {

double strong_convexity_gap_cert(double grad_norm, double mu) {
  if (mu <= 0.0) return std::numeric_limits<double>::infinity();
  return grad_norm * grad_norm / (2.0 * mu);
}

namespace {

double dist_sq_to(const GConvexProblem& p, const Vec& x, const Vec* ref) {
  if (!ref) return std::numeric_limits<double>::quiet_NaN();
  double d = p.manifold->distance(x, *ref);
  return d * d;
}

}  // namespace

std::int64_t prgd_budget(const GConvexProblem& p, double epsilon) {
  if (p.mu <= 0.0) {
    throw SolverError(
        "prgd: mu = 0 with an epsilon target requires an explicit iteration "
        "budget");
  }
  if (!(epsilon > 0.0)) throw SolverError("prgd_budget: epsilon must be positive");
  double kappa = p.L / p.mu;
  double R = p.lip > 0.0 ? p.lip / p.L : p.feasible.diameter();
  double zr = p.manifold->zeta_at(R);
  double D = p.feasible.diameter();
  double arg = p.L * zr * D * D / (2.0 * epsilon);
  double t = 1.0 + 2.0 * kappa * zr * std::log(std::max(arg, 1.0));
  return static_cast<std::int64_t>(std::ceil(std::max(1.0, t)));
}

PrgdResult prgd(const GConvexProblem& p, const Vec& x0, const PrgdOptions& opt) {
  const Manifold& m = *p.manifold;
  std::int64_t T = opt.max_iter >= 0 ? opt.max_iter : prgd_budget(p, opt.epsilon);
  PrgdResult res;
  Vec x = project_ball_raw(p.feasible, x0);

  auto record = [&](std::int64_t it, double gn, double step) {
    if (!opt.record_trace) return;
    TraceRow r;
    r.iter = it;
    r.grad_calls = p.counters->grad;
    r.proj_calls = p.counters->proj;
    r.value = p.value(x);
    r.gap_upper = strong_convexity_gap_cert(gn, p.mu);
    r.dist_sq = dist_sq_to(p, x, opt.reference);
    r.wall_ms = clock_ms(opt.clock);
    r.grad_norm = gn;
    r.step_dist = step;
    res.trace.add(r);
  };

  double gn = 0.0;
  for (std::int64_t t = 0; t < T; ++t) {
    Vec g = p.gradient(x);
    gn = m.norm(x, g);
    record(t, gn, std::numeric_limits<double>::quiet_NaN());
    double cert = strong_convexity_gap_cert(gn, p.mu);
    res.final_cert = cert;
    if (opt.cert_stop && opt.epsilon > 0.0 && cert <= opt.epsilon) {
      res.iters = t;
      res.x = x;
      return res;
    }
    Vec xn = p.project(m.exp(x, (-1.0 / p.L) * g));
    x = xn;
    res.iters = t + 1;
  }
  Vec g = p.gradient(x);
  gn = m.norm(x, g);
  res.final_cert = strong_convexity_gap_cert(gn, p.mu);
  record(T, gn, std::numeric_limits<double>::quiet_NaN());
  res.x = x;
  return res;
}

CompositeResult composite_rgd(
    const GConvexProblem& smooth_part,
    const std::function<double(const Vec&)>& g_value,
    const std::function<Vec(const Vec&, const Vec&)>& inner_solver,
    double mu_g, const Vec& x0, std::int64_t budget, const Vec* reference,
    double ref_value) {
  if (budget <= 0) throw SolverError("composite_rgd: budget must be positive");
  if (mu_g <= 0.0) throw SolverError("composite_rgd: g must be strongly g-convex");
  CompositeResult res;
  Vec x = project_ball_raw(smooth_part.feasible, x0);
  for (std::int64_t t = 0; t <= budget; ++t) {
    TraceRow r;
    r.iter = t;
    r.grad_calls = smooth_part.counters->grad;
    r.proj_calls = smooth_part.counters->proj;
    r.value = smooth_part.value(x) + g_value(x);
    if (std::isfinite(ref_value)) r.gap_upper = r.value - ref_value;
    if (reference) {
      double d = smooth_part.manifold->distance(x, *reference);
      r.dist_sq = d * d;
    }
    res.trace.add(r);
    if (t == budget) break;
    Vec gf = smooth_part.gradient(x);
    x = inner_solver(x, gf);
  }
  res.x = x;
  return res;
}

std::function<Vec(const Vec&, const Vec&)> euclidean_composite_prox_inner(
    const GConvexProblem& p, const Vec& xc, double lambda) {
  if (p.manifold->name().rfind("euclidean", 0) != 0) {
    throw SolverError(
        "composite inner step: closed form available on Euclidean models "
        "only (unsupported structure)");
  }
  return [&p, xc, lambda](const Vec& x, const Vec& grad_fx) {
    // argmin_y <c, y-x> + (L/2)||y-x||^2 + ||y-xc||^2/(2 lambda); isotropic,
    // so projecting the unconstrained solution is exact.
    double L = p.L;
    Vec y = (L * x + xc / lambda - grad_fx) / (L + 1.0 / lambda);
    ++p.counters->proj;
    return project_ball_raw(p.feasible, y);
  };
}

ProxParams make_prox_params(const GConvexProblem& p, double lambda, double eps) {
  if (!(lambda > 0.0)) throw SolverError("make_prox_params: lambda must be positive");
  ProxParams pp;
  pp.lambda = lambda;
  double Dx = p.feasible.diameter();
  pp.xi = 4.0 * p.manifold->zeta_at(2.0 * Dx) - 3.0;
  pp.mu = std::min(p.mu, 1.0 / (9.0 * pp.xi * lambda));
  if (pp.mu <= 0.0) throw SolverError("make_prox_params: mu_bar must be positive");
  pp.kappa = 1.0 / (lambda * pp.mu);
  pp.eps_hat = eps / (8.0 * std::sqrt(pp.xi) * std::pow(pp.kappa, 1.5));
  return pp;
}

ProxSubsolver prgd_prox_subsolver() {
  ProxSubsolver s;
  s.solve = [](const GConvexProblem& p, const Vec& xk, double lambda,
               double eps_hat, const Vec& warm) {
    const Manifold& m = *p.manifold;
    double Dx = p.feasible.diameter();
    double zeta2 = m.zeta_at(2.0 * Dx);
    GConvexProblem h;
    h.manifold = p.manifold;
    h.feasible = p.feasible;
    h.f = [&p, &m, xk, lambda](const Vec& y) {
      double d = m.distance(xk, y);
      return p.f(y) + d * d / (2.0 * lambda);
    };
    h.grad = [&p, &m, xk, lambda](const Vec& y) {
      // grad of d^2(xk,.)/2 at y is -log_y(xk).
      return (p.grad(y) - m.log(y, xk) / lambda).eval();
    };
    // The squared-distance term has Hessian range [1, zeta] on Hadamard
    // models (distances up to 2 Dx since xk may sit outside the ball).
    h.mu = p.mu + 1.0 / lambda;
    h.L = p.L + zeta2 / lambda;
    double R = (p.lip / p.L + Dx) / m.zeta_at(Dx);
    h.lip = h.L * R;
    h.counters = p.counters;
    PrgdOptions opt;
    opt.epsilon = eps_hat;
    opt.cert_stop = true;
    opt.record_trace = false;
    return prgd(h, warm, opt).x;
  };
  return s;
}

std::int64_t riemacon_budget(const GConvexProblem& p, double lambda,
                             double eps) {
  if (!(eps > 0.0)) throw SolverError("riemacon_budget: epsilon must be positive");
  if (p.mu <= 0.0) throw SolverError("riemacon_budget: mu_bar must be positive");
  double Dx = p.feasible.diameter();
  double xi = 4.0 * p.manifold->zeta_at(2.0 * Dx) - 3.0;
  double rate = 2.0 * std::sqrt(xi * std::max(1.0 / (lambda * p.mu), 9.0 * xi));
  double arg = 2.0 * Dx * Dx / (lambda * eps);
  double t = rate * std::log2(std::max(arg, 2.0));
  return static_cast<std::int64_t>(std::ceil(std::max(1.0, t)));
}

namespace {

RiemaconResult riemacon_gconvex_reduction(const GConvexProblem& p,
                                          const Vec& x0,
                                          const RiemaconOptions& opt,
                                          const ProxSubsolver& subsolver) {
  // mu = 0 path: regularize by (eps/D^2) d^2(x0, .) with D/2 >= d(x0, x*)
  // declared by the caller, restrict to the ball B(x0, D/2), and solve the
  // 2 eps/D^2-strongly g-convex problem to eps/2.
  double D = opt.gconvex_dist_bound;
  if (!(D > 0.0)) {
    throw SolverError(
        "riemacon_abs: mu = 0 requires a declared distance bound for the "
        "regularization path");
  }
  if (!(opt.epsilon > 0.0)) {
    throw SolverError("riemacon_abs: mu = 0 path needs an epsilon target");
  }
  const Manifold& m = *p.manifold;
  double reg = opt.epsilon / (D * D);
  GConvexProblem q;
  q.manifold = p.manifold;
  q.feasible = make_ball(make_point(p.manifold, x0), D / 2.0);
  q.f = [&p, &m, x0, reg](const Vec& x) {
    double d = m.distance(x0, x);
    return p.f(x) + reg * d * d;
  };
  q.grad = [&p, &m, x0, reg](const Vec& x) {
    return (p.grad(x) - 2.0 * reg * m.log(x, x0)).eval();
  };
  q.mu = 2.0 * reg;
  double zD = m.zeta_at(D);
  q.L = p.L + 2.0 * reg * zD;
  q.lip = p.lip > 0.0 ? p.lip + 2.0 * reg * D : 0.0;
  q.counters = p.counters;
  RiemaconOptions sub = opt;
  sub.epsilon = opt.epsilon / 2.0;
  sub.T = -1;
  sub.gconvex_dist_bound = 0.0;
  return riemacon_abs(q, x0, sub, subsolver);
}

}  // namespace

RiemaconResult riemacon_abs(const GConvexProblem& p, const Vec& x0,
                            const RiemaconOptions& opt,
                            const ProxSubsolver& subsolver) {
  if (!(opt.lambda > 0.0)) throw SolverError("riemacon_abs: lambda must be positive");
  if (p.mu <= 0.0) return riemacon_gconvex_reduction(p, x0, opt, subsolver);
  const Manifold& m = *p.manifold;
  double Dx = p.feasible.diameter();

  double epsilon = opt.epsilon;
  std::int64_t T = opt.T;
  if (T < 0 && !(epsilon > 0.0)) {
    throw SolverError("riemacon_abs: need an epsilon target or an iteration count");
  }
  if (T < 0) T = riemacon_budget(p, opt.lambda, epsilon);
  if (!(epsilon > 0.0)) {
    // Invert the iteration bound to recover the accuracy this T certifies.
    double xi0 = 4.0 * m.zeta_at(2.0 * Dx) - 3.0;
    double rate =
        2.0 * std::sqrt(xi0 * std::max(1.0 / (opt.lambda * p.mu), 9.0 * xi0));
    epsilon = 2.0 * Dx * Dx / (opt.lambda * std::exp2(static_cast<double>(T) / rate));
  }

  RiemaconResult res;
  res.params = make_prox_params(p, opt.lambda, epsilon);
  const double xi = res.params.xi;
  const double mu = res.params.mu;
  const double kappa = res.params.kappa;
  const double eps_hat = res.params.eps_hat;
  const double lambda = opt.lambda;
  const double c = 1.0 / (2.0 * std::sqrt(xi * kappa));

  auto prox = [&](const Vec& xk, const Vec& warm) {
    ++p.counters->prox;
    return subsolver.solve(p, xk, lambda, eps_hat, warm);
  };

  auto record = [&](std::int64_t k, const Vec& y) {
    if (!opt.record_trace) return;
    TraceRow r;
    r.iter = k;
    r.grad_calls = p.counters->grad;
    r.proj_calls = p.counters->proj;
    r.value = opt.eval_values ? p.value(y)
                              : std::numeric_limits<double>::quiet_NaN();
    if (opt.eval_values && std::isfinite(opt.ref_value)) {
      r.gap_upper = r.value - opt.ref_value;
    }
    r.dist_sq = dist_sq_to(p, y, opt.reference);
    r.wall_ms = clock_ms(opt.clock);
    res.trace.add(r);
  };

  Vec y = prox(x0, x0);
  Vec zbar = Vec::Zero(m.ambient_dim());  // dual vector in T_y
  double A_prev = 1.0;
  record(0, y);
  if (opt.keep_duals) {
    res.y_iter.push_back(y);
    res.dual_pre.push_back(zbar);
  }

  for (std::int64_t k = 1; k <= T; ++k) {
    double A_k = std::pow(1.0 + c, static_cast<double>(k));
    double a_k = xi * (A_k - A_prev);
    Vec xk = m.exp(y, (a_k / (A_prev + a_k)) * zbar);
    Vec yk = prox(xk, y);
    Vec v = (-1.0 / lambda) * m.log(xk, yk);
    // Pull the dual point over to T_xk through its primal representation.
    Vec zbar_x = m.log(xk, m.exp(y, zbar));
    Vec zx = (A_prev * zbar_x + (a_k / xi) * (-lambda - 2.0 / mu) * v) / A_k;
    Vec zy = m.transport(xk, yk, zx) + m.log(yk, xk);
    double nz = m.norm(yk, zy);
    zbar = nz > Dx ? (zy * (Dx / nz)).eval() : zy;
    res.dual_norms.push_back(std::min(nz, Dx));
    if (opt.keep_duals) {
      res.y_iter.push_back(yk);
      res.dual_pre.push_back(zy);
      res.x_iter.push_back(xk);
    }
    y = yk;
    A_prev = A_k;
    res.iters = k;
    record(k, y);
    if (opt.cert_stop && opt.epsilon > 0.0 && p.grad) {
      double gn = m.norm(y, p.gradient(y));
      if (strong_convexity_gap_cert(gn, p.mu) <= opt.epsilon) break;
    }
  }
  res.y = y;
  return res;
}

WarmStart warm_start_gap(const GConvexProblem& p, const Vec& xbar) {
  const Manifold& m = *p.manifold;
  Vec g = p.gradient(xbar);
  WarmStart w;
  w.grad_norm = m.norm(xbar, g);
  double R = w.grad_norm / p.L;
  w.coeff = m.zeta_at(R) * p.L / 2.0;
  w.x_prime = p.project(m.exp(xbar, (-1.0 / p.L) * g));
  return w;
}

Vec relative_contraction_solve(const GConvexProblem& p, const Vec& x0,
                               const ContractionOptions& opt) {
  if (p.mu <= 0.0) {
    throw SolverError("relative_contraction_solve: unsupported for mu = 0");
  }
  if (!(opt.rho > 0.0 && opt.rho < 1.0)) {
    throw SolverError("relative_contraction_solve: rho must lie in (0,1)");
  }
  const Manifold& m = *p.manifold;
  // Zero-gradient start is already the minimizer; any contraction holds.
  Vec g0 = p.gradient(x0);
  if (m.norm(x0, g0) <= 1e-14 * std::max(1.0, p.L * p.feasible.diameter())) {
    return x0;
  }
  double kappa = p.L / p.mu;
  if (opt.backend == ContractionBackend::Accelerated) {
    double Db = opt.dist_bound > 0.0 ? opt.dist_bound : p.feasible.diameter();
    // d^2 <= (2/mu) gap, so a gap target of rho mu Db^2 / 2 gives the ratio.
    RiemaconOptions ro;
    ro.lambda = 1.0 / p.L;
    ro.epsilon = opt.rho * p.mu * Db * Db / 2.0;
    ro.record_trace = false;
    ro.eval_values = false;
    return riemacon_abs(p, x0, ro, prgd_prox_subsolver()).y;
  }
  double R = p.lip > 0.0 ? p.lip / p.L : p.feasible.diameter();
  double zr = m.zeta_at(R);
  double zD = std::max(m.zeta_at(p.feasible.diameter()), zr);
  // Chain: gap contracts per step by (1 - 1/(4 kappa zeta_R)); the first
  // projected step bounds the initial gap by (zeta L/2) d^2(x0, x*); and
  // d^2 <= (2/mu) gap converts back.
  double t = 4.0 * kappa * zr * std::log(kappa * zD / opt.rho);
  std::int64_t T = static_cast<std::int64_t>(std::ceil(std::max(1.0, t)));
  PrgdOptions po;
  po.max_iter = T;
  po.cert_stop = false;
  po.record_trace = false;
  return prgd(p, x0, po).x;
}

}  // namespace rminmax
