#include "rminmax/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rminmax {

namespace {

CurvatureBounds joint_curvature(const MinMaxProblem& p) {
  CurvatureBounds a = p.mx->curvature();
  CurvatureBounds b = p.my->curvature();
  return CurvatureBounds{std::min(a.kmin, b.kmin), std::max(a.kmax, b.kmax)};
}

double pair_dist_sq(const MinMaxProblem& p, const Vec& x, const Vec& y,
                    const Vec* rx, const Vec* ry) {
  if (!rx || !ry) return std::numeric_limits<double>::quiet_NaN();
  double dx = p.mx->distance(x, *rx);
  double dy = p.my->distance(y, *ry);
  return dx * dx + dy * dy;
}

// Accelerated-proximal iteration bound with an explicit xi, shared by the
// outer and mid-level schedule entries.
std::int64_t acc_budget(double xi, double mu, double lambda, double diam,
                        double eps) {
  double rate = 2.0 * std::sqrt(xi * std::max(1.0 / (lambda * mu), 9.0 * xi));
  double arg = std::max(2.0 * diam * diam / (lambda * eps), 2.0);
  return static_cast<std::int64_t>(std::ceil(rate * std::log2(arg)));
}

std::int64_t contraction_budget(double init, double eps, double factor) {
  if (!(init > eps)) return 1;
  double t = std::log(init / eps) / std::log(1.0 / factor);
  return static_cast<std::int64_t>(std::ceil(std::max(1.0, t)));
}

}  // namespace

GConvexProblem x_section(const MinMaxProblem& p, const Vec& y) {
  GConvexProblem q;
  q.manifold = p.mx;
  q.feasible = p.ball_x;
  auto f = p.f;
  auto gx = p.grad_x;
  q.f = [f, y](const Vec& x) { return f(x, y); };
  q.grad = [gx, y](const Vec& x) { return gx(x, y); };
  q.mu = p.mu_x;
  q.L = p.L_x;
  q.lip = p.lip_x;
  q.counters = p.counters;
  return q;
}

GConvexProblem y_section(const MinMaxProblem& p, const Vec& x) {
  GConvexProblem q;
  q.manifold = p.my;
  q.feasible = p.ball_y;
  auto f = p.f;
  auto gy = p.grad_y;
  q.f = [f, x](const Vec& y) { return -f(x, y); };
  q.grad = [gy, x](const Vec& y) { return (-gy(x, y)).eval(); };
  q.mu = p.mu_y;
  q.L = p.L_y;
  q.lip = p.lip_y;
  q.counters = p.counters;
  return q;
}

double joint_zeta(const MinMaxProblem& p, double R) {
  return zeta(R, joint_curvature(p).kmin);
}

double joint_delta(const MinMaxProblem& p, double R) {
  return delta(R, joint_curvature(p).kmax);
}

double minmax_xi(const MinMaxProblem& p) {
  double zx = p.mx->zeta_at(2.0 * p.ball_x.diameter());
  double zy = p.my->zeta_at(2.0 * p.ball_y.diameter());
  return 4.0 * std::max(zx, zy) - 3.0;
}

// ---------------------------------------------------------------------------
// RCEG.

double rceg_mu(const MinMaxProblem& p) { return std::min(p.mu_x, p.mu_y); }

double rceg_L(const MinMaxProblem& p) {
  return std::max({p.L_x, p.L_y, p.L_xy});
}

double rceg_step_size(const MinMaxProblem& p, double D, bool scsc) {
  if (!(D > 0.0)) throw SolverError("rceg: scale parameter D must be positive");
  double zD = joint_zeta(p, D);
  double dD = joint_delta(p, D);
  double L = rceg_L(p);
  if (!scsc) return std::sqrt(dD / (4.0 * L * L * zD));
  double mu = rceg_mu(p);
  if (mu <= 0.0) {
    throw SolverError(
        "rceg: min{mu_x, mu_y} must be positive in the "
        "strongly-convex-concave mode");
  }
  return std::min(std::sqrt(dD / (8.0 * L * L * zD)), dD / (2.0 * mu));
}

RcegResult rceg(const MinMaxProblem& p, const Vec& x0, const Vec& y0,
                const RcegOptions& opt) {
  bool scsc;
  switch (opt.mode) {
    case RcegMode::StronglyConvexConcave:
      scsc = true;
      break;
    case RcegMode::ConvexConcave:
      scsc = false;
      break;
    default:
      scsc = rceg_mu(p) > 0.0;
  }
  double D = opt.D > 0.0
                 ? opt.D
                 : std::max(p.ball_x.diameter(), p.ball_y.diameter());
  double eta = rceg_step_size(p, D, scsc);
  double init = D * D / 16.0;  // D >= 4 * initial root-sum residual

  std::int64_t T = opt.T;
  if (T < 0) {
    if (!scsc) {
      throw SolverError(
          "rceg: convex-concave mode needs an explicit iteration count");
    }
    if (!(opt.epsilon > 0.0)) {
      throw SolverError("rceg: need an epsilon target or an iteration count");
    }
    double step = -std::log1p(-rceg_mu(p) * eta / 2.0);
    T = contraction_budget(init, opt.epsilon, std::exp(-step));
  }
  if (T < 1) T = 1;
  if (!scsc && T < 2) T = 2;

  const Manifold& MX = *p.mx;
  const Manifold& MY = *p.my;
  RcegResult res;
  res.eta = eta;
  res.averaged = !scsc;
  Vec x = project_ball_raw(p.ball_x, x0);
  Vec y = project_ball_raw(p.ball_y, y0);
  Vec wbar = x, zbar = y;
  double decay = scsc ? 1.0 - rceg_mu(p) * eta / 2.0 : 1.0;

  auto record = [&](std::int64_t it, const Vec& ax, const Vec& ay) {
    if (!opt.record_trace) return;
    TraceRow r;
    r.iter = it;
    r.grad_calls = p.counters->grad;
    r.proj_calls = p.counters->proj;
    r.value = p.value(ax, ay);
    if (scsc) r.gap_upper = init * std::pow(decay, static_cast<double>(it));
    r.dist_sq = pair_dist_sq(p, ax, ay, opt.ref_x, opt.ref_y);
    r.wall_ms = clock_ms(opt.clock);
    res.trace.add(r);
  };

  record(0, x, y);
  for (std::int64_t t = 0; t < T; ++t) {
    Vec gxv = p.gx(x, y);
    Vec gyv = p.gy(x, y);
    Vec w = MX.exp(x, (-eta) * gxv);
    Vec z = MY.exp(y, eta * gyv);
    Vec gxw = p.gx(w, z);
    Vec gyw = p.gy(w, z);
    Vec xn = MX.exp(w, (-eta) * gxw + MX.log(w, x));
    Vec yn = MY.exp(z, eta * gyw + MY.log(z, y));
    if (!scsc) {
      if (t == 0) {
        wbar = w;
        zbar = z;
      } else {
        wbar = MX.exp(wbar, MX.log(wbar, w) / static_cast<double>(t));
        zbar = MY.exp(zbar, MY.log(zbar, z) / static_cast<double>(t));
      }
    }
    x = xn;
    y = yn;
    if (opt.keep_iterates) {
      res.ws.push_back(w);
      res.zs.push_back(z);
      res.xs.push_back(x);
      res.ys.push_back(y);
    }
    res.iters = t + 1;
    if (t + 1 < T) record(t + 1, x, y);
  }
  if (scsc) {
    res.x = x;
    res.y = y;
  } else {
    res.x = wbar;
    res.y = zbar;
  }
  record(T, res.x, res.y);
  return res;
}

// ---------------------------------------------------------------------------
// RABR.

RabrPaperBudgets rabr_paper_budgets(const MinMaxProblem& p) {
  if (p.mu_x <= 0.0 || p.mu_y <= 0.0) {
    throw SolverError("rabr: mu_x and mu_y must be positive");
  }
  RabrPaperBudgets b;
  b.xi = minmax_xi(p);
  double ln512 = std::log(512.0);
  b.T_x = static_cast<std::int64_t>(
      std::ceil(90.0 * b.xi * std::sqrt(p.L_x / p.mu_x) * ln512));
  b.T_y = static_cast<std::int64_t>(
      std::ceil(90.0 * b.xi * std::sqrt(p.L_y / p.mu_y) * ln512));
  return b;
}

RabrResult rabr(const MinMaxProblem& p, const Vec& x0, const Vec& y0,
                const RabrOptions& opt) {
  if (p.mu_x <= 0.0 || p.mu_y <= 0.0) {
    throw SolverError("rabr: mu_x and mu_y must be positive");
  }
  double thresh = 0.5 * std::sqrt(p.mu_x * p.mu_y);
  if (!(p.L_xy < thresh)) {
    std::ostringstream os;
    os << "rabr: weak-coupling requirement L_xy < sqrt(mu_x mu_y)/2 violated "
          "(L_xy = "
       << p.L_xy << ", bound = " << thresh << ")";
    throw SolverError(os.str());
  }
  double Cw = p.mu_y / p.mu_x;
  double Dx = p.ball_x.diameter();
  double Dy = p.ball_y.diameter();
  double init = Dx * Dx + Cw * Dy * Dy;
  std::int64_t T = opt.T;
  if (T < 0) {
    if (!(opt.epsilon > 0.0)) {
      throw SolverError("rabr: need an epsilon target or an iteration count");
    }
    T = contraction_budget(init, opt.epsilon, kRabrContraction);
  }
  if (T < 1) T = 1;

  RabrResult res;
  Vec x = project_ball_raw(p.ball_x, x0);
  Vec y = project_ball_raw(p.ball_y, y0);

  auto record = [&](std::int64_t it) {
    if (!opt.record_trace) return;
    TraceRow r;
    r.iter = it;
    r.grad_calls = p.counters->grad;
    r.proj_calls = p.counters->proj;
    r.value = p.value(x, y);
    r.gap_upper = init * std::pow(kRabrContraction, static_cast<double>(it));
    r.dist_sq = pair_dist_sq(p, x, y, opt.ref_x, opt.ref_y);
    r.wall_ms = clock_ms(opt.clock);
    res.trace.add(r);
  };

  ContractionOptions co;
  co.rho = opt.rho;
  co.backend = opt.backend;
  record(0);
  for (std::int64_t t = 0; t < T; ++t) {
    GConvexProblem fx = x_section(p, y);
    x = relative_contraction_solve(fx, x, co);
    GConvexProblem fy = y_section(p, x);
    y = relative_contraction_solve(fy, y, co);
    if (opt.keep_iterates) {
      res.xs.push_back(x);
      res.ys.push_back(y);
    }
    res.iters = t + 1;
    record(t + 1);
  }
  res.x = x;
  res.y = y;
  res.residual_bound = init * std::pow(kRabrContraction, static_cast<double>(T));
  return res;
}

// ---------------------------------------------------------------------------
// RAMMA schedule.

RammaSchedule make_ramma_schedule(const MinMaxProblem& p, double eps,
                                  double lipschitz_override) {
  if (p.mu_x <= 0.0 || p.mu_y <= 0.0) {
    throw SolverError("ramma: mu_x and mu_y must be positive");
  }
  if (!(eps > 0.0)) throw SolverError("ramma: epsilon must be positive");
  RammaSchedule s;
  s.xi = minmax_xi(p);
  s.eta_x = 1.0 / (9.0 * s.xi * p.mu_x + std::max(p.L_xy, p.mu_x));
  s.eta_y = 1.0 / (9.0 * s.xi * p.mu_y + std::max(p.L_xy, p.mu_y));
  s.lambda_y = 1.0 / (std::max(p.L_y, p.L_xy) + 9.0 * s.xi * p.mu_y);
  double Dx = p.ball_x.diameter();
  double Dy = p.ball_y.diameter();
  double D = std::max(Dx, Dy);
  double zDx = p.mx->zeta_at(Dx);
  double inv_ex = 1.0 / s.eta_x;
  double inv_ey = 1.0 / s.eta_y;
  double mu_xk = p.mu_x + inv_ex;
  s.lambda_hat = 1.0 / (9.0 * s.xi * mu_xk + p.L_x + zDx * inv_ex);

  double lx = lipschitz_override > 0.0 ? lipschitz_override
                                       : D * (p.L_x + p.L_xy);
  double ly = lipschitz_override > 0.0 ? lipschitz_override
                                       : D * (p.L_y + p.L_xy);
  double lxk = lipschitz_override > 0.0 ? lipschitz_override
                                        : D * (p.L_x + p.L_xy + inv_ex);
  s.C = std::max(lx + (p.L_xy / p.mu_y) * ly, ly + (p.L_xy / p.mu_x) * lx);
  s.C_k = std::max(lxk + (p.L_xy / p.mu_y) * ly, ly + (p.L_xy / mu_xk) * lxk);
  s.C_l = D * std::max(p.L_xy * (inv_ex + p.L_x + p.L_xy) / p.mu_x + inv_ey +
                           p.L_y + p.L_xy,
                       p.L_xy * (inv_ey + p.L_y + p.L_xy) / p.mu_y + inv_ex +
                           p.L_x + p.L_xy);

  double sq = std::sqrt(s.xi);
  s.eps1 = (eps * p.mu_x / (4.0 * s.C)) /
           (2.0 * p.L_xy * p.L_xy / (p.mu_y * p.mu_y) + 1.0);
  s.eps1_hat = s.eps1 * std::pow(s.eta_x * p.mu_x, 1.5) / (8.0 * sq);
  s.eps2 = p.mu_y * eps / (8.0 * s.C);
  s.eps3 = p.mu_y * s.eps1 * s.eps1 * std::pow(p.mu_x * s.eta_x, 3.0) /
           (64.0 * s.C_k * s.C_k * s.xi *
            (2.0 * p.L_xy * p.L_xy / mu_xk + 1.0));
  s.eps3_hat = s.eps3 * std::pow(s.eta_y * p.mu_y, 1.5) / (8.0 * sq);
  s.eps4 = mu_xk * std::pow(p.mu_x * s.eta_x, 3.0) * s.eps1 * s.eps1 /
           (128.0 * s.C_k * s.C_k * s.xi);
  s.eps5 = s.eps3 * s.eps3 * (p.mu_y * s.eta_y) / (32.0 * s.xi * s.C_l * s.C_l);

  s.T1 = acc_budget(s.xi, p.mu_x, s.eta_x, Dx, s.eps1);
  s.T2 = acc_budget(s.xi, p.mu_y, s.lambda_y, Dy, s.eps2);
  s.T3 = acc_budget(s.xi, p.mu_y, s.eta_y, Dy, s.eps3);
  s.T4 = acc_budget(s.xi, mu_xk, s.lambda_hat, Dx, s.eps4);
  double mu_yl = p.mu_y + inv_ey;
  double init5 = Dx * Dx + (mu_yl / mu_xk) * Dy * Dy;
  s.T5 = contraction_budget(init5, s.eps5, kRabrContraction);
  return s;
}

// ---------------------------------------------------------------------------
// RAMMA driver.

namespace {

// Alternating best response budgeted from the best-response Lipschitz factor
// rho = L_xy^2 / (mu_x mu_y) instead of the fixed weak-coupling rate. The
// doubly regularized saddle always has rho < 1 because each modulus gains at
// least max{L_xy, mu} from its proximal term, even when the standalone
// weak-coupling margin fails (mu << L_xy after a convex-concave reduction).
// Subsolve accuracy is tightened with the contraction margin so inexact
// responses cannot erase it, and a movement-based tail bound stops early
// once the warm start is already close.
std::pair<Vec, Vec> alternating_relaxed(const MinMaxProblem& p, const Vec& x0,
                                        const Vec& y0, double eps_v) {
  if (p.mu_x <= 0.0 || p.mu_y <= 0.0) {
    throw SolverError("alternating solve: mu_x and mu_y must be positive");
  }
  double a = p.L_xy / p.mu_x;
  double b = p.L_xy / p.mu_y;
  double rho = a * b;
  if (!(rho < 1.0)) {
    throw SolverError(
        "alternating solve requires L_xy^2 < mu_x mu_y on the regularized "
        "saddle");
  }
  double margin = 1.0 - rho;
  double amax = std::max({1.0, a, b});
  double kmax = std::max({1.0, p.L_x / p.mu_x, p.L_y / p.mu_y});
  double s = margin / (8.0 * amax);
  ContractionOptions co;
  co.rho = std::min(1.0 / 256.0, s * s / kmax);
  double rho_eff = rho + 0.625 * margin;
  double Cw = p.mu_y / p.mu_x;
  double Dx = p.ball_x.diameter();
  double Dy = p.ball_y.diameter();
  double init = Dx * Dx + Cw * Dy * Dy;
  double target = std::max(eps_v, 1e-300);
  std::int64_t T = contraction_budget(init, target, rho_eff * rho_eff) + 2;
  double rt = (a > 0.0 && b > 0.0) ? std::sqrt(b / a) : 1.0;
  double wconv = (a > 0.0 && b > 0.0) ? a / b + Cw : 1.0 + Cw;
  double tail = rho_eff / (1.0 - rho_eff);

  Vec x = project_ball_raw(p.ball_x, x0);
  Vec y = project_ball_raw(p.ball_y, y0);
  for (std::int64_t t = 0; t < T; ++t) {
    Vec xp = x;
    Vec yp = y;
    GConvexProblem fx = x_section(p, y);
    x = relative_contraction_solve(fx, x, co);
    GConvexProblem fy = y_section(p, x);
    y = relative_contraction_solve(fy, y, co);
    double wmov = std::max(rt * p.mx->distance(xp, x), p.my->distance(yp, y));
    double west = wmov * tail;
    if (west * west * wconv <= 0.5 * target) break;
  }
  return {x, y};
}

struct RammaEngine {
  const MinMaxProblem& p;
  const RammaOptions& opt;
  RammaSchedule sched;
  double Dx, Dy;
  double zeta2x, zeta2y;
  double lipx, lipy;
  Vec x0, y0;

  RammaEngine(const MinMaxProblem& prob, const RammaOptions& options,
              const Vec& xs, const Vec& ys)
      : p(prob), opt(options) {
    sched = make_ramma_schedule(p, opt.epsilon, opt.lipschitz_override);
    Dx = p.ball_x.diameter();
    Dy = p.ball_y.diameter();
    zeta2x = p.mx->zeta_at(2.0 * Dx);
    zeta2y = p.my->zeta_at(2.0 * Dy);
    double D = std::max(Dx, Dy);
    lipx = opt.lipschitz_override > 0.0 ? opt.lipschitz_override
                                        : D * (p.L_x + p.L_xy);
    lipy = opt.lipschitz_override > 0.0 ? opt.lipschitz_override
                                        : D * (p.L_y + p.L_xy);
    x0 = project_ball_raw(p.ball_x, xs);
    y0 = project_ball_raw(p.ball_y, ys);
  }

  bool certified() const { return opt.mode == RammaMode::Certified; }

  std::int64_t cap(std::int64_t T) const {
    if (opt.budget_cap > 0 && T > opt.budget_cap) return opt.budget_cap;
    return T;
  }

  // Envelope smoothness bounds for the dual solves.
  double phi_L() const { return p.L_x + 2.0 * p.L_xy * p.L_xy / p.mu_y; }
  double psi_L() const {
    return p.L_y + 2.0 * p.L_xy * p.L_xy / (p.mu_x + 1.0 / sched.eta_x);
  }

  // argmax_y f(x, .) to gap certificate tol.
  Vec best_response_y(const Vec& x, double tol, const Vec& warm) const {
    GConvexProblem q = y_section(p, x);
    PrgdOptions po;
    po.epsilon = tol;
    po.cert_stop = true;
    po.record_trace = false;
    return prgd(q, warm, po).x;
  }

  // x-side problem regularized at center xc with weight 1/(2 eta_x).
  GConvexProblem reg_x_problem(const Vec& yfix, const Vec& xc) const {
    GConvexProblem q;
    q.manifold = p.mx;
    q.feasible = p.ball_x;
    auto f = p.f;
    auto gx = p.grad_x;
    auto mx = p.mx;
    double ex = sched.eta_x;
    q.f = [f, mx, yfix, xc, ex](const Vec& x) {
      double d = mx->distance(xc, x);
      return f(x, yfix) + d * d / (2.0 * ex);
    };
    q.grad = [gx, mx, yfix, xc, ex](const Vec& x) {
      return (gx(x, yfix) - mx->log(x, xc) / ex).eval();
    };
    q.mu = p.mu_x + 1.0 / ex;
    q.L = p.L_x + zeta2x / ex;
    q.lip = lipx + 2.0 * Dx / ex;
    q.counters = p.counters;
    return q;
  }

  Vec reg_best_response_x(const Vec& y, const Vec& xc, double tol,
                          const Vec& warm) const {
    GConvexProblem q = reg_x_problem(y, xc);
    PrgdOptions po;
    po.epsilon = tol;
    po.cert_stop = true;
    po.record_trace = false;
    return prgd(q, warm, po).x;
  }

  // phi(x) = max_y f(x, y), gradient through the best response.
  GConvexProblem phi_problem(double danskin_tol) const {
    GConvexProblem q;
    q.manifold = p.mx;
    q.feasible = p.ball_x;
    const RammaEngine* self = this;
    q.f = [self, danskin_tol](const Vec& x) {
      Vec ys = self->best_response_y(x, danskin_tol, self->y0);
      return self->p.f(x, ys);
    };
    q.grad = [self, danskin_tol](const Vec& x) {
      Vec ys = self->best_response_y(x, danskin_tol, self->y0);
      return self->p.grad_x(x, ys);
    };
    q.mu = p.mu_x;
    q.L = phi_L();
    q.lip = lipx;
    q.counters = p.counters;
    return q;
  }

  // psi(y) = max_x {-f(x, y) - d^2(xk, x)/(2 eta_x)}, gradient through the
  // regularized best response.
  GConvexProblem psi_problem(const Vec& xk, double danskin_tol) const {
    GConvexProblem q;
    q.manifold = p.my;
    q.feasible = p.ball_y;
    const RammaEngine* self = this;
    Vec xw = project_ball_raw(p.ball_x, xk);
    q.f = [self, xk, xw, danskin_tol](const Vec& y) {
      Vec xs = self->reg_best_response_x(y, xk, danskin_tol, xw);
      GConvexProblem rq = self->reg_x_problem(y, xk);
      return -rq.f(xs);
    };
    q.grad = [self, xk, xw, danskin_tol](const Vec& y) {
      Vec xs = self->reg_best_response_x(y, xk, danskin_tol, xw);
      return (-self->p.grad_y(xs, y)).eval();
    };
    q.mu = p.mu_y;
    q.L = psi_L();
    q.lip = lipy;
    q.counters = p.counters;
    return q;
  }

  // Doubly regularized saddle used by the inner alternating solver.
  MinMaxProblem inner_saddle(const Vec& xk, const Vec& yl) const {
    MinMaxProblem g;
    g.mx = p.mx;
    g.my = p.my;
    g.ball_x = p.ball_x;
    g.ball_y = p.ball_y;
    auto f = p.f;
    auto gx = p.grad_x;
    auto gy = p.grad_y;
    auto mx = p.mx;
    auto my = p.my;
    double ex = sched.eta_x, ey = sched.eta_y;
    g.f = [f, mx, my, xk, yl, ex, ey](const Vec& x, const Vec& y) {
      double dx = mx->distance(xk, x);
      double dy = my->distance(yl, y);
      return f(x, y) + dx * dx / (2.0 * ex) - dy * dy / (2.0 * ey);
    };
    g.grad_x = [gx, mx, xk, ex](const Vec& x, const Vec& y) {
      return (gx(x, y) - mx->log(x, xk) / ex).eval();
    };
    g.grad_y = [gy, my, yl, ey](const Vec& x, const Vec& y) {
      return (gy(x, y) + my->log(y, yl) / ey).eval();
    };
    g.mu_x = p.mu_x + 1.0 / ex;
    g.mu_y = p.mu_y + 1.0 / ey;
    g.L_x = p.L_x + zeta2x / ex;
    g.L_y = p.L_y + zeta2y / ey;
    g.L_xy = p.L_xy;
    g.lip_x = lipx + 2.0 * Dx / ex;
    g.lip_y = lipy + 2.0 * Dy / ey;
    g.counters = p.counters;
    return g;
  }

  // Prox subsolver for the psi-level solve: alternating best-response on the
  // doubly regularized saddle, returning its y-component.
  ProxSubsolver inner_subsolver(const Vec& xk) const {
    const RammaEngine* self = this;
    ProxSubsolver s;
    s.solve = [self, xk](const GConvexProblem&, const Vec& yl, double,
                         double eps_hat, const Vec& warm) {
      MinMaxProblem g = self->inner_saddle(xk, yl);
      if (self->certified()) {
        RabrOptions rb;
        rb.record_trace = false;
        rb.T = self->cap(self->sched.T5);
        return rabr(g, self->x0, self->y0, rb).y;
      }
      double Cw = g.mu_y / g.mu_x;
      double LG = self->psi_L() + self->zeta2y / self->sched.eta_y;
      double eps_v = std::max(2.0 * Cw * eps_hat / LG, 1e-300);
      Vec xs = project_ball_raw(self->p.ball_x, xk);
      return alternating_relaxed(g, xs, warm, eps_v).second;
    };
    return s;
  }

  // Middle routine: the outer solver's prox oracle at center xk.
  ProxSubsolver middle_subsolver() {
    RammaEngine* self = this;
    ProxSubsolver s;
    s.solve = [self](const GConvexProblem&, const Vec& xk, double,
                     double eps_hat, const Vec& warm) {
      bool cert = self->certified();
      double dtol = cert ? self->sched.eps4 : eps_hat / 4.0;
      GConvexProblem psi = self->psi_problem(xk, dtol);
      RiemaconOptions ro;
      ro.lambda = self->sched.eta_y;
      ro.record_trace = false;
      ro.eval_values = false;
      if (cert) {
        ro.T = self->cap(self->sched.T3);
        ro.epsilon = self->sched.eps3;
      } else {
        ro.epsilon = eps_hat / 2.0;
        ro.cert_stop = true;
      }
      Vec ystart = cert ? self->y0 : self->warm_y;
      Vec ytil = riemacon_abs(psi, ystart, ro, self->inner_subsolver(xk)).y;
      if (!cert) self->warm_y = ytil;

      GConvexProblem rq = self->reg_x_problem(ytil, xk);
      RiemaconOptions rx;
      rx.lambda = self->sched.lambda_hat;
      rx.record_trace = false;
      rx.eval_values = false;
      if (cert) {
        rx.T = self->cap(self->sched.T4);
        rx.epsilon = self->sched.eps4;
      } else {
        rx.epsilon = eps_hat / 2.0;
        rx.cert_stop = true;
      }
      Vec xstart = cert ? self->x0 : warm;
      return riemacon_abs(rq, xstart, rx, prgd_prox_subsolver()).y;
    };
    return s;
  }

  Vec warm_y;
};

}  // namespace

RammaResult ramma(const MinMaxProblem& p, const Vec& x0in, const Vec& y0in,
                  const RammaOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw SolverError("ramma: epsilon must be positive");
  RammaEngine eng(p, opt, x0in, y0in);
  eng.warm_y = eng.y0;
  RammaResult res;
  res.schedule = eng.sched;

  auto record = [&](std::int64_t it, const Vec& x, const Vec& y, double gap) {
    if (!opt.record_trace) return;
    TraceRow r;
    r.iter = it;
    r.grad_calls = p.counters->grad;
    r.proj_calls = p.counters->proj;
    r.value = p.value(x, y);
    r.gap_upper = gap;
    r.dist_sq = pair_dist_sq(p, x, y, opt.ref_x, opt.ref_y);
    r.wall_ms = clock_ms(opt.clock);
    res.trace.add(r);
  };

  if (eng.certified()) {
    GConvexProblem phi = eng.phi_problem(eng.sched.eps2);
    RiemaconOptions ro;
    ro.lambda = eng.sched.eta_x;
    ro.T = eng.cap(eng.sched.T1);
    ro.epsilon = eng.sched.eps1;
    ro.eval_values = false;
    ro.record_trace = false;
    RiemaconResult rx = riemacon_abs(phi, eng.x0, ro, eng.middle_subsolver());
    res.x = rx.y;
    res.outer_iters = rx.iters;

    GConvexProblem ysec = y_section(p, res.x);
    RiemaconOptions ry;
    ry.lambda = eng.sched.lambda_y;
    ry.T = eng.cap(eng.sched.T2);
    ry.epsilon = eng.sched.eps2;
    ry.eval_values = false;
    ry.record_trace = false;
    res.y = riemacon_abs(ysec, eng.y0, ry, prgd_prox_subsolver()).y;

    if (opt.gap_oracle) res.certified_gap = opt.gap_oracle(res.x, res.y);
    record(0, res.x, res.y, res.certified_gap);
    return res;
  }

  double t1 = opt.epsilon / 4.0;
  double t2 = opt.epsilon / 4.0;
  Vec xhat = eng.x0;
  Vec yhat = eng.y0;
  for (int round = 0;; ++round) {
    double cpl = 1.0 + p.L_xy * p.L_xy;
    double dtol = std::min(t1 / 4.0, t1 * p.mu_x * p.mu_y / (16.0 * cpl));
    GConvexProblem phi = eng.phi_problem(dtol);
    RiemaconOptions ro;
    ro.lambda = eng.sched.eta_x;
    ro.epsilon = t1;
    ro.cert_stop = true;
    ro.eval_values = false;
    ro.record_trace = false;
    RiemaconResult rx = riemacon_abs(phi, xhat, ro, eng.middle_subsolver());
    xhat = rx.y;
    res.outer_iters += rx.iters;

    GConvexProblem ysec = y_section(p, xhat);
    RiemaconOptions ry;
    ry.lambda = eng.sched.lambda_y;
    ry.epsilon = t2;
    ry.cert_stop = true;
    ry.eval_values = false;
    ry.record_trace = false;
    yhat = riemacon_abs(ysec, yhat, ry, prgd_prox_subsolver()).y;

    double gap = opt.gap_oracle ? opt.gap_oracle(xhat, yhat)
                                : std::numeric_limits<double>::infinity();
    res.certified_gap = gap;
    res.refine_rounds = round;
    record(round, xhat, yhat, gap);
    if (!opt.gap_oracle || gap <= opt.epsilon || round >= opt.max_refine) break;
    t1 /= 2.0;
    t2 /= 2.0;
  }
  res.x = xhat;
  res.y = yhat;
  return res;
}

// ---------------------------------------------------------------------------
// Reductions and toolkit.

ReducedProblem reduce_to_scsc(const MinMaxProblem& p, double eps,
                              const Vec& xbar, const Vec& ybar) {
  if (!(eps > 0.0)) throw SolverError("reduce_to_scsc: epsilon must be positive");
  double D = std::max(p.ball_x.diameter(), p.ball_y.diameter());
  double c = eps / (4.0 * D * D);
  ReducedProblem r;
  r.coeff = c;
  MinMaxProblem q = p;
  auto f = p.f;
  auto gx = p.grad_x;
  auto gy = p.grad_y;
  auto mx = p.mx;
  auto my = p.my;
  q.f = [f, mx, my, xbar, ybar, c](const Vec& x, const Vec& y) {
    double dx = mx->distance(xbar, x);
    double dy = my->distance(ybar, y);
    return f(x, y) + c * dx * dx - c * dy * dy;
  };
  q.grad_x = [gx, mx, xbar, c](const Vec& x, const Vec& y) {
    return (gx(x, y) - 2.0 * c * mx->log(x, xbar)).eval();
  };
  q.grad_y = [gy, my, ybar, c](const Vec& x, const Vec& y) {
    return (gy(x, y) + 2.0 * c * my->log(y, ybar)).eval();
  };
  q.mu_x = p.mu_x + 2.0 * c;
  q.mu_y = p.mu_y + 2.0 * c;
  q.L_x = p.L_x + 2.0 * c * p.mx->zeta_at(D);
  q.L_y = p.L_y + 2.0 * c * p.my->zeta_at(D);
  q.lip_x = p.lip_x > 0.0 ? p.lip_x + 2.0 * c * D : 0.0;
  q.lip_y = p.lip_y > 0.0 ? p.lip_y + 2.0 * c * D : 0.0;
  r.problem = q;
  return r;
}

double primal_dist_sq_bound(double gap_x, double mu) {
  if (mu <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * gap_x / mu;
}

double saddle_dist_sq_bound(double eps_hat, double eps, double mu_x,
                            double mu_y, double L_xy) {
  return 4.0 * eps_hat / mu_x +
         (2.0 * eps / mu_y) * (2.0 * L_xy * L_xy / (mu_x * mu_x) + 1.0);
}

double gap_upper_from_distances(double dx, double dy, double lip_x,
                                double lip_y, double L_xy, double mu_x,
                                double mu_y) {
  return dy * (lip_y + lip_x * L_xy / mu_x) +
         dx * (lip_x + lip_y * L_xy / mu_y);
}

double best_response_lipschitz(double L_xy, double mu) {
  if (mu <= 0.0) return std::numeric_limits<double>::infinity();
  return L_xy / mu;
}

RescaledProblem rescale_metric(const MinMaxProblem& p) {
  RescaledProblem r;
  r.c1_sq = std::sqrt(p.L_x / p.L_y);
  r.c2_sq = 1.0 / r.c1_sq;
  double sx = std::sqrt(r.c1_sq);
  double sy = std::sqrt(r.c2_sq);
  MinMaxProblem q = p;
  q.mx = make_scaled(p.mx, sx);
  q.my = make_scaled(p.my, sy);
  q.ball_x = make_ball(make_point(q.mx, p.ball_x.center.coords),
                       p.ball_x.radius * sx);
  q.ball_y = make_ball(make_point(q.my, p.ball_y.center.coords),
                       p.ball_y.radius * sy);
  auto gx = p.grad_x;
  auto gy = p.grad_y;
  double c1 = r.c1_sq, c2 = r.c2_sq;
  q.grad_x = [gx, c1](const Vec& x, const Vec& y) {
    return (gx(x, y) / c1).eval();
  };
  q.grad_y = [gy, c2](const Vec& x, const Vec& y) {
    return (gy(x, y) / c2).eval();
  };
  q.mu_x = p.mu_x / c1;
  q.mu_y = p.mu_y / c2;
  q.L_x = p.L_x / c1;
  q.L_y = p.L_y / c2;
  q.lip_x = p.lip_x > 0.0 ? p.lip_x / sx : 0.0;
  q.lip_y = p.lip_y > 0.0 ? p.lip_y / sy : 0.0;
  q.L_xy = p.L_xy;
  r.problem = q;
  return r;
}

}  // namespace rminmax
