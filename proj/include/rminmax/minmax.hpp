#pragma once

#include "rminmax/gconvex.hpp"

namespace rminmax {

// ---------------------------------------------------------------------------
// Saddle instance min_{x in X} max_{y in Y} f(x, y) with X, Y geodesic balls
// in Hadamard models. grad_x / grad_y are Riemannian partial gradients; each
// partial evaluation counts as one gradient call.

struct MinMaxProblem {
  ManifoldPtr mx;
  ManifoldPtr my;
  GeodesicBall ball_x;
  GeodesicBall ball_y;
  std::function<double(const Vec&, const Vec&)> f;
  std::function<Vec(const Vec&, const Vec&)> grad_x;
  std::function<Vec(const Vec&, const Vec&)> grad_y;
  double mu_x = 0.0;  // strong g-convexity of f(., y)
  double mu_y = 0.0;  // strong g-concavity of f(x, .)
  double L_x = 1.0;   // smoothness of f(., y)
  double L_y = 1.0;   // smoothness of f(x, .)
  double L_xy = 0.0;  // cross-smoothness
  double lip_x = 0.0;  // sup ||grad_x f|| over X x Y (0 when unknown)
  double lip_y = 0.0;
  CountersPtr counters = std::make_shared<OracleCounters>();

  double value(const Vec& x, const Vec& y) const {
    ++counters->value;
    return f(x, y);
  }
  Vec gx(const Vec& x, const Vec& y) const {
    ++counters->grad;
    return grad_x(x, y);
  }
  Vec gy(const Vec& x, const Vec& y) const {
    ++counters->grad;
    return grad_y(x, y);
  }
};

// x |-> f(x, y) frozen at y, as a strongly g-convex instance sharing the
// parent's counters.
GConvexProblem x_section(const MinMaxProblem& p, const Vec& y);
// y |-> -f(x, y) frozen at x, likewise.
GConvexProblem y_section(const MinMaxProblem& p, const Vec& x);

// Geometric constants over the union of both factors' curvature ranges.
double joint_zeta(const MinMaxProblem& p, double R);
double joint_delta(const MinMaxProblem& p, double R);

// xi = 4 max{zeta_{2 Dx} on X, zeta_{2 Dy} on Y} - 3 with per-side diameters.
double minmax_xi(const MinMaxProblem& p);

// ---------------------------------------------------------------------------
// Riemannian corrected extragradient. Works with one equalized constant pair
// mu = min{mu_x, mu_y}, L = max{L_x, L_y, L_xy}.

double rceg_mu(const MinMaxProblem& p);
double rceg_L(const MinMaxProblem& p);

// scsc: eta = min{sqrt(delta_D/(8 L^2 zeta_D)), delta_D/(2 mu)};
// otherwise eta = sqrt(delta_D/(4 L^2 zeta_D)). Constants use the joint
// curvature range; D must keep delta_D in its domain.
double rceg_step_size(const MinMaxProblem& p, double D, bool scsc);

enum class RcegMode { Auto, StronglyConvexConcave, ConvexConcave };

struct RcegOptions {
  double epsilon = 0.0;  // target on d^2(x,x*) + d^2(y,y*), scsc mode
  std::int64_t T = -1;
  // Scale parameter with D >= 4 sqrt(d^2(x0,x*) + d^2(y0,y*)); 0 falls back
  // to the larger feasible diameter (which bounds the root sum only up to
  // sqrt(2), so prefer an explicit value).
  double D = 0.0;
  RcegMode mode = RcegMode::Auto;
  bool record_trace = true;
  bool keep_iterates = false;
  const Vec* ref_x = nullptr;
  const Vec* ref_y = nullptr;
  WallClock* clock = nullptr;
};

struct RcegResult {
  Vec x;
  Vec y;
  RunTrace trace;
  std::int64_t iters = 0;
  double eta = 0.0;
  bool averaged = false;  // true when the convex-concave averages were returned
  // Filled only under keep_iterates: the unaveraged extragradient points
  // (w_t, z_t) and the proximal-style anchors (x_t, y_t), t = 1..T.
  std::vector<Vec> ws, zs, xs, ys;
};

RcegResult rceg(const MinMaxProblem& p, const Vec& x0, const Vec& y0,
                const RcegOptions& opt);

// ---------------------------------------------------------------------------
// Alternating best-response with relative-accuracy subsolves. Requires
// L_xy < sqrt(mu_x mu_y)/2; each sweep contracts
// d^2(x,x*) + (mu_y/mu_x) d^2(y,y*) by 3/5 when subsolves reach ratio 1/256.

inline constexpr double kRabrContraction = 3.0 / 5.0;
inline constexpr double kRabrSubsolveRatio = 1.0 / 256.0;

struct RabrPaperBudgets {
  double xi = 1.0;
  std::int64_t T_x = 0;  // ceil(90 xi sqrt(L_x/mu_x) ln 512)
  std::int64_t T_y = 0;
};

// Subsolver budgets quoted for the accelerated backend; the PRGD backend
// derives its own budget inside relative_contraction_solve.
RabrPaperBudgets rabr_paper_budgets(const MinMaxProblem& p);

struct RabrOptions {
  double epsilon = 0.0;  // target on d^2(x,x*) + (mu_y/mu_x) d^2(y,y*)
  std::int64_t T = -1;
  ContractionBackend backend = ContractionBackend::Prgd;
  double rho = kRabrSubsolveRatio;
  bool record_trace = true;
  bool keep_iterates = false;
  const Vec* ref_x = nullptr;
  const Vec* ref_y = nullptr;
  WallClock* clock = nullptr;
};

struct RabrResult {
  Vec x;
  Vec y;
  RunTrace trace;
  std::int64_t iters = 0;
  double residual_bound = std::numeric_limits<double>::infinity();
  // Filled only under keep_iterates: (x_t, y_t) after each sweep, t = 1..T.
  std::vector<Vec> xs, ys;
};

RabrResult rabr(const MinMaxProblem& p, const Vec& x0, const Vec& y0,
                const RabrOptions& opt);

// ---------------------------------------------------------------------------
// Accelerated min-max meta-algorithm: outer accelerated proximal point on
// phi(x) = max_y f(x, y), middle solves of the proximal envelope through the
// dual, inner alternating best-response on the doubly regularized saddle.

struct RammaSchedule {
  double xi = 1.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  double lambda_y = 0.0;
  double lambda_hat = 0.0;
  double C = 0.0;    // gap aggregate from gradient-norm bounds
  double C_k = 0.0;  // same for the x-regularized problem
  double C_l = 0.0;  // same for the doubly regularized problem
  double eps1 = 0.0, eps1_hat = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0, eps3_hat = 0.0;
  double eps4 = 0.0;
  double eps5 = 0.0;
  std::int64_t T1 = 0, T2 = 0, T3 = 0, T4 = 0, T5 = 0;

  double total_calls() const {
    return static_cast<double>(T1) *
               (static_cast<double>(T3) * static_cast<double>(T5) +
                static_cast<double>(T4)) +
           static_cast<double>(T2);
  }
};

// Full worst-case schedule for accuracy eps. lipschitz_override > 0 replaces
// the D (L + L_xy) style gradient-norm bounds inside C, C_k, C_l.
RammaSchedule make_ramma_schedule(const MinMaxProblem& p, double eps,
                                  double lipschitz_override = 0.0);

enum class RammaMode { Practical, Certified };

struct RammaOptions {
  double epsilon = 0.0;
  RammaMode mode = RammaMode::Practical;
  double lipschitz_override = 0.0;
  // Certified mode only: cap each of T1..T5 for smoke runs. Guarantees are
  // void under a cap; intended for tests exercising the nesting.
  std::int64_t budget_cap = -1;
  // Practical mode: rounds of halving the internal targets when the
  // certified gap is still above epsilon.
  int max_refine = 6;
  // Practical mode: independent gap certifier (brute-force best response);
  // without one the loop runs a single round and reports an infinite gap.
  std::function<double(const Vec&, const Vec&)> gap_oracle;
  bool record_trace = true;
  const Vec* ref_x = nullptr;
  const Vec* ref_y = nullptr;
  WallClock* clock = nullptr;
};

struct RammaResult {
  Vec x;
  Vec y;
  RunTrace trace;
  RammaSchedule schedule;
  std::int64_t outer_iters = 0;
  double certified_gap = std::numeric_limits<double>::infinity();
  int refine_rounds = 0;
};

RammaResult ramma(const MinMaxProblem& p, const Vec& x0, const Vec& y0,
                  const RammaOptions& opt);

// ---------------------------------------------------------------------------
// Convex-concave to strongly-convex-strongly-concave reduction:
//   f_eps(x, y) = f(x, y) + c d^2(xbar, x) - c d^2(ybar, y),  c = eps/(4 D^2)
// with D = max feasible diameter. An eps/2-saddle of f_eps is an eps-saddle
// of f. Both sides are regularized regardless of which moduli were zero.

struct ReducedProblem {
  MinMaxProblem problem;
  double coeff = 0.0;  // the constant c above
};

ReducedProblem reduce_to_scsc(const MinMaxProblem& p, double eps,
                              const Vec& xbar, const Vec& ybar);

// ---------------------------------------------------------------------------
// Gap toolkit: certified conversions between gap and distance residuals.

// d^2(xbar, x*) <= 2 gap_x / mu for the mu-strongly g-convex primal envelope.
double primal_dist_sq_bound(double gap_x, double mu);

// Joint residual after an eps_hat-accurate primal solve and an eps-accurate
// best-response solve:
//   d^2(x,x*) + d^2(y,y*) <= 4 eps_hat/mu_x + (2 eps/mu_y)(2 L_xy^2/mu_x^2 + 1).
double saddle_dist_sq_bound(double eps_hat, double eps, double mu_x,
                            double mu_y, double L_xy);

// gap(xbar, ybar) <= dy (lip_y + lip_x L_xy/mu_x) + dx (lip_x + lip_y L_xy/mu_y)
// from distances to the saddle and gradient-norm bounds lip_x, lip_y.
double gap_upper_from_distances(double dx, double dy, double lip_x,
                                double lip_y, double L_xy, double mu_x,
                                double mu_y);

// The best response y*(x) is (L_xy / mu_y)-Lipschitz.
double best_response_lipschitz(double L_xy, double mu);

// ---------------------------------------------------------------------------
// Conformal metric rescaling equalizing per-side smoothness: scaling the X
// metric by c1^2 = sqrt(L_x/L_y) and the Y metric by c2^2 = 1/c1^2 yields
// L_x' = L_y' = sqrt(L_x L_y) while L_xy and the condition numbers are
// unchanged. Coordinates are untouched; only the metric handles change.

struct RescaledProblem {
  MinMaxProblem problem;
  double c1_sq = 1.0;
  double c2_sq = 1.0;
};

RescaledProblem rescale_metric(const MinMaxProblem& p);

}  // namespace rminmax
