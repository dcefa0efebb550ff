#pragma once

#include <functional>
#include <memory>

#include "rminmax/manifolds.hpp"
#include "rminmax/trace.hpp"

namespace rminmax {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared oracle-call accounting. Derived problems (proximal regularizations,
// negations, max-envelopes) share the parent's counters so nested solves
// aggregate into one total.
struct OracleCounters {
  std::int64_t grad = 0;
  std::int64_t proj = 0;
  std::int64_t value = 0;
  std::int64_t prox = 0;
};
using CountersPtr = std::shared_ptr<OracleCounters>;

// Constrained minimization instance: f is mu-strongly g-convex and L-smooth
// on the feasible ball; lip bounds the gradient norm there (0 when unknown).
struct GConvexProblem {
  ManifoldPtr manifold;
  GeodesicBall feasible;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad;
  double mu = 0.0;
  double L = 1.0;
  double lip = 0.0;
  CountersPtr counters = std::make_shared<OracleCounters>();

  double value(const Vec& x) const {
    ++counters->value;
    return f(x);
  }
  Vec gradient(const Vec& x) const {
    ++counters->grad;
    return grad(x);
  }
  Vec project(const Vec& x) const {
    ++counters->proj;
    return project_ball_raw(feasible, x);
  }
};

// Computable optimality certificate for mu-strongly g-convex f: minimizing
// the strong-convexity lower bound over the step length gives
// f(x) - f* <= ||grad f(x)||^2 / (2 mu), valid also under constraints.
// Only decays to zero when the constrained minimizer is interior.
double strong_convexity_gap_cert(double grad_norm, double mu);

// ---------------------------------------------------------------------------
// Projected Riemannian gradient descent.

struct PrgdOptions {
  double epsilon = 0.0;          // target f-gap for budget/certificate logic
  std::int64_t max_iter = -1;    // -1 derives the worst-case budget
  bool cert_stop = true;         // stop early once the gap certificate <= epsilon
  bool record_trace = true;
  const Vec* reference = nullptr;  // known minimizer, fills dist_sq
  double ref_value = std::numeric_limits<double>::quiet_NaN();
  WallClock* clock = nullptr;
};

struct PrgdResult {
  Vec x;
  RunTrace trace;
  std::int64_t iters = 0;
  double final_cert = std::numeric_limits<double>::infinity();
};

// Worst-case iteration budget: T = 1 + 2 kappa zeta_R log(L zeta_R D^2/(2 eps))
// with R = lip/L and the feasible diameter D standing in for the unknown
// d(x0, x*).
std::int64_t prgd_budget(const GConvexProblem& p, double epsilon);

// Update rule x_{t+1} = proj(exp_{x_t}(-grad f(x_t)/L)).
PrgdResult prgd(const GConvexProblem& p, const Vec& x0, const PrgdOptions& opt);

// ---------------------------------------------------------------------------
// Composite Riemannian gradient descent for F = f + g, where f is L-smooth
// g-convex (gradient oracle) and g is mu_g-strongly g-convex with an exactly
// solvable inner step
//   y = argmin_{y in X} <grad f(x), log_x(y)> + (L/2) d^2(x, y) + g(y).
// F-gap contracts by (1 - mu_g/(4L)) per iteration.

struct CompositeResult {
  Vec x;
  RunTrace trace;
};

CompositeResult composite_rgd(
    const GConvexProblem& smooth_part, const std::function<double(const Vec&)>& g_value,
    const std::function<Vec(const Vec& x, const Vec& grad_fx)>& inner_solver,
    double mu_g, const Vec& x0, std::int64_t budget,
    const Vec* reference = nullptr,
    double ref_value = std::numeric_limits<double>::quiet_NaN());

// Closed-form inner step on Euclidean models for g = (1/(2 lambda)) d^2(xc, .):
// the objective is an isotropic quadratic, so the constrained minimizer is the
// ball projection of the unconstrained one.
std::function<Vec(const Vec&, const Vec&)> euclidean_composite_prox_inner(
    const GConvexProblem& p, const Vec& xc, double lambda);

// ---------------------------------------------------------------------------
// Accelerated proximal-point solver with absolute-accuracy subsolves.

// Derived scheduling constants: xi = 4 zeta_{2 Dx} - 3 (Dx the feasible
// diameter), mu = min{mu_bar, 1/(9 xi lambda)}, kappa = 1/(lambda mu),
// eps_hat = eps/(8 sqrt(xi) kappa^{3/2}).
struct ProxParams {
  double lambda = 0.0;
  double xi = 1.0;
  double mu = 0.0;
  double kappa = 0.0;
  double eps_hat = 0.0;
};

ProxParams make_prox_params(const GConvexProblem& p, double lambda, double eps);

// Subsolver contract: return an eps_hat-minimizer of
//   min_{y in X} f(y) + d^2(xk, y)/(2 lambda),
// warm-started at `warm`. xk may lie outside the feasible ball.
struct ProxSubsolver {
  std::function<Vec(const GConvexProblem& p, const Vec& xk, double lambda,
                    double eps_hat, const Vec& warm)>
      solve;
};

// Default subsolver: PRGD on the proximal objective, whose strong convexity
// is at least mu_bar + 1/lambda and smoothness at most L + zeta/lambda.
ProxSubsolver prgd_prox_subsolver();

struct RiemaconOptions {
  double lambda = 0.0;
  double epsilon = 0.0;        // one of epsilon / T may be derived from the other
  std::int64_t T = -1;
  bool record_trace = true;
  bool eval_values = true;     // f(y_k) per iteration (skip for costly envelopes)
  bool cert_stop = false;      // stop on the gradient certificate (needs p.grad)
  bool keep_duals = false;     // store y_k and pre-projection dual vectors
  double gconvex_dist_bound = 0.0;  // D with D/2 >= d(x0, x*) for the mu=0 path
  const Vec* reference = nullptr;
  double ref_value = std::numeric_limits<double>::quiet_NaN();
  WallClock* clock = nullptr;
};

struct RiemaconResult {
  Vec y;
  RunTrace trace;
  std::int64_t iters = 0;
  ProxParams params;
  // Dual-vector norms after the tangent ball projection, one per iteration;
  // the invariant ||zbar|| <= Dx must hold for each.
  std::vector<double> dual_norms;
  // Filled only under keep_duals: y_0..y_T, the pre-projection dual vector
  // in T_{y_k} for each k (zero at k = 0), and the coupling points x_1..x_T.
  std::vector<Vec> y_iter;
  std::vector<Vec> dual_pre;
  std::vector<Vec> x_iter;
};

// Iteration budget from the convergence theorem, with the feasible diameter
// standing in for d(x0, x*):
//   T = ceil(2 sqrt(xi max{1/(lambda mu_bar), 9 xi}) log2(2 Dx^2/(lambda eps))).
std::int64_t riemacon_budget(const GConvexProblem& p, double lambda,
                             double eps);

RiemaconResult riemacon_abs(const GConvexProblem& p, const Vec& x0,
                            const RiemaconOptions& opt,
                            const ProxSubsolver& subsolver);

// ---------------------------------------------------------------------------
// One projected-gradient step plus its certified gap coefficient: returns
// x' = proj(exp_x(-grad g(x)/L)) and coeff = zeta_R L/2 with R = ||grad||/L,
// such that g(x') - g(p) <= coeff * d^2(x, p) for every feasible p.
struct WarmStart {
  Vec x_prime;
  double coeff = 0.0;
  double grad_norm = 0.0;
};

WarmStart warm_start_gap(const GConvexProblem& p, const Vec& xbar);

// ---------------------------------------------------------------------------
// Relative-contraction solve: returns x with d^2(x, x*) <= rho d^2(x0, x*).

enum class ContractionBackend { Prgd, Accelerated };

struct ContractionOptions {
  double rho = 1.0 / 256.0;
  ContractionBackend backend = ContractionBackend::Prgd;
  // Accelerated backend needs an absolute target; derived from this declared
  // upper bound on d(x0, x*) (0 falls back to the feasible diameter).
  double dist_bound = 0.0;
};

Vec relative_contraction_solve(const GConvexProblem& p, const Vec& x0,
                               const ContractionOptions& opt);

}  // namespace rminmax
