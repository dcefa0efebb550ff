#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rminmax/config.hpp"
#include "rminmax/plot.hpp"
#include "rminmax/problems.hpp"

namespace rminmax {

// A problem instance built from the problem.* block of a config. Exactly one
// of the instance pointers is set; gproblem/mproblem hold counter-sharing
// copies ready for the solvers.
struct ExperimentSetup {
  std::string problem_name;
  bool minmax = false;
  std::shared_ptr<DiagQuadratic> quad;
  std::shared_ptr<RobustKarcherProblem> karcher;
  std::shared_ptr<SyntheticSaddleProblem> synthetic;
  GConvexProblem gproblem;
  MinMaxProblem mproblem;
  Vec x0;
  Vec y0;
  bool has_ref = false;
  Vec ref_x;
  Vec ref_y;
  double ref_value = std::numeric_limits<double>::quiet_NaN();
};

ExperimentSetup build_problem(const Config& cfg);

// Canonical base point: the all-zeros vector on flat models, the first
// coordinate vector on the hyperboloid sheet.
Vec manifold_origin(const Manifold& m);

// Final-point optimality record. For min-max runs the gaps come from
// brute-force best responses on the original problem; for minimization runs
// gap_y is zero and the method names the bound used.
struct SaddleCertificate {
  double gap = std::numeric_limits<double>::infinity();
  double gap_x = std::numeric_limits<double>::infinity();
  double gap_y = std::numeric_limits<double>::infinity();
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
  std::string method;

  std::string to_json() const;
};

struct ExperimentResult {
  std::string solver;
  ExperimentSetup setup;
  RunTrace trace;
  Vec x;
  Vec y;  // size 0 for minimization runs
  SaddleCertificate certificate;
  std::string fit_column;  // trace column behind the rate fits, or "none"
  RateFit fit_iter;
  RateFit fit_calls;
  std::string summary;
};

// Builds the problem, dispatches on solver.name, writes the output.* files,
// and certifies the final point. Deterministic for fixed configs unless
// output.timing is enabled.
ExperimentResult run_experiment(const Config& cfg);

// ---------------------------------------------------------------------------
// Property checks. Each returns pass/fail plus the worst measured slack
// (negative slack means the margin by which the worst case still passed is
// negative, i.e. a violation). The acceptance harness and the `check` CLI
// subcommand share these implementations.

struct CheckItem {
  std::string name;
  bool pass = false;
  double slack = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const;
  std::string to_text() const;
};

// Geometry scope.
CheckItem check_zeta_delta_values();
CheckItem check_roundtrips(std::uint64_t seed);
CheckItem check_cosine_laws(int ntriangles, std::uint64_t seed);
CheckItem check_distance_hessian_bounds(std::uint64_t seed);
CheckItem check_exp_ode(std::uint64_t seed);
CheckItem check_schild_ladder(std::uint64_t seed);
CheckItem check_curvature_estimates(std::uint64_t seed);
CheckItem check_product_metric(std::uint64_t seed);

// Solver scope.
CheckItem check_prgd_contraction(int ninstances, std::uint64_t seed);
CheckItem check_riemacon_budget_and_duals(std::uint64_t seed);
CheckItem check_riemacon_kappa_slope(std::uint64_t seed);
CheckItem check_riemacon_lyapunov(std::uint64_t seed);
CheckItem check_rceg_stay_in_ball(int ninstances, std::uint64_t seed);
CheckItem check_rabr_lyapunov(std::uint64_t seed);
CheckItem check_rabr_decoupling(std::uint64_t seed);
CheckItem check_gap_toolkit(int npoints, std::uint64_t seed);
CheckItem check_envelope_strong_convexity(std::uint64_t seed);
CheckItem check_sion_grids(int ninstances, std::uint64_t seed);
CheckItem check_best_response_lipschitz(int npairs, std::uint64_t seed);
CheckItem check_ramma_schedule_invariants(std::uint64_t seed);
CheckItem check_gradient_oracles(std::uint64_t seed);
CheckItem check_determinism();

// Runs every config in the directory; configs whose solver is the meta
// algorithm must certify gap <= their solver.epsilon on the original
// objective. Skipped (passing, with a note) when the directory is empty.
CheckItem check_shipped_configs(const std::string& config_dir);

// scope: "geometry", "solvers", or "all". config_dir feeds
// check_shipped_configs and may be empty.
CheckReport validate_suite(const std::string& scope,
                           const std::string& config_dir = "");

}  // namespace rminmax
