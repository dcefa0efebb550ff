#pragma once

#include <functional>
#include <vector>

#include "rminmax/manifolds.hpp"
#include "rminmax/rng.hpp"

namespace rminmax {

// Independent numerical verifiers for the closed-form manifold operations and
// for gradient oracles. Each avoids the formula it is used to check: the
// geodesic integrator works from the Lorentz metric alone, the ladder
// transport uses only midpoints, point reflections and small chords, and the
// curvature estimator uses only distances, logs and inner products jointly.

// Integrates the hyperboloid geodesic equation z'' = <z',z'>_L z with RK4
// from (x, v) to parameter t_end. Steps are chosen from the arc length when
// steps <= 0.
Vec hyperboloid_ode_exp(const Vec& x, const Vec& v, double t_end = 1.0,
                        int steps = 0);

// Schild's ladder approximation of the parallel transport of v from x to y
// along the connecting geodesic. The rung geodesics use the closed-form
// midpoint and point-reflection constructions; the carried vector is
// represented by a point at offset scale h and re-extracted by chord
// projection at the end.
Vec schild_ladder_transport(const HyperboloidModel& H, const Vec& x,
                            const Vec& y, const Vec& v, int rungs = 1024,
                            double h = 1e-3);

// Maximum relative error between central differences of f along random unit
// tangent directions and the directional derivatives claimed by grad.
double finite_diff_gradient_check(
    const Manifold& m, const std::function<double(const Vec&)>& f,
    const std::function<Vec(const Vec&)>& grad, const Vec& q, double h,
    int ndirs, Rng& rng);

// Gauss curvature of the 2-plane spanned by (u, w) at p, from the angle
// defect of a small geodesic triangle (angles from log-map inner products,
// area from Heron on the measured side lengths), Richardson-extrapolated in
// the triangle scale h.
double gauss_curvature_estimate(const Manifold& m, const Vec& p, const Vec& u,
                                const Vec& w, double h = 0.05);

// Second difference (f(exp_q(h e)) - 2 f(q) + f(exp_q(-h e)))/h^2 along the
// unit direction e; samples the Hessian quadratic form.
double second_difference(const Manifold& m,
                         const std::function<double(const Vec&)>& f,
                         const Vec& q, const Vec& e, double h);

// Dense sample of a geodesic ball through radial tangent coordinates.
// Supports intrinsic dimension <= 3.
std::vector<Vec> geodesic_grid(const Manifold& m, const GeodesicBall& ball,
                               int target_points);

// Empirical covering radius: max over random feasible samples of the
// distance to the nearest grid node.
double covering_radius_estimate(const Manifold& m, const GeodesicBall& ball,
                                const std::vector<Vec>& grid, int nsamples,
                                Rng& rng);

// Sampling helpers used across tests and measured-constant calibration.
Vec random_unit_tangent(const Manifold& m, const Vec& q, Rng& rng);
Vec random_point_in_ball(const Manifold& m, const GeodesicBall& ball, Rng& rng);

// Max gradient norm over random feasible points; a measured Lipschitz bound
// for f on the ball.
double measured_grad_norm_bound(const Manifold& m, const GeodesicBall& ball,
                                const std::function<Vec(const Vec&)>& grad,
                                int nsamples, Rng& rng);

}  // namespace rminmax
