#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>

namespace rminmax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Sectional curvature range [kmin, kmax]; all shipped models have kmax <= 0.
struct CurvatureBounds {
  double kmin = 0.0;
  double kmax = 0.0;
};

// zeta_R = R*sqrt(|kmin|)*coth(R*sqrt(|kmin|)) for kmin < 0, else 1.
// Controls the smoothness distortion of squared distances; >= 1 always.
double zeta(double R, double kmin);

// delta_R = R*sqrt(kmax)*cot(R*sqrt(kmax)) for kmax > 0 (requires
// R*sqrt(kmax) < pi), else 1. Controls the convexity distortion; <= 1.
double delta(double R, double kmax);

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Manifold;
using ManifoldPtr = std::shared_ptr<const Manifold>;

// A complete simply-connected model of nonpositive curvature, operating on
// ambient coordinate vectors. exp and log are globally defined and inverse
// to each other; transport is the isometric parallel transport along the
// unique geodesic between the base points.
class Manifold {
public:
  virtual ~Manifold() = default;
  virtual std::string name() const = 0;
  virtual int ambient_dim() const = 0;
  virtual int dim() const = 0;
  virtual CurvatureBounds curvature() const = 0;

  virtual double membership_error(const Vec& q) const = 0;
  virtual double tangency_error(const Vec& q, const Vec& v) const = 0;
  // Nearest representation of an ambient vector on the model surface; used to
  // cap floating-point drift after long solver loops.
  virtual Vec project_point(const Vec& a) const = 0;
  virtual Vec project_tangent(const Vec& q, const Vec& a) const = 0;

  virtual double inner(const Vec& q, const Vec& u, const Vec& v) const = 0;
  virtual double distance(const Vec& p, const Vec& q) const = 0;
  virtual Vec exp(const Vec& q, const Vec& v) const = 0;
  virtual Vec log(const Vec& p, const Vec& q) const = 0;
  virtual Vec transport(const Vec& from, const Vec& to, const Vec& v) const = 0;

  double norm(const Vec& q, const Vec& v) const {
    return std::sqrt(std::max(0.0, inner(q, v, v)));
  }
  // zeta/delta at scale R for this model's curvature range.
  double zeta_at(double R) const { return zeta(R, curvature().kmin); }
  double delta_at(double R) const { return delta(R, curvature().kmax); }
};

constexpr double kMembershipTol = 1e-9;

// A point tagged with its manifold. Construction enforces the membership
// equation within kMembershipTol, re-projecting to absorb drift.
struct ManifoldPoint {
  ManifoldPtr manifold;
  Vec coords;
};

// A vector in the tangent space at `base`, same ambient representation.
struct TangentVector {
  ManifoldPtr manifold;
  Vec base;
  Vec vec;
};

ManifoldPoint make_point(ManifoldPtr m, const Vec& coords);
TangentVector make_tangent(ManifoldPtr m, const Vec& base, const Vec& vec);

ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v);
TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y);
TangentVector parallel_transport(const TangentVector& v, const ManifoldPoint& to);
double distance(const ManifoldPoint& x, const ManifoldPoint& y);
double inner(const TangentVector& u, const TangentVector& v);
double norm(const TangentVector& v);

// Closed geodesic ball; the feasible-set type every solver projects onto.
// radius is a metric length; the induced metric projection moves an outside
// point radially to the boundary along the geodesic toward the center.
struct GeodesicBall {
  ManifoldPoint center;
  double radius = 0.0;
  double diameter() const { return 2.0 * radius; }
};

GeodesicBall make_ball(const ManifoldPoint& center, double radius);
ManifoldPoint project_ball(const GeodesicBall& ball, const ManifoldPoint& p);
// Raw-coordinate variant used inside solver loops.
Vec project_ball_raw(const GeodesicBall& ball, const Vec& p);
bool ball_contains(const GeodesicBall& ball, const Vec& p, double slack = 1e-9);

// Both cosine-law inequalities for the triangle (x, y, p) of diameter <= D:
//   delta_D/2 d^2(x,y) + 1/2 d^2(p,x) - 1/2 d^2(p,y)
//     <= <log_x(y), log_x(p)>
//     <= zeta_D/2 d^2(x,y) + 1/2 d^2(p,x) - 1/2 d^2(p,y).
// Returns true iff each side holds with slack >= -1e-8.
bool check_cosine_laws(const ManifoldPoint& x, const ManifoldPoint& y,
                       const ManifoldPoint& p, double D,
                       double* worst_slack = nullptr);

}  // namespace rminmax
