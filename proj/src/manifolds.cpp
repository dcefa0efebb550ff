#include "rminmax/manifolds.hpp"

#include <cmath>

namespace rminmax {

EuclideanModel::EuclideanModel(int dim) : dim_(dim) {
  if (dim < 1) throw GeometryError("EuclideanModel: dim must be positive");
}

std::string EuclideanModel::name() const {
  return "euclidean" + std::to_string(dim_);
}

HyperboloidModel::HyperboloidModel(int dim) : dim_(dim) {
  if (dim < 1) throw GeometryError("HyperboloidModel: dim must be positive");
}

std::string HyperboloidModel::name() const {
  return "hyperboloid" + std::to_string(dim_);
}

double HyperboloidModel::lorentz(const Vec& u, const Vec& v) {
  double s = -u[0] * v[0];
  for (int i = 1; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double HyperboloidModel::membership_error(const Vec& q) const {
  if (q[0] <= 0.0) return 1.0;
  return std::abs(lorentz(q, q) + 1.0);
}

double HyperboloidModel::tangency_error(const Vec& q, const Vec& v) const {
  // T_q = {v : <q,v>_L = 0}.
  return std::abs(lorentz(q, v));
}

Vec HyperboloidModel::project_point(const Vec& a) const {
  double qq = lorentz(a, a);
  if (qq < 0.0 && a[0] > 0.0) {
    return a / std::sqrt(-qq);
  }
  // Not timelike-future: rebuild from the spatial part.
  Vec z = a;
  double s2 = a.tail(dim_).squaredNorm();
  z[0] = std::sqrt(1.0 + s2);
  return z;
}

Vec HyperboloidModel::project_tangent(const Vec& q, const Vec& a) const {
  // v + <q,v>_L q is Lorentz-orthogonal to q because <q,q>_L = -1.
  return a + lorentz(q, a) * q;
}

double HyperboloidModel::inner(const Vec&, const Vec& u, const Vec& v) const {
  return lorentz(u, v);
}

double HyperboloidModel::distance(const Vec& p, const Vec& q) const {
  // d = arccosh(-<p,q>_L). Evaluated as 2*asinh(||p-q||_L/2), which agrees
  // exactly (cosh d - 1 = ||p-q||_L^2/2) and keeps precision for d near 0.
  double c = -lorentz(p, q);
  if (c < 1.0) {
    if (c < 1.0 - 1e-9) {
      throw GeometryError("hyperboloid distance: points violate the constraint");
    }
    return 0.0;
  }
  Vec diff = p - q;
  double chord2 = lorentz(diff, diff);
  if (chord2 <= 0.0) return 0.0;
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

Vec HyperboloidModel::exp(const Vec& q, const Vec& v) const {
  Vec vt = project_tangent(q, v);
  double n2 = lorentz(vt, vt);
  if (n2 <= 0.0) return q;
  double th = std::sqrt(n2);
  // Geodesic: cosh(t)q + sinh(t) v/||v||. sinh(th)/th via series below 1e-8.
  double sinhc = th < 1e-8 ? 1.0 + th * th / 6.0 : std::sinh(th) / th;
  Vec out = std::cosh(th) * q + sinhc * vt;
  return project_point(out);
}

Vec HyperboloidModel::log(const Vec& p, const Vec& q) const {
  double c = -lorentz(p, q);
  double d = distance(p, q);
  // u = q - c p is tangent at p with ||u||_L = sinh(d); scale to length d.
  Vec u = q - c * p;
  double f = d < 1e-7 ? 1.0 - d * d / 6.0 : d / std::sinh(d);
  return project_tangent(p, f * u);
}

Vec HyperboloidModel::transport(const Vec& from, const Vec& to,
                                const Vec& v) const {
  double c = -lorentz(from, to);
  // Parallel transport along the geodesic from->to:
  //   v + <to, v>_L/(1+c) (from + to).
  // Isometry and tangency at `to` follow from <from,from>=<to,to>=-1.
  Vec vt = project_tangent(from, v);
  Vec out = vt + (lorentz(to, vt) / (1.0 + c)) * (from + to);
  return project_tangent(to, out);
}

Vec HyperboloidModel::midpoint(const Vec& x, const Vec& y) const {
  Vec s = x + y;
  double n2 = -lorentz(s, s);
  if (n2 <= 0.0) throw GeometryError("hyperboloid midpoint: degenerate pair");
  return s / std::sqrt(n2);
}

Vec HyperboloidModel::reflect(const Vec& m, const Vec& p) const {
  return -p - 2.0 * lorentz(p, m) * m;
}

ScaledMetricModel::ScaledMetricModel(ManifoldPtr base, double factor)
    : base_(std::move(base)), s_(factor), s2_(factor * factor) {
  if (!base_) throw GeometryError("ScaledMetricModel: null base");
  if (!(factor > 0.0)) throw GeometryError("ScaledMetricModel: factor <= 0");
}

std::string ScaledMetricModel::name() const {
  return "scaled(" + base_->name() + "," + std::to_string(s_) + ")";
}

CurvatureBounds ScaledMetricModel::curvature() const {
  CurvatureBounds c = base_->curvature();
  return {c.kmin / s2_, c.kmax / s2_};
}

ProductModel::ProductModel(ManifoldPtr left, ManifoldPtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!left_ || !right_) throw GeometryError("ProductModel: null factor");
  na_ = left_->ambient_dim();
  nb_ = right_->ambient_dim();
}

std::string ProductModel::name() const {
  return left_->name() + "x" + right_->name();
}

CurvatureBounds ProductModel::curvature() const {
  CurvatureBounds a = left_->curvature();
  CurvatureBounds b = right_->curvature();
  // Sectional curvatures of a product cover both factor ranges and the zero
  // planes spanned across factors.
  return {std::min({a.kmin, b.kmin, 0.0}), std::max({a.kmax, b.kmax, 0.0})};
}

double ProductModel::membership_error(const Vec& q) const {
  return std::max(left_->membership_error(left_part(q)),
                  right_->membership_error(right_part(q)));
}

double ProductModel::tangency_error(const Vec& q, const Vec& v) const {
  return std::max(left_->tangency_error(left_part(q), left_part(v)),
                  right_->tangency_error(right_part(q), right_part(v)));
}

Vec ProductModel::project_point(const Vec& a) const {
  return join(left_->project_point(left_part(a)),
              right_->project_point(right_part(a)));
}

Vec ProductModel::project_tangent(const Vec& q, const Vec& a) const {
  return join(left_->project_tangent(left_part(q), left_part(a)),
              right_->project_tangent(right_part(q), right_part(a)));
}

double ProductModel::inner(const Vec& q, const Vec& u, const Vec& v) const {
  return left_->inner(left_part(q), left_part(u), left_part(v)) +
         right_->inner(right_part(q), right_part(u), right_part(v));
}

double ProductModel::distance(const Vec& p, const Vec& q) const {
  double a = left_->distance(left_part(p), left_part(q));
  double b = right_->distance(right_part(p), right_part(q));
  return std::sqrt(a * a + b * b);
}

Vec ProductModel::exp(const Vec& q, const Vec& v) const {
  return join(left_->exp(left_part(q), left_part(v)),
              right_->exp(right_part(q), right_part(v)));
}

Vec ProductModel::log(const Vec& p, const Vec& q) const {
  return join(left_->log(left_part(p), left_part(q)),
              right_->log(right_part(p), right_part(q)));
}

Vec ProductModel::transport(const Vec& from, const Vec& to, const Vec& v) const {
  return join(left_->transport(left_part(from), left_part(to), left_part(v)),
              right_->transport(right_part(from), right_part(to), right_part(v)));
}

Vec ProductModel::join(const Vec& a, const Vec& b) const {
  Vec q(na_ + nb_);
  q.head(na_) = a;
  q.tail(nb_) = b;
  return q;
}

double product_distance_sq(const ProductPoint& a, const ProductPoint& b) {
  double dx = distance(a.x, b.x);
  double dy = distance(a.y, b.y);
  return dx * dx + dy * dy;
}

ManifoldPtr make_euclidean(int dim) {
  return std::make_shared<EuclideanModel>(dim);
}

ManifoldPtr make_hyperboloid(int dim) {
  return std::make_shared<HyperboloidModel>(dim);
}

ManifoldPtr make_scaled(ManifoldPtr base, double factor) {
  return std::make_shared<ScaledMetricModel>(std::move(base), factor);
}

std::shared_ptr<const ProductModel> make_product(ManifoldPtr left,
                                                 ManifoldPtr right) {
  return std::make_shared<ProductModel>(std::move(left), std::move(right));
}

Mat tangent_basis(const Manifold& m, const Vec& q) {
  int n = m.ambient_dim();
  int d = m.dim();
  Mat basis(n, d);
  int col = 0;
  // Gram-Schmidt on projected ambient axes with respect to m.inner at q.
  for (int i = 0; i < n && col < d; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    Vec v = m.project_tangent(q, e);
    for (int j = 0; j < col; ++j) {
      v -= m.inner(q, basis.col(j), v) * basis.col(j);
    }
    double nv = m.norm(q, v);
    if (nv > 1e-10) {
      basis.col(col++) = v / nv;
    }
  }
  if (col != d) throw GeometryError("tangent_basis: rank deficiency");
  return basis;
}

}  // namespace rminmax
