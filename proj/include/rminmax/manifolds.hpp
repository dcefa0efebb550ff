#pragma once

#include <vector>

#include "rminmax/geometry.hpp"

namespace rminmax {

// Flat model: exp/log are vector addition/subtraction, transport is the
// identity, all geometric constants are 1.
class EuclideanModel : public Manifold {
public:
  explicit EuclideanModel(int dim);
  std::string name() const override;
  int ambient_dim() const override { return dim_; }
  int dim() const override { return dim_; }
  CurvatureBounds curvature() const override { return {0.0, 0.0}; }
  double membership_error(const Vec&) const override { return 0.0; }
  double tangency_error(const Vec&, const Vec&) const override { return 0.0; }
  Vec project_point(const Vec& a) const override { return a; }
  Vec project_tangent(const Vec&, const Vec& a) const override { return a; }
  double inner(const Vec&, const Vec& u, const Vec& v) const override {
    return u.dot(v);
  }
  double distance(const Vec& p, const Vec& q) const override {
    return (p - q).norm();
  }
  Vec exp(const Vec& q, const Vec& v) const override { return q + v; }
  Vec log(const Vec& p, const Vec& q) const override { return q - p; }
  Vec transport(const Vec&, const Vec&, const Vec& v) const override {
    return v;
  }

private:
  int dim_;
};

// Hyperboloid model of curvature -1: points z in R^{n+1} with
// <z,z>_L = -1, z0 > 0, where <u,v>_L = -u0 v0 + sum_i ui vi.
// All operations have closed forms in the Lorentz form; see the derivation
// comments in the implementation.
class HyperboloidModel : public Manifold {
public:
  explicit HyperboloidModel(int dim);
  std::string name() const override;
  int ambient_dim() const override { return dim_ + 1; }
  int dim() const override { return dim_; }
  CurvatureBounds curvature() const override { return {-1.0, -1.0}; }
  double membership_error(const Vec& q) const override;
  double tangency_error(const Vec& q, const Vec& v) const override;
  Vec project_point(const Vec& a) const override;
  Vec project_tangent(const Vec& q, const Vec& a) const override;
  double inner(const Vec& q, const Vec& u, const Vec& v) const override;
  double distance(const Vec& p, const Vec& q) const override;
  Vec exp(const Vec& q, const Vec& v) const override;
  Vec log(const Vec& p, const Vec& q) const override;
  Vec transport(const Vec& from, const Vec& to, const Vec& v) const override;

  static double lorentz(const Vec& u, const Vec& v);
  // Geodesic midpoint (x+y)/sqrt(-<x+y,x+y>_L); used by numerical oracles.
  Vec midpoint(const Vec& x, const Vec& y) const;
  // Geodesic point reflection through m: p -> -p - 2<p,m>_L m.
  Vec reflect(const Vec& m, const Vec& p) const;

private:
  int dim_;
};

// Same point set as the base model with the metric multiplied by factor^2:
// lengths and distances scale by factor, curvature by factor^-2, while the
// coordinate expressions of geodesics, exp, log and transport are unchanged.
// Riemannian gradients with respect to the scaled metric are the base
// gradients divided by factor^2.
class ScaledMetricModel : public Manifold {
public:
  ScaledMetricModel(ManifoldPtr base, double factor);
  std::string name() const override;
  int ambient_dim() const override { return base_->ambient_dim(); }
  int dim() const override { return base_->dim(); }
  CurvatureBounds curvature() const override;
  double membership_error(const Vec& q) const override {
    return base_->membership_error(q);
  }
  double tangency_error(const Vec& q, const Vec& v) const override {
    return base_->tangency_error(q, v);
  }
  Vec project_point(const Vec& a) const override {
    return base_->project_point(a);
  }
  Vec project_tangent(const Vec& q, const Vec& a) const override {
    return base_->project_tangent(q, a);
  }
  double inner(const Vec& q, const Vec& u, const Vec& v) const override {
    return s2_ * base_->inner(q, u, v);
  }
  double distance(const Vec& p, const Vec& q) const override {
    return s_ * base_->distance(p, q);
  }
  Vec exp(const Vec& q, const Vec& v) const override { return base_->exp(q, v); }
  Vec log(const Vec& p, const Vec& q) const override { return base_->log(p, q); }
  Vec transport(const Vec& from, const Vec& to, const Vec& v) const override {
    return base_->transport(from, to, v);
  }
  const ManifoldPtr& base() const { return base_; }
  double factor() const { return s_; }

private:
  ManifoldPtr base_;
  double s_, s2_;
};

// Product of two models on concatenated coordinates. Squared distances add;
// exp/log/transport act blockwise; the curvature range is the union, so the
// zeta/delta helpers automatically give the max/min over the factors.
class ProductModel : public Manifold {
public:
  ProductModel(ManifoldPtr left, ManifoldPtr right);
  std::string name() const override;
  int ambient_dim() const override { return na_ + nb_; }
  int dim() const override { return left_->dim() + right_->dim(); }
  CurvatureBounds curvature() const override;
  double membership_error(const Vec& q) const override;
  double tangency_error(const Vec& q, const Vec& v) const override;
  Vec project_point(const Vec& a) const override;
  Vec project_tangent(const Vec& q, const Vec& a) const override;
  double inner(const Vec& q, const Vec& u, const Vec& v) const override;
  double distance(const Vec& p, const Vec& q) const override;
  Vec exp(const Vec& q, const Vec& v) const override;
  Vec log(const Vec& p, const Vec& q) const override;
  Vec transport(const Vec& from, const Vec& to, const Vec& v) const override;

  const ManifoldPtr& left() const { return left_; }
  const ManifoldPtr& right() const { return right_; }
  Vec join(const Vec& a, const Vec& b) const;
  Vec left_part(const Vec& q) const { return q.head(na_); }
  Vec right_part(const Vec& q) const { return q.tail(nb_); }

private:
  ManifoldPtr left_, right_;
  int na_, nb_;
};

// A point on an explicit two-factor product, kept as its components.
struct ProductPoint {
  ManifoldPoint x;
  ManifoldPoint y;
};

double product_distance_sq(const ProductPoint& a, const ProductPoint& b);

ManifoldPtr make_euclidean(int dim);
ManifoldPtr make_hyperboloid(int dim);
ManifoldPtr make_scaled(ManifoldPtr base, double factor);
std::shared_ptr<const ProductModel> make_product(ManifoldPtr left,
                                                 ManifoldPtr right);

// Orthonormal basis of the tangent space at q (columns), with respect to the
// model's inner product at q.
Mat tangent_basis(const Manifold& m, const Vec& q);

}  // namespace rminmax
