#pragma once

// Caloron transfer of (A, Phi) on an L(K)-bundle P -> M to a connection on
// the K-bundle (P x K x S^1) / Omega(K) over M x S^1.
//
// A caloron point is a forms::Point whose chart and single loop coordinate
// give p in P, with groups = {k} and angles = {theta}. A caloron tangent
// (X, eta, lambda) carries X in its chart/loop parts, the left-trivialised
// K-direction eta and the angular rate lambda. Grid functions are evaluated
// at theta by the grid's interpolant.

#include <memory>

#include "loopgerbe/gerbe.hpp"

namespace loopgerbe {

Point caloron_point(const Point& p, const GroupElement& k, double theta);
Tangent caloron_tangent(const Tangent& x, const AlgebraElement& eta, double lambda);

class Caloron {
 public:
  explicit Caloron(std::shared_ptr<const BundleScenario> scenario);
  const BundleScenario& scenario() const { return *scenario_; }

  /// ad(k^{-1}) (A(X)(theta) + lambda Phi(p)(theta)) + eta.
  AlgebraElement connection(const Point& pt, const Tangent& v) const;
  /// ad(k^{-1}) (F(X_1, X_2) + nabla Phi(X_1) lambda_2 - nabla Phi(X_2) lambda_1)(theta).
  AlgebraElement curvature(const Point& pt, const Tangent& v, const Tangent& w) const;

  KForm<AlgebraElement> connection_form() const;
  KForm<AlgebraElement> curvature_form(Route route = Route::closed_form, FdConfig fd = {}) const;
  /// -(1/8pi^2) <R~, R~>.
  KForm<double> pontrjagin_form() const;
  /// -(1/8pi^2) (<F, F> + 2 <F, nabla Phi ^ dtheta>) built from the bundle's
  /// own curvature and Higgs derivative.
  KForm<double> pontrjagin_rhs_form() const;

  /// int_{S^1} of the Pontrjagin form contracted with (U, V, W, d/dtheta)
  /// at (p, 1, theta). Uses a grid of the scenario's kind with `nodes`
  /// points (twice the loop grid by default).
  double integrate_circle(const Point& p, const Tangent& u, const Tangent& v, const Tangent& w, int nodes = 0) const;

  /// (p, k, theta) g = (p g, g(theta)^{-1} k, theta); theta must sit on a grid
  /// node.
  Point act(const Point& pt, const LoopPoint& g) const;
  /// Pushforward of act: X -> ad(g^{-1}) X, eta -> eta - lambda ad(k^{-1}) Z(g)(theta).
  Tangent act_tangent(const Point& pt, const Tangent& v, const LoopPoint& g) const;

  /// Framed inverse: A(X) and Phi(p) read back from the connection at k = 1
  /// on (X, 0, 0) and (0, 0, 1) at every grid node.
  LoopVector extract_connection(const Point& p, const Tangent& x) const;
  LoopVector extract_higgs(const Point& p) const;

 private:
  Point bundle_point(const Point& pt) const;
  Tangent bundle_tangent(const Tangent& v) const;
  int node_index(double theta) const;
  std::shared_ptr<const BundleScenario> scenario_;
};

// Killingback map on a trivial K-bundle Q = X x K over a chart.
struct QPoint {
  Eigen::VectorXd x;
  GroupElement q;
};

/// A loop in Q sampled on a grid: chart values x_j and group values q_j.
struct QLoop {
  std::vector<Eigen::VectorXd> x;
  LoopPoint q;
};

/// (p, k, theta_j) -> p(theta_j) k.
QPoint killingback_map(const QLoop& p, const GroupElement& k, int node);
/// Right action of a loop: q_j -> q_j g_j.
QLoop act(const QLoop& p, const LoopPoint& g);

}  // namespace loopgerbe
