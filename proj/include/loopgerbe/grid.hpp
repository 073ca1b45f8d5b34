#pragma once

// Discretisations of the parameter interval [0, 2pi].
//
// A periodic grid carries equispaced nodes 2 pi j / N and models functions on
// the circle; differentiation is trigonometric (or 4th-order central
// differences) and quadrature is the periodic trapezoid rule.
//
// An interval grid carries Chebyshev-Lobatto nodes including both endpoints
// and models smooth functions on [0, 2pi] with no periodicity; it is used for
// paths (the path fibration), where Higgs fields and connections are not
// periodic. Differentiation is Chebyshev collocation, quadrature Clenshaw-Curtis.

#include <memory>
#include <span>

#include <Eigen/Dense>

namespace loopgerbe {

enum class GridKind { periodic, interval };
enum class DiffMethod { spectral, fd4 };

class ThetaGrid {
 public:
  /// Equispaced periodic grid; n must be even and >= 16.
  static ThetaGrid periodic(int n, DiffMethod method = DiffMethod::spectral);
  /// Chebyshev-Lobatto grid on [0, 2pi]; n >= 16.
  static ThetaGrid interval(int n);

  int size() const { return n_; }
  GridKind kind() const { return kind_; }
  DiffMethod method() const { return method_; }
  double node(int j) const { return data_->nodes(j); }
  const Eigen::VectorXd& nodes() const { return data_->nodes; }
  const Eigen::VectorXd& weights() const { return data_->weights; }
  /// Real N x N differentiation matrix d/dtheta.
  const Eigen::MatrixXd& diff() const { return data_->diff; }

  /// Interpolation weights c_j so that f(theta) ~ sum_j c_j f_j.
  Eigen::VectorXd interpolation_weights(double theta) const;

  bool operator==(const ThetaGrid& o) const {
    return n_ == o.n_ && kind_ == o.kind_ && method_ == o.method_;
  }
  bool operator!=(const ThetaGrid& o) const { return !(*this == o); }

 private:
  struct Data {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    Eigen::MatrixXd diff;
    Eigen::VectorXd bary;  // barycentric weights (interval grids)
  };
  ThetaGrid(int n, GridKind kind, DiffMethod method, std::shared_ptr<const Data> data)
      : n_(n), kind_(kind), method_(method), data_(std::move(data)) {}

  int n_;
  GridKind kind_;
  DiffMethod method_;
  std::shared_ptr<const Data> data_;
};

/// Quadrature of nodal samples with the grid's weights.
double quadrature(const ThetaGrid& grid, std::span<const double> samples);

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [lo, hi] (Golub-Welsch).
QuadratureRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

}  // namespace loopgerbe
