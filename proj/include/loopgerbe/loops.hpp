#pragma once

// Discretised loop groups L(K), Omega(K) and paths: group- and algebra-valued
// grid functions on a ThetaGrid, theta-differentiation, S^1 quadrature and
// pointwise loop-group arithmetic.

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "loopgerbe/grid.hpp"
#include "loopgerbe/liegroup.hpp"

namespace loopgerbe {

/// An su(n)-valued function sampled on a grid (a left-trivialised tangent
/// vector to the loop group, or any Lie-algebra valued theta-function).
class LoopVector {
 public:
  LoopVector(ThetaGrid grid, std::vector<AlgebraElement> values);

  static LoopVector zero(const ThetaGrid& grid, int n);
  static LoopVector constant(const ThetaGrid& grid, const AlgebraElement& x);
  static LoopVector from_function(const ThetaGrid& grid, const std::function<AlgebraElement(double)>& f);

  const ThetaGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  int n() const { return values_.front().n(); }
  const AlgebraElement& operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
  AlgebraElement& operator[](int j) { return values_[static_cast<std::size_t>(j)]; }
  const std::vector<AlgebraElement>& values() const { return values_; }

  /// Value at an arbitrary angle by the grid's interpolant.
  AlgebraElement at(double theta) const;

  LoopVector& operator+=(const LoopVector& o);
  LoopVector& operator-=(const LoopVector& o);
  LoopVector& operator*=(double s);

 private:
  ThetaGrid grid_;
  std::vector<AlgebraElement> values_;
};

inline LoopVector operator+(LoopVector a, const LoopVector& b) { return a += b; }
inline LoopVector operator-(LoopVector a, const LoopVector& b) { return a -= b; }
inline LoopVector operator-(LoopVector a) { return a *= -1.0; }
inline LoopVector operator*(double s, LoopVector a) { return a *= s; }
inline LoopVector operator*(LoopVector a, double s) { return a *= s; }

/// Max over nodes of the Frobenius norm.
double max_norm(const LoopVector& x);

/// A K-valued function sampled on a grid: a loop (periodic grid) or a path
/// (interval grid).
class LoopPoint {
 public:
  LoopPoint(ThetaGrid grid, std::vector<GroupElement> values);

  static LoopPoint identity(const ThetaGrid& grid, int n);
  static LoopPoint constant(const ThetaGrid& grid, const GroupElement& k);
  static LoopPoint from_function(const ThetaGrid& grid, const std::function<GroupElement(double)>& f);

  const ThetaGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  int n() const { return values_.front().n(); }
  const GroupElement& operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
  GroupElement& operator[](int j) { return values_[static_cast<std::size_t>(j)]; }
  const std::vector<GroupElement>& values() const { return values_; }
  const GroupElement& back() const { return values_.back(); }

 private:
  ThetaGrid grid_;
  std::vector<GroupElement> values_;
};

/// Max over nodes of |g_j - h_j|_F.
double max_distance(const LoopPoint& g, const LoopPoint& h);

void require_same_grid(const ThetaGrid& a, const ThetaGrid& b, const char* what);

/// Derivative in theta of an algebra-valued grid function.
LoopVector dtheta(const LoopVector& x);
/// Z(g) = (d_theta g) g^{-1}.
LoopVector dtheta(const LoopPoint& g);
/// g^{-1} d_theta g.
LoopVector left_log_derivative(const LoopPoint& g);

/// Grid quadrature of nodal samples: (2pi/N) sum on periodic grids.
cplx quad_s1(const ThetaGrid& grid, std::span<const cplx> samples);
double quad_s1(const ThetaGrid& grid, std::span<const double> samples);
/// Integral over the grid of <X(theta), Y(theta)>.
double integral_inner(const LoopVector& x, const LoopVector& y);

LoopPoint loop_mul(const LoopPoint& g, const LoopPoint& h);
LoopPoint loop_inv(const LoopPoint& g);
/// Pointwise g exp(t X).
LoopPoint loop_exp_right(const LoopPoint& g, const LoopVector& x, double t);
/// Pointwise ad(g) X = g X g^{-1}.
LoopVector loop_adjoint(const LoopPoint& g, const LoopVector& x);
/// Pointwise ad(g^{-1}) X = g^{-1} X g.
LoopVector loop_adjoint_inv(const LoopPoint& g, const LoopVector& x);
LoopVector loop_bracket(const LoopVector& x, const LoopVector& y);

/// Real Fourier series c0 + sum_k (a_k cos k theta + b_k sin k theta).
struct FourierProfile {
  double c0 = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  double value(double theta) const;
  double derivative(double theta) const;
  /// The based variant, f(0) = 0, obtained by shifting c0.
  FourierProfile based() const;
};

/// g(theta) = exp(f(theta) xi): a loop with exact derivatives.
struct AnalyticLoop {
  AlgebraElement generator;
  FourierProfile profile;

  LoopPoint realize(const ThetaGrid& grid) const;
  /// Exact Z(g) = f'(theta) xi (xi commutes with exp(f xi)).
  LoopVector z_exact(const ThetaGrid& grid) const;
};

/// A path s -> f(s) in the loop group on a uniform s-grid over [0, 1],
/// starting at the constant identity loop.
class PathInLoopGroup {
 public:
  explicit PathInLoopGroup(std::vector<LoopPoint> nodes);

  static PathInLoopGroup from_function(int m, const std::function<LoopPoint(double)>& f);

  int size() const { return static_cast<int>(nodes_.size()); }
  double step() const { return 1.0 / (size() - 1); }
  double s(int i) const { return i * step(); }
  const LoopPoint& operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const ThetaGrid& grid() const { return nodes_.front().grid(); }

 private:
  std::vector<LoopPoint> nodes_;
};

/// Minimum number of s-nodes in a path.
inline constexpr int kMinPathNodes = 64;

PathInLoopGroup path_mul(const PathInLoopGroup& f, const PathInLoopGroup& g);
const LoopPoint& path_endpoint(const PathInLoopGroup& f);
/// Left-trivialised s-derivative f(s_i)^{-1} f'(s_i) by 4th-order differences.
LoopVector path_velocity(const PathInLoopGroup& f, int i);
/// Composite Simpson weights on m uniform nodes over [0, 1] (3/8 rule on the
/// last three intervals when the interval count is odd).
Eigen::VectorXd path_weights(int m);

// Text fixtures. A loop is one line per node holding 2n^2 reals (row-major,
// re/im interleaved); '#' starts a comment line.
void write_loop(std::ostream& os, const LoopPoint& g);
LoopPoint read_loop(std::istream& is, GridKind kind = GridKind::periodic);
// An analytic loop is two lines: the basis coefficients of xi, then
// "c0 a1 b1 a2 b2 ..." for the profile.
void write_analytic_loop(std::ostream& os, const AnalyticLoop& loop);
AnalyticLoop read_analytic_loop(std::istream& is, const SpecialUnitary& group);

}  // namespace loopgerbe
