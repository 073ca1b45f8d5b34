#include "loopgerbe/grid.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "loopgerbe/liegroup.hpp"

namespace loopgerbe {

namespace {

using std::numbers::pi;

std::shared_ptr<const void> cached(const std::tuple<int, int, int>& key,
                                   const std::function<std::shared_ptr<const void>()>& make) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const void>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto made = make();
  cache.emplace(key, made);
  return made;
}

}  // namespace

ThetaGrid ThetaGrid::periodic(int n, DiffMethod method) {
  if (n < 16 || n % 2 != 0)
    throw DomainError("periodic grid needs an even node count >= 16, got " + std::to_string(n));
  auto make = [n, method]() -> std::shared_ptr<const void> {
    auto d = std::make_shared<Data>();
    const double h = 2.0 * pi / n;
    d->nodes = Eigen::VectorXd::LinSpaced(n, 0.0, h * (n - 1));
    d->weights = Eigen::VectorXd::Constant(n, h);
    d->diff = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const int m = j - k;
        if (method == DiffMethod::spectral) {
          if (m == 0) continue;
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          d->diff(j, k) = 0.5 * sign / std::tan(0.5 * m * h);
        } else {
          const int mm = ((m % n) + n) % n;
          if (mm == n - 1) d->diff(j, k) = 8.0 / (12.0 * h);
          if (mm == n - 2) d->diff(j, k) = -1.0 / (12.0 * h);
          if (mm == 1) d->diff(j, k) = -8.0 / (12.0 * h);
          if (mm == 2) d->diff(j, k) = 1.0 / (12.0 * h);
        }
      }
    }
    return d;
  };
  auto data = std::static_pointer_cast<const Data>(
      cached({n, 0, static_cast<int>(method)}, make));
  return ThetaGrid(n, GridKind::periodic, method, data);
}

ThetaGrid ThetaGrid::interval(int n) {
  if (n < 16) throw DomainError("interval grid needs >= 16 nodes, got " + std::to_string(n));
  auto make = [n]() -> std::shared_ptr<const void> {
    auto d = std::make_shared<Data>();
    const int m = n - 1;  // polynomial degree
    // x_j = cos(pi j / m) runs from 1 to -1; theta = pi (1 - x) runs from 0 to 2 pi.
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x(j) = std::cos(pi * j / m);
    d->nodes = pi * (Eigen::VectorXd::Ones(n) - x);
    d->nodes(0) = 0.0;
    d->nodes(m) = 2.0 * pi;

    d->bary.resize(n);
    for (int j = 0; j < n; ++j) {
      const double c = (j == 0 || j == m) ? 0.5 : 1.0;
      d->bary(j) = ((j % 2 == 0) ? 1.0 : -1.0) * c;
    }

    // Chebyshev collocation in x with negative-sum diagonal, then d/dtheta = -(1/pi) d/dx.
    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const double ci = (i == 0 || i == m) ? 2.0 : 1.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double cj = (j == 0 || j == m) ? 2.0 : 1.0;
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        // Trigonometric form of x_i - x_j avoids cancellation near the ends.
        const double diff = -2.0 * std::sin(pi * (i + j) / (2.0 * m)) * std::sin(pi * (i - j) / (2.0 * m));
        dx(i, j) = (ci / cj) * sign / diff;
      }
    }
    for (int i = 0; i < n; ++i) dx(i, i) = -dx.row(i).sum();
    d->diff = -dx / pi;

    // Clenshaw-Curtis weights on [-1, 1], scaled by pi.
    d->weights = Eigen::VectorXd::Zero(n);
    for (int j = 0; j <= m; ++j) {
      const double tj = pi * j / m;
      double s = 0.0;
      for (int k = 1; k <= m / 2; ++k) {
        const double b = (2 * k == m) ? 1.0 : 2.0;
        s += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * tj);
      }
      const double c = (j == 0 || j == m) ? 1.0 : 2.0;
      d->weights(j) = pi * c / m * (1.0 - s);
    }
    return d;
  };
  auto data = std::static_pointer_cast<const Data>(cached({n, 1, 0}, make));
  return ThetaGrid(n, GridKind::interval, DiffMethod::spectral, data);
}

Eigen::VectorXd ThetaGrid::interpolation_weights(double theta) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_);
  if (kind_ == GridKind::periodic) {
    const double h = 2.0 * pi / n_;
    for (int j = 0; j < n_; ++j) {
      const double x = theta - node(j);
      const double half = 0.5 * x;
      const double s = std::sin(half);
      if (std::abs(s) < 1e-14) {
        // x is a multiple of 2 pi: theta sits on node j.
        c.setZero();
        c(j) = 1.0;
        return c;
      }
      c(j) = std::sin(pi * x / h) / ((2.0 * pi / h) * std::tan(half));
    }
    return c;
  }
  for (int j = 0; j < n_; ++j) {
    if (std::abs(theta - node(j)) < 1e-14) {
      c(j) = 1.0;
      return c;
    }
  }
  // Barycentric formula in the x variable.
  const double x = 1.0 - theta / pi;
  double denom = 0.0;
  for (int j = 0; j < n_; ++j) {
    const double xj = 1.0 - node(j) / pi;
    c(j) = data_->bary(j) / (x - xj);
    denom += c(j);
  }
  return c / denom;
}

double quadrature(const ThetaGrid& grid, std::span<const double> samples) {
  if (static_cast<int>(samples.size()) != grid.size()) throw DomainError("quadrature: sample count mismatch");
  double s = 0.0;
  for (int j = 0; j < grid.size(); ++j) s += grid.weights()(j) * samples[static_cast<std::size_t>(j)];
  return s;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < n; ++k) {
    rule.nodes(k) = lo + half * (eig.eigenvalues()(k) + 1.0);
    const double v = eig.eigenvectors()(0, k);
    rule.weights(k) = half * 2.0 * v * v;
  }
  return rule;
}

}  // namespace loopgerbe
