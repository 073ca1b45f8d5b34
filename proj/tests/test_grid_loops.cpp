#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "loopgerbe/loops.hpp"

using namespace loopgerbe;
using std::numbers::pi;

TEST_CASE("periodic grids differentiate and integrate trigonometric polynomials") {
  for (auto method : {DiffMethod::spectral, DiffMethod::fd4}) {
    ThetaGrid grid = ThetaGrid::periodic(64, method);
    Eigen::VectorXd f(grid.size()), df(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
      const double t = grid.node(j);
      f(j) = std::sin(3 * t) + 0.5 * std::cos(t);
      df(j) = 3 * std::cos(3 * t) - 0.5 * std::sin(t);
    }
    const double err = (grid.diff() * f - df).cwiseAbs().maxCoeff();
    CHECK(err < (method == DiffMethod::spectral ? 1e-11 : 2e-3));
    Eigen::VectorXd sq = f.cwiseProduct(f);
    CHECK(quadrature(grid, std::span<const double>(sq.data(), sq.size())) == doctest::Approx(1.25 * pi).epsilon(1e-13));
  }
}

TEST_CASE("fd4 converges at fourth order") {
  auto err = [](int n) {
    ThetaGrid grid = ThetaGrid::periodic(n, DiffMethod::fd4);
    Eigen::VectorXd f(n), df(n);
    for (int j = 0; j < n; ++j) {
      f(j) = std::exp(std::sin(grid.node(j)));
      df(j) = std::cos(grid.node(j)) * f(j);
    }
    return (grid.diff() * f - df).cwiseAbs().maxCoeff();
  };
  const double order = std::log2(err(64) / err(128));
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("interval grid is exact on polynomials") {
  ThetaGrid grid = ThetaGrid::interval(24);
  CHECK(grid.node(0) == doctest::Approx(0.0));
  CHECK(grid.node(grid.size() - 1) == doctest::Approx(2 * pi));
  Eigen::VectorXd f(grid.size()), df(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.node(j);
    f(j) = t * t * t - 2 * t;
    df(j) = 3 * t * t - 2;
  }
  CHECK((grid.diff() * f - df).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::VectorXd sq(grid.size());
  for (int j = 0; j < grid.size(); ++j) sq(j) = grid.node(j) * grid.node(j);
  CHECK(quadrature(grid, std::span<const double>(sq.data(), sq.size())) ==
        doctest::Approx(8 * pi * pi * pi / 3).epsilon(1e-13));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(ThetaGrid::periodic(15), DomainError);
  CHECK_THROWS_AS(ThetaGrid::periodic(8), DomainError);
  CHECK_THROWS_AS(ThetaGrid::interval(4), DomainError);
}

TEST_CASE("interpolation reproduces band-limited data") {
  ThetaGrid grid = ThetaGrid::periodic(32);
  const auto& G = SpecialUnitary::su2();
  LoopVector x = LoopVector::from_function(grid, [&](double t) { return std::cos(2 * t) * G.basis(0) + std::sin(t) * G.basis(2); });
  const double t = 0.4321;
  AlgebraElement expect = std::cos(2 * t) * G.basis(0) + std::sin(t) * G.basis(2);
  CHECK((x.at(t).m - expect.m).norm() < 1e-13);
}

TEST_CASE("analytic loops: spectral Z matches the exact derivative") {
  const auto& G = SpecialUnitary::su2();
  AnalyticLoop loop{G.basis(1), FourierProfile{0.2, {0.5, -0.1}, {0.3, 0.05}}};
  ThetaGrid grid = ThetaGrid::periodic(64);
  LoopPoint g = loop.realize(grid);
  CHECK(max_norm(dtheta(g) - loop.z_exact(grid)) < 1e-11);
  CHECK(max_norm(left_log_derivative(g) - loop.z_exact(grid)) < 1e-11);
  CHECK(loop.profile.based().value(0.0) == doctest::Approx(0.0));
}

TEST_CASE("Z of a product: Z(gh) = Z(g) + ad(g) Z(h)") {
  const auto& G = SpecialUnitary::su3();
  ThetaGrid grid = ThetaGrid::periodic(64);
  LoopPoint g = AnalyticLoop{G.basis(0), FourierProfile{0.0, {0.4}, {0.2}}}.realize(grid);
  LoopPoint h = AnalyticLoop{G.basis(6), FourierProfile{0.0, {0.1}, {-0.7}}}.realize(grid);
  CHECK(max_norm(dtheta(loop_mul(g, h)) - (dtheta(g) + loop_adjoint(g, dtheta(h)))) < 1e-10);
}

TEST_CASE("path weights integrate cubics exactly") {
  for (int m : {64, 65}) {
    Eigen::VectorXd w = path_weights(m);
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = static_cast<double>(i) / (m - 1);
      s += w(i) * x * x * x;
    }
    CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("path velocity of exp(s X) is X") {
  const auto& G = SpecialUnitary::su2();
  ThetaGrid grid = ThetaGrid::periodic(16);
  LoopVector x = LoopVector::from_function(grid, [&](double t) { return std::cos(t) * G.basis(0) + G.basis(1); });
  auto f = PathInLoopGroup::from_function(80, [&](double s) { return loop_exp_right(LoopPoint::identity(grid, 2), x, s); });
  for (int i : {0, 1, 40, 78, 79}) CHECK(max_norm(path_velocity(f, i) - x) < 1e-7);
  auto g = PathInLoopGroup::from_function(159, [&](double s) { return loop_exp_right(LoopPoint::identity(grid, 2), x, s); });
  const double order = std::log2(max_norm(path_velocity(f, 40) - x) / max_norm(path_velocity(g, 80) - x));
  CHECK(order == doctest::Approx(4.0).epsilon(0.1));
  CHECK_THROWS_AS(PathInLoopGroup::from_function(10, [&](double) { return LoopPoint::identity(grid, 2); }), DomainError);
}

TEST_CASE("loop fixtures round trip") {
  const auto& G = SpecialUnitary::su2();
  ThetaGrid grid = ThetaGrid::periodic(16);
  AnalyticLoop loop{G.basis(2), FourierProfile{0.1, {0.3}, {0.4}}};
  std::stringstream ss;
  write_loop(ss, loop.realize(grid));
  LoopPoint back = read_loop(ss);
  CHECK(max_distance(back, loop.realize(grid)) < 1e-15);
  std::stringstream sa;
  write_analytic_loop(sa, loop);
  AnalyticLoop la = read_analytic_loop(sa, G);
  CHECK(la.profile.value(1.1) == doctest::Approx(loop.profile.value(1.1)));
}
