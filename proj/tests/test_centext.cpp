#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loopgerbe/centext.hpp"
#include "loopgerbe/random.hpp"

using namespace loopgerbe;
using std::numbers::pi;

namespace {

const SpecialUnitary& G = SpecialUnitary::su2();
const cplx I(0.0, 1.0);

LoopVector fn(const ThetaGrid& grid, double (*f)(double), const AlgebraElement& e) {
  return LoopVector::from_function(grid, [&](double t) { return f(t) * e; });
}

LoopPoint exp_sin(const ThetaGrid& grid, const AlgebraElement& e) {
  return AnalyticLoop{e, FourierProfile{0.0, {}, {1.0}}}.realize(grid);
}

PathInLoopGroup identity_path(const ThetaGrid& grid, int m) {
  return PathInLoopGroup::from_function(m, [&](double) { return LoopPoint::identity(grid, 2); });
}

// s -> exp(s a(theta) e)
PathInLoopGroup commuting_path(const ThetaGrid& grid, int m, double (*a)(double), const AlgebraElement& e) {
  return PathInLoopGroup::from_function(m, [&](double s) {
    return LoopPoint::from_function(grid, [&](double t) { return exp_alg(e, s * a(t)); });
  });
}

double sin_(double t) { return std::sin(t); }
double cos_(double t) { return std::cos(t); }
double one(double) { return 1.0; }

}  // namespace

TEST_CASE("R on trigonometric vectors") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const LoopPoint g = LoopPoint::identity(grid, 2);
  const auto& e1 = G.basis(0);
  const auto& e2 = G.basis(1);
  CHECK(std::abs(eval_R(g, fn(grid, sin_, e1), fn(grid, cos_, e1)) - cplx(0.0, -0.5)) < 1e-13);
  CHECK(std::abs(eval_R(g, fn(grid, sin_, e1), fn(grid, cos_, e2))) < 1e-14);
  const LoopVector x = fn(grid, sin_, e2);
  CHECK(std::abs(eval_R(g, x, x)) < 1e-15);
}

TEST_CASE("R is alternating, imaginary and left invariant") {
  const ThetaGrid grid = ThetaGrid::periodic(48);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const LoopPoint g = random_loop(G, grid, rng), h = random_loop(G, grid, rng);
    const LoopVector x = random_loop_vector(G, grid, rng), y = random_loop_vector(G, grid, rng);
    const cplx r = eval_R(g, x, y);
    CHECK(std::abs(r + eval_R(g, y, x)) < 1e-13);
    CHECK(std::abs(r.real()) < 1e-15);
    CHECK(std::abs(r - eval_R(h, x, y)) < 1e-15);
  }
}

TEST_CASE("alpha oracles") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const auto& e1 = G.basis(0);
  Rng rng(4);
  const LoopPoint g = random_loop(G, grid, rng);
  const LoopPoint h = exp_sin(grid, e1);
  const LoopVector zero = LoopVector::zero(grid, 2);
  const LoopVector any = random_loop_vector(G, grid, rng);

  CHECK(std::abs(eval_alpha(g, LoopPoint::constant(grid, exp_alg(G.basis(2))), any, any)) < 1e-15);
  CHECK(std::abs(eval_alpha(g, h, zero, any)) < 1e-15);
  CHECK(std::abs(eval_alpha(g, h, fn(grid, one, e1), any)) < 1e-14);
  CHECK(std::abs(eval_alpha(g, h, fn(grid, cos_, e1), any) - 0.5 * I) < 1e-13);
}

TEST_CASE("Z(g^-1, X) on the sine loop is -i/2") {
  // The reduced-splitting identity fixes the sign: Z(g^-1, X) = -alpha(1, g)(X, 0).
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const auto& e1 = G.basis(0);
  const LoopPoint g = exp_sin(grid, e1);
  const LoopVector x = fn(grid, cos_, e1);
  CHECK(std::abs(gomi_cocycle_Z(g, x) - cplx(0.0, -0.5)) < 1e-13);
  CHECK(std::abs(gomi_cocycle_Z(LoopPoint::constant(grid, exp_alg(G.basis(1))), x)) < 1e-15);

  Rng rng(5);
  const LoopPoint r = random_loop(G, grid, rng);
  const LoopVector y = random_loop_vector(G, grid, rng);
  const LoopPoint one_loop = LoopPoint::identity(grid, 2);
  CHECK(std::abs(gomi_cocycle_Z(r, y) + eval_alpha(one_loop, r, y, LoopVector::zero(grid, 2))) < 1e-10);
}

TEST_CASE("alpha sign self-test selects +1") {
  const ExtensionData ext = ExtensionData::make(G, ThetaGrid::periodic(32), 7);
  CHECK(ext.alpha_sign == 1.0);
  CHECK(ext.self_test_residual < 1e-6);
}

TEST_CASE("cocycle c on identity paths") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  Rng rng(6);
  const PathInLoopGroup f = random_loop_path(G, grid, 64, rng);
  const PathInLoopGroup one_path = identity_path(grid, 64);
  CHECK(std::abs(cocycle_c(f, one_path) - 1.0) < 1e-14);
  CHECK(std::abs(cocycle_c(one_path, f) - 1.0) < 1e-14);
}

TEST_CASE("cocycle c for commuting paths") {
  // f(s) = exp(s cos E1), g(s) = exp(s sin E1): the exponent is
  // (i/2pi) int_0^1 s ds int cos(theta) cos(theta) dtheta = i/4.
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const auto& e1 = G.basis(0);
  const PathInLoopGroup f = commuting_path(grid, 65, cos_, e1);
  const PathInLoopGroup g = commuting_path(grid, 65, sin_, e1);
  CHECK(std::abs(cocycle_log(f, g) - 0.25 * I) < 1e-10);
  CHECK(std::abs(std::abs(cocycle_c(f, g)) - 1.0) < 1e-14);
}

TEST_CASE("cocycle identity on random paths") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  Rng rng(8);
  for (int i = 0; i < 3; ++i) {
    const auto f = random_loop_path(G, grid, 128, rng);
    const auto g = random_loop_path(G, grid, 128, rng);
    const auto k = random_loop_path(G, grid, 128, rng);
    const cplx lhs = cocycle_c(f, g) * cocycle_c(path_mul(f, g), k);
    const cplx rhs = cocycle_c(g, k) * cocycle_c(f, path_mul(g, k));
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("disk loop validation") {
  const ThetaGrid grid = ThetaGrid::periodic(16);
  const LoopVector x = fn(grid, sin_, G.basis(0));
  CHECK_THROWS_AS(DiskLoop(grid, [=](double) { return x; }), DomainError);
}

TEST_CASE("holonomy of the zero loop and orientation reversal") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const LoopVector zero = LoopVector::zero(grid, 2);
  CHECK(std::abs(holonomy_H(DiskLoop(grid, [=](double) { return zero; })) - 1.0) < 1e-15);

  Rng rng(9);
  const LoopVector a = random_loop_vector(G, grid, rng, 0.5), b = random_loop_vector(G, grid, rng, 0.5);
  auto xi = [=](double s) { return std::sin(pi * s) * a + std::sin(2 * pi * s) * b; };
  const cplx h = holonomy_H(DiskLoop(grid, xi));
  const cplx r = holonomy_H(DiskLoop(grid, [=](double s) { return xi(1.0 - s); }));
  CHECK(std::abs(std::abs(h) - 1.0) < 1e-12);
  CHECK(std::abs(h * r - 1.0) < 1e-8);
  CHECK(std::abs(h - 1.0) > 1e-3);
}

TEST_CASE("holonomy is quadratic in the loop size") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  Rng rng(10);
  const LoopVector a = random_loop_vector(G, grid, rng, 0.5), b = random_loop_vector(G, grid, rng, 0.5);
  std::vector<double> lx, ly;
  for (double lambda : {0.02, 0.04, 0.08}) {
    auto xi = [=](double s) { return lambda * (std::sin(pi * s) * a + std::sin(2 * pi * s) * b); };
    lx.push_back(std::log(lambda));
    ly.push_back(std::log(std::abs(std::log(holonomy_H(DiskLoop(grid, xi))))));
  }
  const double slope = ((ly[2] - ly[0]) / (lx[2] - lx[0]));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("mu-hat trivial cases") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  Rng rng(11);
  const int m = 64;
  std::vector<LoopVector> xs;
  for (int i = 0; i < m; ++i) xs.push_back(random_loop_vector(G, grid, rng));
  CHECK(std::abs(mu_hat(identity_path(grid, m), xs)) < 1e-15);

  const PathInLoopGroup f = random_loop_path(G, grid, m, rng);
  std::vector<LoopVector> vel;
  for (int i = 0; i < m; ++i) vel.push_back(path_velocity(f, i));
  CHECK(std::abs(mu_hat(f, vel)) < 1e-14);
}

TEST_CASE("mu-hat against a direct double integral") {
  // f(s) = exp(s sin(theta) E1) has velocity sin(theta) E1 and
  // X(s) = s cos(2 theta) E2 + cos(theta) E1, so the integrand is -1.
  const ThetaGrid grid = ThetaGrid::periodic(32);
  const auto& e1 = G.basis(0);
  const auto& e2 = G.basis(1);
  const int m = 65;
  const PathInLoopGroup f = commuting_path(grid, m, sin_, e1);
  std::vector<LoopVector> xs;
  for (int i = 0; i < m; ++i) {
    const double s = f.s(i);
    xs.push_back(LoopVector::from_function(grid, [&](double t) { return s * std::cos(2 * t) * e2 + std::cos(t) * e1; }));
  }
  // Oracle: 2D Gauss-Legendre in (s, theta) with exact theta-derivatives.
  const QuadratureRule rs = gauss_legendre(20), rt = gauss_legendre(40, 0.0, 2 * pi);
  cplx oracle = 0.0;
  for (int a = 0; a < rs.nodes.size(); ++a) {
    const double s = rs.nodes(a);
    for (int b = 0; b < rt.nodes.size(); ++b) {
      const double t = rt.nodes(b);
      const AlgebraElement v = std::sin(t) * e1, dv = std::cos(t) * e1;
      const AlgebraElement x = s * std::cos(2 * t) * e2 + std::cos(t) * e1;
      const AlgebraElement dx = -2.0 * s * std::sin(2 * t) * e2 - std::sin(t) * e1;
      oracle += rs.weights(a) * rt.weights(b) * (I / (4 * pi)) * (inner(v, dx) - inner(x, dv));
    }
  }
  CHECK(std::abs(oracle - cplx(0.0, -0.5)) < 1e-12);
  CHECK(std::abs(mu_hat(f, xs) - oracle) < 1e-7);
}

TEST_CASE("reduced splitting with identity element") {
  const ThetaGrid grid = ThetaGrid::periodic(32);
  Rng rng(12);
  const LoopVector phi = random_loop_vector(G, grid, rng), x = random_loop_vector(G, grid, rng);
  CHECK(reduced_splitting_residual(phi, phi, LoopPoint::identity(grid, 2), x) == 0.0);
}
