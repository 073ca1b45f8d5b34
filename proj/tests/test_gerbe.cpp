#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loopgerbe/gerbe.hpp"

using namespace loopgerbe;
using std::numbers::pi;

namespace {

const SpecialUnitary& G = SpecialUnitary::su2();
const cplx I(0.0, 1.0);

Point component(const Point& pk, int i) {
  Point p;
  p.chart = pk.chart;
  p.loops = {pk.loops[static_cast<std::size_t>(i)]};
  return p;
}

Tangent component(const Tangent& vk, int i) {
  Tangent v;
  v.chart = vk.chart;
  v.loops = {vk.loops[static_cast<std::size_t>(i)]};
  return v;
}

std::shared_ptr<const TrivialBundle> default_bundle(int n = 64) {
  return std::make_shared<TrivialBundle>(G, ThetaGrid::periodic(n), default_trivial_bundle_data(G));
}

std::shared_ptr<const PathFibration> path_bundle(int n = 64) {
  return std::make_shared<PathFibration>(G, ThetaGrid::interval(n));
}

Point base(const Eigen::VectorXd& m) {
  Point b;
  b.chart = m;
  return b;
}

Tangent base_vector(const Eigen::VectorXd& u) {
  Tangent t;
  t.chart = u;
  return t;
}

}  // namespace

TEST_CASE("tau on the trivial bundle") {
  const auto s = default_bundle();
  Rng rng(20);
  const Point p = s->random_point(rng);
  const LoopPoint g = s->random_structure_element(rng);
  CHECK(max_distance(tau(*s, p, p), LoopPoint::identity(s->grid(), 2)) < 1e-14);
  CHECK(max_distance(tau(*s, p, s->act(p, g)), g) < 1e-13);

  Point far = p;
  far.chart(0) += 0.1;
  CHECK_THROWS_AS(tau(*s, p, far), DomainError);
}

TEST_CASE("epsilon vanishes on the diagonal") {
  const auto s = default_bundle();
  Rng rng(21);
  const Point p = s->random_point(rng);
  Point pp = p;
  pp.loops.push_back(p.loops[0]);
  const Tangent v = s->random_fibre_tangent(pp, rng);
  CHECK(std::abs(epsilon_form(s)(pp, std::vector<Tangent>{v})) < 1e-14);
}

TEST_CASE("higgs field is twisted-equivariant and convex combinations stay so") {
  for (std::shared_ptr<const BundleScenario> s :
       {std::shared_ptr<const BundleScenario>(default_bundle()), std::shared_ptr<const BundleScenario>(path_bundle())}) {
    Rng rng(22);
    const Point p = s->random_point(rng);
    const LoopPoint g = s->random_structure_element(rng);
    auto higgs = [&](const Point& q) { return s->higgs(q); };
    CHECK(higgs_equivariance_residual(higgs, *s, p, g) < 1e-8);
  }

  const auto s0 = default_bundle();
  TrivialBundleData other = default_trivial_bundle_data(G);
  other.higgs_terms.push_back({0, 1, 3, true, {0.2, -0.4, 0.1, 0.3, 0.0}});
  const auto s1 = std::make_shared<TrivialBundle>(G, s0->grid(), other);
  Rng rng(23);
  for (double lambda : {0.0, 0.3, 1.0}) {
    auto mix = [&](const Point& q) { return lambda * s0->higgs(q) + (1.0 - lambda) * s1->higgs(q); };
    CHECK(higgs_equivariance_residual(mix, *s0, s0->random_point(rng), s0->random_structure_element(rng)) < 1e-10);
  }
}

TEST_CASE("curvature and Higgs derivative descend") {
  const auto s = default_bundle();
  Rng rng(24);
  for (int i = 0; i < 3; ++i) {
    const Point pair = s->random_fibre_point(2, rng);
    const Tangent v = s->random_fibre_tangent(pair, rng), w = s->random_fibre_tangent(pair, rng);
    const LoopPoint t = tau(*s, component(pair, 0), component(pair, 1));
    const LoopVector n1 = s->nabla_higgs(component(pair, 0), component(v, 0));
    const LoopVector n2 = s->nabla_higgs(component(pair, 1), component(v, 1));
    CHECK(max_norm(n2 - loop_adjoint_inv(t, n1)) < 1e-8);
    const LoopVector f1 = s->curvature(component(pair, 0), component(v, 0), component(w, 0));
    const LoopVector f2 = s->curvature(component(pair, 1), component(v, 1), component(w, 1));
    CHECK(max_norm(f2 - loop_adjoint_inv(t, f1)) < 1e-8);
  }
}

TEST_CASE("flat data has zero curvature, Higgs derivative and string form") {
  TrivialBundleData flat;
  const auto s = std::make_shared<TrivialBundle>(G, ThetaGrid::periodic(16), flat);
  Rng rng(25);
  const Point p = s->random_point(rng);
  const Tangent v = s->random_fibre_tangent(p, rng), w = s->random_fibre_tangent(p, rng);
  CHECK(max_norm(s->curvature(p, v, w)) < 1e-15);
  CHECK(max_norm(s->nabla_higgs(p, v)) < 1e-15);
  const Point m = s->random_base_point(rng);
  std::vector<Tangent> u;
  for (int k = 0; k < 3; ++k) u.push_back(s->random_base_tangent(m, rng));
  CHECK(std::abs(string_form(s)(m, u)) < 1e-15);
}

TEST_CASE("string form of abelian data against direct quadrature") {
  // a_1 = rho m_2 sin(theta) E1, a_2 = rho (1 + m_1/2) cos(theta) E1,
  // phi = rho (0.3 + m_3) sin(theta) E1 on (-1, 1)^3, rho = prod (1 - m_l^2).
  TrivialBundleData data;
  data.dim = 3;
  data.connection_terms = {{0, 0, 1, true, {0.0, 0.0, 1.0}}, {1, 0, 1, false, {1.0, 0.5}}};
  data.higgs_terms = {{0, 0, 1, true, {0.3, 0.0, 0.0, 1.0}}};
  const auto s = std::make_shared<TrivialBundle>(G, ThetaGrid::periodic(32), data);

  const Eigen::Vector3d m(0.2, -0.35, 0.5);
  const Eigen::Vector3d u0(1.0, 0.3, -0.2), u1(-0.4, 0.8, 0.6), u2(0.5, -0.7, 0.9);

  auto rho = [](const Eigen::Vector3d& x) { return (1 - x(0) * x(0)) * (1 - x(1) * x(1)) * (1 - x(2) * x(2)); };
  auto drho = [&](const Eigen::Vector3d& x, int j) { return -2.0 * x(j) * rho(x) / (1 - x(j) * x(j)); };
  // Scalar components along E1 (<E1, E1> = 1); every bracket vanishes.
  auto da = [&](int i, int j, double t) {
    if (i == 0) return (drho(m, j) * m(1) + (j == 1 ? rho(m) : 0.0)) * std::sin(t);
    if (i == 1) return (drho(m, j) * (1 + 0.5 * m(0)) + (j == 0 ? 0.5 * rho(m) : 0.0)) * std::cos(t);
    return 0.0;
  };
  auto dtheta_a = [&](int i, double t) {
    return i == 0 ? rho(m) * m(1) * std::cos(t) : i == 1 ? -rho(m) * (1 + 0.5 * m(0)) * std::sin(t) : 0.0;
  };
  auto dphi = [&](int j, double t) {
    return (drho(m, j) * (0.3 + m(2)) + (j == 2 ? rho(m) : 0.0)) * std::sin(t);
  };
  auto F = [&](const Eigen::Vector3d& x, const Eigen::Vector3d& y, double t) {
    double f = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f += x(i) * y(j) * (da(j, i, t) - da(i, j, t));
    return f;
  };
  auto N = [&](const Eigen::Vector3d& x, double t) {
    double n = 0.0;
    for (int j = 0; j < 3; ++j) n += x(j) * (dphi(j, t) - dtheta_a(j, t));
    return n;
  };
  const QuadratureRule rule = gauss_legendre(48, 0.0, 2 * pi);
  double oracle = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes(k);
    const double pairing = F(u0, u1, t) * N(u2, t) - F(u0, u2, t) * N(u1, t) + F(u1, u2, t) * N(u0, t);
    oracle += rule.weights(k) * pairing;
  }
  oracle *= -1.0 / (4 * pi * pi);

  const double value =
      string_form(s)(base(m), std::vector<Tangent>{base_vector(u0), base_vector(u1), base_vector(u2)});
  CHECK(std::abs(oracle) > 1e-3);
  CHECK(std::abs(value - oracle) < 1e-8);
}

TEST_CASE("string form is independent of the lift") {
  const auto s = default_bundle();
  const KForm<double> total = string_form_total(s), down = string_form(s);
  Rng rng(26);
  for (int i = 0; i < 3; ++i) {
    const Point p = s->random_point(rng);
    const Point m = s->project(p);
    std::vector<Tangent> u, v;
    for (int k = 0; k < 3; ++k) {
      u.push_back(s->random_base_tangent(m, rng));
      v.push_back(s->random_tangent_over(p, u.back(), rng));
    }
    const double w = down(m, u);
    CHECK(std::abs(w) > 1e-6);
    CHECK(std::abs(total(p, v) - w) < 1e-6);
  }
}

TEST_CASE("changing the Higgs field changes the string form by a closed form") {
  const auto s0 = default_bundle();
  TrivialBundleData other = default_trivial_bundle_data(G);
  other.higgs_terms.push_back({0, 1, 2, false, {0.1, 0.5, -0.3, 0.2, 0.4}});
  const auto s1 = std::make_shared<TrivialBundle>(G, s0->grid(), other);
  const KForm<double> w0 = string_form(s0), w1 = string_form(s1);
  KForm<double> diff;
  diff.degree = 3;
  diff.eval = [&](const Point& m, std::span<const Tangent> u) { return w1(m, u) - w0(m, u); };
  Rng rng(27);
  const Point m = s0->random_base_point(rng);
  std::vector<Tangent> u;
  for (int k = 0; k < 3; ++k) u.push_back(s0->random_base_tangent(m, rng));
  CHECK(std::abs(diff(m, u)) > 1e-6);
  u.push_back(s0->random_base_tangent(m, rng));
  CHECK(std::abs(ext_d(diff, m, u)) < 1e-6);
}

TEST_CASE("gerbe derivation chain on the trivial bundle") {
  const auto s = default_bundle();
  const ExtensionData ext = ExtensionData::make(G, s->grid(), 1);
  Rng rng(28);

  const Point p3 = s->random_fibre_point(3, rng);
  const std::vector<Tangent> v3{s->random_fibre_tangent(p3, rng)};
  CHECK(std::abs(delta_fibre(epsilon_form(s), 2)(p3, v3) - beta_form(s, ext)(p3, v3)) < 1e-8);

  const Point p2 = s->random_fibre_point(2, rng);
  const std::vector<Tangent> v2{s->random_fibre_tangent(p2, rng), s->random_fibre_tangent(p2, rng)};
  const cplx lhs = delta_fibre(curving_form(s), 1)(p2, v2);
  const cplx rhs = tau_pullback_R(s)(p2, v2) - ext_d(epsilon_form(s), p2, v2);
  CHECK(std::abs(lhs) > 1e-6);
  CHECK(std::abs(lhs - rhs) < 1e-6);

  const Point p = s->random_point(rng);
  std::vector<Tangent> v;
  for (int k = 0; k < 3; ++k) v.push_back(s->random_fibre_tangent(p, rng));
  const cplx df = ext_d(curving_form(s), p, v);
  const double w = pullback_to_total<double>(s, string_form(s))(p, v);
  CHECK(std::abs(df - 2.0 * pi * I * w) < 1e-6);
}

TEST_CASE("closed-form curvature and Higgs derivative match finite differences") {
  for (std::shared_ptr<const BundleScenario> s :
       {std::shared_ptr<const BundleScenario>(default_bundle()), std::shared_ptr<const BundleScenario>(path_bundle())}) {
    Rng rng(29);
    const Point p = s->random_point(rng);
    const std::vector<Tangent> v{s->random_fibre_tangent(p, rng), s->random_fibre_tangent(p, rng)};
    const auto f_closed = curvature_form(s), f_fd = curvature_form(s, Route::finite_difference);
    CHECK(max_norm(f_closed(p, v) - f_fd(p, v)) < 1e-6);
    const std::vector<Tangent> v1{v[0]};
    const auto n_closed = nabla_higgs_form(s), n_fd = nabla_higgs_form(s, Route::finite_difference);
    CHECK(max_norm(n_closed(p, v1) - n_fd(p, v1)) < 1e-6);
  }
}

TEST_CASE("path fibration connection axioms") {
  const auto s = path_bundle();
  Rng rng(30);
  const Point p = s->random_point(rng);
  Tangent vert = zero_tangent(p);
  vert.loops[0] = s->random_vertical(rng);
  CHECK(max_norm(s->connection(p, vert) - vert.loops[0]) < 1e-8);

  const Tangent v = s->random_fibre_tangent(p, rng);
  const LoopPoint g = s->random_structure_element(rng);
  CHECK(max_norm(s->connection(s->act(p, g), s->act_tangent(v, g)) - loop_adjoint_inv(g, s->connection(p, v))) < 1e-8);
  CHECK(max_distance(LoopPoint::constant(s->grid(), g[0]), LoopPoint::identity(s->grid(), 2)) < 1e-14);
}

TEST_CASE("path fibration string form equals omega3 at the endpoint") {
  const auto s = path_bundle();
  Rng rng(31);
  const int last = s->grid().size() - 1;
  for (Route route : {Route::closed_form, Route::finite_difference}) {
    const KForm<double> total = string_form_total(s, route);
    const Point p = s->random_point(rng);
    std::vector<Tangent> v;
    for (int k = 0; k < 3; ++k) v.push_back(s->random_fibre_tangent(p, rng));
    const double w3 = omega3(p.loops[0].back(), v[0].loops[0][last], v[1].loops[0][last], v[2].loops[0][last]);
    CHECK(std::abs(w3) > 1e-4);
    CHECK(std::abs(total(p, v) - w3) < 1e-6);
  }
}

TEST_CASE("omega3 on the orthonormal frame") {
  // [E1, E2] = -sqrt(2) E3, so the six-term sum is -6 sqrt(2) / (48 pi^2).
  const GroupElement one = GroupElement::identity(2);
  const double expected = -6.0 * std::sqrt(2.0) / (48 * pi * pi);
  CHECK(omega3(one, G.basis(0), G.basis(1), G.basis(2)) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(omega3(one, G.basis(0), G.basis(1), G.basis(2), PairingConvention::permutation_sum) ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::abs(omega3(one, G.basis(0), G.basis(0), G.basis(2))) < 1e-16);

  Rng rng(32);
  const GroupElement k = exp_alg(random_algebra(G, rng));
  const AlgebraElement x = random_algebra(G, rng), y = random_algebra(G, rng), z = random_algebra(G, rng);
  CHECK(omega3(k, x, y, z) == doctest::Approx(-omega3(k, y, x, z)).epsilon(1e-12));
}

TEST_CASE("omega3 integrates to one over SU(2)") { CHECK(std::abs(omega3_volume(24) - 1.0) < 1e-3); }

TEST_CASE("reduced splitting on both scenarios") {
  for (std::shared_ptr<const BundleScenario> s :
       {std::shared_ptr<const BundleScenario>(default_bundle()), std::shared_ptr<const BundleScenario>(path_bundle())}) {
    Rng rng(33);
    const Point p = s->random_point(rng);
    CHECK(reduced_splitting_check(*s, p, s->random_structure_element(rng), s->random_vertical(rng)) < 1e-8);
    CHECK(reduced_splitting_check(*s, p, LoopPoint::identity(s->grid(), 2), s->random_vertical(rng)) == 0.0);
  }
}
