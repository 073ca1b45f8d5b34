#include "loopgerbe/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "loopgerbe/caloron.hpp"

namespace loopgerbe {

namespace {

using std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

const std::vector<std::string> kScenarios = {"all", "caloron-roundtrip", "central-extension", "path-fibration",
                                             "trivial-bundle"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Context {
  const SpecialUnitary* group;
  int ntheta;
  int npath;
  FdConfig fd;
  std::uint64_t seed;
  std::string check;

  const SpecialUnitary& G() const { return *group; }
  Rng rng() const { return Rng(seed, fnv1a(check)); }
  ThetaGrid loops() const { return ThetaGrid::periodic(ntheta); }
  ThetaGrid paths() const { return ThetaGrid::interval(ntheta); }
  std::shared_ptr<const TrivialBundle> trivial() const {
    return std::make_shared<TrivialBundle>(G(), loops(), default_trivial_bundle_data(G()));
  }
  std::shared_ptr<const PathFibration> path() const { return std::make_shared<PathFibration>(G(), paths()); }
};

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Point loop_tuple(const Context& c, Rng& rng, int count) {
  Point p;
  p.chart = Eigen::VectorXd(0);
  for (int i = 0; i < count; ++i) p.loops.push_back(random_loop(c.G(), c.loops(), rng));
  return p;
}

Tangent loop_tuple_vector(const Context& c, Rng& rng, int count) {
  Tangent v;
  v.chart = Eigen::VectorXd(0);
  for (int i = 0; i < count; ++i) v.loops.push_back(random_loop_vector(c.G(), c.loops(), rng));
  return v;
}

// A point-dependent complex 1-form on P: (i/2pi) int <A(V), Phi>.
KForm<cplx> probe_one_form(std::shared_ptr<const BundleScenario> s) {
  KForm<cplx> w;
  w.degree = 1;
  w.name = "probe";
  w.eval = [s](const Point& p, std::span<const Tangent> v) {
    return kI / (2.0 * pi) * integral_inner(s->connection(p, v[0]), s->higgs(p));
  };
  return w;
}

// A point-dependent 1-form on the loop group: (i/2pi) int <ad(g) X, Z(g)>.
KForm<cplx> probe_group_form() {
  KForm<cplx> w;
  w.degree = 1;
  w.name = "probe";
  w.eval = [](const Point& p, std::span<const Tangent> v) {
    return kI / (2.0 * pi) * integral_inner(loop_adjoint(p.loops[0], v[0].loops[0]), dtheta(p.loops[0]));
  };
  return w;
}

using Compute = std::function<double(const Context&)>;

struct Check {
  CheckInfo info;
  Compute compute;
};

constexpr int kNerveSamples = 50;
constexpr int kCocycleSamples = 20;
constexpr int kChainSamples = 20;
constexpr int kStringSamples = 20;
constexpr int kPontrjaginSamples = 100;
constexpr int kCircleSamples = 20;
constexpr int kSmallSamples = 10;

// ---- central extension -------------------------------------------------------

double d_alpha_eq_delta_R(const Context& c) {
  const ExtensionData ext = ExtensionData::make(c.G(), c.loops(), c.seed);
  const KForm<cplx> dR = delta_nerve(ext.R, 1);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kNerveSamples; ++i) {
    const Point p = loop_tuple(c, rng, 2);
    const std::vector<Tangent> v{loop_tuple_vector(c, rng, 2), loop_tuple_vector(c, rng, 2)};
    worst = std::max(worst, std::abs(ext_d(ext.alpha, p, v, c.fd) - dR(p, v)));
  }
  return worst;
}

double delta_alpha_zero(const Context& c) {
  const ExtensionData ext = ExtensionData::make(c.G(), c.loops(), c.seed);
  const KForm<cplx> da = delta_nerve(ext.alpha, 2);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kNerveSamples; ++i) {
    const Point p = loop_tuple(c, rng, 3);
    const std::vector<Tangent> v{loop_tuple_vector(c, rng, 3)};
    worst = std::max(worst, std::abs(da(p, v)));
  }
  return worst;
}

double forms_imaginary(const Context& c) {
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = loop_tuple(c, rng, 2);
    const Tangent v = loop_tuple_vector(c, rng, 2), w = loop_tuple_vector(c, rng, 2);
    worst = std::max(worst, std::abs(eval_R(p.loops[0], v.loops[0], w.loops[0]).real()));
    worst = std::max(worst, std::abs(eval_alpha(p.loops[0], p.loops[1], v.loops[0], v.loops[1]).real()));
  }
  return worst;
}

double cocycle_identity(const Context& c) {
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kCocycleSamples; ++i) {
    const PathInLoopGroup f = random_loop_path(c.G(), c.loops(), c.npath, rng);
    const PathInLoopGroup g = random_loop_path(c.G(), c.loops(), c.npath, rng);
    const PathInLoopGroup k = random_loop_path(c.G(), c.loops(), c.npath, rng);
    const cplx lhs = cocycle_c(f, g) * cocycle_c(path_mul(f, g), k);
    const cplx rhs = cocycle_c(g, k) * cocycle_c(f, path_mul(g, k));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double cocycle_unit_modulus(const Context& c) {
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const PathInLoopGroup f = random_loop_path(c.G(), c.loops(), c.npath, rng);
    const PathInLoopGroup g = random_loop_path(c.G(), c.loops(), c.npath, rng);
    worst = std::max(worst, std::abs(std::abs(cocycle_c(f, g)) - 1.0));
  }
  return worst;
}

double gomi_example(const Context& c) {
  const ThetaGrid grid = c.loops();
  const AlgebraElement& e1 = c.G().basis(0);
  const LoopPoint g = AnalyticLoop{e1, FourierProfile{0.0, {}, {1.0}}}.realize(grid);
  const LoopVector x = LoopVector::from_function(grid, [&](double t) { return std::cos(t) * e1; });
  return std::abs(gomi_cocycle_Z(g, x) - cplx(0.0, -0.5));
}

double holonomy_orientation(const Context& c) {
  Rng rng = c.rng();
  const ThetaGrid grid = c.loops();
  const LoopVector x1 = random_loop_vector(c.G(), grid, rng, 0.5), x2 = random_loop_vector(c.G(), grid, rng, 0.5);
  auto xi = [=](double s) { return std::sin(pi * s) * x1 + std::sin(2.0 * pi * s) * x2; };
  const DiskLoop h(grid, xi);
  const DiskLoop reversed(grid, [=](double s) { return xi(1.0 - s); });
  return std::abs(holonomy_H(h) * holonomy_H(reversed) - 1.0);
}

double splitting_trivial(const Context& c) {
  const auto s = c.trivial();
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_point(rng);
    worst = std::max(worst, reduced_splitting_check(*s, p, s->random_structure_element(rng), s->random_vertical(rng)));
  }
  return worst;
}

double splitting_path(const Context& c) {
  const auto s = c.path();
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_point(rng);
    worst = std::max(worst, reduced_splitting_check(*s, p, s->random_structure_element(rng), s->random_vertical(rng)));
  }
  return worst;
}

double delta_fibre_squared(const Context& c) {
  const auto s = c.trivial();
  const KForm<cplx> dd = delta_fibre(delta_fibre(probe_one_form(s), 1), 2);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_fibre_point(3, rng);
    worst = std::max(worst, std::abs(dd(p, std::vector<Tangent>{s->random_fibre_tangent(p, rng)})));
  }
  return worst;
}

double delta_nerve_squared(const Context& c) {
  const KForm<cplx> dd = delta_nerve(delta_nerve(probe_group_form(), 1), 2);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = loop_tuple(c, rng, 3);
    worst = std::max(worst, std::abs(dd(p, std::vector<Tangent>{loop_tuple_vector(c, rng, 3)})));
  }
  return worst;
}

double d_squared(const Context& c) {
  // phi(x, y) = sin(x) exp(y/2) + x y^2 on R^2.
  KForm<double> phi;
  phi.degree = 0;
  phi.eval = [](const Point& p, std::span<const Tangent>) {
    const double x = p.chart(0), y = p.chart(1);
    return std::sin(x) * std::exp(0.5 * y) + x * y * y;
  };
  const KForm<double> dphi = exterior_derivative(phi, c.fd);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    Point p;
    p.chart = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
    std::vector<Tangent> v(2);
    for (auto& t : v) t.chart = Eigen::Vector2d(rng.normal(), rng.normal());
    worst = std::max(worst, std::abs(ext_d(dphi, p, v, c.fd)));
  }
  return worst;
}

// ---- trivial bundle -------------------------------------------------------------

double delta_epsilon_eq_beta(const Context& c) {
  const auto s = c.trivial();
  const ExtensionData ext = ExtensionData::make(c.G(), c.loops(), c.seed);
  const KForm<cplx> de = delta_fibre(epsilon_form(s), 2), beta = beta_form(s, ext);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_fibre_point(3, rng);
    const std::vector<Tangent> v{s->random_fibre_tangent(p, rng)};
    worst = std::max(worst, std::abs(de(p, v) - beta(p, v)));
  }
  return worst;
}

double delta_f_chain(const Context& c) {
  const auto s = c.trivial();
  const KForm<cplx> df = delta_fibre(curving_form(s), 1), tr = tau_pullback_R(s), eps = epsilon_form(s);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_fibre_point(2, rng);
    const std::vector<Tangent> v{s->random_fibre_tangent(p, rng), s->random_fibre_tangent(p, rng)};
    worst = std::max(worst, std::abs(df(p, v) - (tr(p, v) - ext_d(eps, p, v, c.fd))));
  }
  return worst;
}

double df_eq_omega(const Context& c) {
  const auto s = c.trivial();
  const KForm<cplx> f = curving_form(s);
  const KForm<double> omega = pullback_to_total(s, string_form(s));
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_point(rng);
    std::vector<Tangent> v;
    for (int k = 0; k < 3; ++k) v.push_back(s->random_fibre_tangent(p, rng));
    worst = std::max(worst, std::abs(ext_d(f, p, v, c.fd) - 2.0 * pi * kI * omega(p, v)));
  }
  return worst;
}

double d_omega_zero(const Context& c) {
  const auto s = c.trivial();
  const KForm<double> omega = string_form(s);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point m = s->random_base_point(rng);
    std::vector<Tangent> u;
    for (int k = 0; k < 4; ++k) u.push_back(s->random_base_tangent(m, rng));
    worst = std::max(worst, std::abs(ext_d(omega, m, u, c.fd)));
  }
  return worst;
}

template <class S>
double curvature_routes(const Context& c, std::shared_ptr<const S> s) {
  const KForm<LoopVector> closed = curvature_form(s), fd = curvature_form(s, Route::finite_difference, c.fd);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const std::vector<Tangent> v{s->random_fibre_tangent(p, rng), s->random_fibre_tangent(p, rng)};
    worst = std::max(worst, max_norm(closed(p, v) - fd(p, v)));
  }
  return worst;
}

template <class S>
double nabla_routes(const Context& c, std::shared_ptr<const S> s) {
  const KForm<LoopVector> closed = nabla_higgs_form(s), fd = nabla_higgs_form(s, Route::finite_difference, c.fd);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const std::vector<Tangent> v{s->random_fibre_tangent(p, rng)};
    worst = std::max(worst, max_norm(closed(p, v) - fd(p, v)));
  }
  return worst;
}

double connection_pullback(const Context& c) {
  const auto s = c.trivial();
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_fibre_point(2, rng);
    worst = std::max(worst, connection_pullback_check(*s, p, s->random_fibre_tangent(p, rng), c.fd));
  }
  return worst;
}

template <class S>
double higgs_equivariance(const Context& c, std::shared_ptr<const S> s) {
  Rng rng = c.rng();
  auto higgs = [&](const Point& p) { return s->higgs(p); };
  double worst = 0.0;
  for (int i = 0; i < kChainSamples; ++i) {
    const Point p = s->random_point(rng);
    worst = std::max(worst, higgs_equivariance_residual(higgs, *s, p, s->random_structure_element(rng)));
  }
  return worst;
}

double higgs_convexity(const Context& c) {
  const auto s0 = c.trivial();
  TrivialBundleData other = default_trivial_bundle_data(c.G());
  for (auto& t : other.higgs_terms) {
    t.harmonic += 1;
    t.sine = !t.sine;
  }
  const auto s1 = std::make_shared<TrivialBundle>(c.G(), c.loops(), other);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const double lambda = rng.uniform();
    auto mix = [&](const Point& p) { return lambda * s0->higgs(p) + (1.0 - lambda) * s1->higgs(p); };
    const Point p = s0->random_point(rng);
    worst = std::max(worst, higgs_equivariance_residual(mix, *s0, p, s0->random_structure_element(rng)));
  }
  return worst;
}

double lift_independence(const Context& c) {
  const auto s = c.trivial();
  const KForm<double> total = string_form_total(s), base = string_form(s);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const Point m = s->project(p);
    std::vector<Tangent> u, v;
    for (int k = 0; k < 3; ++k) {
      u.push_back(s->random_base_tangent(m, rng));
      v.push_back(s->random_tangent_over(p, u.back(), rng));
    }
    worst = std::max(worst, relative(total(p, v), base(m, u)));
  }
  return worst;
}

// ---- path fibration -------------------------------------------------------------

double path_string_vs_omega3(const Context& c, Route route) {
  const auto s = c.path();
  const KForm<double> total = string_form_total(s, route, c.fd);
  Rng rng = c.rng();
  double worst = 0.0;
  const int last = c.ntheta - 1;
  for (int i = 0; i < kStringSamples; ++i) {
    const Point p = s->random_point(rng);
    std::vector<Tangent> v;
    for (int k = 0; k < 3; ++k) v.push_back(s->random_fibre_tangent(p, rng));
    const double w3 = omega3(p.loops[0].back(), v[0].loops[0][last], v[1].loops[0][last], v[2].loops[0][last]);
    worst = std::max(worst, relative(total(p, v), w3));
  }
  return worst;
}

double path_connection_axioms(const Context& c) {
  const auto s = c.path();
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    Tangent vert = zero_tangent(p);
    vert.loops[0] = s->random_vertical(rng);
    worst = std::max(worst, max_norm(s->connection(p, vert) - vert.loops[0]));
    const Tangent v = s->random_fibre_tangent(p, rng);
    const LoopPoint g = s->random_structure_element(rng);
    const LoopVector moved = s->connection(s->act(p, g), s->act_tangent(v, g));
    worst = std::max(worst, max_norm(moved - loop_adjoint_inv(g, s->connection(p, v))));
  }
  return worst;
}

double omega3_normalisation(const Context&) { return std::abs(omega3_volume(24) - 1.0); }

// ---- caloron ---------------------------------------------------------------------

std::vector<Tangent> caloron_tangents(const BundleScenario& s, const Point& p, Rng& rng, int count) {
  std::vector<Tangent> v;
  for (int k = 0; k < count; ++k)
    v.push_back(caloron_tangent(s.random_fibre_tangent(p, rng), random_algebra(s.group(), rng), rng.normal()));
  return v;
}

double pontrjagin_identity(const Context& c) {
  const auto s = c.trivial();
  const Caloron cal(s);
  const KForm<double> lhs = cal.pontrjagin_form(), rhs = cal.pontrjagin_rhs_form();
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kPontrjaginSamples; ++i) {
    const Point p = s->random_point(rng);
    const Point pt = caloron_point(p, exp_alg(random_algebra(c.G(), rng)), rng.uniform(0.0, 2.0 * pi));
    const std::vector<Tangent> v = caloron_tangents(*s, p, rng, 4);
    worst = std::max(worst, std::abs(lhs(pt, v) - rhs(pt, v)));
  }
  return worst;
}

double circle_vs_string(const Context& c) {
  const auto s = c.trivial();
  const Caloron cal(s);
  const KForm<double> omega = string_form(s);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kCircleSamples; ++i) {
    const Point m = s->random_base_point(rng);
    const Point p = s->lift(m);
    std::vector<Tangent> u, v;
    for (int k = 0; k < 3; ++k) {
      u.push_back(s->random_base_tangent(m, rng));
      v.push_back(s->lift_tangent(m, u.back()));
    }
    const double w = omega(m, u);
    worst = std::max(worst, std::abs(cal.integrate_circle(p, v[0], v[1], v[2]) - w) / std::max(std::abs(w), 1e-300));
  }
  return worst;
}

double caloron_path_omega3(const Context& c) {
  const auto s = c.path();
  const Caloron cal(s);
  Rng rng = c.rng();
  double worst = 0.0;
  const int last = c.ntheta - 1;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    std::vector<Tangent> v;
    for (int k = 0; k < 3; ++k) v.push_back(s->random_fibre_tangent(p, rng));
    const double w3 = omega3(p.loops[0].back(), v[0].loops[0][last], v[1].loops[0][last], v[2].loops[0][last]);
    worst = std::max(worst, relative(cal.integrate_circle(p, v[0], v[1], v[2]), w3));
  }
  return worst;
}

double caloron_curvature_routes(const Context& c) {
  const auto s = c.trivial();
  const Caloron cal(s);
  const KForm<AlgebraElement> closed = cal.curvature_form(), fd = cal.curvature_form(Route::finite_difference, c.fd);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const Point pt = caloron_point(p, exp_alg(random_algebra(c.G(), rng)), rng.uniform(0.0, 2.0 * pi));
    const std::vector<Tangent> v = caloron_tangents(*s, p, rng, 2);
    worst = std::max(worst, norm(closed(pt, v) - fd(pt, v)));
  }
  return worst;
}

double caloron_connection_axioms(const Context& c) {
  const auto s = c.trivial();
  const Caloron cal(s);
  Rng rng = c.rng();
  double worst = 0.0;
  const ThetaGrid grid = c.loops();
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const GroupElement k = exp_alg(random_algebra(c.G(), rng));
    const int node = static_cast<int>(rng.uniform() * grid.size());
    const Point pt = caloron_point(p, k, grid.node(node));
    const AlgebraElement xi = random_algebra(c.G(), rng);

    // vertical reproduction
    worst = std::max(worst, norm(cal.connection(pt, caloron_tangent(zero_tangent(p), xi, 0.0)) - xi));
    // fibre kernel: (iota_p(X), -X(theta) k, 0)
    Tangent vert = zero_tangent(p);
    vert.loops[0] = s->random_vertical(rng);
    const Tangent kernel = caloron_tangent(vert, -adjoint_inv(k, vert.loops[0][node]), 0.0);
    worst = std::max(worst, norm(cal.connection(pt, kernel)));
    // Omega(K) invariance
    const Tangent v = caloron_tangents(*s, p, rng, 1)[0];
    const LoopPoint g = random_loop(c.G(), grid, rng, 0.6, true);
    worst = std::max(worst, norm(cal.connection(cal.act(pt, g), cal.act_tangent(pt, v, g)) - cal.connection(pt, v)));
    // K-equivariance: (p, k h, theta) with eta -> ad(h^{-1}) eta
    const GroupElement h = exp_alg(random_algebra(c.G(), rng));
    Point ph = pt;
    ph.groups[0] = k * h;
    Tangent vh = v;
    vh.groups[0] = adjoint_inv(h, v.groups[0]);
    worst = std::max(worst, norm(cal.connection(ph, vh) - adjoint_inv(h, cal.connection(pt, v))));
  }
  return worst;
}

double caloron_framed_roundtrip(const Context& c) {
  const auto s = c.trivial();
  const Caloron cal(s);
  Rng rng = c.rng();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Point p = s->random_point(rng);
    const Tangent x = s->random_fibre_tangent(p, rng);
    worst = std::max(worst, max_norm(cal.extract_connection(p, x) - s->connection(p, x)));
    worst = std::max(worst, max_norm(cal.extract_higgs(p) - s->higgs(p)));
  }
  return worst;
}

double caloron_killingback(const Context& c) {
  Rng rng = c.rng();
  const ThetaGrid grid = c.loops();
  double worst = 0.0;
  for (int i = 0; i < kSmallSamples; ++i) {
    const Eigen::Vector3d x0(rng.normal(), rng.normal(), rng.normal()), x1(rng.normal(), rng.normal(), rng.normal());
    std::vector<Eigen::VectorXd> xs;
    for (int j = 0; j < grid.size(); ++j) xs.push_back(x0 * std::cos(grid.node(j)) + x1 * std::sin(grid.node(j)));
    const QLoop p{xs, random_loop(c.G(), grid, rng)};
    const GroupElement k = exp_alg(random_algebra(c.G(), rng));
    const GroupElement h = exp_alg(random_algebra(c.G(), rng));
    const LoopPoint g = random_loop(c.G(), grid, rng, 0.6, true);
    const int node = static_cast<int>(rng.uniform() * grid.size());
    const QPoint image = killingback_map(p, k, node);
    // constant on Omega(K)-orbits
    const QPoint moved = killingback_map(act(p, g), g[node].inverse() * k, node);
    worst = std::max(worst, (moved.q.m - image.q.m).norm() + (moved.x - image.x).norm());
    // K-equivariance
    worst = std::max(worst, (killingback_map(p, k * h, node).q.m - image.q.m * h.m).norm());
    // covers the evaluation map
    worst = std::max(worst, (image.x - p.x[static_cast<std::size_t>(node)]).norm());
  }
  return worst;
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = [] {
    using K = CheckKind;
    std::vector<Check> v = {
        {{"ext.d_alpha_eq_delta_R", "ext.d-alpha", "central-extension", 1e-6, K::finite_difference, true},
         d_alpha_eq_delta_R},
        {{"ext.delta_alpha_zero", "ext.delta-alpha", "central-extension", 1e-8, K::spectral, false}, delta_alpha_zero},
        {{"ext.forms_imaginary", "ext.R", "central-extension", 1e-12, K::exact, false}, forms_imaginary},
        {{"ext.cocycle_identity", "ext.cocycle", "central-extension", 1e-6, K::spectral, true}, cocycle_identity},
        {{"ext.cocycle_unit_modulus", "ext.cocycle", "central-extension", 1e-10, K::spectral, false},
         cocycle_unit_modulus},
        {{"ext.gomi_example", "ext.gomi-cocycle", "central-extension", 1e-12, K::spectral, false}, gomi_example},
        {{"ext.holonomy_orientation", "ext.holonomy", "central-extension", 1e-8, K::quadrature, false},
         holonomy_orientation},
        {{"splitting.trivial_bundle", "ext.reduced-splitting", "central-extension", 1e-8, K::spectral, false},
         splitting_trivial},
        {{"splitting.path_fibration", "ext.reduced-splitting", "central-extension", 1e-8, K::spectral, false},
         splitting_path},
        {{"forms.delta_fibre_squared", "forms.delta-fibre", "central-extension", 1e-12, K::exact, false},
         delta_fibre_squared},
        {{"forms.delta_nerve_squared", "forms.delta-nerve", "central-extension", 1e-12, K::exact, true},
         delta_nerve_squared},
        {{"forms.d_squared", "forms.ext-d", "central-extension", 1e-8, K::finite_difference, false}, d_squared},

        {{"gerbe.delta_epsilon_eq_beta", "gerbe.epsilon", "trivial-bundle", 1e-8, K::spectral, false},
         delta_epsilon_eq_beta},
        {{"gerbe.delta_f_eq_tauR_minus_d_epsilon", "gerbe.curving", "trivial-bundle", 1e-6, K::finite_difference,
          false},
         delta_f_chain},
        {{"gerbe.df_eq_2pi_i_omega", "gerbe.string-form", "trivial-bundle", 1e-6, K::finite_difference, true},
         df_eq_omega},
        {{"gerbe.d_omega_zero", "gerbe.string-form", "trivial-bundle", 1e-6, K::finite_difference, false},
         d_omega_zero},
        {{"gerbe.curvature_routes", "gerbe.curvature", "trivial-bundle", 1e-6, K::finite_difference, false},
         [](const Context& c) { return curvature_routes(c, c.trivial()); }},
        {{"gerbe.nabla_higgs_routes", "gerbe.nabla-higgs", "trivial-bundle", 1e-6, K::finite_difference, false},
         [](const Context& c) { return nabla_routes(c, c.trivial()); }},
        {{"gerbe.connection_pullback", "gerbe.connection-tau", "trivial-bundle", 1e-6, K::finite_difference, false},
         connection_pullback},
        {{"gerbe.higgs_equivariance", "gerbe.higgs", "trivial-bundle", 1e-8, K::spectral, false},
         [](const Context& c) { return higgs_equivariance(c, c.trivial()); }},
        {{"gerbe.higgs_convexity", "gerbe.higgs", "trivial-bundle", 1e-10, K::spectral, false}, higgs_convexity},
        {{"gerbe.lift_independence", "gerbe.string-form", "trivial-bundle", 1e-6, K::spectral, false},
         lift_independence},

        {{"path.string_form_eq_omega3", "path.string-form", "path-fibration", 1e-6, K::spectral, true},
         [](const Context& c) { return path_string_vs_omega3(c, Route::finite_difference); }},
        {{"path.string_form_closed_eq_omega3", "path.string-form", "path-fibration", 1e-6, K::spectral, false},
         [](const Context& c) { return path_string_vs_omega3(c, Route::closed_form); }},
        {{"path.curvature_routes", "path.curvature", "path-fibration", 1e-6, K::finite_difference, false},
         [](const Context& c) { return curvature_routes(c, c.path()); }},
        {{"path.nabla_higgs_routes", "path.nabla-higgs", "path-fibration", 1e-6, K::finite_difference, false},
         [](const Context& c) { return nabla_routes(c, c.path()); }},
        {{"path.connection_axioms", "path.connection", "path-fibration", 1e-8, K::spectral, false},
         path_connection_axioms},
        {{"path.higgs_equivariance", "gerbe.higgs", "path-fibration", 1e-8, K::spectral, false},
         [](const Context& c) { return higgs_equivariance(c, c.path()); }},
        {{"path.omega3_volume", "path.omega3", "path-fibration", 1e-3, K::quadrature, false}, omega3_normalisation},

        {{"caloron.pontrjagin_identity", "caloron.pontrjagin", "caloron-roundtrip", 1e-8, K::exact, false},
         pontrjagin_identity},
        {{"caloron.circle_eq_string_form", "caloron.circle-integral", "caloron-roundtrip", 1e-6, K::spectral, true},
         circle_vs_string},
        {{"caloron.path_fibration_omega3", "caloron.circle-integral", "caloron-roundtrip", 1e-6, K::spectral,
          false},
         caloron_path_omega3},
        {{"caloron.curvature_routes", "caloron.curvature", "caloron-roundtrip", 1e-6, K::finite_difference, false},
         caloron_curvature_routes},
        {{"caloron.connection_axioms", "caloron.connection", "caloron-roundtrip", 1e-8, K::spectral, false},
         caloron_connection_axioms},
        {{"caloron.framed_roundtrip", "caloron.connection", "caloron-roundtrip", 1e-12, K::exact, false},
         caloron_framed_roundtrip},
        {{"caloron.killingback", "caloron.killingback", "caloron-roundtrip", 1e-14, K::exact, false},
         caloron_killingback},
    };
    std::sort(v.begin(), v.end(), [](const Check& a, const Check& b) { return a.info.name < b.info.name; });
    return v;
  }();
  return checks;
}

const Check& find_check(const std::string& name) {
  for (const auto& c : registry())
    if (c.info.name == name) return c;
  throw UsageError("unknown check '" + name + "'");
}

Context make_context(const RunConfig& config, const std::string& check) {
  return Context{&SpecialUnitary::of_rank(config.group == "su3" ? 3 : 2), config.ntheta, config.npath,
                 FdConfig{config.fd_step, true}, config.seed, check};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

// ---- configuration ------------------------------------------------------------------

void RunConfig::validate() const {
  require(std::find(kScenarios.begin(), kScenarios.end(), scenario) != kScenarios.end(),
          "unknown scenario '" + scenario + "'");
  require(group == "su2" || group == "su3", "group must be su2 or su3");
  require(ntheta >= 16 && ntheta % 2 == 0, "ntheta must be even and >= 16, got " + std::to_string(ntheta));
  require(npath >= kMinPathNodes, "npath must be >= " + std::to_string(kMinPathNodes));
  require(fd_step > 0.0 && fd_step <= 1e-2, "fd_step must lie in (0, 1e-2]");
  require(!tol || *tol > 0.0, "tol must be positive");
  require(report == "json" || report == "csv", "report must be json or csv");
  for (int g : grids) require(g >= 16 && g % 2 == 0, "convergence grids must be even and >= 16");
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = {{"scenario", c.scenario}, {"group", c.group},   {"ntheta", c.ntheta},
                      {"npath", c.npath},       {"fd_step", c.fd_step}, {"seed", c.seed},
                      {"report", c.report},     {"out", c.out},       {"grids", c.grids},
                      {"timing", c.timing},     {"fixtures", c.fixtures}};
  j["tol"] = c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr);
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scenario") c.scenario = value.get<std::string>();
      else if (key == "group") c.group = value.get<std::string>();
      else if (key == "ntheta") c.ntheta = value.get<int>();
      else if (key == "npath") c.npath = value.get<int>();
      else if (key == "fd_step") c.fd_step = value.get<double>();
      else if (key == "tol") c.tol = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "report") c.report = value.get<std::string>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "grids") c.grids = value.get<std::vector<int>>();
      else if (key == "timing") c.timing = value.get<bool>();
      else if (key == "fixtures") c.fixtures = value.get<std::string>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

void apply_environment(RunConfig& c, const std::function<const char*(const char*)>& getenv_fn) {
  nlohmann::json j = nlohmann::json::object();
  auto text = [&](const char* var, const char* key) {
    if (const char* v = getenv_fn(var)) j[key] = v;
  };
  auto number = [&](const char* var, const char* key) {
    if (const char* v = getenv_fn(var)) {
      try {
        j[key] = nlohmann::json::parse(v);
      } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string(var) + ": not a number: " + v);
      }
    }
  };
  text("LOOPGERBE_SCENARIO", "scenario");
  text("LOOPGERBE_GROUP", "group");
  number("LOOPGERBE_NTHETA", "ntheta");
  number("LOOPGERBE_NPATH", "npath");
  number("LOOPGERBE_FD_STEP", "fd_step");
  number("LOOPGERBE_TOL", "tol");
  number("LOOPGERBE_SEED", "seed");
  text("LOOPGERBE_REPORT", "report");
  text("LOOPGERBE_OUT", "out");
  text("LOOPGERBE_FIXTURES", "fixtures");
  if (const char* v = getenv_fn("LOOPGERBE_GRIDS")) {
    std::vector<int> grids;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        grids.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw UsageError("LOOPGERBE_GRIDS: bad entry '" + item + "'");
      }
    }
    j["grids"] = grids;
  }
  if (const char* v = getenv_fn("LOOPGERBE_TIMING")) {
    const std::string s = v;
    require(s == "0" || s == "1" || s == "true" || s == "false", "LOOPGERBE_TIMING must be 0/1/true/false");
    j["timing"] = (s == "1" || s == "true");
  }
  apply_json(c, j);
}

// ---- reports --------------------------------------------------------------------------

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& r) { return r.pass; });
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"paper_ref", c.paper_ref},
                      {"residual", c.residual},
                      {"tol", c.tol},
                      {"pass", c.pass},
                      {"seconds", c.seconds}});
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& c : r.convergence) conv.push_back({{"name", c.name}, {"grid", c.grid}, {"residual", c.residual}});
  return {{"version", r.version}, {"config", to_json(r.config)}, {"checks", checks}, {"convergence", conv}};
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os.precision(17);
  os << "section,name,paper_ref,grid,residual,tol,pass,seconds\n";
  for (const auto& c : r.checks)
    os << "check," << c.name << ',' << c.paper_ref << ",," << c.residual << ',' << c.tol << ','
       << (c.pass ? "true" : "false") << ',' << c.seconds << '\n';
  for (const auto& c : r.convergence) os << "convergence," << c.name << ",," << c.grid << ',' << c.residual << ",,,\n";
  return os.str();
}

void write_report(const Report& r) {
  const std::string text = r.config.report == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n";
  if (r.config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(r.config.out);
  if (!f) throw std::ios_base::failure("cannot open report file '" + r.config.out + "'");
  f << text;
  f.flush();
  if (!f) throw std::ios_base::failure("failed writing report file '" + r.config.out + "'");
}

const std::map<std::string, std::string>& equation_registry() {
  static const std::map<std::string, std::string> reg = {
      {"ext.R", "R = (i/4pi) int <Theta, d_theta Theta> dtheta"},
      {"ext.alpha", "alpha = (i/2pi) int <d_2^* Theta, d_0^* Z> dtheta"},
      {"ext.d-alpha", "d_0^* R - d_1^* R + d_2^* R = d alpha"},
      {"ext.delta-alpha", "d_0^* alpha - d_1^* alpha + d_2^* alpha - d_3^* alpha = 0"},
      {"ext.cocycle", "c(f, g) = exp(int_(f,g) alpha), c(f,g) c(fg,k) = c(g,k) c(f,gk)"},
      {"ext.holonomy", "H(h, R) = exp(int_(h~(D)) R)"},
      {"ext.gomi-cocycle", "Z(g^-1, X) = -alpha(1, g)(X, 0)"},
      {"ext.reduced-splitting", "l(p, X) = l(pg, ad(g^-1) X) + Z(g^-1, X), l = (i/2pi) int <Phi, X>"},
      {"forms.delta-fibre", "delta = sum (-1)^(i-1) pi_i^*, delta^2 = 0"},
      {"forms.delta-nerve", "delta = sum (-1)^i d_i^*, delta^2 = 0"},
      {"forms.ext-d", "d^2 = 0"},
      {"gerbe.connection", "A = ad(g^-1) a + Theta"},
      {"gerbe.connection-tau", "pi_1^* A = ad(tau^-1) pi_2^* A + tau^* Theta"},
      {"gerbe.epsilon", "epsilon = (i/2pi) int <pi_2^* A, tau^* Z>, delta epsilon = beta"},
      {"gerbe.curving", "f = (i/2pi) int (<A, d_theta A>/2 - <F, Phi>), delta f = tau^* R - d epsilon"},
      {"gerbe.curvature", "F = dA + [A, A]/2"},
      {"gerbe.higgs", "Phi(pg) = ad(g^-1) Phi(p) + g^-1 d_theta g"},
      {"gerbe.nabla-higgs", "nabla Phi = d Phi + [A, Phi] - d_theta A"},
      {"gerbe.string-form", "omega = -(1/4pi^2) int <F, nabla Phi>, df = 2 pi i pi^* omega, d omega = 0"},
      {"path.connection", "A = Theta - (theta/2pi) ad(p^-1) pi^* Theta^"},
      {"path.curvature", "F = (theta^2/8pi^2 - theta/4pi) ad(p^-1) [pi^* Theta^, pi^* Theta^]"},
      {"path.nabla-higgs", "nabla Phi = (1/2pi) ad(p^-1) pi^* Theta^"},
      {"path.string-form", "string form of PK -> K equals omega3 = (1/48pi^2) <[Theta^, Theta^], Theta^>"},
      {"path.omega3", "int_SU(2) omega3 = 1"},
      {"caloron.connection", "A~ = ad(k^-1) A + Theta + ad(k^-1) Phi dtheta"},
      {"caloron.curvature", "R~ = ad(k^-1)(F + nabla Phi dtheta)"},
      {"caloron.pontrjagin", "-(1/8pi^2) <R~, R~> = -(1/8pi^2)(<F, F> + 2 <F, nabla Phi>)"},
      {"caloron.circle-integral", "int_S1 of the Pontrjagin form = string form"},
      {"caloron.killingback", "(p, k, theta) -> p(theta) k covers ev(m, theta)"},
  };
  return reg;
}

std::vector<CheckInfo> list_checks() {
  std::vector<CheckInfo> out;
  for (const auto& c : registry()) out.push_back(c.info);
  return out;
}

std::vector<std::string> scenario_names() { return kScenarios; }

double run_check(const std::string& name, const RunConfig& config) {
  config.validate();
  return find_check(name).compute(make_context(config, name));
}

std::vector<ConvergenceRow> convergence_table(const std::string& name, const std::vector<int>& grids,
                                              const RunConfig& config) {
  const Check& check = find_check(name);
  std::vector<ConvergenceRow> rows;
  for (int g : grids) {
    RunConfig c = config;
    Context ctx = make_context(c, name);
    if (check.info.kind == CheckKind::finite_difference) {
      ctx.fd = FdConfig{kConvergenceStep * 64.0 / g, false};
    } else {
      ctx.ntheta = g;
    }
    rows.push_back({name, g, check.compute(ctx)});
  }
  return rows;
}

double observed_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw UsageError("observed_order: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.grid)), y = -std::log(r.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Report run(const RunConfig& config) {
  config.validate();
  Report report;
  report.config = config;
  // The sign self-test runs first so a convention failure aborts the run.
  ExtensionData::make(SpecialUnitary::of_rank(config.group == "su3" ? 3 : 2), ThetaGrid::periodic(config.ntheta),
                      config.seed);
  for (const auto& check : registry()) {
    if (config.scenario != "all" && check.info.suite != config.scenario) continue;
    CheckRow row;
    row.name = check.info.name;
    row.paper_ref = check.info.tag;
    row.tol = config.tol ? *config.tol : check.info.tol;
    const auto start = std::chrono::steady_clock::now();
    row.residual = check.compute(make_context(config, check.info.name));
    const auto stop = std::chrono::steady_clock::now();
    row.seconds = config.timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
    row.pass = std::isfinite(row.residual) && row.residual <= row.tol;
    report.checks.push_back(row);
    if (!config.grids.empty() && check.info.convergence) {
      auto rows = convergence_table(check.info.name, config.grids, config);
      report.convergence.insert(report.convergence.end(), rows.begin(), rows.end());
    }
  }
  if (!config.fixtures.empty()) dump_fixtures(config);
  return report;
}

void dump_fixtures(const RunConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.fixtures, ec);
  if (ec) throw std::ios_base::failure("cannot create fixture directory '" + config.fixtures + "'");
  auto open = [&](const std::string& file) {
    std::ofstream f(fs::path(config.fixtures) / file);
    if (!f) throw std::ios_base::failure("cannot write fixture '" + file + "'");
    return f;
  };
  {
    const Context c = make_context(config, "ext.d_alpha_eq_delta_R");
    Rng rng = c.rng();
    const Point p = loop_tuple(c, rng, 2);
    auto f = open("ext_loop_g.txt");
    f << "# first sampled g of ext.d_alpha_eq_delta_R, seed " << config.seed << '\n';
    write_loop(f, p.loops[0]);
    auto h = open("ext_loop_h.txt");
    h << "# first sampled h of ext.d_alpha_eq_delta_R, seed " << config.seed << '\n';
    write_loop(h, p.loops[1]);
  }
  {
    const Context c = make_context(config, "path.string_form_eq_omega3");
    Rng rng = c.rng();
    const Point p = c.path()->random_point(rng);
    auto f = open("path_point.txt");
    f << "# first sampled path of path.string_form_eq_omega3 (interval grid), seed " << config.seed << '\n';
    write_loop(f, p.loops[0]);
  }
}

}  // namespace loopgerbe
