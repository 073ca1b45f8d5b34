#include "loopgerbe/gerbe.hpp"

#include <cmath>
#include <array>
#include <numbers>

namespace loopgerbe {

namespace {

using std::numbers::pi;
constexpr cplx kI(0.0, 1.0);
constexpr double kFibreTolerance = 1e-10;

Point single(const Point& pk, std::size_t i) {
  Point p;
  p.chart = pk.chart;
  p.loops = {pk.loops[i]};
  return p;
}

Tangent single(const Tangent& vk, std::size_t i) {
  Tangent v;
  v.chart = vk.chart;
  v.loops = {vk.loops[i]};
  return v;
}

void require_loops(const Point& p, std::size_t count, const char* what) {
  if (p.loops.size() != count)
    throw DomainError(std::string(what) + ": expected " + std::to_string(count) + " loop coordinates");
}

// theta / 2pi at each node.
Eigen::VectorXd unit_parameter(const ThetaGrid& grid) { return grid.nodes() / (2.0 * pi); }

}  // namespace

// ---- BundleScenario --------------------------------------------------------

Point BundleScenario::act(const Point& p, const LoopPoint& g) const {
  require_loops(p, 1, "act");
  Point q = p;
  q.loops[0] = loop_mul(p.loops[0], g);
  return q;
}

Tangent BundleScenario::act_tangent(const Tangent& v, const LoopPoint& g) const {
  Tangent w = v;
  w.loops[0] = loop_adjoint_inv(g, v.loops[0]);
  return w;
}

Point BundleScenario::random_point(Rng& rng) const {
  return act(lift(random_base_point(rng)), random_structure_element(rng));
}

Point BundleScenario::random_fibre_point(int count, Rng& rng) const {
  if (count < 1) throw DomainError("random_fibre_point: count must be positive");
  Point p = random_point(rng);
  Point out = p;
  for (int i = 1; i < count; ++i) out.loops.push_back(act(p, random_structure_element(rng)).loops[0]);
  return out;
}

Tangent BundleScenario::random_fibre_tangent(const Point& pk, Rng& rng) const {
  const Tangent u = random_base_tangent(project(single(pk, 0)), rng);
  Tangent out;
  out.chart = Eigen::VectorXd::Zero(pk.chart.size());
  for (std::size_t i = 0; i < pk.loops.size(); ++i) {
    Tangent t = random_tangent_over(single(pk, i), u, rng);
    out.chart = t.chart;
    out.loops.push_back(t.loops[0]);
  }
  return out;
}

// ---- TrivialBundle ---------------------------------------------------------

TrivialBundleData default_trivial_bundle_data(const SpecialUnitary& group) {
  TrivialBundleData d;
  d.dim = 4;
  auto& a = d.connection_terms;
  a.push_back({0, 0, 1, true, {1.0}});
  a.push_back({1, 1, 1, false, {1.0}});
  a.push_back({0, 2, 2, false, {0.3, 0.0, 0.5}});
  a.push_back({1, 0, 0, false, {0.2, 0.0, 0.0, 0.4}});
  a.push_back({2, 2, 1, true, {0.7, 0.0, 0.0, 0.0, 0.5}});
  a.push_back({2, 1, 2, false, {0.1, 0.6}});
  a.push_back({3, 0, 1, false, {0.4, 0.3}});
  a.push_back({3, 1, 0, false, {-0.5, 0.0, 0.2}});
  auto& phi = d.higgs_terms;
  phi.push_back({0, 2, 0, false, {0.0, 1.0}});
  phi.push_back({0, 0, 1, true, {0.0, 0.0, 0.0, 0.6}});
  phi.push_back({0, 1, 1, false, {0.3, 0.0, 0.5}});
  phi.push_back({0, 2, 2, true, {0.0, 0.0, 0.0, 0.0, 0.8}});
  if (group.dim() > 3) {
    a.push_back({0, 3, 1, false, {0.5}});
    a.push_back({1, 4, 1, true, {0.2, 0.4}});
    a.push_back({2, 7, 1, false, {0.3, 0.0, 0.0, 0.0, 0.6}});
    a.push_back({3, 5, 2, true, {0.6}});
    phi.push_back({0, 6, 1, false, {0.2, 0.0, 0.7}});
    phi.push_back({0, 7, 0, false, {0.0, 0.0, 0.0, 0.9}});
  }
  return d;
}

TrivialBundle::TrivialBundle(const SpecialUnitary& group, ThetaGrid grid, TrivialBundleData data)
    : BundleScenario(group, std::move(grid)), data_(std::move(data)) {
  if (this->grid().kind() != GridKind::periodic) throw DomainError("TrivialBundle: needs a periodic grid");
  if (data_.dim < 1 || data_.dim > 4) throw DomainError("TrivialBundle: chart dimension must be in 1..4");
  for (const auto* terms : {&data_.connection_terms, &data_.higgs_terms})
    for (const auto& t : *terms) {
      if (t.generator < 0 || t.generator >= group.dim()) throw DomainError("TrivialBundle: generator out of range");
      if (t.harmonic < 0) throw DomainError("TrivialBundle: negative harmonic");
      if (static_cast<int>(t.coeff.size()) > data_.dim + 1) throw DomainError("TrivialBundle: too many coefficients");
    }
  for (const auto& t : data_.connection_terms)
    if (t.slot < 0 || t.slot >= data_.dim) throw DomainError("TrivialBundle: connection slot out of range");
  auto tabulate = [this](const std::vector<ChartTerm>& terms) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& t : terms) {
      Eigen::VectorXd v(this->grid().size());
      for (int j = 0; j < v.size(); ++j) {
        const double arg = t.harmonic * this->grid().node(j);
        v(j) = t.sine ? std::sin(arg) : std::cos(arg);
      }
      out.push_back(std::move(v));
    }
    return out;
  };
  connection_profiles_ = tabulate(data_.connection_terms);
  higgs_profiles_ = tabulate(data_.higgs_terms);
}

LoopVector TrivialBundle::evaluate_terms(const std::vector<ChartTerm>& terms, const Eigen::VectorXd& m, int slot,
                                         int partial) const {
  if (m.size() != data_.dim) throw DomainError("TrivialBundle: chart point has the wrong dimension");
  double rho = 1.0;
  for (int l = 0; l < data_.dim; ++l) rho *= 1.0 - m(l) * m(l);
  double drho = 0.0;
  if (partial >= 0) {
    drho = -2.0 * m(partial);
    for (int l = 0; l < data_.dim; ++l)
      if (l != partial) drho *= 1.0 - m(l) * m(l);
  }
  const auto& profiles = &terms == &data_.connection_terms ? connection_profiles_ : higgs_profiles_;
  LoopVector out = LoopVector::zero(grid(), group().n());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const ChartTerm& t = terms[k];
    if (slot >= 0 && t.slot != slot) continue;
    auto c = [&t](int k) { return k < static_cast<int>(t.coeff.size()) ? t.coeff[static_cast<std::size_t>(k)] : 0.0; };
    double value = c(0);
    for (int l = 0; l < data_.dim; ++l) value += c(l + 1) * m(l);
    const double factor = partial < 0 ? rho * value : drho * value + rho * c(partial + 1);
    if (factor == 0.0) continue;
    const AlgebraElement& e = group().basis(t.generator);
    const Eigen::VectorXd& profile = profiles[k];
    for (int j = 0; j < grid().size(); ++j) out[j].m += (factor * profile(j)) * e.m;
  }
  return out;
}

LoopVector TrivialBundle::base_connection(const Eigen::VectorXd& m, int i) const {
  return evaluate_terms(data_.connection_terms, m, i, -1);
}

LoopVector TrivialBundle::base_connection_partial(const Eigen::VectorXd& m, int i, int j) const {
  return evaluate_terms(data_.connection_terms, m, i, j);
}

LoopVector TrivialBundle::base_higgs(const Eigen::VectorXd& m) const {
  return evaluate_terms(data_.higgs_terms, m, -1, -1);
}

LoopVector TrivialBundle::base_higgs_partial(const Eigen::VectorXd& m, int j) const {
  return evaluate_terms(data_.higgs_terms, m, -1, j);
}

namespace {

LoopVector apply_base_connection(const TrivialBundle& b, const Eigen::VectorXd& m, const Eigen::VectorXd& u) {
  LoopVector out = LoopVector::zero(b.grid(), b.group().n());
  for (int i = 0; i < b.dim(); ++i)
    if (u(i) != 0.0) out += u(i) * b.base_connection(m, i);
  return out;
}

}  // namespace

LoopVector TrivialBundle::connection(const Point& p, const Tangent& v) const {
  require_loops(p, 1, "connection");
  return loop_adjoint_inv(p.loops[0], apply_base_connection(*this, p.chart, v.chart)) + v.loops[0];
}

LoopVector TrivialBundle::higgs(const Point& p) const {
  require_loops(p, 1, "higgs");
  return loop_adjoint_inv(p.loops[0], base_higgs(p.chart)) + left_log_derivative(p.loops[0]);
}

LoopVector TrivialBundle::curvature(const Point& p, const Tangent& v, const Tangent& w) const {
  require_loops(p, 1, "curvature");
  const Eigen::VectorXd& m = p.chart;
  LoopVector f = loop_bracket(apply_base_connection(*this, m, v.chart), apply_base_connection(*this, m, w.chart));
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      const double c = v.chart(i) * w.chart(j) - v.chart(j) * w.chart(i);
      if (c != 0.0) f += c * base_connection_partial(m, j, i);
    }
  return loop_adjoint_inv(p.loops[0], f);
}

LoopVector TrivialBundle::nabla_higgs(const Point& p, const Tangent& v) const {
  require_loops(p, 1, "nabla_higgs");
  const Eigen::VectorXd& m = p.chart;
  const LoopVector au = apply_base_connection(*this, m, v.chart);
  LoopVector out = loop_bracket(au, base_higgs(m)) - dtheta(au);
  for (int j = 0; j < dim(); ++j)
    if (v.chart(j) != 0.0) out += v.chart(j) * base_higgs_partial(m, j);
  return loop_adjoint_inv(p.loops[0], out);
}

Point TrivialBundle::project(const Point& p) const {
  Point b;
  b.chart = p.chart;
  return b;
}

Tangent TrivialBundle::project_tangent(const Point&, const Tangent& v) const {
  Tangent u;
  u.chart = v.chart;
  return u;
}

Point TrivialBundle::lift(const Point& base) const {
  Point p;
  p.chart = base.chart;
  p.loops = {LoopPoint::identity(grid(), group().n())};
  return p;
}

Tangent TrivialBundle::lift_tangent(const Point&, const Tangent& u) const {
  Tangent v;
  v.chart = u.chart;
  v.loops = {LoopVector::zero(grid(), group().n())};
  return v;
}

double TrivialBundle::fibre_distance(const Point& p1, const Point& p2) const { return (p1.chart - p2.chart).norm(); }

Point TrivialBundle::random_base_point(Rng& rng) const {
  Point b;
  b.chart.resize(dim());
  for (int l = 0; l < dim(); ++l) b.chart(l) = rng.uniform(-0.6, 0.6);
  return b;
}

Tangent TrivialBundle::random_base_tangent(const Point&, Rng& rng) const {
  Tangent u;
  u.chart.resize(dim());
  for (int l = 0; l < dim(); ++l) u.chart(l) = rng.normal();
  return u;
}

LoopPoint TrivialBundle::random_structure_element(Rng& rng) const { return random_loop(group(), grid(), rng); }

LoopVector TrivialBundle::random_vertical(Rng& rng) const { return random_loop_vector(group(), grid(), rng); }

Tangent TrivialBundle::random_tangent_over(const Point&, const Tangent& u, Rng& rng) const {
  Tangent v;
  v.chart = u.chart;
  v.loops = {random_vertical(rng)};
  return v;
}

// ---- PathFibration ---------------------------------------------------------

PathFibration::PathFibration(const SpecialUnitary& group, ThetaGrid grid) : BundleScenario(group, std::move(grid)) {
  if (this->grid().kind() != GridKind::interval) throw DomainError("PathFibration: needs an interval grid");
}

LoopVector PathFibration::transported_endpoint(const LoopPoint& p, const LoopVector& x) const {
  const GroupElement& q = p.back();
  const AlgebraElement& end = x[x.size() - 1];
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (int j = 0; j < p.size(); ++j) out.push_back(adjoint_inv(q.inverse() * p[j], end));
  return LoopVector(p.grid(), std::move(out));
}

LoopVector PathFibration::connection(const Point& p, const Tangent& v) const {
  require_loops(p, 1, "connection");
  LoopVector out = v.loops[0];
  const LoopVector hat = transported_endpoint(p.loops[0], v.loops[0]);
  const Eigen::VectorXd t = unit_parameter(grid());
  for (int j = 0; j < out.size(); ++j) out[j] -= t(j) * hat[j];
  return out;
}

LoopVector PathFibration::higgs(const Point& p) const {
  require_loops(p, 1, "higgs");
  return left_log_derivative(p.loops[0]);
}

LoopVector PathFibration::curvature(const Point& p, const Tangent& v, const Tangent& w) const {
  require_loops(p, 1, "curvature");
  LoopVector out = loop_bracket(transported_endpoint(p.loops[0], v.loops[0]), transported_endpoint(p.loops[0], w.loops[0]));
  const Eigen::VectorXd t = unit_parameter(grid());
  for (int j = 0; j < out.size(); ++j) out[j] *= t(j) * t(j) - t(j);
  return out;
}

LoopVector PathFibration::nabla_higgs(const Point& p, const Tangent& v) const {
  require_loops(p, 1, "nabla_higgs");
  return (1.0 / (2.0 * pi)) * transported_endpoint(p.loops[0], v.loops[0]);
}

Point PathFibration::project(const Point& p) const {
  require_loops(p, 1, "project");
  Point b;
  b.chart = Eigen::VectorXd(0);
  b.groups = {p.loops[0].back()};
  return b;
}

Tangent PathFibration::project_tangent(const Point&, const Tangent& v) const {
  Tangent u;
  u.chart = Eigen::VectorXd(0);
  u.groups = {v.loops[0][v.loops[0].size() - 1]};
  return u;
}

Point PathFibration::lift(const Point& base) const {
  const AlgebraElement l = log_alg(base.groups.at(0));
  Point p;
  p.chart = Eigen::VectorXd(0);
  p.loops = {LoopPoint::from_function(grid(), [&](double th) { return exp_alg(l, th / (2.0 * pi)); })};
  return p;
}

Tangent PathFibration::lift_tangent(const Point&, const Tangent& u) const {
  const AlgebraElement eta = u.groups.at(0);
  Tangent v;
  v.chart = Eigen::VectorXd(0);
  v.loops = {LoopVector::from_function(grid(), [&](double th) { return (th / (2.0 * pi)) * eta; })};
  return v;
}

double PathFibration::fibre_distance(const Point& p1, const Point& p2) const {
  return (p1.loops.at(0).back().m - p2.loops.at(0).back().m).norm();
}

Point PathFibration::random_base_point(Rng& rng) const {
  Point b;
  b.chart = Eigen::VectorXd(0);
  b.groups = {exp_alg(random_algebra(group(), rng, 0.7))};
  return b;
}

Tangent PathFibration::random_base_tangent(const Point&, Rng& rng) const {
  Tangent u;
  u.chart = Eigen::VectorXd(0);
  u.groups = {random_algebra(group(), rng)};
  return u;
}

namespace {

// c_1 t + c_2 t^2 + c_3 sin(theta) + c_4 (1 - cos theta): smooth, zero at 0.
struct PathProfile {
  double c[4];
  double operator()(double th) const {
    const double t = th / (2.0 * pi);
    return c[0] * t + c[1] * t * t + c[2] * std::sin(th) + c[3] * (1.0 - std::cos(th));
  }
};

PathProfile random_path_profile(Rng& rng, double scale) {
  PathProfile f{};
  for (double& c : f.c) c = scale * rng.normal();
  return f;
}

}  // namespace

LoopPoint PathFibration::random_path(Rng& rng) const {
  std::vector<PathProfile> f;
  for (int a = 0; a < group().dim(); ++a) f.push_back(random_path_profile(rng, 0.5));
  return LoopPoint::from_function(grid(), [&](double th) {
    GroupElement g = GroupElement::identity(group().n());
    for (int a = 0; a < group().dim(); ++a) g = g * exp_alg(group().basis(a), f[static_cast<std::size_t>(a)](th));
    return g;
  });
}

LoopVector PathFibration::random_path_vector(Rng& rng) const {
  std::vector<PathProfile> f;
  for (int a = 0; a < group().dim(); ++a) f.push_back(random_path_profile(rng, 1.0));
  return LoopVector::from_function(grid(), [&](double th) {
    AlgebraElement x = AlgebraElement::zero(group().n());
    for (int a = 0; a < group().dim(); ++a) x += f[static_cast<std::size_t>(a)](th) * group().basis(a);
    return x;
  });
}

Point PathFibration::random_point(Rng& rng) const {
  Point p;
  p.chart = Eigen::VectorXd(0);
  p.loops = {random_path(rng)};
  return p;
}

LoopPoint PathFibration::random_structure_element(Rng& rng) const {
  // sin(k theta / 2) vanishes at both ends, so these are based loops.
  std::vector<std::array<double, 3>> b;
  for (int a = 0; a < group().dim(); ++a) b.push_back({0.5 * rng.normal(), 0.5 * rng.normal(), 0.5 * rng.normal()});
  return LoopPoint::from_function(grid(), [&](double th) {
    GroupElement g = GroupElement::identity(group().n());
    for (int a = 0; a < group().dim(); ++a) {
      const auto& c = b[static_cast<std::size_t>(a)];
      const double h = c[0] * std::sin(0.5 * th) + c[1] * std::sin(th) + c[2] * std::sin(1.5 * th);
      g = g * exp_alg(group().basis(a), h);
    }
    return g;
  });
}

LoopVector PathFibration::random_vertical(Rng& rng) const {
  LoopVector x = random_path_vector(rng);
  const AlgebraElement end = x[x.size() - 1];
  const Eigen::VectorXd t = unit_parameter(grid());
  for (int j = 0; j < x.size(); ++j) x[j] -= t(j) * end;
  x[x.size() - 1] = AlgebraElement::zero(group().n());
  return x;
}

Tangent PathFibration::random_tangent_over(const Point&, const Tangent& u, Rng& rng) const {
  const AlgebraElement& eta = u.groups.at(0);
  LoopVector x = random_vertical(rng);
  const Eigen::VectorXd t = unit_parameter(grid());
  for (int j = 0; j < x.size(); ++j) x[j] += t(j) * eta;
  x[x.size() - 1] = eta;
  Tangent v;
  v.chart = Eigen::VectorXd(0);
  v.loops = {std::move(x)};
  return v;
}

// ---- forms -----------------------------------------------------------------

KForm<LoopVector> connection_form(std::shared_ptr<const BundleScenario> s) {
  KForm<LoopVector> w;
  w.degree = 1;
  w.name = "A";
  w.tag = "gerbe.connection";
  w.eval = [s](const Point& p, std::span<const Tangent> v) { return s->connection(p, v[0]); };
  return w;
}

KForm<LoopVector> higgs_form(std::shared_ptr<const BundleScenario> s) {
  KForm<LoopVector> w;
  w.degree = 0;
  w.name = "Phi";
  w.tag = "gerbe.higgs";
  w.eval = [s](const Point& p, std::span<const Tangent>) { return s->higgs(p); };
  return w;
}

KForm<LoopVector> curvature_form(std::shared_ptr<const BundleScenario> s, Route route, FdConfig fd) {
  KForm<LoopVector> w;
  w.degree = 2;
  w.name = "F";
  w.tag = "gerbe.curvature";
  if (route == Route::closed_form) {
    w.eval = [s](const Point& p, std::span<const Tangent> v) { return s->curvature(p, v[0], v[1]); };
  } else {
    w.eval = [s, fd, a = connection_form(s)](const Point& p, std::span<const Tangent> v) {
      return ext_d(a, p, v, fd) + loop_bracket(s->connection(p, v[0]), s->connection(p, v[1]));
    };
  }
  return w;
}

KForm<LoopVector> nabla_higgs_form(std::shared_ptr<const BundleScenario> s, Route route, FdConfig fd) {
  KForm<LoopVector> w;
  w.degree = 1;
  w.name = "nabla Phi";
  w.tag = "gerbe.nabla_higgs";
  if (route == Route::closed_form) {
    w.eval = [s](const Point& p, std::span<const Tangent> v) { return s->nabla_higgs(p, v[0]); };
  } else {
    w.eval = [s, fd](const Point& p, std::span<const Tangent> v) {
      std::function<LoopVector(const Point&)> phi = [&](const Point& q) { return s->higgs(q); };
      const LoopVector a = s->connection(p, v[0]);
      return directional_derivative<LoopVector>(phi, p, v[0], fd) + loop_bracket(a, s->higgs(p)) - dtheta(a);
    };
  }
  return w;
}

LoopPoint tau(const BundleScenario& s, const Point& p1, const Point& p2) {
  if (s.fibre_distance(p1, p2) > kFibreTolerance) throw DomainError("tau: points lie in different fibres");
  return loop_mul(loop_inv(p1.loops.at(0)), p2.loops.at(0));
}

LoopVector tau_pushforward(const BundleScenario& s, const Point& pair, const Tangent& v) {
  require_loops(pair, 2, "tau_pushforward");
  const LoopPoint t = tau(s, single(pair, 0), single(pair, 1));
  return v.loops[1] - loop_adjoint_inv(t, v.loops[0]);
}

double connection_pullback_check(const BundleScenario& s, const Point& pair, const Tangent& v, const FdConfig& fd) {
  require_loops(pair, 2, "connection_pullback_check");
  const LoopPoint t = tau(s, single(pair, 0), single(pair, 1));
  // Matrix-valued derivative of tau along v, translated back to the identity.
  auto tau_at = [&](double h) {
    const Point q = flow(pair, v, h);
    return tau(s, single(q, 0), single(q, 1));
  };
  auto central = [&](double h) {
    const LoopPoint plus = tau_at(h), minus = tau_at(-h);
    std::vector<Matrix> d;
    for (int j = 0; j < t.size(); ++j) d.push_back((plus[j].m - minus[j].m) / (2.0 * h));
    return d;
  };
  std::vector<Matrix> dt = central(fd.step);
  if (fd.richardson) {
    const std::vector<Matrix> fine = central(0.5 * fd.step);
    for (std::size_t j = 0; j < dt.size(); ++j) dt[j] = (4.0 * fine[j] - dt[j]) / 3.0;
  }
  std::vector<AlgebraElement> theta;
  for (int j = 0; j < t.size(); ++j)
    theta.push_back(project_to_algebra(t[j].inverse().m * dt[static_cast<std::size_t>(j)]));
  const LoopVector tau_theta(t.grid(), std::move(theta));

  const LoopVector lhs = s.connection(single(pair, 1), single(v, 1));
  const LoopVector rhs = loop_adjoint_inv(t, s.connection(single(pair, 0), single(v, 0))) + tau_theta;
  return max_norm(lhs - rhs);
}

KForm<cplx> epsilon_form(std::shared_ptr<const BundleScenario> s) {
  KForm<cplx> w;
  w.degree = 1;
  w.name = "epsilon";
  w.tag = "gerbe.epsilon";
  w.eval = [s](const Point& pair, std::span<const Tangent> v) {
    require_loops(pair, 2, "epsilon");
    const LoopPoint t = tau(*s, single(pair, 0), single(pair, 1));
    const LoopVector a = s->connection(single(pair, 0), single(v[0], 0));
    return kI / (2.0 * pi) * integral_inner(a, dtheta(t));
  };
  return w;
}

KForm<cplx> beta_form(std::shared_ptr<const BundleScenario> s, const ExtensionData& ext) {
  KForm<cplx> w;
  w.degree = 1;
  w.name = "beta";
  w.tag = "gerbe.beta";
  w.eval = [s, alpha = ext.alpha](const Point& triple, std::span<const Tangent> v) {
    require_loops(triple, 3, "beta");
    auto pair = [&](std::size_t a, std::size_t b) {
      Point p;
      p.chart = triple.chart;
      p.loops = {triple.loops[a], triple.loops[b]};
      Tangent t;
      t.chart = v[0].chart;
      t.loops = {v[0].loops[a], v[0].loops[b]};
      return std::make_pair(p, t);
    };
    const auto [p12, v12] = pair(0, 1);
    const auto [p23, v23] = pair(1, 2);
    Point q;
    q.chart = Eigen::VectorXd(0);
    q.loops = {tau(*s, single(p12, 0), single(p12, 1)), tau(*s, single(p23, 0), single(p23, 1))};
    Tangent u;
    u.chart = Eigen::VectorXd(0);
    u.loops = {tau_pushforward(*s, p12, v12), tau_pushforward(*s, p23, v23)};
    return alpha(q, std::vector<Tangent>{u});
  };
  return w;
}

KForm<cplx> tau_pullback_R(std::shared_ptr<const BundleScenario> s) {
  KForm<cplx> w;
  w.degree = 2;
  w.name = "tau^*R";
  w.tag = "ext.R";
  w.eval = [s](const Point& pair, std::span<const Tangent> v) {
    const LoopPoint t = tau(*s, single(pair, 0), single(pair, 1));
    return eval_R(t, tau_pushforward(*s, pair, v[0]), tau_pushforward(*s, pair, v[1]));
  };
  return w;
}

KForm<cplx> curving_form(std::shared_ptr<const BundleScenario> s, Route route, FdConfig fd) {
  KForm<cplx> w;
  w.degree = 2;
  w.name = "f";
  w.tag = "gerbe.curving";
  w.eval = [s, f = curvature_form(s, route, fd)](const Point& p, std::span<const Tangent> v) {
    const LoopVector a0 = s->connection(p, v[0]), a1 = s->connection(p, v[1]);
    const double cs = 0.5 * (integral_inner(a0, dtheta(a1)) - integral_inner(a1, dtheta(a0)));
    const double fphi = integral_inner(f(p, v), s->higgs(p));
    return kI / (2.0 * pi) * (cs - fphi);
  };
  return w;
}

KForm<double> string_form_total(std::shared_ptr<const BundleScenario> s, Route route, FdConfig fd) {
  auto pairing = [](const LoopVector& f, const LoopVector& n) { return -integral_inner(f, n) / (4.0 * pi * pi); };
  KForm<double> w = pair_forms<double>(PairingConvention::shuffle, pairing, curvature_form(s, route, fd),
                                       nabla_higgs_form(s, route, fd));
  w.name = "string";
  w.tag = "gerbe.string_form";
  return w;
}

KForm<double> string_form(std::shared_ptr<const BundleScenario> s, Route route, FdConfig fd) {
  KForm<double> w;
  w.degree = 3;
  w.name = "omega";
  w.tag = "gerbe.string_form";
  w.eval = [s, total = string_form_total(s, route, fd)](const Point& base, std::span<const Tangent> u) {
    const Point p = s->lift(base);
    std::vector<Tangent> v;
    for (const auto& t : u) v.push_back(s->lift_tangent(base, t));
    return total(p, v);
  };
  return w;
}

KForm<double> omega3_form(PairingConvention conv) {
  KForm<AlgebraElement> theta_hat;
  theta_hat.degree = 1;
  theta_hat.name = "Theta^";
  theta_hat.eval = [](const Point& p, std::span<const Tangent> v) { return adjoint(p.groups.at(0), v[0].groups.at(0)); };
  auto trilinear = [](const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c) {
    return inner(bracket(a, b), c) / (48.0 * pi * pi);
  };
  KForm<double> w = pair_forms<double>(conv, trilinear, theta_hat, theta_hat, theta_hat);
  w.name = "omega3";
  w.tag = "gerbe.omega3";
  return w;
}

double omega3(const GroupElement& k, const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& w,
              PairingConvention conv) {
  Point p;
  p.chart = Eigen::VectorXd(0);
  p.groups = {k};
  std::vector<Tangent> args(3);
  const AlgebraElement* xs[3] = {&u, &v, &w};
  for (int i = 0; i < 3; ++i) {
    args[static_cast<std::size_t>(i)].chart = Eigen::VectorXd(0);
    args[static_cast<std::size_t>(i)].groups = {*xs[i]};
  }
  return omega3_form(conv)(p, args);
}

double omega3_volume(int n) {
  // Unit quaternion q = (cos c, sin c cos t, sin c sin t cos f, sin c sin t sin f)
  // as the matrix [[q0 + i q1, q2 + i q3], [-q2 + i q3, q0 - i q1]], with
  // hyperspherical coordinates in their usual order (c, t, f).
  auto mat = [](const Eigen::Vector4d& q) {
    Matrix m(2, 2);
    m << cplx(q(0), q(1)), cplx(q(2), q(3)), cplx(-q(2), q(3)), cplx(q(0), -q(1));
    return m;
  };
  const QuadratureRule rc = gauss_legendre(n, 0.0, pi);
  const QuadratureRule rt = gauss_legendre(n, 0.0, pi);
  const QuadratureRule rf = gauss_legendre(n, 0.0, 2.0 * pi);
  const KForm<double> w3 = omega3_form();
  double sum = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double x = rc.nodes(a), t = rt.nodes(b), f = rf.nodes(c);
        const double sc = std::sin(x), cc = std::cos(x), st = std::sin(t), ct = std::cos(t);
        const double sf = std::sin(f), cf = std::cos(f);
        const Eigen::Vector4d q(cc, sc * ct, sc * st * cf, sc * st * sf);
        const Eigen::Vector4d dc(-sc, cc * ct, cc * st * cf, cc * st * sf);
        const Eigen::Vector4d dt(0.0, -sc * st, sc * ct * cf, sc * ct * sf);
        const Eigen::Vector4d df(0.0, 0.0, -sc * st * sf, sc * st * cf);
        const GroupElement g(mat(q));
        Point p;
        p.chart = Eigen::VectorXd(0);
        p.groups = {g};
        std::vector<Tangent> v(3);
        const Eigen::Vector4d* dirs[3] = {&dc, &dt, &df};
        for (int i = 0; i < 3; ++i) {
          v[static_cast<std::size_t>(i)].chart = Eigen::VectorXd(0);
          v[static_cast<std::size_t>(i)].groups = {project_to_algebra(g.inverse().m * mat(*dirs[i]))};
        }
        sum += rc.weights(a) * rt.weights(b) * rf.weights(c) * w3(p, v);
      }
  return sum;
}

double higgs_equivariance_residual(const std::function<LoopVector(const Point&)>& higgs, const BundleScenario& s,
                                   const Point& p, const LoopPoint& g) {
  return max_norm(higgs(s.act(p, g)) - loop_adjoint_inv(g, higgs(p)) - left_log_derivative(g));
}

double reduced_splitting_check(const BundleScenario& s, const Point& p, const LoopPoint& g, const LoopVector& x) {
  return reduced_splitting_residual(s.higgs(p), s.higgs(s.act(p, g)), g, x);
}

}  // namespace loopgerbe
