#include "loopgerbe/caloron.hpp"

#include <cmath>
#include <numbers>

namespace loopgerbe {

namespace {
using std::numbers::pi;
}

Point caloron_point(const Point& p, const GroupElement& k, double theta) {
  Point pt = p;
  pt.groups = {k};
  pt.angles = {theta};
  return pt;
}

Tangent caloron_tangent(const Tangent& x, const AlgebraElement& eta, double lambda) {
  Tangent v = x;
  v.groups = {eta};
  v.angles = {lambda};
  return v;
}

Caloron::Caloron(std::shared_ptr<const BundleScenario> scenario) : scenario_(std::move(scenario)) {}

Point Caloron::bundle_point(const Point& pt) const {
  if (pt.loops.size() != 1 || pt.groups.size() != 1 || pt.angles.size() != 1)
    throw DomainError("caloron: point must carry one loop, one group and one angle coordinate");
  Point p;
  p.chart = pt.chart;
  p.loops = pt.loops;
  return p;
}

Tangent Caloron::bundle_tangent(const Tangent& v) const {
  Tangent x;
  x.chart = v.chart;
  x.loops = v.loops;
  return x;
}

AlgebraElement Caloron::connection(const Point& pt, const Tangent& v) const {
  const Point p = bundle_point(pt);
  const double theta = pt.angles[0];
  AlgebraElement inner_part = scenario_->connection(p, bundle_tangent(v)).at(theta);
  if (v.angles[0] != 0.0) inner_part += v.angles[0] * scenario_->higgs(p).at(theta);
  return adjoint_inv(pt.groups[0], inner_part) + v.groups[0];
}

AlgebraElement Caloron::curvature(const Point& pt, const Tangent& v, const Tangent& w) const {
  const Point p = bundle_point(pt);
  const double theta = pt.angles[0];
  const Tangent x1 = bundle_tangent(v), x2 = bundle_tangent(w);
  AlgebraElement r = scenario_->curvature(p, x1, x2).at(theta);
  if (w.angles[0] != 0.0) r += w.angles[0] * scenario_->nabla_higgs(p, x1).at(theta);
  if (v.angles[0] != 0.0) r -= v.angles[0] * scenario_->nabla_higgs(p, x2).at(theta);
  return adjoint_inv(pt.groups[0], r);
}

KForm<AlgebraElement> Caloron::connection_form() const {
  KForm<AlgebraElement> w;
  w.degree = 1;
  w.name = "A~";
  w.tag = "caloron.connection";
  w.eval = [this](const Point& pt, std::span<const Tangent> v) { return connection(pt, v[0]); };
  return w;
}

KForm<AlgebraElement> Caloron::curvature_form(Route route, FdConfig fd) const {
  KForm<AlgebraElement> w;
  w.degree = 2;
  w.name = "R~";
  w.tag = "caloron.curvature";
  if (route == Route::closed_form) {
    w.eval = [this](const Point& pt, std::span<const Tangent> v) { return curvature(pt, v[0], v[1]); };
  } else {
    w.eval = [this, fd, a = connection_form()](const Point& pt, std::span<const Tangent> v) {
      return ext_d(a, pt, v, fd) + bracket(connection(pt, v[0]), connection(pt, v[1]));
    };
  }
  return w;
}

KForm<double> Caloron::pontrjagin_form() const {
  auto pairing = [](const AlgebraElement& a, const AlgebraElement& b) { return -inner(a, b) / (8.0 * pi * pi); };
  KForm<double> w = pair_forms<double>(PairingConvention::shuffle, pairing, curvature_form(), curvature_form());
  w.name = "pontrjagin";
  w.tag = "caloron.pontrjagin";
  return w;
}

KForm<double> Caloron::pontrjagin_rhs_form() const {
  auto s = scenario_;
  KForm<AlgebraElement> f;
  f.degree = 2;
  f.name = "F(theta)";
  f.eval = [this, s](const Point& pt, std::span<const Tangent> v) {
    return s->curvature(bundle_point(pt), bundle_tangent(v[0]), bundle_tangent(v[1])).at(pt.angles[0]);
  };
  KForm<AlgebraElement> n;
  n.degree = 1;
  n.name = "nabla Phi(theta)";
  n.eval = [this, s](const Point& pt, std::span<const Tangent> v) {
    return s->nabla_higgs(bundle_point(pt), bundle_tangent(v[0])).at(pt.angles[0]);
  };
  KForm<double> dtheta_form;
  dtheta_form.degree = 1;
  dtheta_form.name = "dtheta";
  dtheta_form.eval = [](const Point&, std::span<const Tangent> v) { return v[0].angles.at(0); };
  auto scale = [](const AlgebraElement& a, double l) { return l * a; };
  KForm<AlgebraElement> n_dtheta = pair_forms<AlgebraElement>(PairingConvention::shuffle, scale, n, dtheta_form);

  auto pairing = [](const AlgebraElement& a, const AlgebraElement& b) { return inner(a, b); };
  KForm<double> ff = pair_forms<double>(PairingConvention::shuffle, pairing, f, f);
  KForm<double> fn = pair_forms<double>(PairingConvention::shuffle, pairing, f, n_dtheta);
  KForm<double> w;
  w.degree = 4;
  w.name = "pontrjagin rhs";
  w.tag = "caloron.pontrjagin";
  w.eval = [ff, fn](const Point& pt, std::span<const Tangent> v) {
    return -(ff(pt, v) + 2.0 * fn(pt, v)) / (8.0 * pi * pi);
  };
  return w;
}

double Caloron::integrate_circle(const Point& p, const Tangent& u, const Tangent& v, const Tangent& w,
                                 int nodes) const {
  const ThetaGrid& loop_grid = scenario_->grid();
  if (nodes == 0) nodes = 2 * loop_grid.size();
  const ThetaGrid circle =
      loop_grid.kind() == GridKind::periodic ? ThetaGrid::periodic(nodes) : ThetaGrid::interval(nodes);
  const int n = scenario_->group().n();
  const AlgebraElement zero = AlgebraElement::zero(n);
  const GroupElement one = GroupElement::identity(n);
  Tangent d_theta = zero_tangent(p);
  std::vector<Tangent> args{caloron_tangent(u, zero, 0.0), caloron_tangent(v, zero, 0.0),
                            caloron_tangent(w, zero, 0.0), caloron_tangent(d_theta, zero, 1.0)};
  const KForm<double> form = pontrjagin_form();
  double sum = 0.0;
  for (int j = 0; j < circle.size(); ++j) sum += circle.weights()(j) * form(caloron_point(p, one, circle.node(j)), args);
  return sum;
}

int Caloron::node_index(double theta) const {
  const ThetaGrid& grid = scenario_->grid();
  for (int j = 0; j < grid.size(); ++j)
    if (std::abs(grid.node(j) - theta) < 1e-12) return j;
  throw DomainError("caloron action: theta must be a grid node");
}

Point Caloron::act(const Point& pt, const LoopPoint& g) const {
  const int j = node_index(pt.angles.at(0));
  const Point pg = scenario_->act(bundle_point(pt), g);
  return caloron_point(pg, g[j].inverse() * pt.groups.at(0), pt.angles[0]);
}

Tangent Caloron::act_tangent(const Point& pt, const Tangent& v, const LoopPoint& g) const {
  const int j = node_index(pt.angles.at(0));
  const Tangent x = scenario_->act_tangent(bundle_tangent(v), g);
  AlgebraElement eta = v.groups.at(0);
  if (v.angles.at(0) != 0.0) eta -= v.angles[0] * adjoint_inv(pt.groups.at(0), dtheta(g)[j]);
  return caloron_tangent(x, eta, v.angles[0]);
}

LoopVector Caloron::extract_connection(const Point& p, const Tangent& x) const {
  const ThetaGrid& grid = scenario_->grid();
  const int n = scenario_->group().n();
  const Tangent v = caloron_tangent(x, AlgebraElement::zero(n), 0.0);
  std::vector<AlgebraElement> out;
  for (int j = 0; j < grid.size(); ++j)
    out.push_back(connection(caloron_point(p, GroupElement::identity(n), grid.node(j)), v));
  return LoopVector(grid, std::move(out));
}

LoopVector Caloron::extract_higgs(const Point& p) const {
  const ThetaGrid& grid = scenario_->grid();
  const int n = scenario_->group().n();
  const Tangent v = caloron_tangent(zero_tangent(p), AlgebraElement::zero(n), 1.0);
  std::vector<AlgebraElement> out;
  for (int j = 0; j < grid.size(); ++j)
    out.push_back(connection(caloron_point(p, GroupElement::identity(n), grid.node(j)), v));
  return LoopVector(grid, std::move(out));
}

QPoint killingback_map(const QLoop& p, const GroupElement& k, int node) {
  if (node < 0 || node >= p.q.size()) throw DomainError("killingback_map: node out of range");
  if (static_cast<int>(p.x.size()) != p.q.size()) throw DomainError("killingback_map: chart and group samples differ");
  return QPoint{p.x[static_cast<std::size_t>(node)], p.q[node] * k};
}

QLoop act(const QLoop& p, const LoopPoint& g) { return QLoop{p.x, loop_mul(p.q, g)}; }

}  // namespace loopgerbe
