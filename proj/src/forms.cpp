#include "loopgerbe/forms.hpp"

namespace loopgerbe {

Tangent& Tangent::operator+=(const Tangent& o) {
  if (chart.size() != o.chart.size() || loops.size() != o.loops.size() || groups.size() != o.groups.size() ||
      angles.size() != o.angles.size())
    throw DomainError("Tangent +: shape mismatch");
  chart += o.chart;
  for (std::size_t i = 0; i < loops.size(); ++i) loops[i] += o.loops[i];
  for (std::size_t i = 0; i < groups.size(); ++i) groups[i] += o.groups[i];
  for (std::size_t i = 0; i < angles.size(); ++i) angles[i] += o.angles[i];
  return *this;
}

Tangent& Tangent::operator*=(double s) {
  chart *= s;
  for (auto& x : loops) x *= s;
  for (auto& x : groups) x *= s;
  for (auto& x : angles) x *= s;
  return *this;
}

Tangent zero_tangent(const Point& p) {
  Tangent v;
  v.chart = Eigen::VectorXd::Zero(p.chart.size());
  for (const auto& g : p.loops) v.loops.push_back(LoopVector::zero(g.grid(), g.n()));
  for (const auto& k : p.groups) v.groups.push_back(AlgebraElement::zero(k.n()));
  v.angles.assign(p.angles.size(), 0.0);
  return v;
}

void require_tangent_shape(const Point& p, const Tangent& v) {
  if (p.chart.size() != v.chart.size() || p.loops.size() != v.loops.size() || p.groups.size() != v.groups.size() ||
      p.angles.size() != v.angles.size())
    throw DomainError("tangent shape does not match its base point");
  for (std::size_t i = 0; i < p.loops.size(); ++i)
    require_same_grid(p.loops[i].grid(), v.loops[i].grid(), "tangent");
}

Point flow(const Point& p, const Tangent& v, double t) {
  require_tangent_shape(p, v);
  Point q;
  q.chart = p.chart + t * v.chart;
  q.loops.reserve(p.loops.size());
  for (std::size_t i = 0; i < p.loops.size(); ++i) q.loops.push_back(loop_exp_right(p.loops[i], v.loops[i], t));
  q.groups.reserve(p.groups.size());
  for (std::size_t i = 0; i < p.groups.size(); ++i) q.groups.push_back(p.groups[i] * exp_alg(v.groups[i], t));
  q.angles = p.angles;
  for (std::size_t i = 0; i < p.angles.size(); ++i) q.angles[i] += t * v.angles[i];
  return q;
}

Tangent lie_bracket(const Tangent& v, const Tangent& w) {
  Tangent out;
  out.chart = Eigen::VectorXd::Zero(v.chart.size());
  for (std::size_t i = 0; i < v.loops.size(); ++i) out.loops.push_back(loop_bracket(v.loops[i], w.loops[i]));
  for (std::size_t i = 0; i < v.groups.size(); ++i) out.groups.push_back(bracket(v.groups[i], w.groups[i]));
  out.angles.assign(v.angles.size(), 0.0);
  return out;
}

std::pair<Point, std::vector<Tangent>> nerve_face(const Point& pt, std::span<const Tangent> v, int i) {
  const int count = static_cast<int>(pt.loops.size());
  if (i < 0 || i > count) throw DomainError("nerve_face: index out of range");
  Point face = pt;
  std::vector<Tangent> args(v.begin(), v.end());
  if (i == 0 || i == count) {
    const int drop = (i == 0) ? 0 : count - 1;
    face.loops.erase(face.loops.begin() + drop);
    for (auto& t : args) t.loops.erase(t.loops.begin() + drop);
    return {std::move(face), std::move(args)};
  }
  const auto a = static_cast<std::size_t>(i - 1);
  const LoopPoint& h = pt.loops[a + 1];
  face.loops[a] = loop_mul(pt.loops[a], h);
  face.loops.erase(face.loops.begin() + static_cast<std::ptrdiff_t>(a + 1));
  for (auto& t : args) {
    t.loops[a] = loop_adjoint_inv(h, t.loops[a]) + t.loops[a + 1];
    t.loops.erase(t.loops.begin() + static_cast<std::ptrdiff_t>(a + 1));
  }
  return {std::move(face), std::move(args)};
}

}  // namespace loopgerbe
