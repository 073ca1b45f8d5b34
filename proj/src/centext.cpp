#include "loopgerbe/centext.hpp"

#include <cmath>
#include <numbers>

#include "loopgerbe/random.hpp"

namespace loopgerbe {

namespace {

using std::numbers::pi;
constexpr cplx kI(0.0, 1.0);
constexpr double kSelfTestTolerance = 1e-6;

}  // namespace

cplx eval_R(const LoopPoint& g, const LoopVector& x, const LoopVector& y) {
  require_same_grid(g.grid(), x.grid(), "eval_R");
  require_same_grid(x.grid(), y.grid(), "eval_R");
  const double v = integral_inner(x, dtheta(y)) - integral_inner(y, dtheta(x));
  return kI / (4.0 * pi) * v;
}

cplx eval_alpha(const LoopPoint& g, const LoopPoint& h, const LoopVector& xg, const LoopVector& xh) {
  require_same_grid(g.grid(), h.grid(), "eval_alpha");
  require_same_grid(xg.grid(), h.grid(), "eval_alpha");
  require_same_grid(xh.grid(), h.grid(), "eval_alpha");
  return kI / (2.0 * pi) * integral_inner(xg, dtheta(h));
}

KForm<cplx> R_form() {
  KForm<cplx> w;
  w.degree = 2;
  w.name = "R";
  w.tag = "ext.R";
  w.eval = [](const Point& p, std::span<const Tangent> v) {
    if (p.loops.size() != 1) throw DomainError("R: expected a point of the loop group");
    return eval_R(p.loops[0], v[0].loops[0], v[1].loops[0]);
  };
  return w;
}

KForm<cplx> alpha_form(double sign) {
  KForm<cplx> w;
  w.degree = 1;
  w.name = "alpha";
  w.tag = "ext.alpha";
  w.eval = [sign](const Point& p, std::span<const Tangent> v) {
    if (p.loops.size() != 2) throw DomainError("alpha: expected a point of G x G");
    return sign * eval_alpha(p.loops[0], p.loops[1], v[0].loops[0], v[0].loops[1]);
  };
  return w;
}

ExtensionData ExtensionData::make(const SpecialUnitary& group, const ThetaGrid& grid, std::uint64_t seed,
                                  const FdConfig& fd) {
  Rng rng(seed, 0x5e1f);
  Point p;
  p.chart = Eigen::VectorXd(0);
  p.loops = {random_loop(group, grid, rng), random_loop(group, grid, rng)};
  Tangent v = zero_tangent(p), w = zero_tangent(p);
  for (auto& x : v.loops) x = random_loop_vector(group, grid, rng);
  for (auto& x : w.loops) x = random_loop_vector(group, grid, rng);
  const std::vector<Tangent> args{v, w};

  const KForm<cplx> R = R_form();
  const cplx dR = delta_nerve(R, 1)(p, args);
  const cplx da = ext_d(alpha_form(1.0), p, args, fd);
  const double scale = std::max(1.0, std::abs(dR));
  const double plus = std::abs(da - dR) / scale;
  const double minus = std::abs(-da - dR) / scale;

  ExtensionData out;
  out.R = R;
  if (plus <= kSelfTestTolerance) {
    out.alpha_sign = 1.0;
    out.self_test_residual = plus;
  } else if (minus <= kSelfTestTolerance) {
    out.alpha_sign = -1.0;
    out.self_test_residual = minus;
  } else {
    throw ConventionError("d alpha = delta R fails for both signs of alpha (residuals " + std::to_string(plus) +
                          ", " + std::to_string(minus) + ")");
  }
  out.alpha = alpha_form(out.alpha_sign);
  return out;
}

cplx cocycle_log(const PathInLoopGroup& f, const PathInLoopGroup& g) {
  if (f.size() != g.size()) throw DomainError("cocycle_c: paths have different s-grids");
  require_same_grid(f.grid(), g.grid(), "cocycle_c");
  const Eigen::VectorXd w = path_weights(f.size());
  cplx sum = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const LoopVector fv = path_velocity(f, i);
    sum += w(i) * eval_alpha(f[i], g[i], fv, fv);
  }
  return sum;
}

cplx cocycle_c(const PathInLoopGroup& f, const PathInLoopGroup& g) { return std::exp(cocycle_log(f, g)); }

DiskLoop::DiskLoop(ThetaGrid grid, std::function<LoopVector(double)> xi) : grid_(std::move(grid)), xi_(std::move(xi)) {
  for (double s : {0.0, 1.0}) {
    const LoopVector x = xi_(s);
    require_same_grid(grid_, x.grid(), "DiskLoop");
    if (max_norm(x) > 1e-12) throw DomainError("DiskLoop: xi must vanish at s = 0 and s = 1");
  }
}

LoopPoint DiskLoop::at(double r, double s) const {
  return loop_exp_right(LoopPoint::identity(grid_, xi_(0.0).n()), xi_(s), r);
}

LoopVector DiskLoop::d_r(double, double s) const { return xi_(s); }

LoopVector DiskLoop::d_s(double r, double s) const {
  // Fourth-order central stencil in s, then left translation to the identity.
  constexpr double h = 1e-4;
  const LoopPoint base = at(r, s);
  const LoopPoint m2 = at(r, s - 2 * h), m1 = at(r, s - h), p1 = at(r, s + h), p2 = at(r, s + 2 * h);
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(grid_.size()));
  for (int j = 0; j < grid_.size(); ++j) {
    const Matrix d = (m2[j].m - 8.0 * m1[j].m + 8.0 * p1[j].m - p2[j].m) / (12.0 * h);
    out.push_back(project_to_algebra(base[j].inverse().m * d));
  }
  return LoopVector(grid_, std::move(out));
}

cplx holonomy_H(const DiskLoop& h, int nodes) {
  const QuadratureRule rule = gauss_legendre(nodes);
  cplx sum = 0.0;
  for (int a = 0; a < nodes; ++a)
    for (int b = 0; b < nodes; ++b) {
      const double r = rule.nodes(a), s = rule.nodes(b);
      sum += rule.weights(a) * rule.weights(b) * eval_R(h.at(r, s), h.d_r(r, s), h.d_s(r, s));
    }
  return std::exp(sum);
}

cplx mu_hat(const PathInLoopGroup& f, std::span<const LoopVector> x) {
  if (static_cast<int>(x.size()) != f.size()) throw DomainError("mu_hat: need one vector per s-node");
  const Eigen::VectorXd w = path_weights(f.size());
  cplx sum = 0.0;
  for (int i = 0; i < f.size(); ++i)
    sum += w(i) * eval_R(f[i], path_velocity(f, i), x[static_cast<std::size_t>(i)]);
  return sum;
}

cplx gomi_cocycle_Z(const LoopPoint& g, const LoopVector& x) {
  require_same_grid(g.grid(), x.grid(), "gomi_cocycle_Z");
  return -kI / (2.0 * pi) * integral_inner(x, dtheta(g));
}

cplx reduced_splitting(const LoopVector& phi, const LoopVector& x) {
  return kI / (2.0 * pi) * integral_inner(phi, x);
}

double reduced_splitting_residual(const LoopVector& phi_p, const LoopVector& phi_pg, const LoopPoint& g,
                                  const LoopVector& x) {
  return std::abs(reduced_splitting(phi_p, x) - reduced_splitting(phi_pg, loop_adjoint_inv(g, x)) -
                  gomi_cocycle_Z(g, x));
}

}  // namespace loopgerbe
