#include "loopgerbe/loops.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace loopgerbe {

namespace {

// Node values stacked as an N x 2n^2 real matrix (re/im interleaved, row-major).
template <class T>
Eigen::MatrixXd stack(const std::vector<T>& values) {
  const int rows = static_cast<int>(values.size());
  const int n = values.front().n();
  Eigen::MatrixXd out(rows, 2 * n * n);
  for (int j = 0; j < rows; ++j) {
    const Matrix& m = values[static_cast<std::size_t>(j)].m;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        out(j, 2 * (r * n + c)) = m(r, c).real();
        out(j, 2 * (r * n + c) + 1) = m(r, c).imag();
      }
  }
  return out;
}

Matrix unstack_row(const Eigen::MatrixXd& data, int j, int n) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = cplx(data(j, 2 * (r * n + c)), data(j, 2 * (r * n + c) + 1));
  return m;
}

}  // namespace

void require_same_grid(const ThetaGrid& a, const ThetaGrid& b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": grid mismatch");
}

// ---------------------------------------------------------------------------

LoopVector::LoopVector(ThetaGrid grid, std::vector<AlgebraElement> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) throw DomainError("LoopVector: value count != grid size");
}

LoopVector LoopVector::zero(const ThetaGrid& grid, int n) {
  return LoopVector(grid, std::vector<AlgebraElement>(static_cast<std::size_t>(grid.size()), AlgebraElement::zero(n)));
}

LoopVector LoopVector::constant(const ThetaGrid& grid, const AlgebraElement& x) {
  return LoopVector(grid, std::vector<AlgebraElement>(static_cast<std::size_t>(grid.size()), x));
}

LoopVector LoopVector::from_function(const ThetaGrid& grid, const std::function<AlgebraElement(double)>& f) {
  std::vector<AlgebraElement> v;
  v.reserve(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) v.push_back(f(grid.node(j)));
  return LoopVector(grid, std::move(v));
}

AlgebraElement LoopVector::at(double theta) const {
  const Eigen::VectorXd w = grid_.interpolation_weights(theta);
  AlgebraElement out = AlgebraElement::zero(n());
  for (int j = 0; j < size(); ++j)
    if (w(j) != 0.0) out.m += w(j) * values_[static_cast<std::size_t>(j)].m;
  return out;
}

LoopVector& LoopVector::operator+=(const LoopVector& o) {
  require_same_grid(grid_, o.grid_, "LoopVector +");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
  return *this;
}

LoopVector& LoopVector::operator-=(const LoopVector& o) {
  require_same_grid(grid_, o.grid_, "LoopVector -");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
  return *this;
}

LoopVector& LoopVector::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

double max_norm(const LoopVector& x) {
  double m = 0.0;
  for (const auto& v : x.values()) m = std::max(m, v.m.norm());
  return m;
}

// ---------------------------------------------------------------------------

LoopPoint::LoopPoint(ThetaGrid grid, std::vector<GroupElement> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) throw DomainError("LoopPoint: value count != grid size");
}

LoopPoint LoopPoint::identity(const ThetaGrid& grid, int n) {
  return constant(grid, GroupElement::identity(n));
}

LoopPoint LoopPoint::constant(const ThetaGrid& grid, const GroupElement& k) {
  return LoopPoint(grid, std::vector<GroupElement>(static_cast<std::size_t>(grid.size()), k));
}

LoopPoint LoopPoint::from_function(const ThetaGrid& grid, const std::function<GroupElement(double)>& f) {
  std::vector<GroupElement> v;
  v.reserve(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) v.push_back(f(grid.node(j)));
  return LoopPoint(grid, std::move(v));
}

double max_distance(const LoopPoint& g, const LoopPoint& h) {
  require_same_grid(g.grid(), h.grid(), "max_distance");
  double m = 0.0;
  for (int j = 0; j < g.size(); ++j) m = std::max(m, (g[j].m - h[j].m).norm());
  return m;
}

// ---------------------------------------------------------------------------

LoopVector dtheta(const LoopVector& x) {
  const Eigen::MatrixXd d = x.grid().diff() * stack(x.values());
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (int j = 0; j < x.size(); ++j) out.emplace_back(unstack_row(d, j, x.n()));
  return LoopVector(x.grid(), std::move(out));
}

LoopVector dtheta(const LoopPoint& g) {
  const Eigen::MatrixXd d = g.grid().diff() * stack(g.values());
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(project_to_algebra(unstack_row(d, j, g.n()) * g[j].m.adjoint()));
  return LoopVector(g.grid(), std::move(out));
}

LoopVector left_log_derivative(const LoopPoint& g) {
  const Eigen::MatrixXd d = g.grid().diff() * stack(g.values());
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(project_to_algebra(g[j].m.adjoint() * unstack_row(d, j, g.n())));
  return LoopVector(g.grid(), std::move(out));
}

cplx quad_s1(const ThetaGrid& grid, std::span<const cplx> samples) {
  if (static_cast<int>(samples.size()) != grid.size()) throw DomainError("quad_s1: sample count mismatch");
  cplx s = 0.0;
  for (int j = 0; j < grid.size(); ++j) s += grid.weights()(j) * samples[static_cast<std::size_t>(j)];
  return s;
}

double quad_s1(const ThetaGrid& grid, std::span<const double> samples) { return quadrature(grid, samples); }

double integral_inner(const LoopVector& x, const LoopVector& y) {
  require_same_grid(x.grid(), y.grid(), "integral_inner");
  double s = 0.0;
  for (int j = 0; j < x.size(); ++j) s += x.grid().weights()(j) * inner(x[j], y[j]);
  return s;
}

LoopPoint loop_mul(const LoopPoint& g, const LoopPoint& h) {
  require_same_grid(g.grid(), h.grid(), "loop_mul");
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(g[j] * h[j]);
  return LoopPoint(g.grid(), std::move(out));
}

LoopPoint loop_inv(const LoopPoint& g) {
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (const auto& v : g.values()) out.push_back(v.inverse());
  return LoopPoint(g.grid(), std::move(out));
}

LoopPoint loop_exp_right(const LoopPoint& g, const LoopVector& x, double t) {
  require_same_grid(g.grid(), x.grid(), "loop_exp_right");
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(g[j] * exp_alg(x[j], t));
  return LoopPoint(g.grid(), std::move(out));
}

LoopVector loop_adjoint(const LoopPoint& g, const LoopVector& x) {
  require_same_grid(g.grid(), x.grid(), "loop_adjoint");
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(adjoint(g[j], x[j]));
  return LoopVector(g.grid(), std::move(out));
}

LoopVector loop_adjoint_inv(const LoopPoint& g, const LoopVector& x) {
  require_same_grid(g.grid(), x.grid(), "loop_adjoint_inv");
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int j = 0; j < g.size(); ++j) out.push_back(adjoint_inv(g[j], x[j]));
  return LoopVector(g.grid(), std::move(out));
}

LoopVector loop_bracket(const LoopVector& x, const LoopVector& y) {
  require_same_grid(x.grid(), y.grid(), "loop_bracket");
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(x.size()));
  for (int j = 0; j < x.size(); ++j) out.push_back(bracket(x[j], y[j]));
  return LoopVector(x.grid(), std::move(out));
}

// ---------------------------------------------------------------------------

double FourierProfile::value(double theta) const {
  double v = c0;
  for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::cos((k + 1) * theta);
  for (std::size_t k = 0; k < b.size(); ++k) v += b[k] * std::sin((k + 1) * theta);
  return v;
}

double FourierProfile::derivative(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) v -= (k + 1) * a[k] * std::sin((k + 1) * theta);
  for (std::size_t k = 0; k < b.size(); ++k) v += (k + 1) * b[k] * std::cos((k + 1) * theta);
  return v;
}

FourierProfile FourierProfile::based() const {
  FourierProfile f = *this;
  f.c0 -= value(0.0);
  return f;
}

LoopPoint AnalyticLoop::realize(const ThetaGrid& grid) const {
  return LoopPoint::from_function(grid, [this](double t) { return exp_alg(generator, profile.value(t)); });
}

LoopVector AnalyticLoop::z_exact(const ThetaGrid& grid) const {
  return LoopVector::from_function(grid, [this](double t) { return profile.derivative(t) * generator; });
}

// ---------------------------------------------------------------------------

PathInLoopGroup::PathInLoopGroup(std::vector<LoopPoint> nodes) : nodes_(std::move(nodes)) {
  if (static_cast<int>(nodes_.size()) < kMinPathNodes)
    throw DomainError("path needs at least " + std::to_string(kMinPathNodes) + " s-nodes");
  const LoopPoint& first = nodes_.front();
  if (max_distance(first, LoopPoint::identity(first.grid(), first.n())) > 1e-12)
    throw DomainError("path must start at the identity loop");
  for (const auto& node : nodes_) require_same_grid(first.grid(), node.grid(), "PathInLoopGroup");
}

PathInLoopGroup PathInLoopGroup::from_function(int m, const std::function<LoopPoint(double)>& f) {
  std::vector<LoopPoint> nodes;
  nodes.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) nodes.push_back(f(static_cast<double>(i) / (m - 1)));
  return PathInLoopGroup(std::move(nodes));
}

PathInLoopGroup path_mul(const PathInLoopGroup& f, const PathInLoopGroup& g) {
  if (f.size() != g.size()) throw DomainError("path_mul: s-grid mismatch");
  std::vector<LoopPoint> out;
  out.reserve(static_cast<std::size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i) out.push_back(loop_mul(f[i], g[i]));
  return PathInLoopGroup(std::move(out));
}

const LoopPoint& path_endpoint(const PathInLoopGroup& f) { return f[f.size() - 1]; }

LoopVector path_velocity(const PathInLoopGroup& f, int i) {
  const int m = f.size();
  if (i < 0 || i >= m) throw DomainError("path_velocity: index out of range");
  // 4th-order stencils: central in the interior, one-sided at the two ends.
  static const double kCentral[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  static const double kEnd0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
  static const double kEnd1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
  const double* c = kCentral;
  int start = i - 2;
  double sign = 1.0;
  if (i == 0) { c = kEnd0; start = 0; }
  else if (i == 1) { c = kEnd1; start = 0; }
  else if (i == m - 1) { c = kEnd0; start = m - 1; sign = -1.0; }
  else if (i == m - 2) { c = kEnd1; start = m - 1; sign = -1.0; }

  const double scale = sign / (12.0 * f.step());
  const LoopPoint& at = f[i];
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(at.size()));
  for (int j = 0; j < at.size(); ++j) {
    Matrix d = Matrix::Zero(at.n(), at.n());
    for (int k = 0; k < 5; ++k) {
      if (c[k] == 0.0) continue;
      // Mirrored stencil at the right end runs backwards from m-1.
      const int idx = (sign > 0) ? start + k : start - k;
      d += c[k] * f[idx][j].m;
    }
    out.push_back(project_to_algebra(at[j].m.adjoint() * (scale * d)));
  }
  return LoopVector(at.grid(), std::move(out));
}

Eigen::VectorXd path_weights(int m) {
  if (m < 5) throw DomainError("path_weights: need at least 5 nodes");
  const double h = 1.0 / (m - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  int intervals = m - 1;
  int simpson_end = (intervals % 2 == 0) ? m - 1 : m - 4;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w(i) += h / 3.0;
    w(i + 1) += 4.0 * h / 3.0;
    w(i + 2) += h / 3.0;
  }
  if (intervals % 2 != 0) {
    const int s = m - 4;
    w(s) += 3.0 * h / 8.0;
    w(s + 1) += 9.0 * h / 8.0;
    w(s + 2) += 9.0 * h / 8.0;
    w(s + 3) += 3.0 * h / 8.0;
  }
  return w;
}

// ---------------------------------------------------------------------------

void write_loop(std::ostream& os, const LoopPoint& g) {
  const auto old = os.precision(17);
  for (int j = 0; j < g.size(); ++j) {
    const Matrix& m = g[j].m;
    for (int r = 0; r < g.n(); ++r)
      for (int c = 0; c < g.n(); ++c) {
        if (r || c) os << ' ';
        os << m(r, c).real() << ' ' << m(r, c).imag();
      }
    os << '\n';
  }
  os.precision(old);
}

LoopPoint read_loop(std::istream& is, GridKind kind) {
  std::vector<GroupElement> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> xs;
    double x;
    while (ls >> x) xs.push_back(x);
    int n = 0;
    if (xs.size() == 8) n = 2;
    else if (xs.size() == 18) n = 3;
    else throw DomainError("read_loop: expected 8 or 18 reals per line, got " + std::to_string(xs.size()));
    if (!values.empty() && values.front().n() != n) throw DomainError("read_loop: inconsistent matrix size");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = cplx(xs[2 * (r * n + c)], xs[2 * (r * n + c) + 1]);
    if (group_defect(m) > 1e-10) throw DomainError("read_loop: node is not in SU(n)");
    values.emplace_back(std::move(m));
  }
  if (values.empty()) throw DomainError("read_loop: no nodes");
  const int count = static_cast<int>(values.size());
  ThetaGrid grid = kind == GridKind::periodic ? ThetaGrid::periodic(count) : ThetaGrid::interval(count);
  return LoopPoint(grid, std::move(values));
}

void write_analytic_loop(std::ostream& os, const AnalyticLoop& loop) {
  const auto old = os.precision(17);
  const auto& group = SpecialUnitary::of_rank(loop.generator.n());
  const Eigen::VectorXd c = group.components(loop.generator);
  for (int a = 0; a < c.size(); ++a) os << (a ? " " : "") << c(a);
  os << '\n' << loop.profile.c0;
  const std::size_t modes = std::max(loop.profile.a.size(), loop.profile.b.size());
  for (std::size_t k = 0; k < modes; ++k) {
    os << ' ' << (k < loop.profile.a.size() ? loop.profile.a[k] : 0.0);
    os << ' ' << (k < loop.profile.b.size() ? loop.profile.b[k] : 0.0);
  }
  os << '\n';
  os.precision(old);
}

AnalyticLoop read_analytic_loop(std::istream& is, const SpecialUnitary& group) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (rows.size() < 2 && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> xs;
    double x;
    while (ls >> x) xs.push_back(x);
    rows.push_back(std::move(xs));
  }
  if (rows.size() != 2) throw DomainError("read_analytic_loop: expected two data lines");
  if (static_cast<int>(rows[0].size()) != group.dim()) throw DomainError("read_analytic_loop: wrong generator length");
  if (rows[1].empty() || rows[1].size() % 2 != 1) throw DomainError("read_analytic_loop: profile needs c0 then (a_k, b_k) pairs");
  AnalyticLoop loop;
  loop.generator = group.from_components(Eigen::Map<const Eigen::VectorXd>(rows[0].data(), group.dim()));
  loop.profile.c0 = rows[1][0];
  for (std::size_t k = 1; k + 1 < rows[1].size(); k += 2) {
    loop.profile.a.push_back(rows[1][k]);
    loop.profile.b.push_back(rows[1][k + 1]);
  }
  return loop;
}

}  // namespace loopgerbe
