#include "loopgerbe/liegroup.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace loopgerbe {

namespace {

constexpr cplx kI{0.0, 1.0};

Matrix gell_mann(int a) {
  Matrix l = Matrix::Zero(3, 3);
  switch (a) {
    case 0: l(0, 1) = 1; l(1, 0) = 1; break;
    case 1: l(0, 1) = -kI; l(1, 0) = kI; break;
    case 2: l(0, 0) = 1; l(1, 1) = -1; break;
    case 3: l(0, 2) = 1; l(2, 0) = 1; break;
    case 4: l(0, 2) = -kI; l(2, 0) = kI; break;
    case 5: l(1, 2) = 1; l(2, 1) = 1; break;
    case 6: l(1, 2) = -kI; l(2, 1) = kI; break;
    default:
      l(0, 0) = 1.0 / std::sqrt(3.0);
      l(1, 1) = 1.0 / std::sqrt(3.0);
      l(2, 2) = -2.0 / std::sqrt(3.0);
  }
  return l;
}

}  // namespace

SpecialUnitary::SpecialUnitary(int n) : n_(n) {
  // i * (Pauli or Gell-Mann) / sqrt(2): tr(l_a l_b) = 2 delta_ab gives <E_a,E_b> = delta_ab.
  const int count = n * n - 1;
  for (int a = 0; a < count; ++a) {
    Matrix l = gell_mann(a);
    basis_.emplace_back(Matrix(l.topLeftCorner(n, n) * (kI / std::sqrt(2.0))));
  }
}

const SpecialUnitary& SpecialUnitary::su2() {
  static const SpecialUnitary g(2);
  return g;
}

const SpecialUnitary& SpecialUnitary::su3() {
  static const SpecialUnitary g(3);
  return g;
}

const SpecialUnitary& SpecialUnitary::of_rank(int n) {
  if (n == 2) return su2();
  if (n == 3) return su3();
  throw DomainError("only SU(2) and SU(3) are supported, got n=" + std::to_string(n));
}

Eigen::VectorXd SpecialUnitary::components(const AlgebraElement& x) const {
  Eigen::VectorXd c(dim());
  for (int a = 0; a < dim(); ++a) c(a) = inner(basis(a), x);
  return c;
}

AlgebraElement SpecialUnitary::from_components(const Eigen::VectorXd& c) const {
  if (c.size() != dim()) throw DomainError("component vector has wrong length");
  AlgebraElement x = AlgebraElement::zero(n_);
  for (int a = 0; a < dim(); ++a) x.m += c(a) * basis(a).m;
  return x;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  return AlgebraElement(Matrix(x.m * y.m - y.m * x.m));
}

double inner(const AlgebraElement& x, const AlgebraElement& y) {
  // -Re tr(XY) without forming the product.
  double s = 0.0;
  const int n = x.n();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s += (x.m(i, k) * y.m(k, i)).real();
  return -s;
}

GroupElement exp_alg(const AlgebraElement& x, double t) {
  const int n = x.n();
  if (n == 2) {
    // X^2 = -a^2 I with a^2 = <X,X>/2.
    const double a = std::sqrt(std::max(0.0, 0.5 * inner(x, x))) * std::abs(t);
    const double sinc = a < 1e-4 ? 1.0 - a * a / 6.0 + a * a * a * a / 120.0 : std::sin(a) / a;
    Matrix g = std::cos(a) * Matrix::Identity(2, 2) + (sinc * t) * x.m;
    return GroupElement(std::move(g));
  }
  // X = i H with H Hermitian.
  const Matrix h = (-kI * t) * x.m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  Matrix d = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) d(k, k) = std::exp(kI * es.eigenvalues()(k));
  return GroupElement(Matrix(v * d * v.adjoint()));
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  return AlgebraElement(Matrix(g.m * x.m * g.m.adjoint()));
}

AlgebraElement adjoint_inv(const GroupElement& g, const AlgebraElement& x) {
  return AlgebraElement(Matrix(g.m.adjoint() * x.m * g.m));
}

AlgebraElement maurer_cartan(const GroupElement& g, const Matrix& v, MaurerCartan side) {
  const Matrix left = g.m.adjoint() * v;
  if (algebra_defect(left) > 1e-10) throw DomainError("maurer_cartan: v is not tangent to SU(n) at g");
  if (side == MaurerCartan::left) return AlgebraElement(left);
  return AlgebraElement(Matrix(v * g.m.adjoint()));
}

AlgebraElement log_alg(const GroupElement& g) {
  const int n = g.n();
  Eigen::ComplexEigenSolver<Matrix> eig(g.m);
  Eigen::VectorXd phase(n);
  for (int k = 0; k < n; ++k) {
    phase(k) = std::arg(eig.eigenvalues()(k));
    if (std::numbers::pi - std::abs(phase(k)) < 1e-8) throw DomainError("log_alg: eigenvalue at -1");
  }
  // det g = 1 forces the phases to sum to a multiple of 2 pi.
  const double turns = std::round(phase.sum() / (2.0 * std::numbers::pi));
  if (turns != 0.0) {
    Eigen::Index k;
    if (turns > 0) phase.maxCoeff(&k);
    else phase.minCoeff(&k);
    phase(k) -= 2.0 * std::numbers::pi * turns;
  }
  const Matrix& v = eig.eigenvectors();
  Matrix d = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) d(k, k) = cplx(0.0, phase(k));
  return project_to_algebra(v * d * v.inverse());
}

AlgebraElement project_to_algebra(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Matrix a = 0.5 * (m - m.adjoint());
  const cplx tr = a.trace() / static_cast<double>(n);
  for (int i = 0; i < n; ++i) a(i, i) -= tr;
  return AlgebraElement(std::move(a));
}

double algebra_defect(const Matrix& m) {
  return (m + m.adjoint()).norm() + std::abs(m.trace());
}

double group_defect(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  return std::max((m * m.adjoint() - Matrix::Identity(n, n)).norm(), std::abs(m.determinant() - 1.0));
}

}  // namespace loopgerbe
