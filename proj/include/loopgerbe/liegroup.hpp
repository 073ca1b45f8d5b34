#pragma once

// Compact matrix groups SU(n), n in {2,3}, and their Lie algebras.
//
// Conventions used throughout the library:
//   inner(X, Y)   = -Re tr(XY)           (longest root has length^2 = 2)
//   adjoint(g, X) = g X g^{-1}           (so adjoint_inv(g, X) = g^{-1} X g)
//   left Maurer-Cartan  Theta(g)(v)    = g^{-1} v
//   right Maurer-Cartan Theta^(g)(v)   = v g^{-1}

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace loopgerbe {

using cplx = std::complex<double>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition (shape, tangency, fibre...).
class DomainError : public Error {
 public:
  using Error::Error;
};

struct AlgebraElement {
  Matrix m;

  AlgebraElement() = default;
  explicit AlgebraElement(Matrix mat) : m(std::move(mat)) {}

  static AlgebraElement zero(int n) { return AlgebraElement(Matrix::Zero(n, n)); }
  int n() const { return static_cast<int>(m.rows()); }

  AlgebraElement& operator+=(const AlgebraElement& o) { m += o.m; return *this; }
  AlgebraElement& operator-=(const AlgebraElement& o) { m -= o.m; return *this; }
  AlgebraElement& operator*=(double s) { m *= s; return *this; }
};

inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
inline AlgebraElement operator-(AlgebraElement a) { a.m = -a.m; return a; }
inline AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }
inline AlgebraElement operator*(AlgebraElement a, double s) { return a *= s; }

struct GroupElement {
  Matrix m;

  GroupElement() = default;
  explicit GroupElement(Matrix mat) : m(std::move(mat)) {}

  static GroupElement identity(int n) { return GroupElement(Matrix::Identity(n, n)); }
  int n() const { return static_cast<int>(m.rows()); }

  /// Unitary inverse (conjugate transpose).
  GroupElement inverse() const { return GroupElement(m.adjoint()); }
};

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return GroupElement(a.m * b.m);
}

/// SU(n) with a fixed orthonormal basis E_a of su(n), <E_a, E_b> = delta_ab.
class SpecialUnitary {
 public:
  static const SpecialUnitary& su2();
  static const SpecialUnitary& su3();
  static const SpecialUnitary& of_rank(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const AlgebraElement& basis(int a) const { return basis_[static_cast<std::size_t>(a)]; }
  const std::vector<AlgebraElement>& basis() const { return basis_; }
  std::string name() const { return n_ == 2 ? "su2" : "su3"; }

  Eigen::VectorXd components(const AlgebraElement& x) const;
  AlgebraElement from_components(const Eigen::VectorXd& c) const;

 private:
  explicit SpecialUnitary(int n);
  int n_;
  std::vector<AlgebraElement> basis_;
};

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
double inner(const AlgebraElement& x, const AlgebraElement& y);

/// exp(t X). Closed form for su(2), Hermitian eigendecomposition otherwise.
GroupElement exp_alg(const AlgebraElement& x, double t = 1.0);

/// Principal logarithm: X with exp(X) = g. Throws DomainError when g has an
/// eigenvalue at or near -1.
AlgebraElement log_alg(const GroupElement& g);

/// g X g^{-1}.
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);
/// g^{-1} X g, i.e. ad(g^{-1})(X).
AlgebraElement adjoint_inv(const GroupElement& g, const AlgebraElement& x);

enum class MaurerCartan { left, right };

/// Translate a tangent matrix v at g back to the identity. Throws DomainError
/// when g^{-1} v is not in su(n) to 1e-10.
AlgebraElement maurer_cartan(const GroupElement& g, const Matrix& v, MaurerCartan side);

/// Anti-Hermitian traceless part of an arbitrary matrix.
AlgebraElement project_to_algebra(const Matrix& m);

/// Frobenius norm of the failure of X to lie in su(n).
double algebra_defect(const Matrix& m);
/// max(|g g^dag - I|_F, |det g - 1|).
double group_defect(const Matrix& m);

inline double norm(const AlgebraElement& x) { return x.m.norm(); }

}  // namespace loopgerbe
