#pragma once

// Central-extension data of the loop group G = L(K):
//   R     = (i/4pi) int <Theta, d_theta Theta>      a 2-form on G
//   alpha = (i/2pi) int <d_2^* Theta, d_0^* Z>       a 1-form on G x G
// together with the path-group cocycle c(f, g), the holonomy H(h, R) of a
// disk loop, the connection mu-hat and reduced-splitting relations.
//
// Tangent vectors are left-trivialised loop vectors. On G x G the nerve faces
// are d_0(g, h) = h, d_1(g, h) = gh, d_2(g, h) = g.

#include <cstdint>
#include <functional>

#include "loopgerbe/forms.hpp"

namespace loopgerbe {

/// The sign self-test found neither orientation of alpha consistent with
/// d alpha = delta R.
class ConventionError : public Error {
 public:
  using Error::Error;
};

/// (i/4pi) int (<X, d_theta Y> - <Y, d_theta X>) dtheta. Independent of g.
cplx eval_R(const LoopPoint& g, const LoopVector& x, const LoopVector& y);
/// (i/2pi) int <X_g, Z(h)> dtheta. X_h does not enter.
cplx eval_alpha(const LoopPoint& g, const LoopPoint& h, const LoopVector& xg, const LoopVector& xh);

/// R on points with one loop coordinate.
KForm<cplx> R_form();
/// sign * alpha on points with two loop coordinates.
KForm<cplx> alpha_form(double sign = 1.0);

struct ExtensionData {
  KForm<cplx> R;
  KForm<cplx> alpha;
  double alpha_sign = 1.0;
  double self_test_residual = 0.0;

  /// Builds (alpha, R), fixing the sign of alpha by checking d alpha = delta R
  /// on one random sample. Throws ConventionError if neither sign passes.
  static ExtensionData make(const SpecialUnitary& group, const ThetaGrid& grid, std::uint64_t seed = 0,
                            const FdConfig& fd = {});
};

/// exp of int_0^1 alpha(f(s), g(s))(f'(s), g'(s)) ds.
cplx cocycle_c(const PathInLoopGroup& f, const PathInLoopGroup& g);
/// The exponent of cocycle_c.
cplx cocycle_log(const PathInLoopGroup& f, const PathInLoopGroup& g);

/// A loop s -> exp(xi(s)) in L(K), s in [0, 1], xi(0) = xi(1) = 0, with disk
/// extension (r, s) -> exp(r xi(s)).
class DiskLoop {
 public:
  DiskLoop(ThetaGrid grid, std::function<LoopVector(double)> xi);
  const ThetaGrid& grid() const { return grid_; }
  LoopVector xi(double s) const { return xi_(s); }
  LoopPoint at(double r, double s) const;
  /// Left-trivialised partials of the disk extension at (r, s).
  LoopVector d_r(double r, double s) const;
  LoopVector d_s(double r, double s) const;

 private:
  ThetaGrid grid_;
  std::function<LoopVector(double)> xi_;
};

/// exp of int_{[0,1]^2} R(d_r, d_s) dr ds by tensor Gauss-Legendre quadrature.
cplx holonomy_H(const DiskLoop& h, int nodes = 24);

/// int_0^1 R(f(s))(f'(s), X(s)) ds; x holds one vector per s-node.
cplx mu_hat(const PathInLoopGroup& f, std::span<const LoopVector> x);

/// Z(g^{-1}, X) = -alpha(1, g)(X, 0) = -(i/2pi) int <X, Z(g)> dtheta.
cplx gomi_cocycle_Z(const LoopPoint& g, const LoopVector& x);
/// l(p, X) = (i/2pi) int <Phi(p), X> dtheta.
cplx reduced_splitting(const LoopVector& phi, const LoopVector& x);
/// |l(p, X) - l(pg, ad(g^{-1}) X) - Z(g^{-1}, X)|.
double reduced_splitting_residual(const LoopVector& phi_p, const LoopVector& phi_pg, const LoopPoint& g,
                                  const LoopVector& x);

}  // namespace loopgerbe
