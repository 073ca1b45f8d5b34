#pragma once

// The lifting bundle gerbe of a principal L(K)-bundle P -> M with connection
// A and twisted Higgs field Phi: tau, epsilon, beta, the curving f, the
// covariant derivative of Phi and the string 3-form.
//
// Points of P are forms::Point values with a single loop coordinate; points
// of the p-fold fibre product P^[p] carry p loop coordinates over a common
// base. The face map pi_i omits the i-th coordinate, so on P^[2]
// pi_1^* A = A(p_2) and pi_2^* A = A(p_1).

#include <memory>
#include <string>
#include <vector>

#include "loopgerbe/centext.hpp"
#include "loopgerbe/random.hpp"

namespace loopgerbe {

/// How curvature and covariant derivative of the Higgs field are evaluated.
enum class Route {
  closed_form,
  /// F = dA + [A, A]/2 and nabla Phi = d Phi + [A, Phi] - d_theta A by
  /// finite differences.
  finite_difference,
};

class BundleScenario {
 public:
  virtual ~BundleScenario() = default;
  virtual std::string name() const = 0;
  const SpecialUnitary& group() const { return *group_; }
  const ThetaGrid& grid() const { return grid_; }

  virtual LoopVector connection(const Point& p, const Tangent& v) const = 0;
  virtual LoopVector higgs(const Point& p) const = 0;
  virtual LoopVector curvature(const Point& p, const Tangent& v, const Tangent& w) const = 0;
  virtual LoopVector nabla_higgs(const Point& p, const Tangent& v) const = 0;

  /// p g for g in the structure group.
  Point act(const Point& p, const LoopPoint& g) const;
  /// Pushforward of the right action: the loop part X goes to ad(g^{-1}) X.
  Tangent act_tangent(const Tangent& v, const LoopPoint& g) const;

  virtual Point project(const Point& p) const = 0;
  virtual Tangent project_tangent(const Point& p, const Tangent& v) const = 0;
  /// A fixed lift of a base point and of base tangents at it.
  virtual Point lift(const Point& base) const = 0;
  virtual Tangent lift_tangent(const Point& base, const Tangent& u) const = 0;
  /// Distance between the projections of two total-space points.
  virtual double fibre_distance(const Point& p1, const Point& p2) const = 0;

  virtual Point random_base_point(Rng& rng) const = 0;
  virtual Tangent random_base_tangent(const Point& base, Rng& rng) const = 0;
  virtual LoopPoint random_structure_element(Rng& rng) const = 0;
  /// A random vertical vector (generator of the structure group) at p.
  virtual LoopVector random_vertical(Rng& rng) const = 0;
  /// A random point of P; by default a lifted random base point moved by a
  /// random structure-group element.
  virtual Point random_point(Rng& rng) const;
  /// A random tangent at p (one loop coordinate) projecting to the base tangent u.
  virtual Tangent random_tangent_over(const Point& p, const Tangent& u, Rng& rng) const = 0;
  /// Random point of P^[count]: a random point and count-1 translates of it.
  Point random_fibre_point(int count, Rng& rng) const;
  /// Random tangent to P^[count] at pk (a tangent to P when count = 1).
  Tangent random_fibre_tangent(const Point& pk, Rng& rng) const;

 protected:
  BundleScenario(const SpecialUnitary& group, ThetaGrid grid) : group_(&group), grid_(std::move(grid)) {}

 private:
  const SpecialUnitary* group_;
  ThetaGrid grid_;
};

/// One term rho(m) (c_0 + sum_l c_l m_l) trig(k theta) E_gen of a chart
/// function into L(k); trig is cos for `sine == false` (k = 0 gives a
/// constant).
struct ChartTerm {
  int slot = 0;
  int generator = 0;
  int harmonic = 0;
  bool sine = false;
  std::vector<double> coeff;  // c_0, c_1..c_d
};

struct TrivialBundleData {
  int dim = 4;
  std::vector<ChartTerm> connection_terms;  // slot = chart direction
  std::vector<ChartTerm> higgs_terms;       // slot ignored
};

/// Default data: u_1 sin(theta) E_1 + u_2 cos(theta) E_2 plus further terms in
/// all four directions, Higgs seed m_1 E_3 plus further terms, all multiplied
/// by rho(m) = prod_l (1 - m_l^2).
TrivialBundleData default_trivial_bundle_data(const SpecialUnitary& group);

/// P = M x L(K) over M = (-1, 1)^d with A_(m,g)(u, X) = ad(g^{-1}) a(m)(u) + X and
/// Phi(m, g) = ad(g^{-1}) phi(m) + g^{-1} d_theta g.
class TrivialBundle final : public BundleScenario {
 public:
  TrivialBundle(const SpecialUnitary& group, ThetaGrid grid, TrivialBundleData data);
  std::string name() const override { return "trivial-bundle"; }
  const TrivialBundleData& data() const { return data_; }
  int dim() const { return data_.dim; }

  /// a(m)(e_i) and its chart partial d_j a(m)(e_i).
  LoopVector base_connection(const Eigen::VectorXd& m, int i) const;
  LoopVector base_connection_partial(const Eigen::VectorXd& m, int i, int j) const;
  LoopVector base_higgs(const Eigen::VectorXd& m) const;
  LoopVector base_higgs_partial(const Eigen::VectorXd& m, int j) const;

  LoopVector connection(const Point& p, const Tangent& v) const override;
  LoopVector higgs(const Point& p) const override;
  LoopVector curvature(const Point& p, const Tangent& v, const Tangent& w) const override;
  LoopVector nabla_higgs(const Point& p, const Tangent& v) const override;

  Point project(const Point& p) const override;
  Tangent project_tangent(const Point& p, const Tangent& v) const override;
  Point lift(const Point& base) const override;
  Tangent lift_tangent(const Point& base, const Tangent& u) const override;
  double fibre_distance(const Point& p1, const Point& p2) const override;

  Point random_base_point(Rng& rng) const override;
  Tangent random_base_tangent(const Point& base, Rng& rng) const override;
  LoopPoint random_structure_element(Rng& rng) const override;
  LoopVector random_vertical(Rng& rng) const override;
  Tangent random_tangent_over(const Point& p, const Tangent& u, Rng& rng) const override;

 private:
  LoopVector evaluate_terms(const std::vector<ChartTerm>& terms, const Eigen::VectorXd& m, int slot,
                            int partial) const;
  TrivialBundleData data_;
  std::vector<Eigen::VectorXd> connection_profiles_;
  std::vector<Eigen::VectorXd> higgs_profiles_;
};

/// The path fibration PK -> K: paths p on [0, 2pi] with p(0) = 1, projected
/// to p(2pi), structure group the based loops. Paths live on an interval
/// grid. Connection A(X) = X - (theta/2pi) ad(p^{-1} p(2pi)) X(2pi), Higgs
/// field p^{-1} d_theta p.
class PathFibration final : public BundleScenario {
 public:
  PathFibration(const SpecialUnitary& group, ThetaGrid grid);
  std::string name() const override { return "path-fibration"; }

  LoopVector connection(const Point& p, const Tangent& v) const override;
  LoopVector higgs(const Point& p) const override;
  LoopVector curvature(const Point& p, const Tangent& v, const Tangent& w) const override;
  LoopVector nabla_higgs(const Point& p, const Tangent& v) const override;

  Point project(const Point& p) const override;
  Tangent project_tangent(const Point& p, const Tangent& v) const override;
  /// theta -> exp((theta/2pi) log k).
  Point lift(const Point& base) const override;
  /// theta -> (theta/2pi) eta.
  Tangent lift_tangent(const Point& base, const Tangent& u) const override;
  double fibre_distance(const Point& p1, const Point& p2) const override;

  Point random_base_point(Rng& rng) const override;
  Tangent random_base_tangent(const Point& base, Rng& rng) const override;
  LoopPoint random_structure_element(Rng& rng) const override;
  LoopVector random_vertical(Rng& rng) const override;
  Tangent random_tangent_over(const Point& p, const Tangent& u, Rng& rng) const override;
  Point random_point(Rng& rng) const override;
  /// A random path prod_a exp(f_a(theta) E_a) with f_a(0) = 0.
  LoopPoint random_path(Rng& rng) const;
  /// A random algebra-valued path vanishing at theta = 0.
  LoopVector random_path_vector(Rng& rng) const;

 private:
  /// ad(p^{-1} p(2pi)) X(2pi) as a grid function.
  LoopVector transported_endpoint(const LoopPoint& p, const LoopVector& x) const;
};

// ---- forms on P and its fibre products ------------------------------------

KForm<LoopVector> connection_form(std::shared_ptr<const BundleScenario> s);
KForm<LoopVector> higgs_form(std::shared_ptr<const BundleScenario> s);
KForm<LoopVector> curvature_form(std::shared_ptr<const BundleScenario> s, Route route = Route::closed_form,
                                 FdConfig fd = {});
KForm<LoopVector> nabla_higgs_form(std::shared_ptr<const BundleScenario> s, Route route = Route::closed_form,
                                   FdConfig fd = {});

/// tau(p_1, p_2) with p_2 = p_1 tau. Throws DomainError for points in
/// different fibres.
LoopPoint tau(const BundleScenario& s, const Point& p1, const Point& p2);
/// Left-trivialised derivative of tau along a tangent to P^[2]:
/// X_2 - ad(tau^{-1}) X_1.
LoopVector tau_pushforward(const BundleScenario& s, const Point& pair, const Tangent& v);
/// max-norm residual of A(p_2) = ad(tau^{-1}) A(p_1) + tau^* Theta, with
/// tau^* Theta from a finite difference of tau along v.
double connection_pullback_check(const BundleScenario& s, const Point& pair, const Tangent& v,
                                 const FdConfig& fd = {});

/// epsilon = (i/2pi) int <pi_2^* A, tau^* Z> on P^[2].
KForm<cplx> epsilon_form(std::shared_ptr<const BundleScenario> s);
/// beta = (tau_12 x tau_23)^* alpha on P^[3].
KForm<cplx> beta_form(std::shared_ptr<const BundleScenario> s, const ExtensionData& ext);
/// tau^* R on P^[2].
KForm<cplx> tau_pullback_R(std::shared_ptr<const BundleScenario> s);
/// f = (i/2pi) int (<A, d_theta A>/2 - <F, Phi>) on P.
KForm<cplx> curving_form(std::shared_ptr<const BundleScenario> s, Route route = Route::closed_form,
                         FdConfig fd = {});

/// -(1/4pi^2) int <F, nabla Phi> as a 3-form on P (shuffle pairing).
KForm<double> string_form_total(std::shared_ptr<const BundleScenario> s, Route route = Route::closed_form,
                                FdConfig fd = {});
/// The same 3-form on the base, evaluated through the scenario's fixed lift.
KForm<double> string_form(std::shared_ptr<const BundleScenario> s, Route route = Route::closed_form,
                          FdConfig fd = {});
/// Pullback of a base form to P.
template <class T>
KForm<T> pullback_to_total(std::shared_ptr<const BundleScenario> s, KForm<T> w) {
  KForm<T> out;
  out.degree = w.degree;
  out.name = "pi^*" + w.name;
  out.tag = w.tag;
  out.eval = [s, w = std::move(w)](const Point& p, std::span<const Tangent> v) {
    std::vector<Tangent> down;
    for (const auto& t : v) down.push_back(s->project_tangent(p, t));
    return w(s->project(p), down);
  };
  return out;
}

/// (1/48pi^2) <[Theta^, Theta^], Theta^> on K; tangents are left-trivialised
/// algebra elements at k (the raw tangent is k eta).
double omega3(const GroupElement& k, const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& w,
              PairingConvention conv = PairingConvention::shuffle);
/// omega3 as a form on points with one group coordinate.
KForm<double> omega3_form(PairingConvention conv = PairingConvention::shuffle);
/// Integral of omega3 over SU(2) in hyperspherical coordinates (chi, theta,
/// phi) of the unit quaternion, oriented by that order, with an n^3
/// Gauss-Legendre product rule.
double omega3_volume(int n = 24);

/// Residual of Phi(pg) = ad(g^{-1}) Phi(p) + g^{-1} d_theta g for a Higgs
/// evaluator.
double higgs_equivariance_residual(const std::function<LoopVector(const Point&)>& higgs, const BundleScenario& s,
                                   const Point& p, const LoopPoint& g);
/// Reduced-splitting identity residual for the scenario's Higgs field.
double reduced_splitting_check(const BundleScenario& s, const Point& p, const LoopPoint& g, const LoopVector& x);

}  // namespace loopgerbe
