#pragma once

// Differential forms as alternating multilinear evaluators.
//
// Every space in the library is modelled as a product
//     R^d x G_1 x ... x G_p x K_1 x ... x K_q x S^1 x ... x S^1
// of a chart, loop groups (or path groups), compact groups and angles. A
// Point carries one coordinate of each kind; a Tangent carries the matching
// chart direction, left-trivialised loop vectors, left-trivialised algebra
// elements and angular rates. Vectors are extended canonically (constant on
// the chart and on angles, left-invariant on groups) so Lie brackets of
// extensions are exact: zero on chart and angle parts, pointwise brackets on
// group parts.

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "loopgerbe/loops.hpp"

namespace loopgerbe {

struct Point {
  Eigen::VectorXd chart;
  std::vector<LoopPoint> loops;
  std::vector<GroupElement> groups;
  std::vector<double> angles;
};

struct Tangent {
  Eigen::VectorXd chart;
  std::vector<LoopVector> loops;
  std::vector<AlgebraElement> groups;
  std::vector<double> angles;

  Tangent& operator+=(const Tangent& o);
  Tangent& operator*=(double s);
};

inline Tangent operator+(Tangent a, const Tangent& b) { return a += b; }
inline Tangent operator*(double s, Tangent a) { return a *= s; }
inline Tangent operator-(Tangent a, const Tangent& b) { return a += (-1.0) * b; }

/// Zero tangent vector at p.
Tangent zero_tangent(const Point& p);
/// Throws DomainError when v does not have the shape of a tangent at p.
void require_tangent_shape(const Point& p, const Tangent& v);

/// Flow of the canonical extension of v for time t.
Point flow(const Point& p, const Tangent& v, double t);
/// Lie bracket of canonical extensions.
Tangent lie_bracket(const Tangent& v, const Tangent& w);

template <class T>
struct KForm {
  int degree = 0;
  std::function<T(const Point&, std::span<const Tangent>)> eval;
  std::string name;
  /// Identity-registry tag of the formula this form realises.
  std::string tag;

  T operator()(const Point& p, std::span<const Tangent> v) const {
    if (static_cast<int>(v.size()) != degree)
      throw DomainError("form '" + name + "' of degree " + std::to_string(degree) + " given " +
                        std::to_string(v.size()) + " vectors");
    return eval(p, v);
  }
  T operator()(const Point& p, const std::vector<Tangent>& v) const {
    return (*this)(p, std::span<const Tangent>(v));
  }
};

struct FdConfig {
  double step = 1e-4;
  bool richardson = true;
};

/// Central difference of g along the flow of v, optionally with one level of
/// Richardson extrapolation (h, h/2).
template <class T>
T directional_derivative(const std::function<T(const Point&)>& g, const Point& p, const Tangent& v,
                         const FdConfig& fd) {
  if (!(fd.step > 0.0)) throw DomainError("finite-difference step must be positive");
  auto central = [&](double h) {
    T plus = g(flow(p, v, h));
    T minus = g(flow(p, v, -h));
    return (1.0 / (2.0 * h)) * (plus - minus);
  };
  if (!fd.richardson) return central(fd.step);
  T coarse = central(fd.step);
  T fine = central(0.5 * fd.step);
  return (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;
}

namespace detail {

inline std::vector<Tangent> without(std::span<const Tangent> v, std::size_t skip) {
  std::vector<Tangent> out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i != skip) out.push_back(v[i]);
  return out;
}

inline int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace detail

/// d omega (V_0, ..., V_k) by the invariant (Cartan) formula with
/// finite-difference directional derivatives.
template <class T>
T ext_d(const KForm<T>& w, const Point& p, std::span<const Tangent> v, const FdConfig& fd = {}) {
  const int k = w.degree;
  if (static_cast<int>(v.size()) != k + 1) throw DomainError("ext_d: need degree+1 vectors");
  if (!(fd.step > 0.0)) throw DomainError("finite-difference step must be positive");
  std::optional<T> acc;
  auto add = [&acc](double s, T value) {
    if (acc) *acc = *acc + s * value;
    else acc = s * value;
  };
  for (int i = 0; i <= k; ++i) {
    const std::vector<Tangent> rest = detail::without(v, static_cast<std::size_t>(i));
    std::function<T(const Point&)> g = [&](const Point& q) { return w(q, rest); };
    add(i % 2 == 0 ? 1.0 : -1.0, directional_derivative<T>(g, p, v[static_cast<std::size_t>(i)], fd));
  }
  for (int i = 0; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      std::vector<Tangent> args;
      args.reserve(static_cast<std::size_t>(k));
      args.push_back(lie_bracket(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]));
      for (int l = 0; l <= k; ++l)
        if (l != i && l != j) args.push_back(v[static_cast<std::size_t>(l)]);
      add((i + j) % 2 == 0 ? 1.0 : -1.0, w(p, args));
    }
  }
  return *acc;
}

template <class T>
T ext_d(const KForm<T>& w, const Point& p, const std::vector<Tangent>& v, const FdConfig& fd = {}) {
  return ext_d(w, p, std::span<const Tangent>(v), fd);
}

/// The exterior derivative as a form of one degree higher.
template <class T>
KForm<T> exterior_derivative(KForm<T> w, FdConfig fd = {}) {
  KForm<T> out;
  out.degree = w.degree + 1;
  out.name = "d(" + w.name + ")";
  out.tag = w.tag;
  out.eval = [w = std::move(w), fd](const Point& p, std::span<const Tangent> v) { return ext_d(w, p, v, fd); };
  return out;
}

enum class PairingConvention {
  /// Sum over (d_1,...,d_k)-shuffles: the usual wedge product. Coincides with
  /// the full permutation sum whenever every input has degree 1.
  shuffle,
  /// Signed sum over all of S_d with no normalisation. Exceeds the shuffle
  /// sum by prod_i d_i!.
  permutation_sum,
};

/// p(omega_1, ..., omega_k) for a k-linear map p on the forms' values.
template <class R, class P, class... Ts>
KForm<R> pair_forms(PairingConvention conv, P p, KForm<Ts>... forms) {
  constexpr std::size_t kCount = sizeof...(Ts);
  const std::array<int, kCount> deg{forms.degree...};
  std::array<int, kCount + 1> offset{};
  for (std::size_t i = 0; i < kCount; ++i) offset[i + 1] = offset[i] + deg[i];
  const int d = offset[kCount];

  KForm<R> out;
  out.degree = d;
  out.name = "pair(";
  ((out.name += forms.name + ","), ...);
  out.name.back() = ')';
  out.eval = [conv, p, deg, offset, d, tup = std::make_tuple(std::move(forms)...)](
                 const Point& pt, std::span<const Tangent> v) -> R {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<R> acc;
    do {
      if (conv == PairingConvention::shuffle) {
        bool ok = true;
        for (std::size_t b = 0; b < kCount && ok; ++b)
          for (int i = offset[b] + 1; i < offset[b + 1]; ++i)
            if (perm[static_cast<std::size_t>(i - 1)] > perm[static_cast<std::size_t>(i)]) ok = false;
        if (!ok) continue;
      }
      auto block = [&](const auto& form, std::size_t b) {
        std::vector<Tangent> args;
        args.reserve(static_cast<std::size_t>(deg[b]));
        for (int i = offset[b]; i < offset[b + 1]; ++i)
          args.push_back(v[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
        return form(pt, args);
      };
      R value = [&]<std::size_t... I>(std::index_sequence<I...>) {
        return p(block(std::get<I>(tup), I)...);
      }(std::index_sequence_for<Ts...>{});
      const double sign = detail::permutation_sign(perm);
      if (acc) *acc = *acc + sign * value;
      else acc = sign * value;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *acc;
  };
  return out;
}

/// delta = sum_{i=1}^{p+1} (-1)^{i-1} pi_i^* from forms on the p-fold fibre
/// product (points with p loop coordinates over a shared chart) to the
/// (p+1)-fold one; pi_i omits the i-th loop coordinate. p = 0 is the pullback
/// from the base.
template <class T>
KForm<T> delta_fibre(KForm<T> w, int p) {
  KForm<T> out;
  out.degree = w.degree;
  out.name = "delta_fibre(" + w.name + ")";
  out.tag = w.tag;
  out.eval = [w = std::move(w), p](const Point& pt, std::span<const Tangent> v) -> T {
    if (static_cast<int>(pt.loops.size()) != p + 1) throw DomainError("delta_fibre: point is not in the right fibre product");
    for (const auto& t : v)
      if (static_cast<int>(t.loops.size()) != p + 1) throw DomainError("delta_fibre: tangent shape mismatch");
    std::optional<T> acc;
    for (int i = 0; i <= p; ++i) {
      Point face = pt;
      face.loops.erase(face.loops.begin() + i);
      std::vector<Tangent> args(v.begin(), v.end());
      for (auto& t : args) t.loops.erase(t.loops.begin() + i);
      T value = w(face, args);
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      if (acc) *acc = *acc + sign * value;
      else acc = sign * value;
    }
    return *acc;
  };
  return out;
}

/// Face map d_i : G^{p+1} -> G^p of the nerve (i = 0..p+1 counted on the
/// p+1 factors): d_0 drops the first entry, d_{p+1} the last, and d_i
/// multiplies entries i and i+1 (1-based). Tangents push forward in the left
/// trivialisation, (X, Y) at (g, h) going to ad(h^{-1})X + Y at gh.
std::pair<Point, std::vector<Tangent>> nerve_face(const Point& pt, std::span<const Tangent> v, int i);

/// delta = sum_{i=0}^{p+1} (-1)^i d_i^* from forms on G^p to forms on G^{p+1}.
template <class T>
KForm<T> delta_nerve(KForm<T> w, int p) {
  if (p < 1) throw DomainError("delta_nerve: p must be >= 1");
  KForm<T> out;
  out.degree = w.degree;
  out.name = "delta_nerve(" + w.name + ")";
  out.tag = w.tag;
  out.eval = [w = std::move(w), p](const Point& pt, std::span<const Tangent> v) -> T {
    if (static_cast<int>(pt.loops.size()) != p + 1) throw DomainError("delta_nerve: point is not in G^(p+1)");
    std::optional<T> acc;
    for (int i = 0; i <= p + 1; ++i) {
      auto [face, args] = nerve_face(pt, v, i);
      T value = w(face, args);
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      if (acc) *acc = *acc + sign * value;
      else acc = sign * value;
    }
    return *acc;
  };
  return out;
}

}  // namespace loopgerbe
