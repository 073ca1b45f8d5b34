#include "loopgerbe/random.hpp"

#include <cmath>
#include <numbers>

namespace loopgerbe {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
constexpr int kProfileModes = 2;
}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t Rng::next_u64() { return splitmix64(key_ + (counter_++) * kGamma); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

AlgebraElement random_algebra(const SpecialUnitary& group, Rng& rng, double scale) {
  Eigen::VectorXd c(group.dim());
  for (int a = 0; a < group.dim(); ++a) c(a) = scale * rng.normal();
  return group.from_components(c);
}

FourierProfile random_profile(Rng& rng, int modes, double scale) {
  FourierProfile f;
  f.c0 = scale * rng.normal();
  for (int k = 1; k <= modes; ++k) {
    f.a.push_back(scale * rng.normal() / k);
    f.b.push_back(scale * rng.normal() / k);
  }
  return f;
}

LoopPoint random_loop(const SpecialUnitary& group, const ThetaGrid& grid, Rng& rng, double scale, bool based) {
  std::vector<FourierProfile> profiles;
  for (int a = 0; a < group.dim(); ++a) {
    FourierProfile f = random_profile(rng, kProfileModes, scale);
    profiles.push_back(based ? f.based() : f);
  }
  return LoopPoint::from_function(grid, [&](double t) {
    GroupElement g = GroupElement::identity(group.n());
    for (int a = 0; a < group.dim(); ++a) g = g * exp_alg(group.basis(a), profiles[static_cast<std::size_t>(a)].value(t));
    return g;
  });
}

LoopVector random_loop_vector(const SpecialUnitary& group, const ThetaGrid& grid, Rng& rng, double scale) {
  std::vector<FourierProfile> profiles;
  for (int a = 0; a < group.dim(); ++a) profiles.push_back(random_profile(rng, kProfileModes, scale));
  return LoopVector::from_function(grid, [&](double t) {
    AlgebraElement x = AlgebraElement::zero(group.n());
    for (int a = 0; a < group.dim(); ++a) x += profiles[static_cast<std::size_t>(a)].value(t) * group.basis(a);
    return x;
  });
}

PathInLoopGroup random_loop_path(const SpecialUnitary& group, const ThetaGrid& grid, int m, Rng& rng, double scale) {
  std::vector<FourierProfile> profiles;
  std::vector<double> bend;
  for (int a = 0; a < group.dim(); ++a) {
    profiles.push_back(random_profile(rng, kProfileModes, scale));
    bend.push_back(0.5 * rng.normal());
  }
  std::vector<LoopVector> generators;
  for (int a = 0; a < group.dim(); ++a)
    generators.push_back(LoopVector::from_function(
        grid, [&](double t) { return profiles[static_cast<std::size_t>(a)].value(t) * group.basis(a); }));
  return PathInLoopGroup::from_function(m, [&](double s) {
    LoopPoint g = LoopPoint::identity(grid, group.n());
    for (int a = 0; a < group.dim(); ++a)
      g = loop_exp_right(g, generators[static_cast<std::size_t>(a)], s + bend[static_cast<std::size_t>(a)] * s * s);
    return g;
  });
}

AnalyticLoop random_analytic_loop(const SpecialUnitary& group, Rng& rng, double scale) {
  AlgebraElement xi = random_algebra(group, rng);
  xi *= 1.0 / std::sqrt(inner(xi, xi));
  return AnalyticLoop{xi, random_profile(rng, kProfileModes, scale)};
}

}  // namespace loopgerbe
