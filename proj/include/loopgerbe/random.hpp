#pragma once

// Counter-based random numbers and random test data.
//
// Draw i of a stream is splitmix64(key + i * 0x9e3779b97f4a7c15) with
// key = splitmix64(seed ^ splitmix64(stream)), where splitmix64 is the
// standard finaliser (add the golden gamma, then the 30/27/31 xor-shift
// multiply rounds). Uniforms take the top 53 bits; normals use one
// Box-Muller pair per draw (the cosine branch only).

#include <cstdint>

#include "loopgerbe/loops.hpp"

namespace loopgerbe {

std::uint64_t splitmix64(std::uint64_t z);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

AlgebraElement random_algebra(const SpecialUnitary& group, Rng& rng, double scale = 1.0);
/// Fourier profile with `modes` harmonics and coefficients ~ N(0, scale / k).
FourierProfile random_profile(Rng& rng, int modes, double scale);
/// prod_a exp(f_a(theta) E_a) for random profiles; based loops have f_a(0) = 0.
LoopPoint random_loop(const SpecialUnitary& group, const ThetaGrid& grid, Rng& rng, double scale = 0.6,
                      bool based = false);
/// sum_a f_a(theta) E_a for random profiles.
LoopVector random_loop_vector(const SpecialUnitary& group, const ThetaGrid& grid, Rng& rng, double scale = 1.0);
/// s -> prod_a exp((s + b_a s^2) f_a(theta) E_a) on m s-nodes, starting at
/// the identity loop.
PathInLoopGroup random_loop_path(const SpecialUnitary& group, const ThetaGrid& grid, int m, Rng& rng,
                                 double scale = 0.6);
/// Random analytic loop exp(f(theta) xi).
AnalyticLoop random_analytic_loop(const SpecialUnitary& group, Rng& rng, double scale = 0.6);

}  // namespace loopgerbe
