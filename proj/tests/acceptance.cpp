// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "loopgerbe/runner.hpp"

using namespace loopgerbe;

namespace {

struct Bound {
  std::string check;
  double limit;
  bool inclusive = false;
};

struct Criterion {
  int id;
  std::string title;
  RunConfig config;
  std::vector<Bound> bounds;
  double max_seconds = 0.0;
  std::function<std::string(const RunConfig&, bool&)> extra;
};

RunConfig base() {
  RunConfig c;
  c.timing = false;
  return c;
}

std::string format(const char* fmt, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

int main() {
  RunConfig c1 = base();
  c1.ntheta = 256;
  c1.fd_step = 1e-4;
  RunConfig c6 = base();
  c6.npath = 256;

  const std::vector<Criterion> criteria = {
      {1, "path-fibration string form equals omega3 (su2, ntheta=256)", c1, {{"path.string_form_eq_omega3", 1e-6}}, 60},
      {2, "caloron Pontrjagin identity on 100 configurations", base(), {{"caloron.pontrjagin_identity", 1e-8}}, 30},
      {3, "circle integral equals the gerbe string form", base(), {{"caloron.circle_eq_string_form", 1e-6}}},
      {4,
       "central-extension cocycle conditions",
       base(),
       {{"ext.d_alpha_eq_delta_R", 1e-6}, {"ext.delta_alpha_zero", 1e-8}},
       0,
       [](const RunConfig& c, bool& ok) {
         const auto rows = convergence_table("ext.d_alpha_eq_delta_R", {64, 128, 256}, c);
         const double order = observed_order(rows);
         ok = order >= 1.8;
         return format(" order=%.3f (>= %.1f)", order, 1.8);
       }},
      {5,
       "gerbe derivation chain",
       base(),
       {{"gerbe.delta_epsilon_eq_beta", 1e-8},
        {"gerbe.delta_f_eq_tauR_minus_d_epsilon", 1e-6},
        {"gerbe.df_eq_2pi_i_omega", 1e-6},
        {"gerbe.d_omega_zero", 1e-6}}},
      {6, "group cocycle identity on 20 path triples (npath=256)", c6, {{"ext.cocycle_identity", 1e-6}}},
      {7, "reduced splitting on both scenarios", base(), {{"splitting.trivial_bundle", 1e-8}, {"splitting.path_fibration", 1e-8}}},
      {8,
       "structural exactness",
       base(),
       {{"forms.delta_fibre_squared", 1e-12, true}, {"forms.delta_nerve_squared", 1e-12, true}, {"forms.d_squared", 1e-8}}},
      {9, "omega3 integrates to one over SU(2)", base(), {{"path.omega3_volume", 1e-3}}, 300},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    bool ok = true;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    try {
      for (const auto& b : cr.bounds) {
        const double r = run_check(b.check, cr.config);
        const bool pass = b.inclusive ? r <= b.limit : r < b.limit;
        ok = ok && pass;
        detail += " " + b.check + format(b.inclusive ? "=%.3e (<= %.0e)" : "=%.3e (< %.0e)", r, b.limit);
      }
      if (cr.extra) {
        bool extra_ok = true;
        detail += cr.extra(cr.config, extra_ok);
        ok = ok && extra_ok;
      }
    } catch (const std::exception& e) {
      ok = false;
      detail += std::string(" error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.max_seconds > 0.0) {
      const bool in_time = seconds < cr.max_seconds;
      ok = ok && in_time;
      detail += format(" time=%.1fs (< %.0fs)", seconds, cr.max_seconds);
    }
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s:%s\n", ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
