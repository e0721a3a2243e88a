#pragma once

#include "entropia/system.hpp"
#include "entropia/zoo.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace entropia {

/// The reparametrisation-count constants mu(s, m) and nu(s, m). mu is kept in
/// log form so that large smoothness orders stay finite.
struct MuNuModel {
  std::function<double(double, std::size_t)> log_mu;
  std::function<double(double, std::size_t)> nu;
  std::string label;

  double mu(double s, std::size_t m) const;

  /// mu = 8^m s^(m/s), nu = m s^(1/s): bounded in s, nondecreasing in m.
  static MuNuModel bounded();
  /// mu = (8s)^(ms), nu = ms.
  static MuNuModel yomdin();
  /// mu = 2^(ms), nu = ms.
  static MuNuModel exponential();
};

/// Smoothness order s(n) as a function of the step count.
struct ScheduleRule {
  std::function<std::size_t(std::size_t)> s_of_n;
  std::string label;

  std::size_t operator()(std::size_t n) const { return s_of_n(n); }

  /// ceil(sqrt(n)).
  static ScheduleRule sqrt_n();
  /// max(1, floor(sqrt(ln n))) clamped to [1, n].
  static ScheduleRule sqrt_log_n();
  static ScheduleRule identity();
  static ScheduleRule constant(std::size_t s);
};

struct BoundSchedule {
  double L0 = 2.0;
  std::size_t m = 1;
  double rho = 0.5;
  MuNuModel model = MuNuModel::bounded();
  double C0 = 1.0;
  ScheduleRule s = ScheduleRule::sqrt_n();
  /// First n from which large_n_check holds for good (0 when not computed).
  std::size_t N_threshold = 0;
};

/// Schedule for a map with the given constants; fills C0 and N_threshold.
BoundSchedule make_schedule(double L0, std::size_t m, double rho, double M0,
                            MuNuModel model = MuNuModel::bounded(),
                            ScheduleRule rule = ScheduleRule::sqrt_n());
BoundSchedule make_schedule(const AnalyticSystem& sys);

struct CauchyEnvelope {
  std::size_t m = 1;
  double M0 = 1.0;
  double rho = 1.0;
  double L0 = 2.0;
  std::size_t n = 0;
};

struct CauchyBound {
  /// ln of |a|^(|a|+1/2) 2^m M0 (2 sqrt(m) L0^n / rho)^|a|.
  double log_post = 0.0;
  /// ln of a! 2^m M0 (2 sqrt(m) L0^n / rho)^|a|.
  double log_pre = 0.0;
};

/// Envelope for the partial derivative with multi-index alpha, |alpha| >= 1.
CauchyBound cauchy_derivative_bound(const CauchyEnvelope& env, std::span<const unsigned> alpha);
/// Same for a multi-index concentrated on one axis.
CauchyBound cauchy_derivative_bound(const CauchyEnvelope& env, unsigned order);

/// ln q(k) = (1-k) ln(2n) + (k+1/2) ln k, 1 <= k <= n.
double log_q(std::size_t n, std::size_t k);
double q_function(std::size_t n, std::size_t k);

struct QMax {
  std::size_t k = 1;
  double value = 1.0;
};

/// Brute-force max of q over 1..n (ties go to the smallest k). Throws when it
/// differs from max{q(1), q(n)} or when ln q fails to be convex.
QMax q_max(std::size_t n);

/// (2^(m+1) sqrt(m) M0 / rho) * sup_{n>=3} max{1, n^(3/2) / 2^(n-1)}.
double compute_C0(std::size_t m, double M0, double rho);

struct RescaledCheck {
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Largest estimate / bound ratio.
  double worst_ratio = 0.0;
};

/// Samples t in B(0, 2) and compares ||d^k g_i(t)||, k <= kmax, with C0 L0^n.
RescaledCheck check_rescaled_bound(const RescaledMap& rm, std::size_t kmax,
                                   std::size_t samples = 1000, std::uint64_t seed = 1);

/// ln kappa = ln mu + nu ln ln C_n + (2m/s) ln C_n, C_n = C0 L0^n.
double kappa(const BoundSchedule& sched, std::size_t n, double s);

double log_Cn(const BoundSchedule& sched, std::size_t n);

struct HlocBound {
  std::size_t s = 1;
  double value = 0.0;
  /// The same bound after substituting C_n = C0 L0^n.
  double expanded = 0.0;
  /// The looser form with (2m/s)(ln C0 + ln L0) leading.
  double relaxed = 0.0;
};

HlocBound hloc_bound(const BoundSchedule& sched, std::size_t n);

double log_delta_of_n(const BoundSchedule& sched, std::size_t n);
double delta_of_n(const BoundSchedule& sched, std::size_t n);
/// The n with delta(n+1) < t <= delta(n), for ln t <= ln delta(1).
std::size_t delta_index(const BoundSchedule& sched, double log_t);
std::size_t s_bar(const BoundSchedule& sched, double t);
double a_of_t(const BoundSchedule& sched, double t);
double a_of_log_t(const BoundSchedule& sched, double log_t);
/// a(delta(n)).
double a_at(const BoundSchedule& sched, std::size_t n);

bool large_n_check(const BoundSchedule& sched, std::size_t n);

struct ThresholdReport {
  std::size_t first_true = 0;
  /// First n >= 3 from which the check holds up to n_limit.
  std::size_t threshold = 0;
  bool monotone = false;
};

ThresholdReport large_n_threshold(const BoundSchedule& sched, std::size_t n_limit = 10000);

struct ScheduleReport {
  bool pass = true;
  std::vector<std::string> failures;
  /// ln of mu(s(n), m+1) / n^(1/4): largest value and value at n_max.
  double log_mu_ratio_peak = -1e300;
  double log_mu_ratio_final = 0.0;
  /// nu(s(n), m+1) / n^(1/4).
  double nu_ratio_peak = 0.0;
  double nu_ratio_final = 0.0;
};

ScheduleReport schedule_conditions_check(const BoundSchedule& sched, std::size_t n_max);

struct SmallLipschitzBound {
  std::size_t N1 = 0;
  std::size_t n = 0;
  double value = 0.0;
  double C1 = 0.0;
};

/// Bound on the local entropy of `sys` at delta(n) when sys.L0 < sched.L0,
/// with C1 = value / a(delta(n)).
SmallLipschitzBound small_lipschitz_bound(const AnalyticSystem& sys, const BoundSchedule& sched,
                                          std::size_t n);

struct SuspensionBound {
  std::size_t i = 0;
  double C2 = 0.0;
  double value = 0.0;
};

/// i C2 a(delta L0^i), with C2 the largest C1 of the time-1/i map over
/// n in [N1, n_sweep].
SuspensionBound suspension_reduction_bound(const SuspensionSystem& susp, const BoundSchedule& sched,
                                           double log_delta, std::size_t n_sweep = 1000);

/// max over n in (i, n_max] of a(delta(n-i)) / a(delta(n)).
double c3_ratio_bound(const BoundSchedule& sched, std::size_t i, std::size_t n_max);

struct EnvelopeReport {
  std::string system;
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Largest ln(estimate) - ln(envelope).
  double worst_log_margin = -1e300;
};

/// Jet derivative estimates of f^n, n <= n_max, orders <= kmax, against the
/// post-Stirling envelope at `samples` random points.
EnvelopeReport certify_envelope(const AnalyticSystem& sys, std::size_t n_max, std::size_t kmax,
                                std::size_t samples, std::uint64_t seed);

/// CSV: n, log_t, t, s, a, hloc_bound, large_n.
std::string bound_curve_csv(const BoundSchedule& sched, std::size_t n_max);
std::string schedule_report_text(const BoundSchedule& sched, const ScheduleReport& report,
                                 const ThresholdReport& threshold);

}  // namespace entropia
