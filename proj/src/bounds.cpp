#include "entropia/bounds.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace entropia {

namespace {

const double kLn2 = std::log(2.0);

bool log_le(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

double MuNuModel::mu(double s, std::size_t m) const { return std::exp(log_mu(s, m)); }

MuNuModel MuNuModel::bounded() {
  return {[](double s, std::size_t m) {
            double md = static_cast<double>(m);
            return md * 3.0 * kLn2 + (md / s) * std::log(s);
          },
          [](double s, std::size_t m) { return static_cast<double>(m) * std::pow(s, 1.0 / s); },
          "mu=8^m*s^(m/s),nu=m*s^(1/s)"};
}

MuNuModel MuNuModel::yomdin() {
  return {[](double s, std::size_t m) { return static_cast<double>(m) * s * std::log(8.0 * s); },
          [](double s, std::size_t m) { return static_cast<double>(m) * s; },
          "mu=(8s)^(ms),nu=ms"};
}

MuNuModel MuNuModel::exponential() {
  return {[](double s, std::size_t m) { return static_cast<double>(m) * s * kLn2; },
          [](double s, std::size_t m) { return static_cast<double>(m) * s; },
          "mu=2^(ms),nu=ms"};
}

ScheduleRule ScheduleRule::sqrt_n() {
  return {[](std::size_t n) {
            auto s = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
            while (s > 1 && (s - 1) * (s - 1) >= n) --s;
            while (s * s < n) ++s;
            return std::max<std::size_t>(1, s);
          },
          "ceil(sqrt(n))"};
}

ScheduleRule ScheduleRule::sqrt_log_n() {
  return {[](std::size_t n) {
            double v = std::floor(std::sqrt(std::log(static_cast<double>(std::max<std::size_t>(n, 1)))));
            auto s = static_cast<std::size_t>(std::max(1.0, v));
            return std::clamp<std::size_t>(s, 1, std::max<std::size_t>(n, 1));
          },
          "floor(sqrt(ln n))"};
}

ScheduleRule ScheduleRule::identity() {
  return {[](std::size_t n) { return std::max<std::size_t>(n, 1); }, "n"};
}

ScheduleRule ScheduleRule::constant(std::size_t s) {
  return {[s](std::size_t) { return s; }, "const " + std::to_string(s)};
}

BoundSchedule make_schedule(double L0, std::size_t m, double rho, double M0, MuNuModel model,
                            ScheduleRule rule) {
  if (!(L0 > 1.0) || m == 0 || !(rho > 0.0) || !(M0 > 0.0))
    throw Error(ErrorKind::parameter_out_of_range, "schedule needs L0 > 1, m >= 1, rho > 0, M0 > 0");
  BoundSchedule sched;
  sched.L0 = L0;
  sched.m = m;
  sched.rho = rho;
  sched.model = std::move(model);
  sched.s = std::move(rule);
  sched.C0 = compute_C0(m, M0, rho);
  try {
    sched.N_threshold = large_n_threshold(sched).threshold;
  } catch (const Error&) {
    sched.N_threshold = 0;
  }
  return sched;
}

BoundSchedule make_schedule(const AnalyticSystem& sys) {
  return make_schedule(sys.L0, sys.dim(), sys.rho, sys.M0);
}

CauchyBound cauchy_derivative_bound(const CauchyEnvelope& env, std::span<const unsigned> alpha) {
  unsigned total = std::accumulate(alpha.begin(), alpha.end(), 0u);
  if (total == 0) throw Error(ErrorKind::precondition, "multi-index order must be >= 1");
  const double K = total;
  const double md = static_cast<double>(env.m);
  double common = md * kLn2 + std::log(env.M0) +
                  K * (kLn2 + 0.5 * std::log(md) + static_cast<double>(env.n) * std::log(env.L0) -
                       std::log(env.rho));
  double log_fact = 0.0;
  for (unsigned a : alpha) log_fact += std::lgamma(a + 1.0);
  CauchyBound b;
  b.log_post = (K + 0.5) * std::log(K) + common;
  b.log_pre = log_fact + common;
  if (!log_le(b.log_pre, b.log_post))
    throw Error(ErrorKind::precondition, "pre-Stirling envelope exceeds the post-Stirling one");
  return b;
}

CauchyBound cauchy_derivative_bound(const CauchyEnvelope& env, unsigned order) {
  std::vector<unsigned> alpha(std::max<std::size_t>(env.m, 1), 0);
  alpha[0] = order;
  return cauchy_derivative_bound(env, alpha);
}

double log_q(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw Error(ErrorKind::precondition, "q needs 1 <= k <= n");
  const double kd = static_cast<double>(k);
  return (1.0 - kd) * std::log(2.0 * static_cast<double>(n)) + (kd + 0.5) * std::log(kd);
}

double q_function(std::size_t n, std::size_t k) { return std::exp(log_q(n, k)); }

QMax q_max(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::precondition, "q_max needs n >= 3");
  std::vector<double> lq(n + 1);
  for (std::size_t k = 1; k <= n; ++k) lq[k] = log_q(n, k);
  std::size_t best = 1;
  for (std::size_t k = 2; k <= n; ++k)
    if (lq[k] > lq[best] + 1e-12 * std::max(1.0, std::abs(lq[best]))) best = k;
  double ends = std::max(lq[1], lq[n]);
  if (std::abs(lq[best] - ends) > 1e-12 * std::max(1.0, std::abs(ends)))
    throw Error(ErrorKind::precondition,
                "q maximum is interior at k=" + std::to_string(best) + " for n=" + std::to_string(n));
  for (std::size_t k = 2; k < n; ++k)
    if (lq[k + 1] - 2.0 * lq[k] + lq[k - 1] < -1e-12)
      throw Error(ErrorKind::precondition, "ln q not convex at k=" + std::to_string(k));
  return {best, std::exp(lq[best])};
}

double compute_C0(std::size_t m, double M0, double rho) {
  if (m == 0 || !(M0 > 0.0) || !(rho > 0.0))
    throw Error(ErrorKind::parameter_out_of_range, "C0 needs m >= 1, M0 > 0, rho > 0");
  auto h = [](double n) { return 1.5 * std::log(n) - (n - 1.0) * kLn2; };
  double sup = 0.0;
  for (int n = 3; n <= 100; ++n) {
    sup = std::max(sup, std::max(0.0, h(n)));
    if (n > 3 && !(h(n) < h(n - 1)))
      throw Error(ErrorKind::precondition, "n^(3/2)/2^(n-1) not decreasing at n=" + std::to_string(n));
  }
  const double md = static_cast<double>(m);
  return std::pow(2.0, md + 1.0) * std::sqrt(md) * M0 / rho * std::exp(sup);
}

RescaledCheck check_rescaled_bound(const RescaledMap& rm, std::size_t kmax, std::size_t samples,
                                   std::uint64_t seed) {
  const AnalyticSystem& base = rm.base();
  if (!base.jet_step) throw Error(ErrorKind::no_jet, base.name + " has no jet extension");
  if (kmax == 0 || kmax > 6) throw Error(ErrorKind::precondition, "kmax must be in [1, 6]");
  const std::size_t m = base.dim();
  const double bound =
      compute_C0(m, base.M0, base.rho) * std::pow(base.L0, static_cast<double>(rm.n()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RescaledCheck out;
  std::vector<double> t(m);
  for (std::size_t s = 0; s < samples; ++s) {
    double r2;
    do {
      r2 = 0.0;
      for (auto& c : t) {
        c = u(rng);
        r2 += c * c;
      }
    } while (r2 >= 4.0);
    std::size_t i = 1 + s % rm.max_index();
    auto norms = rm.derivative_norms(i, t, kmax);
    for (double v : norms) {
      ++out.checks;
      double ratio = v / bound;
      out.worst_ratio = std::max(out.worst_ratio, ratio);
      if (ratio > 1.0) ++out.violations;
    }
  }
  return out;
}

double log_Cn(const BoundSchedule& sched, std::size_t n) {
  return std::log(sched.C0) + static_cast<double>(n) * std::log(sched.L0);
}

double kappa(const BoundSchedule& sched, std::size_t n, double s) {
  if (!(s >= 1.0) || s > static_cast<double>(n))
    throw Error(ErrorKind::precondition, "kappa needs 1 <= s <= n");
  const double lc = log_Cn(sched, n);
  if (!(lc > 1.0))
    throw Error(ErrorKind::scale_too_small, "C_n <= e: scale too small for the log-log term");
  const double md = static_cast<double>(sched.m);
  return sched.model.log_mu(s, sched.m) + sched.model.nu(s, sched.m) * std::log(lc) +
         (2.0 * md / s) * lc;
}

HlocBound hloc_bound(const BoundSchedule& sched, std::size_t n) {
  if (sched.N_threshold == 0 || n < sched.N_threshold)
    throw Error(ErrorKind::below_threshold,
                "n=" + std::to_string(n) + " is below the large-n threshold " +
                    std::to_string(sched.N_threshold));
  HlocBound b;
  b.s = sched.s(n);
  const double s = static_cast<double>(b.s);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(sched.m);
  const double lC0 = std::log(sched.C0), lL0 = std::log(sched.L0);
  const double nu = sched.model.nu(s, sched.m), lmu = sched.model.log_mu(s, sched.m);
  const double lln = std::log(nd * lL0 + lC0);
  b.value = kappa(sched, n, s) / nd;
  b.expanded = (2.0 * md / s) * (lC0 / nd + lL0) + (nu * lln + lmu) / nd;
  b.relaxed = (2.0 * md / s) * (lC0 + lL0) +
              std::pow(nd, -0.5) * (std::pow(nd, -0.25) * nu * std::pow(nd, -0.25) * lln +
                                    std::pow(nd, -0.5) * lmu);
  return b;
}

double log_delta_of_n(const BoundSchedule& sched, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::precondition, "delta needs n >= 1");
  const double nd = static_cast<double>(n);
  return -nd * std::log(sched.L0) - 2.0 * std::log(nd);
}

double delta_of_n(const BoundSchedule& sched, std::size_t n) {
  return std::exp(log_delta_of_n(sched, n));
}

std::size_t delta_index(const BoundSchedule& sched, double log_t) {
  auto at_or_above = [&](std::size_t n) { return log_le(log_t, log_delta_of_n(sched, n)); };
  if (!at_or_above(1)) throw Error(ErrorKind::precondition, "t exceeds delta(1)");
  std::size_t lo = 1, hi = 2;
  while (at_or_above(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    (at_or_above(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::size_t s_bar(const BoundSchedule& sched, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::precondition, "s_bar needs t > 0");
  return sched.s(delta_index(sched, std::log(t)));
}

double a_at(const BoundSchedule& sched, std::size_t n) {
  return 1.0 / static_cast<double>(sched.s(n)) + 1.0 / std::sqrt(-log_delta_of_n(sched, n));
}

double a_of_log_t(const BoundSchedule& sched, double log_t) {
  if (!log_le(log_t, log_delta_of_n(sched, 1))) return 1.0;
  return a_at(sched, delta_index(sched, log_t));
}

double a_of_t(const BoundSchedule& sched, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::precondition, "a needs t > 0");
  return a_of_log_t(sched, std::log(t));
}

bool large_n_check(const BoundSchedule& sched, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(sched.m);
  const double lL0 = std::log(sched.L0), lrho = std::log(sched.rho);
  const double ld = log_delta_of_n(sched, n);
  const double first = -(std::log(4.0) + 0.5 * std::log(md) + nd * lL0 - lrho + std::log(nd));
  const double second = lrho - nd * lL0;
  const double third = (std::log(4.0) + 0.5 * std::log(md) - lrho + 2.0 * std::log(nd)) / nd;
  return log_le(ld, first) && log_le(ld, second) && third < 1.0;
}

ThresholdReport large_n_threshold(const BoundSchedule& sched, std::size_t n_limit) {
  if (n_limit < 3) throw Error(ErrorKind::precondition, "n_limit must be >= 3");
  std::vector<char> ok(n_limit + 1, 0);
  for (std::size_t n = 1; n <= n_limit; ++n) ok[n] = large_n_check(sched, n);
  if (!ok[n_limit])
    throw Error(ErrorKind::below_threshold,
                "large-n condition fails at n=" + std::to_string(n_limit));
  ThresholdReport r;
  std::size_t last_fail = 0;
  for (std::size_t n = 1; n <= n_limit; ++n) {
    if (ok[n] && r.first_true == 0) r.first_true = n;
    if (!ok[n]) last_fail = n;
  }
  r.threshold = std::max<std::size_t>(3, last_fail + 1);
  r.monotone = last_fail < r.first_true;
  return r;
}

ScheduleReport schedule_conditions_check(const BoundSchedule& sched, std::size_t n_max) {
  if (n_max < 100) throw Error(ErrorKind::precondition, "n_max must be >= 100");
  ScheduleReport rep;
  auto fail = [&](const std::string& what, std::size_t n) {
    rep.pass = false;
    rep.failures.push_back(what + " (first at n=" + std::to_string(n) + ")");
  };
  const std::size_t m = sched.m;
  std::size_t prev = 0;
  bool bad_mono = false, bad_step = false, bad_range = false, bad_model = false;
  double prev_lmu1 = 0, prev_nu1 = 0, prev_lmu0 = 0, prev_nu0 = 0;
  bool tail_mu1 = true, tail_nu1 = true, tail_mu0 = true, tail_nu0 = true;
  std::size_t tail_mu1_n = 0, tail_nu1_n = 0, tail_mu0_n = 0, tail_nu0_n = 0;
  double peak_mu0 = -1e300, peak_nu0 = 0.0, fin_mu0 = 0.0, fin_nu0 = 0.0;
  const std::size_t tail_start = n_max / 2;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::size_t s = sched.s(n);
    if (!bad_range && (s < 1 || s > n)) {
      bad_range = true;
      fail("increasing: s(n) outside [1, n]", n);
    }
    if (n > 1) {
      if (!bad_mono && s < prev) {
        bad_mono = true;
        fail("increasing: s(n) decreases", n);
      }
      if (!bad_step && s > prev + 1) {
        bad_step = true;
        fail("increasing: s(n+1) - s(n) > 1", n);
      }
    }
    prev = s;
    const double sd = static_cast<double>(s);
    const double q = 0.25 * std::log(static_cast<double>(n));
    const double lmu1 = sched.model.log_mu(sd, m + 1) - q;
    const double nu1 = sched.model.nu(sd, m + 1) * std::exp(-q);
    const double lmu0 = sched.model.log_mu(sd, m) - q;
    const double nu0 = sched.model.nu(sd, m) * std::exp(-q);
    if (!std::isfinite(lmu1) || !std::isfinite(nu1)) {
      fail("slow: mu or nu not finite", n);
      return rep;
    }
    if (!bad_model && (lmu0 > lmu1 + 1e-12 || nu0 > nu1 + 1e-12)) {
      bad_model = true;
      fail("model: mu or nu decreases in m", n);
    }
    if (n > tail_start) {
      auto mark = [&](bool& flag, std::size_t& at, double cur, double before) {
        if (flag && cur > before + 1e-12 * std::max(1.0, std::abs(before))) {
          flag = false;
          at = n;
        }
      };
      mark(tail_mu1, tail_mu1_n, lmu1, prev_lmu1);
      mark(tail_nu1, tail_nu1_n, nu1, prev_nu1);
      mark(tail_mu0, tail_mu0_n, lmu0, prev_lmu0);
      mark(tail_nu0, tail_nu0_n, nu0, prev_nu0);
    }
    prev_lmu1 = lmu1;
    prev_nu1 = nu1;
    prev_lmu0 = lmu0;
    prev_nu0 = nu0;
    rep.log_mu_ratio_peak = std::max(rep.log_mu_ratio_peak, lmu1);
    rep.nu_ratio_peak = std::max(rep.nu_ratio_peak, nu1);
    peak_mu0 = std::max(peak_mu0, lmu0);
    peak_nu0 = std::max(peak_nu0, nu0);
    rep.log_mu_ratio_final = lmu1;
    rep.nu_ratio_final = nu1;
    fin_mu0 = lmu0;
    fin_nu0 = nu0;
  }
  if (!(sched.s(n_max) > sched.s(1))) fail("increasing: s(n) does not grow", n_max);
  const double ln10pct = std::log(0.1);
  if (!tail_mu1) fail("slow: mu(s(n),m+1)/n^(1/4) not eventually decreasing", tail_mu1_n);
  if (!tail_nu1) fail("slow: nu(s(n),m+1)/n^(1/4) not eventually decreasing", tail_nu1_n);
  if (rep.log_mu_ratio_final > rep.log_mu_ratio_peak + ln10pct)
    fail("slow: mu(s(n),m+1)/n^(1/4) above 10% of peak", n_max);
  if (rep.nu_ratio_final > 0.1 * rep.nu_ratio_peak)
    fail("slow: nu(s(n),m+1)/n^(1/4) above 10% of peak", n_max);
  if (!tail_mu0) fail("converging: mu(s(n),m)/n^(1/4) not eventually decreasing", tail_mu0_n);
  if (!tail_nu0) fail("converging: nu(s(n),m)/n^(1/4) not eventually decreasing", tail_nu0_n);
  if (fin_mu0 > peak_mu0 + ln10pct) fail("converging: mu(s(n),m)/n^(1/4) above 10% of peak", n_max);
  if (fin_nu0 > 0.1 * peak_nu0) fail("converging: nu(s(n),m)/n^(1/4) above 10% of peak", n_max);
  return rep;
}

namespace {

std::size_t small_lipschitz_N1(const AnalyticSystem& sys, const BoundSchedule& sched) {
  const double lLt = std::log(sys.L0), lrho = std::log(sys.rho);
  for (std::size_t n = 1; n <= 1000000; ++n)
    if (log_le(log_delta_of_n(sched, n), lrho - static_cast<double>(n) * lLt)) return n;
  throw Error(ErrorKind::below_threshold, "no N1 up to 10^6 for " + sys.name);
}

}  // namespace

SmallLipschitzBound small_lipschitz_bound(const AnalyticSystem& sys, const BoundSchedule& sched,
                                          std::size_t n) {
  if (!(sys.L0 < sched.L0))
    throw Error(ErrorKind::precondition, sys.name + ": sup |Df| is not below the schedule L0");
  SmallLipschitzBound b;
  b.N1 = small_lipschitz_N1(sys, sched);
  if (n < b.N1)
    throw Error(ErrorKind::below_threshold,
                "n=" + std::to_string(n) + " is below N1=" + std::to_string(b.N1));
  b.n = n;
  const std::size_t mm = sched.m + 1;
  const double lC0 = std::log(compute_C0(sys.dim(), sys.M0, sys.rho));
  const double lLt = std::log(sys.L0);
  const double s = static_cast<double>(sched.s(n));
  const double nd = static_cast<double>(n);
  b.value = 2.0 * static_cast<double>(mm) / s * (lC0 + lLt) +
            std::pow(nd, -0.5) *
                (std::pow(nd, -0.25) * sched.model.nu(s, mm) * std::pow(nd, -0.25) *
                     std::log(nd * lLt + lC0) +
                 std::pow(nd, -0.5) * sched.model.log_mu(s, mm));
  b.C1 = b.value / a_at(sched, n);
  return b;
}

SuspensionBound suspension_reduction_bound(const SuspensionSystem& susp, const BoundSchedule& sched,
                                           double log_delta, std::size_t n_sweep) {
  SuspensionBound out;
  out.i = susp.i;
  std::size_t N1 = small_lipschitz_N1(susp.step_map, sched);
  if (n_sweep < N1) throw Error(ErrorKind::precondition, "sweep ends before N1");
  for (std::size_t n = N1; n <= n_sweep; ++n)
    out.C2 = std::max(out.C2, small_lipschitz_bound(susp.step_map, sched, n).C1);
  const double shifted = log_delta + static_cast<double>(susp.i) * std::log(sched.L0);
  out.value = static_cast<double>(susp.i) * out.C2 * a_of_log_t(sched, shifted);
  return out;
}

double c3_ratio_bound(const BoundSchedule& sched, std::size_t i, std::size_t n_max) {
  if (i == 0) return 1.0;
  if (n_max <= i) throw Error(ErrorKind::precondition, "n_max must exceed i");
  double worst = 0.0;
  for (std::size_t n = i + 1; n <= n_max; ++n)
    worst = std::max(worst, a_at(sched, n - i) / a_at(sched, n));
  if (!std::isfinite(worst)) throw Error(ErrorKind::numeric_escape, "C3 ratio is not finite");
  return worst;
}

EnvelopeReport certify_envelope(const AnalyticSystem& sys, std::size_t n_max, std::size_t kmax,
                                std::size_t samples, std::uint64_t seed) {
  if (!sys.jet_step) throw Error(ErrorKind::no_jet, sys.name + " has no jet extension");
  EnvelopeReport rep;
  rep.system = sys.name;
  std::mt19937_64 rng(seed);
  std::vector<Point> points;
  for (std::size_t s = 0; s < samples; ++s) points.push_back(random_point(sys.space, rng));
  std::vector<std::vector<double>> envelope(n_max + 1, std::vector<double>(kmax + 1));
  for (std::size_t n = 1; n <= n_max; ++n)
    for (std::size_t k = 1; k <= kmax; ++k)
      envelope[n][k] = cauchy_derivative_bound({sys.dim(), sys.M0, sys.rho, sys.L0, n},
                                               static_cast<unsigned>(k))
                           .log_post;
  std::vector<EnvelopeReport> parts(points.size());
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < points.size(); ++p) {
    EnvelopeReport& part = parts[p];
    for (std::size_t n = 1; n <= n_max; ++n) {
      auto norms = jet_norms(sys, points[p], n, kmax);
      for (std::size_t k = 1; k <= kmax; ++k) {
        ++part.checks;
        if (!(norms[k - 1] > 0.0)) continue;
        double margin = std::log(norms[k - 1]) - envelope[n][k];
        part.worst_log_margin = std::max(part.worst_log_margin, margin);
        if (margin > 1e-12) ++part.violations;
      }
    }
  }
  for (const auto& part : parts) {
    rep.checks += part.checks;
    rep.violations += part.violations;
    rep.worst_log_margin = std::max(rep.worst_log_margin, part.worst_log_margin);
  }
  return rep;
}

std::string bound_curve_csv(const BoundSchedule& sched, std::size_t n_max) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,log_t,t,s,a,hloc_bound,large_n\n";
  for (std::size_t n = 1; n <= n_max; ++n) {
    os << n << ',' << log_delta_of_n(sched, n) << ',' << delta_of_n(sched, n) << ',' << sched.s(n)
       << ',' << a_at(sched, n) << ',';
    if (sched.N_threshold != 0 && n >= sched.N_threshold) os << hloc_bound(sched, n).value;
    os << ',' << (large_n_check(sched, n) ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string schedule_report_text(const BoundSchedule& sched, const ScheduleReport& report,
                                 const ThresholdReport& threshold) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "L0 " << sched.L0 << "\nm " << sched.m << "\nrho " << sched.rho << "\nC0 " << sched.C0
     << "\nmodel " << sched.model.label << "\nschedule s(n) = " << sched.s.label
     << "\nlarge-n first true " << threshold.first_true << "\nlarge-n threshold "
     << threshold.threshold << (threshold.monotone ? " (monotone)" : " (not monotone)")
     << "\nmu(s(n),m+1)/n^(1/4) peak " << std::exp(report.log_mu_ratio_peak) << " final "
     << std::exp(report.log_mu_ratio_final) << "\nnu(s(n),m+1)/n^(1/4) peak "
     << report.nu_ratio_peak << " final " << report.nu_ratio_final << '\n';
  os << "conditions " << (report.pass ? "pass" : "FAIL") << '\n';
  for (const auto& f : report.failures) os << "  " << f << '\n';
  return os.str();
}

}  // namespace entropia
