// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "entropia/bounds.hpp"
#include "entropia/covering.hpp"
#include "entropia/harness.hpp"
#include "entropia/local_entropy.hpp"
#include "entropia/zoo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace entropia;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("error: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id, out.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// s_lower(2 eps) <= r_upper(eps) <= s_lower(eps) over adjacent rungs of a
// halving ladder, at every common n.
std::size_t sandwich_violations(const LimitFit& fit, std::size_t& checked) {
  std::size_t bad = 0;
  for (std::size_t k = 0; k < fit.ladder.size(); ++k) {
    for (const auto& r : fit.ladder[k].second.counts) {
      ++checked;
      if (r.r_upper > r.s_lower) ++bad;
      if (k == 0 || fit.ladder[k].first * 2.0 != fit.ladder[k - 1].first) continue;
      for (const auto& coarse : fit.ladder[k - 1].second.counts)
        if (coarse.n == r.n && coarse.s_lower > r.r_upper) ++bad;
    }
  }
  return bad;
}

std::map<std::string, LimitFit> fits;

Outcome entropy_criterion(const std::string& name, unsigned g, std::vector<double> ladder,
                          std::size_t a, std::size_t b, double target, double tol,
                          double wall_limit) {
  auto sys = system_by_name(name);
  Grid grid(sys.space, g);
  Region region(grid);
  auto start = std::chrono::steady_clock::now();
  auto fit = entropy_limit_fit(sys, region, ladder, a, b);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fits[name] = fit;
  double v = fit.value();
  bool ok = std::abs(v - target) <= tol * target && secs < wall_limit;
  return {ok, name + " estimate " + num(v) + " vs " + num(target) + " +-" + num(100 * tol) +
                  "%, wall " + num(secs) + " s (limit " + num(wall_limit) + ")"};
}

}  // namespace

int main() {
  criterion(1, [] {
    return entropy_criterion("doubling", 14, {0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7}, 4, 12,
                             std::log(2.0), 0.10, 60.0);
  });

  criterion(2, [] {
    auto sys = system_by_name("rotation");
    Grid grid(sys.space, 14);
    Region region(grid);
    auto fit = entropy_limit_fit(sys, region, {0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7}, 4, 12);
    fits["rotation"] = fit;
    return Outcome{fit.value() <= 0.05, "rotation estimate " + num(fit.value()) + " <= 0.05"};
  });

  criterion(3, [] {
    return entropy_criterion("cat", 9, {0x1p-3, 0x1p-4, 0x1p-5}, 3, 8,
                             std::log((3.0 + std::sqrt(5.0)) / 2.0), 0.15, 300.0);
  });

  criterion(4, [] {
    std::size_t checked = 0, bad = 0;
    for (const auto& [name, fit] : fits) bad += sandwich_violations(fit, checked);
    for (const char* name :
         {"identity", "doubling", "rotation", "trig:0.05", "logistic", "cat"}) {
      auto sys = system_by_name(name);
      Grid grid(sys.space, sys.space.dim() == 1 ? 11 : 7);
      Region region(grid);
      for (double eps : {0.25, 0.125})
        for (std::size_t n = 1; n <= 5; ++n) {
          auto coarse = max_separated(sys, region, n, 2.0 * eps);
          auto fine = greedy_spanning(sys, region, n, eps);
          ++checked;
          if (coarse.s_lower > fine.r_upper || fine.r_upper > fine.s_lower) ++bad;
        }
    }
    return Outcome{bad == 0 && checked > 0,
                   std::to_string(checked - bad) + "/" + std::to_string(checked) +
                       " instances satisfy s_lower(2eps) <= r_upper(eps) <= s_lower(eps)"};
  });

  criterion(5, [] {
    auto sys = system_by_name("doubling");
    SamplingPlan plan;
    LocalEntropyOptions opt;
    opt.grid_g = 12;
    std::size_t total = 0, collapsed = 0;
    double worst = 0.0;
    for (double eps : {0.125, 0.0625}) {
      for (const auto& x : sampling_centers(sys.space, plan)) {
        auto b = infinite_ball_approx(sys, x, eps, opt.N_proxy, opt.grid_g);
        ++total;
        if (b.stabilized && b.cells.size() == 1) ++collapsed;
      }
      worst = std::max(worst, local_entropy_sup(sys, eps, plan, opt).value);
    }
    double frac = static_cast<double>(collapsed) / static_cast<double>(total);
    return Outcome{frac >= 0.99 && worst <= 0.05,
                   "single-cell stabilized at " + num(100 * frac) + "% of " +
                       std::to_string(total) + " centres, local entropy sup " + num(worst) +
                       " <= 0.05"};
  });

  criterion(6, [] {
    std::size_t checks = 0, violations = 0;
    for (const char* name : {"identity", "doubling", "rotation", "trig:0.05", "cat", "logistic"}) {
      auto rep = certify_envelope(system_by_name(name), 6, 5, 1000, 1);
      checks += rep.checks;
      violations += rep.violations;
    }
    return Outcome{violations == 0, std::to_string(violations) + " envelope violations in " +
                                        std::to_string(checks) + " checks"};
  });

  criterion(7, [] {
    std::size_t bad = 0;
    for (std::size_t n = 3; n <= 200; ++n) {
      double brute = 0.0;
      for (std::size_t k = 1; k <= n; ++k) brute = std::max(brute, q_function(n, k));
      double want = std::max(q_function(n, 1), q_function(n, n));
      if (std::abs(brute - want) > 1e-12 * want || std::abs(q_max(n).value - want) > 1e-12 * want)
        ++bad;
    }
    return Outcome{bad == 0, std::to_string(198 - bad) + "/198 n satisfy max q = max(q(1), q(n))"};
  });

  criterion(8, [] {
    auto sched = make_schedule(2.0, 1, 0.5, 1.0);
    auto rep = schedule_conditions_check(sched, 1000000);
    bool mono = true;
    double prev = a_at(sched, 1);
    for (std::size_t n = 2; n <= 1000000; ++n) {
      double a = a_at(sched, n);
      if (a > prev) mono = false;
      prev = a;
    }
    double ratio = a_of_log_t(sched, log_delta_of_n(sched, 1000000)) /
                   a_of_log_t(sched, log_delta_of_n(sched, 10));
    auto th = large_n_threshold(sched);
    bool ok = rep.pass && mono && ratio < 0.2 && th.monotone && th.threshold <= 20 &&
              th.threshold == 8;
    return Outcome{ok, std::string("conditions ") + (rep.pass ? "pass" : "fail") +
                           ", a monotone " + (mono ? "yes" : "no") + ", a ratio " + num(ratio) +
                           ", large-n threshold " + std::to_string(th.threshold)};
  });

  criterion(9, [] {
    std::string detail;
    bool ok = true;
    for (const char* name : {"doubling", "rotation", "cat", "logistic"}) {
      for (Task task : {Task::verify_theorem, Task::verify_corollary}) {
        ExperimentConfig c;
        c.task = task;
        c.system = name;
        auto r = c.resolved();
        auto s = task == Task::verify_theorem ? verify_theorem(r) : verify_corollary(r);
        ok = ok && s.pass && !s.partial;
        detail += std::string(detail.empty() ? "" : ", ") + name +
                  (task == Task::verify_theorem ? " theorem " : " corollary ") +
                  (s.pass ? "ok" : "fail") + " (C=" + num(s.C) + ")";
      }
    }
    return Outcome{ok, detail};
  });

  criterion(10, [] {
    auto base = system_by_name("doubling");
    auto susp = suspend(base, 1.25);
    bool ok = susp.i >= 1 && susp.i <= 64;
    double worst = 0.0;
    auto one = susp.time_one();
    for (int k = 0; k < 1000; ++k) {
      double x = (k + 0.5) / 1000.0;
      auto img = one.eval(Point{0.0, x});
      auto want = base.eval(Point{x});
      worst = std::max(worst, std::abs(img[0] - std::round(img[0])));
      double d = std::abs(img[1] - want[0]);
      worst = std::max(worst, std::min(d, 1.0 - d));
    }
    ok = ok && worst <= 1e-12;
    auto sched = make_schedule(base.L0, 1, base.rho, base.M0);
    double c3max = 0.0;
    for (std::size_t i = 0; i <= 4; ++i) {
      double c3 = c3_ratio_bound(sched, i, 10000);
      ok = ok && std::isfinite(c3);
      c3max = std::max(c3max, c3);
    }
    std::size_t bad = 0;
    for (std::size_t i = 1; i <= 4; ++i)
      for (std::size_t n = i + 1; n <= 10000; ++n)
        if (log_delta_of_n(sched, n) + static_cast<double>(i) * std::log(sched.L0) >
            log_delta_of_n(sched, n - i) + 1e-12)
          ++bad;
    ok = ok && bad == 0;
    return Outcome{ok, "i=" + std::to_string(susp.i) + ", section error " + num(worst) +
                           ", max C3 " + num(c3max) + ", delta shift violations " +
                           std::to_string(bad)};
  });

  criterion(11, [] {
    bool ok = true;
    for (Task task : {Task::entropy, Task::local_entropy}) {
      ExperimentConfig c;
      c.task = task;
      c.system = "doubling";
      c.seed = 11;
      auto a = run(c.resolved());
      auto b = run(c.resolved());
      ok = ok && !a.files.empty() && a.files == b.files;
    }
    ExperimentConfig cat;
    cat.task = Task::entropy;
    cat.system = "cat";
    cat.eps_ladder = {0x1p-3, 0x1p-4};
    cat.n_min = 2;
    cat.n_max = 6;
    cat.grid_g = 8;
    auto a = run(cat.resolved());
    auto b = run(cat.resolved());
    ok = ok && a.files == b.files;
    return Outcome{ok, "entropy and local-entropy outputs byte-identical across repeated runs"};
  });

  return failures == 0 ? 0 : 1;
}
