#include "entropia/covering.hpp"

#include "entropia/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

namespace entropia {

Budget Budget::seconds(double s) {
  Budget b;
  b.deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(s));
  return b;
}

bool Budget::expired() const {
  return deadline_ && std::chrono::steady_clock::now() > *deadline_;
}

void Budget::check() const {
  if (expired()) throw Error(ErrorKind::budget_exceeded, "wall-clock budget exhausted");
}

void require_resolution(const Grid& grid, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::precondition, "eps must be positive");
  if (grid.step() > eps / 4.0)
    throw Error(ErrorKind::resolution_insufficient,
                "grid step 2^-" + std::to_string(grid.g()) + " exceeds eps/4");
}

CoverEngine::CoverEngine(const AnalyticSystem& sys, const Region& region, std::size_t n_max,
                         const Budget& budget)
    : sys_(&sys), region_(region), n_max_(n_max), dim_(sys.dim()), budget_(&budget) {
  if (region.empty()) throw Error(ErrorKind::precondition, "region is empty");
  if (n_max == 0) throw Error(ErrorKind::precondition, "n must be >= 1");
  if (region.grid().dim() != dim_)
    throw Error(ErrorKind::precondition, "grid dimension does not match the system");
  if (dim_ > 8) throw Error(ErrorKind::precondition, "covering supports dimension <= 8");
  const std::size_t count = region.size();
  table_.resize(count * n_max_ * dim_);
  bool escaped = false;
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < count; ++p) {
    Point x(dim_);
    region_.grid().point(region_.index(p), x);
    for (std::size_t i = 0; i < n_max_; ++i) {
      if (i > 0) sys.step(x);
      for (std::size_t a = 0; a < dim_; ++a) {
        if (!std::isfinite(x[a])) escaped = true;
        table_[(p * n_max_ + i) * dim_ + a] = x[a];
      }
    }
  }
  if (escaped) throw Error(ErrorKind::numeric_escape, "non-finite coordinate in orbit table");
  budget.check();
}

double CoverEngine::base_distance(const double* a, const double* b) const {
  if (sys_->metric) return (*sys_->metric)(std::span<const double>(a, dim_), std::span<const double>(b, dim_));
  const StateSpace& sp = sys_->space;
  if (dim_ == 1) return sp.coord_distance(0, a[0], b[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double d = sp.coord_distance(k, a[k], b[k]);
    s += d * d;
  }
  return std::sqrt(s);
}

double CoverEngine::dn(std::size_t p, std::size_t q, std::size_t n) const {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, base_distance(orbit(p, i), orbit(q, i)));
  return d;
}

double CoverEngine::dn_capped(std::size_t p, std::size_t q, std::size_t n, double eps) const {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d = std::max(d, base_distance(orbit(p, i), orbit(q, i)));
    if (d > eps) return std::numeric_limits<double>::infinity();
  }
  return d;
}

CoverEngine::Stencil CoverEngine::stencil(double radius) const {
  const Grid& grid = region_.grid();
  const StateSpace& sp = sys_->space;
  const double step = grid.step();
  const auto w = static_cast<std::int64_t>(std::ceil(radius / step - 1e-9));
  std::vector<std::int64_t> lo(dim_), hi(dim_), cur(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    const std::int64_t N = grid.axis_count(a);
    lo[a] = -w;
    hi[a] = w;
    if (sp.coord(a) == CoordKind::periodic && 2 * w + 1 >= N) {
      // every residue exactly once
      lo[a] = -((N - 1) / 2);
      hi[a] = lo[a] + N - 1;
    }
  }
  Stencil st;
  const double limit = radius * (1.0 + 1e-9) + 1e-15;
  cur = lo;
  while (true) {
    double s2 = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      double d = static_cast<double>(std::abs(cur[a])) * step;
      s2 += d * d;
    }
    if (std::sqrt(s2) <= limit) st.offsets.insert(st.offsets.end(), cur.begin(), cur.end());
    std::size_t a = dim_;
    bool done = true;
    while (a-- > 0) {
      if (++cur[a] <= hi[a]) {
        done = false;
        break;
      }
      cur[a] = lo[a];
    }
    if (done) break;
  }
  return st;
}

template <class F>
void CoverEngine::for_each_candidate(std::size_t p, const Stencil& st, F&& f) const {
  const Grid& grid = region_.grid();
  const StateSpace& sp = sys_->space;
  std::int64_t c[8], count[8];
  bool periodic[8];
  grid.coords_of(region_.index(p), std::span<std::int64_t>(c, dim_));
  for (std::size_t a = 0; a < dim_; ++a) {
    count[a] = grid.axis_count(a);
    periodic[a] = sp.coord(a) == CoordKind::periodic;
  }
  const bool full = region_.is_full();
  const std::size_t entries = st.offsets.size() / dim_;
  for (std::size_t k = 0; k < entries; ++k) {
    const std::int64_t* o = &st.offsets[k * dim_];
    std::int64_t idx = 0;
    bool inside = true;
    for (std::size_t a = 0; a < dim_; ++a) {
      std::int64_t v = c[a] + o[a];
      if (periodic[a]) {
        if (v < 0) v += count[a];
        else if (v >= count[a]) v -= count[a];
      } else if (v < 0 || v >= count[a]) {
        inside = false;
        break;
      }
      idx = idx * count[a] + v;
    }
    if (!inside) continue;
    std::int64_t q = full ? idx : region_.position(idx);
    if (q >= 0) f(static_cast<std::size_t>(q));
  }
}

template <class F>
void CoverEngine::for_each_near(std::size_t p, double radius, const Stencil* st, F&& f) const {
  if (st == nullptr) {
    // no lattice shortcut across a glued seam
    for (std::size_t q = 0; q < region_.size(); ++q)
      if (base_distance(orbit(p, 0), orbit(q, 0)) <= radius) f(q);
    return;
  }
  for_each_candidate(p, *st, f);
}

std::vector<std::size_t> CoverEngine::neighbours(std::size_t p, double radius) const {
  std::vector<std::size_t> out;
  std::optional<Stencil> st;
  if (!sys_->metric) st = stencil(radius);
  for_each_near(p, radius, st ? &*st : nullptr, [&](std::size_t q) {
    if (base_distance(orbit(p, 0), orbit(q, 0)) <= radius) out.push_back(q);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> CoverEngine::separated_set(std::size_t n, double eps) const {
  if (n == 0 || n > n_max_) throw Error(ErrorKind::precondition, "n outside the orbit table");
  std::optional<Stencil> st;
  if (!sys_->metric) st = stencil(eps);
  const Stencil* sp = st ? &*st : nullptr;
  std::vector<char> blocked(region_.size(), 0);
  std::vector<std::size_t> picks;
  for (std::size_t p = 0; p < region_.size(); ++p) {
    if (blocked[p]) continue;
    if ((picks.size() & 1023) == 0) budget_->check();
    picks.push_back(p);
    for_each_near(p, eps, sp, [&](std::size_t q) {
      if (q > p && !blocked[q] && dn_capped(p, q, n, eps) <= eps) blocked[q] = 1;
    });
  }
  return picks;
}

std::vector<std::size_t> CoverEngine::greedy_cover(std::size_t n, double eps) const {
  if (n == 0 || n > n_max_) throw Error(ErrorKind::precondition, "n outside the orbit table");
  std::optional<Stencil> st;
  if (!sys_->metric) st = stencil(eps);
  const Stencil* sp = st ? &*st : nullptr;
  std::vector<char> covered(region_.size(), 0);
  std::vector<std::size_t> centres;
  for (std::size_t p = 0; p < region_.size(); ++p) {
    if (covered[p]) continue;
    if ((centres.size() & 1023) == 0) budget_->check();
    std::size_t best = p;
    double best_d = 0.0;
    for_each_near(p, eps, sp, [&](std::size_t q) {
      if (q < p) return;
      double d = dn_capped(p, q, n, eps);
      if (d <= eps && (d > best_d || (d == best_d && q < best))) {
        best = q;
        best_d = d;
      }
    });
    centres.push_back(best);
    for_each_near(best, eps, sp, [&](std::size_t q) {
      if (!covered[q] && dn_capped(best, q, n, eps) <= eps) covered[q] = 1;
    });
  }
  return centres;
}

std::optional<std::vector<std::size_t>> CoverEngine::farthest_point_cover(std::size_t n, double eps,
                                                                         double max_work) const {
  if (n == 0 || n > n_max_) throw Error(ErrorKind::precondition, "n outside the orbit table");
  const std::size_t count = region_.size();
  std::vector<double> dist(count, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> centres;
  std::size_t c = 0;
  double work = 0.0;
  while (true) {
    work += static_cast<double>(count);
    if (work > max_work) return std::nullopt;
    if ((centres.size() & 63) == 0) budget_->check();
    centres.push_back(c);
#pragma omp parallel for schedule(static)
    for (std::size_t q = 0; q < count; ++q) {
      double d = dn_capped(c, q, n, dist[q]);
      if (d < dist[q]) dist[q] = d;
    }
    std::size_t far = 0;
    for (std::size_t q = 1; q < count; ++q)
      if (dist[q] > dist[far]) far = q;
    if (!(dist[far] > eps)) break;
    c = far;
  }
  return centres;
}

bool CoverEngine::covers(const std::vector<std::size_t>& centres, std::size_t n, double eps) const {
  std::vector<char> covered(region_.size(), 0);
  for (std::size_t c : centres)
    for (std::size_t q = 0; q < region_.size(); ++q)
      if (!covered[q] && dn_capped(c, q, n, eps) <= eps) covered[q] = 1;
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

namespace {

SpanningResult counts_at(const CoverEngine& engine, std::size_t n, double eps, bool greedy,
                         double fps_work) {
  SpanningResult r;
  r.n = n;
  r.eps = eps;
  r.grid_g = engine.region().grid().g();
  r.s_lower = engine.separated_set(n, eps).size();
  r.r_upper = r.s_lower;
  r.method = "separated";
  if (greedy) {
    std::optional<std::vector<std::size_t>> fps;
    if (engine.region().grid().dim() >= 2) fps = engine.farthest_point_cover(n, eps, fps_work);
    r.greedy_count = fps ? fps->size() : engine.greedy_cover(n, eps).size();
    r.r_upper = std::min(r.s_lower, r.greedy_count);
    r.method = fps ? "farthest-point" : "seed-sweep";
  }
  return r;
}

}  // namespace

SpanningResult max_separated(const AnalyticSystem& sys, const Region& region, std::size_t n,
                             double eps, const Budget& budget) {
  require_resolution(region.grid(), eps);
  CoverEngine engine(sys, region, n, budget);
  return counts_at(engine, n, eps, false, 0.0);
}

SpanningResult greedy_spanning(const AnalyticSystem& sys, const Region& region, std::size_t n,
                               double eps, const Budget& budget) {
  require_resolution(region.grid(), eps);
  CoverEngine engine(sys, region, n, budget);
  return counts_at(engine, n, eps, true, std::numeric_limits<double>::infinity());
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t k = x.size();
  if (k < 2 || y.size() != k) throw Error(ErrorKind::precondition, "fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.residual = std::sqrt(sse / static_cast<double>(k));
  if (k > 2) {
    double se = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(k - 2));
    f.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  }
  return f;
}

EntropyEstimate entropy_scale_rate(const AnalyticSystem& sys, const Region& region, double eps,
                                   std::size_t n_min, std::size_t n_max,
                                   const RateOptions& options) {
  if (n_min == 0 || n_max < n_min + 4)
    throw Error(ErrorKind::precondition, "window needs n_min >= 1 and n_max - n_min >= 4");
  require_resolution(region.grid(), eps);
  EntropyEstimate est;
  est.n_min = n_min;
  const double cap = std::max(1.0, static_cast<double>(region.size()) / options.cells_per_ball);
  try {
    CoverEngine engine(sys, region, n_max, options.budget);
    std::size_t resolved = 0;
    for (std::size_t n = n_min; n <= n_max; ++n) {
      SpanningResult r = counts_at(engine, n, eps, true, options.fps_work);
      bool within_cap = static_cast<double>(r.r_upper) <= cap;
      if (within_cap && !est.saturated) {
        est.counts.push_back(r);
        ++resolved;
        continue;
      }
      if (resolved >= 2 || est.counts.size() >= 3) break;
      // fewer than two resolved points: pad with saturated ones and say so
      est.saturated = true;
      est.counts.push_back(r);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
    est.partial = true;
  }
  // an (n+1)-spanning set also spans at n; an n-separated set stays separated at n+1
  for (std::size_t j = est.counts.size(); j-- > 1;)
    est.counts[j - 1].r_upper = std::min(est.counts[j - 1].r_upper, est.counts[j].r_upper);
  for (std::size_t j = 1; j < est.counts.size(); ++j)
    est.counts[j].s_lower = std::max(est.counts[j].s_lower, est.counts[j - 1].s_lower);
  if (est.counts.size() < 2) {
    est.partial = true;
    est.n_max = est.counts.empty() ? n_min : est.counts.back().n;
    return est;
  }
  std::vector<double> xs, yr, ys;
  for (const auto& r : est.counts) {
    xs.push_back(static_cast<double>(r.n));
    yr.push_back(std::log(static_cast<double>(r.r_upper)));
    ys.push_back(std::log(static_cast<double>(r.s_lower)));
  }
  LinearFit fr = fit_line(xs, yr);
  LinearFit fs = fit_line(xs, ys);
  est.value = fr.slope;
  est.residual = fr.residual;
  est.half_width = est.counts.size() > 2 ? fr.half_width : std::abs(fr.slope);
  est.separated_value = fs.slope;
  est.n_max = est.counts.back().n;
  return est;
}

LimitFit entropy_limit_fit(const AnalyticSystem& sys, const Region& region,
                           const std::vector<double>& eps_ladder, std::size_t n_min,
                           std::size_t n_max, const RateOptions& options) {
  for (std::size_t j = 1; j < eps_ladder.size(); ++j)
    if (!(eps_ladder[j] < eps_ladder[j - 1]))
      throw Error(ErrorKind::precondition, "eps ladder must be strictly decreasing");
  LimitFit fit;
  for (double eps : eps_ladder) {
    fit.ladder.emplace_back(eps, entropy_scale_rate(sys, region, eps, n_min, n_max, options));
    if (fit.ladder.size() >= 2) {
      const auto& prev = fit.ladder[fit.ladder.size() - 2].second;
      const auto& cur = fit.ladder.back().second;
      if (cur.value < prev.value - (prev.half_width + cur.half_width)) fit.monotone = false;
    }
  }
  return fit;
}

std::string spanning_csv_header() {
  return "system,n,eps,grid_g,s_lower,r_upper,slope,residual\n";
}

std::string spanning_csv_rows(const std::string& system, const EntropyEstimate& est) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& r : est.counts)
    os << system << ',' << r.n << ',' << r.eps << ',' << r.grid_g << ',' << r.s_lower << ','
       << r.r_upper << ',' << est.value << ',' << est.residual << '\n';
  return os.str();
}

}  // namespace entropia
