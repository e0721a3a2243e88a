#include "entropia/harness.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entropia {

namespace {

constexpr std::array<std::pair<Task, const char*>, 7> kTaskNames{{
    {Task::entropy, "entropy"},
    {Task::local_entropy, "local-entropy"},
    {Task::bound_curve, "bound-curve"},
    {Task::verify_theorem, "verify-theorem"},
    {Task::verify_corollary, "verify-corollary"},
    {Task::certify_envelopes, "certify-envelopes"},
    {Task::schedule_report, "schedule-report"},
}};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_real(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw Error(ErrorKind::config, where + ": '" + text + "' is not a number");
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorKind::config, where + ": '" + text + "' is not a nonnegative integer");
  return v;
}

/// "2^-4" or a plain real.
double parse_eps(const std::string& text, const std::string& where) {
  if (text.rfind("2^", 0) == 0) return std::exp2(parse_real(text.substr(2), where));
  return parse_real(text, where);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

bool is_small(const AnalyticSystem& sys) { return sys.dim() == 1; }

}  // namespace

std::string to_string(Task task) {
  for (auto& [t, name] : kTaskNames)
    if (t == task) return name;
  return "?";
}

Task task_from_string(std::string_view name) {
  for (auto& [t, n] : kTaskNames)
    if (name == n) return t;
  throw Error(ErrorKind::config, "unknown task '" + std::string(name) + "'");
}

std::vector<double> parse_eps_ladder(const std::string& text, const std::string& where) {
  std::vector<double> out;
  if (trim(text).empty()) throw Error(ErrorKind::config, where + ": eps_ladder is empty");
  for (const auto& part : split(text, ',')) out.push_back(parse_eps(part, where));
  return out;
}

std::pair<std::size_t, std::size_t> parse_window(const std::string& text, const std::string& where) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorKind::config, where + ": window needs 'a,b'");
  return {parse_count(parts[0], where), parse_count(parts[1], where)};
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::config, where + ": unterminated section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::config, where + ": expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section == "system") {
      c.system_text += key + "=" + value + "\n";
      continue;
    }
    if (key == "task") {
      try {
        c.task = task_from_string(value);
      } catch (const Error&) {
        throw Error(ErrorKind::config, where + ": unknown task '" + value + "'");
      }
    } else if (key == "system") c.system = value;
    else if (key == "eps" || key == "eps_ladder") c.eps_ladder = parse_eps_ladder(value, where);
    else if (key == "grid_g") c.grid_g = static_cast<unsigned>(parse_count(value, where));
    else if (key == "window") std::tie(c.n_min, c.n_max) = parse_window(value, where);
    else if (key == "n_min") c.n_min = parse_count(value, where);
    else if (key == "n_max") c.n_max = parse_count(value, where);
    else if (key == "N_proxy") c.N_proxy = parse_count(value, where);
    else if (key == "centers") c.centers = parse_count(value, where);
    else if (key == "coarse_per_axis") c.coarse_per_axis = parse_count(value, where);
    else if (key == "budget_seconds") c.budget_seconds = parse_real(value, where);
    else if (key == "seed") c.seed = parse_count(value, where);
    else if (key == "out" || key == "output_dir") c.output_dir = value;
    else if (key == "workers") c.workers = static_cast<int>(parse_count(value, where));
    else if (key == "horizon") c.horizon = parse_count(value, where);
    else if (key == "samples") c.samples = parse_count(value, where);
    else throw Error(ErrorKind::config, where + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

AnalyticSystem resolve_system(const ExperimentConfig& config) {
  AnalyticSystem sys = config.system_text.empty() ? system_by_name(config.system)
                                                  : system_from_config(config.system_text);
  validate_parameters(sys);
  return sys;
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  const bool needs_system = task != Task::certify_envelopes || system != "all";
  const bool small = needs_system ? is_small(resolve_system(c)) : true;
  switch (task) {
    case Task::entropy:
    case Task::verify_corollary:
      if (c.eps_ladder.empty())
        c.eps_ladder = small ? std::vector<double>{0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7}
                             : std::vector<double>{0x1p-3, 0x1p-4, 0x1p-5};
      if (!c.grid_g) c.grid_g = small ? 14 : 9;
      if (!c.n_min) c.n_min = small ? 4 : 3;
      if (!c.n_max) c.n_max = small ? 12 : 8;
      break;
    case Task::local_entropy:
    case Task::verify_theorem:
      if (c.eps_ladder.empty())
        c.eps_ladder = small ? std::vector<double>{0x1p-3, 0x1p-4, 0x1p-5}
                             : std::vector<double>{0x1p-2, 0x1p-3, 0x1p-4};
      if (!c.grid_g) c.grid_g = small ? 12 : 10;
      if (!c.n_min) c.n_min = 1;
      if (!c.n_max) c.n_max = 5;
      break;
    case Task::bound_curve:
      if (!c.horizon) c.horizon = 10000;
      break;
    case Task::schedule_report:
      if (!c.horizon) c.horizon = 1000000;
      break;
    case Task::certify_envelopes:
      break;
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0) || !std::isfinite(eps_ladder[i]))
      throw Error(ErrorKind::config, "eps_ladder: entries must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      throw Error(ErrorKind::config, "eps_ladder: must be strictly decreasing");
  }
  const bool rate_task = task == Task::entropy || task == Task::local_entropy ||
                         task == Task::verify_theorem || task == Task::verify_corollary;
  if (rate_task && n_min && n_max && (*n_min < 1 || *n_max < *n_min + 4))
    throw Error(ErrorKind::config, "window: needs 1 <= a and b - a >= 4");
  if ((task == Task::verify_theorem || task == Task::verify_corollary) && !eps_ladder.empty() &&
      eps_ladder.size() < 3)
    throw Error(ErrorKind::config, "eps_ladder: verification needs at least 3 scales");
  if (budget_seconds && !(*budget_seconds > 0.0))
    throw Error(ErrorKind::config, "budget_seconds: must be positive");
  if (grid_g && (*grid_g < 1 || *grid_g > 24)) throw Error(ErrorKind::config, "grid_g: must be in [1, 24]");
  if (N_proxy < 1) throw Error(ErrorKind::config, "N_proxy: must be >= 1");
  if (workers < 0) throw Error(ErrorKind::config, "workers: must be >= 0");
  if (horizon && *horizon < 100) throw Error(ErrorKind::config, "horizon: must be >= 100");
  if (samples < 1) throw Error(ErrorKind::config, "samples: must be >= 1");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "task=" << to_string(task) << "\nsystem=" << system << '\n';
  if (!eps_ladder.empty()) {
    os << "eps=";
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) os << (i ? "," : "") << fmt(eps_ladder[i]);
    os << '\n';
  }
  if (grid_g) os << "grid_g=" << *grid_g << '\n';
  if (n_min && n_max) os << "window=" << *n_min << ',' << *n_max << '\n';
  os << "N_proxy=" << N_proxy << "\ncenters=" << centers << "\ncoarse_per_axis=" << coarse_per_axis
     << "\nseed=" << seed << "\nsamples=" << samples << '\n';
  if (horizon) os << "horizon=" << *horizon << '\n';
  if (budget_seconds) os << "budget_seconds=" << fmt(*budget_seconds) << '\n';
  os << "out=" << output_dir.string() << '\n';
  if (!system_text.empty()) os << "[system]\n" << system_text;
  return os.str();
}

bool RunRecord::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

int RunRecord::exit_code() const { return passed() && !partial ? 0 : 1; }

namespace {

RateOptions rate_options(const ExperimentConfig& c) {
  RateOptions opts;
  if (c.budget_seconds) opts.budget = Budget::seconds(*c.budget_seconds);
  return opts;
}

LocalEntropyOptions local_options(const ExperimentConfig& c) {
  LocalEntropyOptions opts;
  opts.N_proxy = c.N_proxy;
  opts.grid_g = *c.grid_g;
  opts.n_min = *c.n_min;
  opts.n_max = *c.n_max;
  opts.rate = rate_options(c);
  return opts;
}

SamplingPlan sampling_plan(const ExperimentConfig& c) {
  return {c.coarse_per_axis, c.centers, c.seed};
}

std::string plot_script(const std::string& file, const std::string& x, const std::string& y,
                        const std::string& group, bool log_y) {
  std::ostringstream os;
  os << "# columns and axes; any plotting tool can consume this\n"
     << "data " << file << "\nx " << x << "\ny " << y << (log_y ? "\nyscale log" : "\nyscale linear")
     << '\n';
  if (!group.empty()) os << "group " << group << '\n';
  return os.str();
}

LimitFit scale_entropies(const AnalyticSystem& sys, const ExperimentConfig& c) {
  Grid grid(sys.space, *c.grid_g);
  Region region(grid);
  return entropy_limit_fit(sys, region, c.eps_ladder, *c.n_min, *c.n_max, rate_options(c));
}

void run_entropy(const ExperimentConfig& c, RunRecord& rec) {
  AnalyticSystem sys = resolve_system(c);
  LimitFit fit = scale_entropies(sys, c);
  std::string csv = spanning_csv_header();
  std::ostringstream sum;
  sum << std::setprecision(6);
  for (const auto& [eps, est] : fit.ladder) {
    csv += spanning_csv_rows(sys.name, est);
    rec.partial = rec.partial || est.partial;
    sum << "eps " << eps << " rate " << est.value << " +- " << est.half_width << " window ["
        << est.n_min << ',' << est.n_max << ']' << (est.saturated ? " saturated" : "")
        << (est.partial ? " partial" : "") << '\n';
  }
  sum << "estimate " << fit.value();
  if (sys.exact_entropy) sum << " exact " << *sys.exact_entropy;
  sum << '\n';
  rec.files["spanning.csv"] = csv;
  rec.files["plot.txt"] = plot_script("spanning.csv", "n", "r_upper", "eps", true);
  rec.verdicts.push_back({"monotone in eps", fit.monotone, ""});
  rec.summary += sum.str();
}

void run_local_entropy(const ExperimentConfig& c, RunRecord& rec) {
  AnalyticSystem sys = resolve_system(c);
  auto opts = local_options(c);
  std::string csv = local_entropy_csv_header();
  std::ostringstream sum;
  sum << std::setprecision(6);
  for (double eps : c.eps_ladder) {
    LocalEntropyEstimate est = local_entropy_sup(sys, eps, sampling_plan(c), opts);
    csv += local_entropy_csv_rows(sys.name, est);
    std::size_t single = 0;
    for (const auto& pc : est.per_center) {
      single += pc.stabilized && pc.ball_cells == 1;
      rec.partial = rec.partial || pc.estimate.partial;
    }
    sum << "eps " << eps << " local entropy " << est.value << " +- " << est.half_width
        << " single-cell stabilised " << single << '/' << est.per_center.size() << '\n';
  }
  rec.files["local_entropy.csv"] = csv;
  rec.files["plot.txt"] = plot_script("local_entropy.csv", "eps", "rate", "", false);
  rec.summary += sum.str();
}

void run_bound_curve(const ExperimentConfig& c, RunRecord& rec) {
  BoundSchedule sched = make_schedule(resolve_system(c));
  rec.files["bound_curve.csv"] = bound_curve_csv(sched, *c.horizon);
  rec.files["plot.txt"] = plot_script("bound_curve.csv", "log_t", "a", "", false);
  bool nonincreasing = true;
  for (std::size_t n = 2; n <= *c.horizon; ++n)
    nonincreasing = nonincreasing && a_at(sched, n) <= a_at(sched, n - 1);
  rec.verdicts.push_back({"a nonincreasing", nonincreasing, ""});
  rec.verdicts.push_back({"large-n threshold", sched.N_threshold != 0,
                          "N=" + std::to_string(sched.N_threshold)});
  rec.summary += "C0 " + fmt(sched.C0) + "\nN " + std::to_string(sched.N_threshold) + '\n';
}

void run_schedule_report(const ExperimentConfig& c, RunRecord& rec) {
  BoundSchedule sched = make_schedule(resolve_system(c));
  ScheduleReport rep = schedule_conditions_check(sched, *c.horizon);
  ThresholdReport th = large_n_threshold(sched);
  std::string text = schedule_report_text(sched, rep, th);
  rec.files["schedule.txt"] = text;
  rec.verdicts.push_back({"schedule conditions", rep.pass, ""});
  rec.verdicts.push_back({"large-n monotone", th.monotone, "N=" + std::to_string(th.threshold)});
  double decay = a_at(sched, *c.horizon) / a_at(sched, 10);
  rec.verdicts.push_back({"a decay", decay < 0.2, "a(delta(horizon))/a(delta(10)) = " + fmt(decay)});
  rec.summary += text;
}

void run_certify(const ExperimentConfig& c, RunRecord& rec) {
  std::vector<AnalyticSystem> systems;
  if (c.system == "all" && c.system_text.empty()) {
    for (const char* name : {"identity", "doubling", "rotation", "trig:0.05", "cat", "logistic"})
      systems.push_back(system_by_name(name));
  } else {
    systems.push_back(resolve_system(c));
  }
  std::ostringstream csv;
  csv << std::setprecision(17) << "system,checks,violations,worst_log_margin\n";
  for (const auto& sys : systems) {
    EnvelopeReport rep = certify_envelope(sys, 6, 5, c.samples, c.seed);
    csv << sys.name << ',' << rep.checks << ',' << rep.violations << ',' << rep.worst_log_margin
        << '\n';
    rec.verdicts.push_back({"envelope " + sys.name, rep.violations == 0,
                            std::to_string(rep.violations) + " of " + std::to_string(rep.checks)});
  }
  rec.files["envelope.csv"] = csv.str();
}

ShapeCheck anchored_check(const std::vector<double>& eps, const std::vector<double>& measured,
                          const std::vector<double>& half_width, const BoundSchedule& sched) {
  ShapeCheck out;
  const double a0 = a_of_t(sched, eps[0]);
  out.C = std::max(0.0, measured[0]) / a0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    ShapeRow row;
    row.eps = eps[i];
    row.measured = measured[i];
    row.a = a_of_t(sched, eps[i]);
    row.bound = out.C * row.a;
    row.slack = half_width[i] + half_width[0] * row.a / a0;
    row.pass = row.measured <= row.bound + row.slack + 1e-12;
    out.pass = out.pass && row.pass;
    out.rows.push_back(row);
  }
  return out;
}

void run_shape(const ExperimentConfig& c, RunRecord& rec, bool theorem) {
  ShapeCheck check = theorem ? verify_theorem(c) : verify_corollary(c);
  rec.partial = rec.partial || check.partial;
  std::string file = theorem ? "theorem.csv" : "corollary.csv";
  std::ostringstream csv;
  csv << std::setprecision(17) << "eps,measured,a,bound,slack,pass\n";
  for (const auto& r : check.rows)
    csv << r.eps << ',' << r.measured << ',' << r.a << ',' << r.bound << ',' << r.slack << ','
        << (r.pass ? 1 : 0) << '\n';
  rec.files[file] = csv.str();
  rec.files["plot.txt"] = plot_script(file, "eps", "measured,bound", "", false);
  rec.verdicts.push_back({theorem ? "local entropy <= C a(eps)" : "entropy gap <= C a(eps)",
                          check.pass, "C=" + fmt(check.C)});
  rec.summary += check.table();
}

}  // namespace

std::string ShapeCheck::table() const {
  std::ostringstream os;
  os << std::setprecision(6) << "C " << C << '\n'
     << std::setw(12) << "eps" << std::setw(14) << "measured" << std::setw(12) << "a"
     << std::setw(14) << "C*a" << std::setw(12) << "slack" << "  verdict\n";
  for (const auto& r : rows)
    os << std::setw(12) << r.eps << std::setw(14) << r.measured << std::setw(12) << r.a
       << std::setw(14) << r.bound << std::setw(12) << r.slack << "  " << (r.pass ? "ok" : "FAIL")
       << '\n';
  return os.str();
}

ShapeCheck verify_theorem(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.task = Task::verify_theorem;
  c = c.resolved();
  AnalyticSystem sys = resolve_system(c);
  BoundSchedule sched = make_schedule(sys);
  auto opts = local_options(c);
  std::vector<double> measured, hw;
  bool partial = false;
  for (double eps : c.eps_ladder) {
    LocalEntropyEstimate est = local_entropy_sup(sys, eps, sampling_plan(c), opts);
    measured.push_back(est.value);
    hw.push_back(est.half_width);
    for (const auto& pc : est.per_center) partial = partial || pc.estimate.partial;
  }
  ShapeCheck out = anchored_check(c.eps_ladder, measured, hw, sched);
  out.partial = partial;
  return out;
}

ShapeCheck verify_corollary(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.task = Task::verify_corollary;
  c = c.resolved();
  AnalyticSystem sys = resolve_system(c);
  BoundSchedule sched = make_schedule(sys);
  LimitFit fit = scale_entropies(sys, c);
  const double h = sys.exact_entropy ? *sys.exact_entropy : fit.value();
  std::vector<double> gap, hw;
  bool partial = false;
  for (const auto& [eps, est] : fit.ladder) {
    gap.push_back(h - est.value);
    hw.push_back(est.half_width);
    partial = partial || est.partial;
  }
  ShapeCheck out = anchored_check(c.eps_ladder, gap, hw, sched);
  out.partial = partial;
  return out;
}

RunRecord run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = config.resolved();
#ifdef _OPENMP
  if (c.workers > 0) omp_set_num_threads(c.workers);
#endif
  RunRecord rec;
  rec.config = c.to_text();
  rec.summary = "entropia " + std::string(kVersion) + " " + to_string(c.task) + " " + c.system + "\n";
  switch (c.task) {
    case Task::entropy: run_entropy(c, rec); break;
    case Task::local_entropy: run_local_entropy(c, rec); break;
    case Task::bound_curve: run_bound_curve(c, rec); break;
    case Task::verify_theorem: run_shape(c, rec, true); break;
    case Task::verify_corollary: run_shape(c, rec, false); break;
    case Task::certify_envelopes: run_certify(c, rec); break;
    case Task::schedule_report: run_schedule_report(c, rec); break;
  }
  if (rec.partial) rec.verdicts.push_back({"budget", false, "wall-clock budget exhausted; results partial"});
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream tail;
  for (const auto& v : rec.verdicts)
    tail << (v.pass ? "PASS " : "FAIL ") << v.name << (v.detail.empty() ? "" : ": " + v.detail) << '\n';
  tail << "wall " << std::setprecision(3) << rec.wall_seconds << " s\n";
  rec.summary += tail.str();
  return rec;
}

void write_outputs(const RunRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::config, "cannot write " + (dir / name).string());
    out << body;
  };
  for (const auto& [name, body] : record.files) put(name, body);
  put("config.txt", record.config + "version=" + record.version + "\n");
  put("summary.txt", record.summary);
}

}  // namespace entropia
