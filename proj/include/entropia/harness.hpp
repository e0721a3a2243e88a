#pragma once

#include "entropia/bounds.hpp"
#include "entropia/covering.hpp"
#include "entropia/local_entropy.hpp"
#include "entropia/zoo.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entropia {

inline constexpr const char* kVersion = "0.3.0";

enum class Task {
  entropy,
  local_entropy,
  bound_curve,
  verify_theorem,
  verify_corollary,
  certify_envelopes,
  schedule_report
};

std::string to_string(Task task);
/// Throws ErrorKind::config for unknown names.
Task task_from_string(std::string_view name);

/// Unset optionals take per-task, per-dimension defaults (see resolve()).
struct ExperimentConfig {
  Task task = Task::entropy;
  std::string system = "doubling";
  /// Key=value system description; overrides `system` when non-empty.
  std::string system_text;
  std::vector<double> eps_ladder;
  std::optional<unsigned> grid_g;
  std::optional<std::size_t> n_min;
  std::optional<std::size_t> n_max;
  std::size_t N_proxy = 20;
  /// Halton centres on top of a coarse lattice with `coarse_per_axis` nodes per axis.
  std::size_t centers = 256;
  std::size_t coarse_per_axis = 4;
  std::optional<double> budget_seconds;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "entropia-out";
  int workers = 0;
  /// Last n of bound curves and schedule sweeps.
  std::optional<std::size_t> horizon;
  /// Envelope certification samples per system.
  std::size_t samples = 1000;

  /// Fills unset fields from the task and system; validates the result.
  ExperimentConfig resolved() const;
  void validate() const;
  std::string to_text() const;
};

/// key=value lines with optional [section] headers. Keys of a [system] section
/// are collected into system_text. Errors name the offending line.
ExperimentConfig parse_config(std::string_view text);

/// Comma list of reals or powers written 2^k. `where` prefixes errors.
std::vector<double> parse_eps_ladder(const std::string& text, const std::string& where);
/// "a,b".
std::pair<std::size_t, std::size_t> parse_window(const std::string& text, const std::string& where);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunRecord {
  std::string config;
  std::string version = kVersion;
  double wall_seconds = 0.0;
  /// File name -> payload.
  std::map<std::string, std::string> files;
  std::vector<Verdict> verdicts;
  bool partial = false;
  std::string summary;

  bool passed() const;
  /// 0 when every verdict passes and the run was not truncated, else 1.
  int exit_code() const;
};

AnalyticSystem resolve_system(const ExperimentConfig& config);

RunRecord run(const ExperimentConfig& config);

struct ShapeRow {
  double eps = 0.0;
  double measured = 0.0;
  double a = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct ShapeCheck {
  double C = 0.0;
  std::vector<ShapeRow> rows;
  bool pass = true;
  bool partial = false;
  std::string table() const;
};

/// Local entropy at each eps against C a(eps), C anchored at the largest eps.
ShapeCheck verify_theorem(const ExperimentConfig& config);
/// h(f) - h(f, eps) against C a(eps) with the same anchoring.
ShapeCheck verify_corollary(const ExperimentConfig& config);

/// Writes every payload plus summary.txt into config.output_dir.
void write_outputs(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace entropia
