#pragma once

#include "entropia/system.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace entropia {

struct CircleMapKind {
  enum class Kind { doubling, rotation, trig };
  Kind kind = Kind::doubling;
  double param = 0.0;  // rotation angle or trig amplitude

  static CircleMapKind doubling() { return {Kind::doubling, 0.0}; }
  static CircleMapKind rotation(double alpha) { return {Kind::rotation, alpha}; }
  static CircleMapKind trig(double c) { return {Kind::trig, c}; }
};

using IntMatrix2 = std::array<std::array<long, 2>, 2>;

/// Lipschitz bound used for isometries; must stay strictly above 1.
inline constexpr double kIsometryL0 = 1.0 + 1e-9;

AnalyticSystem make_identity(std::size_t m = 1);
AnalyticSystem make_circle_map(CircleMapKind kind);
AnalyticSystem make_toral_automorphism(const IntMatrix2& a);
AnalyticSystem make_logistic();
inline AnalyticSystem make_cat_map() { return make_toral_automorphism({{{2, 1}, {1, 1}}}); }

/// Mapping torus of `base` sampled by the time-1/i map of the vertical flow.
///
/// Carrier: [0,1) x base space, vertical coordinate first, with (1, x) glued to
/// (0, f(x)). Fibre distances at height t are weighted by L^t (L = base L0),
/// which is the weighting that makes the glue an isometry for conformal
/// expanding bases; distances across the seam take the shorter of the direct
/// and glued routes (both glued routes when the base is invertible).
struct SuspensionSystem {
  AnalyticSystem base;
  std::size_t i = 1;
  /// The time-1/i map as a system on the carrier.
  AnalyticSystem step_map;
  /// Empirical sup |D psi^{1/i}| measured when i was chosen.
  double measured_sup = 0.0;

  /// psi^1 = (psi^{1/i})^i; on the section t = 0 it reproduces the base map.
  AnalyticSystem time_one() const;
};

SuspensionSystem make_suspension(const AnalyticSystem& base, std::size_t i);

/// Empirical sup |D psi^{1/i}| from finite differences on `samples` random pairs.
double suspension_step_norm(const AnalyticSystem& base, std::size_t i, std::size_t samples,
                            std::uint64_t seed);

/// Smallest i <= 10^6 whose time-1/i map has empirical derivative norm below L0_target.
SuspensionSystem suspend(const AnalyticSystem& base, double L0_target,
                         std::size_t samples = 10000, std::uint64_t seed = 7);

inline constexpr double kGoldenAngle = 0.6180339887498949;

/// "doubling", "rotation[:alpha]" (golden-mean angle by default), "cat", "logistic", "trig:0.05", "identity",
/// "toral:a,b,c,d", "suspend:<base>:<L0_target>".
AnalyticSystem system_by_name(std::string_view name);
SuspensionSystem suspension_by_name(std::string_view name);

/// Builds a system from key=value text: kind plus its parameters (alpha, c,
/// matrix) and optional overrides of L0, rho, M0 and name.
AnalyticSystem system_from_config(std::string_view text);

}  // namespace entropia
