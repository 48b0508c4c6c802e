#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wlab/warp.hpp"

namespace wlab {

/// Ricci curvature in the radial (H), sphere (U) and circle (V) unit
/// directions. Off-diagonal terms vanish for a doubly warped product.
struct RicciDiag {
  double r = 0.0;
  double ric_H = 0.0;
  double ric_U = 0.0;
  double ric_V = 0.0;
};

RicciDiag ricci_diag(const WarpParams& params, double r);

/// r -> 0+ limits from the Taylor coefficients of f and h at the axis.
RicciDiag limit_at_origin(const WarpParams& params);

/// Least integer p >= max(4a+3, 16a^2+8a+1) (and >= 2).
int dimension_threshold(double alpha);

/// Right-hand sides of the two displayed lower bounds at radius r.
double ric_H_lower_bound(const WarpParams& params, double r);
double ric_V_lower_bound(const WarpParams& params, double r);

struct ComponentMin {
  double value = 0.0;
  double argmin_r = 0.0;
};

struct PositivityReport {
  WarpParams params;
  std::string grid_spec;
  std::size_t grid_size = 0;
  ComponentMin min_H, min_U, min_V;
  bool all_positive = false;
  bool bound_H_holds = false;
  bool bound_V_holds = false;
  bool threshold_met = false;
  // First failing component when not all positive ("" otherwise).
  std::string first_nonpositive;
  bool pass() const { return all_positive && bound_H_holds && bound_V_holds; }
  /// Human-readable verdict. Never claims negativity from a failed threshold.
  std::string verdict() const;
};

PositivityReport positivity_scan(const WarpParams& params, std::span<const double> r_grid,
                                 std::string grid_spec = "custom");

/// n log-spaced points on [lo, hi], inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

nlohmann::json to_json(const PositivityReport& report);

}  // namespace wlab
