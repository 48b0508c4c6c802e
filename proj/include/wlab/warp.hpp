#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identifies one manifold of the family: circle-factor decay exponent and
/// sphere-factor dimension plus one.
struct WarpParams {
  double alpha = 1.0;
  int p = 2;

  WarpParams() = default;
  WarpParams(double alpha, int p);

  /// Dimension excess of the singular orbit: beta = 2 alpha.
  double beta() const { return 2.0 * alpha; }
  /// Growth exponent 1/(1+2 alpha) of cover distances.
  double growth_exponent() const { return 1.0 / (1.0 + 2.0 * alpha); }
};

/// f, h and their first two derivatives at one radius.
struct WarpEval {
  double r = 0.0;
  double f = 0.0, f1 = 0.0, f2 = 0.0;
  double h = 0.0, h1 = 0.0, h2 = 0.0;
};

// f(r) = r (1+r^2)^(-1/4),  h(r) = (1+r^2)^(-alpha).
WarpEval eval_profiles(const WarpParams& params, double r);

/// h extended evenly to all of R.
double warp_h(double alpha, double r);
double warp_h1(double alpha, double r);
double warp_h2(double alpha, double r);

/// h(r_ref - gap) - h(r_ref) without cancellation; gap may be any real with
/// the usual convention r = r_ref - gap.
double warp_h_rise(double alpha, double r_ref, double gap);
/// Same with r_ref = r_lo + top kept as an unevaluated sum, so that top and
/// gap may lie far below the resolution of r_lo.
double warp_h_rise(double alpha, double r_lo, double top, double gap);

/// 1 - f'(r)^2, accurate as r -> 0 where it behaves like 3 r^2 / 2.
double one_minus_f1_squared(double r);

/// Length 2 pi h(r) of the circle fiber at radius r.
double circle_length(const WarpParams& params, double r);

}  // namespace wlab
