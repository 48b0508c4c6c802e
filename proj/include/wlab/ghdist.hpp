#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace wlab {

/// A finite metric space stored as a dense row-major distance matrix.
class FiniteMetricSpace {
 public:
  /// Validates symmetry, zero diagonal, nonnegativity and the triangle
  /// inequality (slack 1e-9 * (1 + diameter)); throws PreconditionError.
  FiniteMetricSpace(std::size_t n, std::vector<double> d);
  static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double diameter() const { return diam_; }

 private:
  std::size_t n_;
  std::vector<double> d_;
  double diam_ = 0.0;
};

/// Index pairs (i in A, j in B).
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  static Correspondence identity(std::size_t n);
  Correspondence transpose() const;
};

/// Throws PreconditionError unless every point of A and of B appears in a pair.
void validate(const Correspondence& corr, const FiniteMetricSpace& A, const FiniteMetricSpace& B);

/// max |d_A(i, i') - d_B(j, j')| over pairs of pairs.
double correspondence_distortion(const FiniteMetricSpace& A, const FiniteMetricSpace& B,
                                 const Correspondence& corr);

struct GhBound {
  double value = 0.0;
  std::string method;  // "exhaustive" or "local-search"
  std::uint64_t seed = 0;
  std::int64_t evaluated = 0;
};

/// Half the smallest distortion over the bijections explored: every
/// permutation for n <= 8, otherwise `budget` seeded swap moves from the
/// identity. Requires |A| = |B|.
GhBound gh_upper_bijection(const FiniteMetricSpace& A, const FiniteMetricSpace& B, std::int64_t budget = 20000,
                           std::uint64_t seed = 1);

/// |diam A - diam B| / 2.
double gh_lower_diam(const FiniteMetricSpace& A, const FiniteMetricSpace& B);

struct GhReport {
  std::size_t n_A = 0, n_B = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  std::uint64_t seed = 0;
};

GhReport compare(const FiniteMetricSpace& A, const FiniteMetricSpace& B, std::int64_t budget = 20000,
                 std::uint64_t seed = 1);

nlohmann::json to_json(const GhReport& report);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Portable
/// across standard libraries, unlike std::uniform_real_distribution.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace wlab
