#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsqmc/multidim.hpp"

namespace lsqmc {

enum class DiscrepancyMethod { kExact1d, kExact2dGrid };

std::string_view to_string(DiscrepancyMethod method);

/// D*_N with the anchor a of a box [0, a) attaining it. closed[i] marks a
/// right limit: the supremum is approached as a_i decreases to the stored
/// value, i.e. the box side is [0, a_i].
struct DiscrepancyReport {
  std::size_t n;
  double d_star;
  std::vector<double> witness;
  std::vector<bool> closed;
  DiscrepancyMethod method;
};

inline constexpr std::size_t kDefaultExact2dCap = 4096;

/// Sorted-order formula max_i max(i/N - x_(i), x_(i) - (i-1)/N).
/// Throws EmptyInput, or OutOfRange for values outside [0, 1).
DiscrepancyReport star_discrepancy_1d(std::span<const double> points);

/// Critical-grid evaluation, O(N^2). Throws ResourceLimit above `cap`.
DiscrepancyReport star_discrepancy_2d(std::span<const std::array<double, 2>> points,
                                      std::size_t cap = kDefaultExact2dCap);

/// |#{points in box}/N - volume| for the box described by a report's witness.
double local_deviation(std::span<const double> points, double anchor, bool closed);
double local_deviation(std::span<const std::array<double, 2>> points,
                       const std::array<double, 2>& anchor, const std::array<bool, 2>& closed);

/// Separable test integrand with a closed-form integral over [0,1]^d.
struct TestFunction {
  std::string_view id;
  double (*factor)(double);
  double factor_integral;
};

/// "one", "xy" (prod x_i), "sq" (prod x_i^2) or "cos" (prod cos x_i).
/// Throws UnknownFunction.
const TestFunction& test_function(std::string_view id);

/// Source of sample points: an LS base, a Halton sequence, or mt19937_64
/// uniforms.
class PointGenerator {
 public:
  static PointGenerator ls(MultiBase base);
  /// Bases must be at least 2.
  static PointGenerator halton(std::vector<std::uint32_t> bases);
  static PointGenerator uniform(std::size_t dimension, std::uint64_t seed);

  std::size_t dimension() const noexcept { return dimension_; }
  /// "ls(1,1;4,1)", "halton(2,3)", "uniform(seed=7)".
  std::string name() const;
  /// The first n points, row-major (n * dimension values).
  std::vector<double> generate(std::size_t n) const;

 private:
  enum class Kind { kLS, kHalton, kUniform };
  PointGenerator(Kind kind, std::size_t dimension) : kind_(kind), dimension_(dimension) {}

  Kind kind_;
  std::size_t dimension_;
  std::optional<MultiBase> base_;
  std::vector<std::uint32_t> halton_;
  std::uint64_t seed_ = 0;
};

struct QmcResult {
  std::string function;
  std::string generator;
  std::size_t n;
  double estimate;
  double exact;
  double abs_error;
};

/// Sample mean of f over the first n points against the exact integral.
QmcResult qmc_integrate(std::string_view function, const PointGenerator& generator,
                        std::size_t n);

/// "N,d_star,a1,...,ad,method"
void write_report_csv(std::ostream& os, const std::vector<DiscrepancyReport>& reports);
/// "function,generator,N,estimate,error"
void write_qmc_csv(std::ostream& os, const std::vector<QmcResult>& results);

}  // namespace lsqmc
