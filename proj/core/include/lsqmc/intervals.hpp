#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lsqmc/lscore.hpp"
#include "lsqmc/quadfield.hpp"

namespace lsqmc {

/// I_x^(k) = [xi^x, xi^x + beta^k), the level-k interval anchored at the
/// x-th point. Only anchors x < l_k are valid; the counting formulas do not
/// hold for l_k <= x < t_k.
class ElementaryInterval {
 public:
  /// Throws InvalidAnchor when anchor >= l_level.
  ElementaryInterval(LSSequence sequence, unsigned level, std::uint64_t anchor);

  const LSSequence& sequence() const noexcept { return sequence_; }
  unsigned level() const noexcept { return level_; }
  std::uint64_t anchor() const noexcept { return anchor_; }

  QuadExact left() const { return sequence_.point(anchor_); }
  QuadExact width() const { return sequence_.beta_power(level_); }
  QuadExact right() const { return left() + width(); }

 private:
  LSSequence sequence_;
  unsigned level_;
  std::uint64_t anchor_;
};

/// xi^N in I via digit truncation (integer arithmetic only).
bool contains(const ElementaryInterval& iv, std::uint64_t index);

/// xi^N in I via exact comparisons of point values. Independent of the digit
/// truncation test; used to cross-check it.
bool contains_geometric(const ElementaryInterval& iv, std::uint64_t index);

/// #{m <= N : xi^m in I} from the shifted-digit formula. Requires
/// contains(iv, N); throws NotInInterval otherwise.
std::uint64_t count_in_interval(const ElementaryInterval& iv, std::uint64_t index);

/// #{m <= N : xi^m in I} for any N by scanning m = 0..N.
std::uint64_t count_in_interval_brute(const ElementaryInterval& iv, std::uint64_t index);

/// N = x + A t_k + B l_k with count = 1 + A + B.
struct ABDecomposition {
  std::uint64_t a;
  std::uint64_t b;
  std::uint64_t count;
};

/// Reduces the digits above level k onto (t_k, l_k) using the recurrences.
/// Requires contains(iv, N).
ABDecomposition ab_decompose(const ElementaryInterval& iv, std::uint64_t index);

/// Which power multiplies R in the local discrepancy identity.
enum class RemainderFactor {
  /// 1 - (-S beta^2)^k: the factor that makes the identity exact.
  kSquaredBeta,
  /// 1 - (-S beta)^k: kept to demonstrate that it does not satisfy the identity.
  kLinearBeta,
};

struct LocalDiscrepancy {
  unsigned level;
  std::uint64_t anchor;
  std::uint64_t index;
  std::uint64_t count;
  /// sum_{i=k}^{n} (eps_i tau1 + eta_i lambda1) (-S beta)^{i-k}
  QuadExact remainder;
  /// beta^k + (R (1 - (-S beta^2)^k) + 1 - x beta^k) / N
  QuadExact ratio_exact;
  /// count / N
  QuadExact ratio_count;
  /// Geometric-sum bound on |R|.
  QuadExact bound;
  bool identity_holds;
  bool bound_holds;
};

/// Requires contains(iv, N), N >= 1 and S >= 1.
LocalDiscrepancy local_discrepancy(const ElementaryInterval& iv, std::uint64_t index);

/// Right-hand side of the identity with the chosen factor; used to compare the
/// two variants.
QuadExact local_ratio(const ElementaryInterval& iv, std::uint64_t index, const QuadExact& remainder,
                      RemainderFactor factor);

/// max{|tau1|, |tau1 + (L+S-2) lambda1|}, the per-digit bound on R's terms.
QuadExact remainder_digit_bound(const LSParams& params);

/// One member case of an interval sweep.
struct SweepRow {
  unsigned level;
  std::uint64_t anchor;
  std::uint64_t index;
  std::uint64_t count;          // brute force
  std::uint64_t formula_count;  // shifted-digit formula
  bool match;
};

/// Every (k, x, N) with k <= max_level, x < l_k, N <= max_index and xi^N in
/// I_x^(k). Counts are compared between the formula and a running brute count.
std::vector<SweepRow> sweep(const LSSequence& sequence, unsigned max_level,
                            std::uint64_t max_index);

/// CSV with header "params,k,x,N,count,formula_count,match".
void write_sweep_csv(std::ostream& os, const LSParams& params, const std::vector<SweepRow>& rows);

}  // namespace lsqmc
