#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsqmc/quadfield.hpp"

namespace lsqmc {

/// One (L, S) pair: each longest interval splits into L pieces of length
/// beta and S pieces of length beta^2, with L*beta + S*beta^2 = 1.
class LSParams {
 public:
  /// Throws InvalidParams unless L >= 1 and L + S >= 2.
  LSParams(std::uint32_t L, std::uint32_t S);

  std::uint32_t L() const noexcept { return L_; }
  std::uint32_t S() const noexcept { return S_; }
  /// L^2 + 4S.
  std::int64_t discriminant() const noexcept { return discriminant_; }
  const QuadExact& beta() const noexcept { return beta_; }
  /// 1/beta = (L + sqrt(L^2 + 4S)) / 2, an algebraic integer.
  QuadExact inverse_beta() const;
  QuadExact sqrt_discriminant() const { return QuadExact::sqrt_of(discriminant_); }

  /// "L,S"
  std::string to_string() const;

  friend bool operator==(const LSParams& lhs, const LSParams& rhs) noexcept {
    return lhs.L_ == rhs.L_ && lhs.S_ == rhs.S_;
  }

 private:
  std::uint32_t L_;
  std::uint32_t S_;
  std::int64_t discriminant_;
  QuadExact beta_;
};

/// Interval counts after n refinement steps: total, long and short.
struct CountsRow {
  BigInt total;
  BigInt longs;
  BigInt shorts;
};

struct CountsTable {
  LSParams params;
  std::vector<CountsRow> rows;  // rows[n] for n = 0..n_max
};

/// Counts for 0..n_max from the three linear recurrences.
CountsTable counts(const LSParams& params, unsigned n_max);

/// Coefficients of the closed forms
///   t_n = tau0 beta^-n + tau1 (-S beta)^n, and likewise lambda for l_n and
///   sigma for s_n.
struct RecurrenceConstants {
  QuadExact tau0, tau1;
  QuadExact lambda0, lambda1;
  QuadExact sigma0, sigma1;
};

/// Requires S >= 1 (UnsupportedParams otherwise).
RecurrenceConstants recurrence_constants(const LSParams& params);

struct ExplicitCounts {
  QuadExact total;
  QuadExact longs;
  QuadExact shorts;
};

/// Closed-form evaluation of (t_n, l_n, s_n); every entry is an integer.
/// Requires S >= 1.
ExplicitCounts explicit_counts(const LSParams& params, unsigned n);

/// Checks t_{n+1} = t_n + (L+S-1) l_n and l_{n+1} = t_n + (L-1) l_n for
/// 0 <= n < n_max.
bool mixed_recurrence_check(const LSParams& params, unsigned n_max);

/// True iff L^2 + 4S is not a perfect square.
bool beta_is_irrational(const LSParams& params);

/// One position of the digit expansion N = sum(eps_i t_i + eta_i l_i).
struct Digit {
  std::uint32_t epsilon = 0;
  std::uint32_t eta = 0;

  friend bool operator==(const Digit&, const Digit&) = default;
};

/// Digit expansion of a positive index; digits()[i] is the pair at level i.
/// A DigitString may be constructed in an invalid state so that decode() can
/// report which constraint fails; violation() describes it.
class DigitString {
 public:
  DigitString(LSParams params, std::vector<Digit> digits);

  const LSParams& params() const noexcept { return params_; }
  const std::vector<Digit>& digits() const noexcept { return digits_; }
  /// Highest level n (digits().size() - 1).
  unsigned top_level() const noexcept { return static_cast<unsigned>(digits_.size()) - 1; }

  /// Empty when all constraints hold, otherwise a description of the first
  /// violated one:
  ///   eps in {0,1}, leading eps = 1, 0 <= eta <= L+S-2, eps = 0 => eta = 0,
  ///   eps_i = 1 and eta_i >= L-1 => eps_{i+1} = 0.
  std::optional<std::string> violation() const;

  /// "i:(eps,eta);..." listing levels with eps = 1, most significant first.
  std::string to_string() const;
  /// Inverse of to_string(); levels not listed are (0,0).
  static DigitString parse(std::string_view text, const LSParams& params);

  friend bool operator==(const DigitString& lhs, const DigitString& rhs) {
    return lhs.params_ == rhs.params_ && lhs.digits_ == rhs.digits_;
  }

 private:
  LSParams params_;
  std::vector<Digit> digits_;
};

/// Psi(D) = sum(eps_i t_i + eta_i l_i). Throws InvalidDigits if any
/// constraint fails.
BigInt decode(const DigitString& digits);

/// Random-access evaluator for the one-dimensional LS-sequence of points.
///
/// Holds precomputed 64-bit count rows (up to the first level whose total
/// overflows) and powers of beta. Copies share the tables; all methods are
/// const and safe to call concurrently.
class LSSequence {
 public:
  explicit LSSequence(LSParams params);

  const LSParams& params() const noexcept;

  /// Number of levels n for which t_n fits in 64 bits.
  unsigned small_levels() const noexcept;
  /// t_n, l_n as 64-bit values; IndexOutOfRange beyond small_levels().
  std::uint64_t total(unsigned n) const;
  std::uint64_t longs(unsigned n) const;
  /// beta^e for 0 <= e <= small_levels() + 2.
  const QuadExact& beta_power(unsigned e) const;
  double beta_power_double(unsigned e) const;

  /// Memoized arbitrary-precision counts for 0..n_max.
  CountsTable counts(unsigned n_max) const;

  /// Greedy digit expansion of N >= 1 (N = 0 throws InvalidDigits).
  DigitString encode(std::uint64_t index) const;
  /// The n with t_n <= N < t_{n+1}; N must be positive.
  unsigned top_level(std::uint64_t index) const;

  /// xi^N = sum_i beta^{i+1} min(L, eps_i+eta_i) + beta^{i+2} max(eps_i+eta_i-L, 0).
  /// xi^0 = 0.
  QuadExact point(std::uint64_t index) const;
  /// Same sum in binary64.
  double point_double(std::uint64_t index) const;

  /// sum_{i<level}(eps_i t_i + eta_i l_i), the low-order truncation of the
  /// expansion of N (0 for N = 0). Integer arithmetic only.
  std::uint64_t truncate(std::uint64_t index, unsigned level) const;

 private:
  struct Tables;
  std::shared_ptr<const Tables> tables_;
};

struct PartitionInterval {
  QuadExact left;
  /// The interval has length beta^exponent (exponent is n or n+1 at level n).
  unsigned exponent;
};

struct PartitionOracle {
  /// Sorted intervals of the level-n partition.
  std::vector<PartitionInterval> intervals;
  /// Left endpoints in order of first appearance across levels 0..n.
  std::vector<QuadExact> first_appearance;
};

inline constexpr std::uint64_t kDefaultPartitionCap = std::uint64_t{1} << 22;

/// Builds the level-n partition by successive refinement, independent of the
/// digit expansion. Each long interval [x, x + beta^j) splits into left
/// endpoints x + i beta^{j+1} (0 <= i < L) and x + L beta^{j+1} + s beta^{j+2}
/// (0 <= s < S); the new endpoints are appended block by block, with blocks
/// ordered by displacement and, inside a block, by first appearance of the
/// long interval's anchor. Throws ResourceLimit if t_n exceeds cap.
PartitionOracle partition_oracle(const LSParams& params, unsigned n,
                                 std::uint64_t cap = kDefaultPartitionCap);

/// phi_b(N) = sum n_i b^{-i-1} (van der Corput), as an exact rational.
QuadExact radical_inverse(std::uint64_t index, std::uint32_t base);
double radical_inverse_double(std::uint64_t index, std::uint32_t base);

}  // namespace lsqmc
