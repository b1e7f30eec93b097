#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsqmc/intervals.hpp"
#include "lsqmc/lscore.hpp"
#include "lsqmc/quadfield.hpp"

namespace lsqmc {

/// Ordered tuple of (L, S) pairs; coordinate i of point N is the N-th point of
/// the one-dimensional sequence with parameters i.
class MultiBase {
 public:
  /// Throws InvalidParams when empty.
  explicit MultiBase(std::vector<LSParams> params);

  std::size_t dimension() const noexcept { return components_.size(); }
  const LSParams& params(std::size_t i) const { return components_.at(i).params(); }
  const LSSequence& component(std::size_t i) const { return components_.at(i); }

  /// "L1,S1;L2,S2;..."
  std::string to_string() const;

 private:
  std::vector<LSSequence> components_;
};

/// Exact coordinates of point N.
std::vector<QuadExact> multi_point(std::uint64_t index, const MultiBase& base);
std::vector<double> multi_point_double(std::uint64_t index, const MultiBase& base);

/// beta1^{k+1} / beta2^{m+1} = p / q with p, q coprime and positive.
struct PowerRelation {
  unsigned k;
  unsigned m;
  BigInt p;
  BigInt q;

  friend bool operator==(const PowerRelation&, const PowerRelation&) = default;
};

/// True iff beta1^{k+1} q = beta2^{m+1} p holds exactly.
bool relation_holds(const LSParams& first, const LSParams& second, const PowerRelation& rel);

/// Bounded search over 1 <= k+1, m+1 <= max_exp for a rational ratio of beta
/// powers. Returns the relation with the smallest k + m (then smallest k), or
/// nothing. Distinct squarefree radicands short-circuit to nothing. Requires
/// S >= 1 for both parameters (UnsupportedParams otherwise).
std::optional<PowerRelation> detect_relation(const LSParams& first, const LSParams& second,
                                             unsigned max_exp);

/// The relation at fixed exponents, if beta1^{k+1} / beta2^{m+1} is rational.
/// Throws FieldMismatch when the betas lie in different fields.
std::optional<PowerRelation> relation_at(const LSParams& first, const LSParams& second,
                                         unsigned k, unsigned m);

/// The 2D sub-base on coordinates (dims.first, dims.second).
MultiBase project(const MultiBase& base, std::pair<std::size_t, std::size_t> dims);

enum class CertificateKind { kPowerRelation, kCommonDivisor };

/// One side [lo, hi) of a certified box. For power-relation certificates the
/// side is the elementary interval I_anchor^(level).
struct BoxSide {
  QuadExact lo;
  QuadExact hi;
  std::optional<unsigned> level;
  std::optional<std::uint64_t> anchor;
};

/// Threshold test |S beta|^j < bound for one coordinate.
struct Threshold {
  QuadExact c;          // c1 or c2
  QuadExact bound;      // right-hand side; 0 when c = 0
  unsigned extra_levels;  // k~ or m~
};

/// A box the 2D sequence never enters, with every constant needed to check the
/// argument independently.
struct GapCertificate {
  GapCertificate(CertificateKind k, MultiBase b) : kind(k), base(std::move(b)) {}

  CertificateKind kind;
  MultiBase base;
  /// Coordinates of the original base when this certificate came from a
  /// projection of a higher-dimensional one.
  std::optional<std::pair<std::size_t, std::size_t>> projection;

  // Power-relation certificates.
  std::optional<PowerRelation> relation;
  std::uint64_t x1 = 0;
  std::uint64_t x2 = 0;
  QuadExact epsilon;
  std::optional<Threshold> first;
  std::optional<Threshold> second;

  // Common-divisor certificates.
  std::uint32_t divisor = 0;

  BoxSide side1;
  BoxSide side2;

  /// Exact area when both sides lie in one field; empty otherwise.
  std::optional<QuadExact> exact_area() const;
  double area() const;
};

/// Requires L_i > S_i - 1 >= 0 for both components, a valid relation, anchors
/// x1 < l_k(1), x2 < l_m(2) and x1 != x2 (HypothesisViolated otherwise), and
/// both betas in one quadratic field (FieldMismatch).
GapCertificate build_power_relation_certificate(const MultiBase& base, const PowerRelation& relation,
                                                std::uint64_t x1, std::uint64_t x2);

/// Same with the default anchors: (1, 0) if valid, else (0, 1).
GapCertificate build_power_relation_certificate(const MultiBase& base,
                                                const PowerRelation& relation);

/// Box [0, beta1) x [beta2, 2 beta2) for gcd(L1, S1, L2, S2) = b >= 2.
GapCertificate build_common_divisor_certificate(const MultiBase& base);

/// gcd(L1, S1, L2, S2).
std::uint32_t common_divisor(const LSParams& first, const LSParams& second);

/// True iff |S beta|^extra_levels < threshold.bound, or c = 0. The stored
/// extra_levels is the smallest value for which this holds.
bool threshold_satisfied(const LSParams& params, const Threshold& threshold, unsigned extra_levels);

struct VerifyResult {
  std::uint64_t n_max;
  std::uint64_t hits;
  std::optional<std::uint64_t> first_hit;
};

/// Scans N = 0..n_max for points inside the certified box. Power-relation
/// boxes use the digit truncation test; common-divisor boxes compare exact
/// point values. Work is split across `threads` workers; totals do not depend
/// on the split.
VerifyResult verify_empty(const GapCertificate& cert, std::uint64_t n_max, unsigned threads = 1);

/// Same scan for an arbitrary product of two elementary intervals.
VerifyResult count_box_hits(const ElementaryInterval& first, const ElementaryInterval& second,
                            std::uint64_t n_max, unsigned threads = 1);

/// Certificate JSON (kind, parameters, relation, epsilon, c1, c2, k_tilde,
/// m_tilde, box, verification).
std::string certificate_json(const GapCertificate& cert, const std::optional<VerifyResult>& verify);

}  // namespace lsqmc
