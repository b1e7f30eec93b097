#include "lsqmc/intervals.hpp"

#include <ostream>
#include <unordered_map>

#include "lsqmc/error.hpp"

namespace lsqmc {

namespace {

using u128 = unsigned __int128;

void require_member(const ElementaryInterval& iv, std::uint64_t index) {
  if (!contains(iv, index)) {
    throw Error(ErrorKind::NotInInterval, "xi^" + std::to_string(index) + " is not in I_" +
                                              std::to_string(iv.anchor()) + "^(" +
                                              std::to_string(iv.level()) + ")");
  }
}

// Digits of N at levels >= k, shifted down so entry j is level j + k.
std::vector<Digit> upper_digits(const ElementaryInterval& iv, std::uint64_t index) {
  if (index == 0) return {};
  const DigitString ds = iv.sequence().encode(index);
  if (ds.top_level() < iv.level()) return {};
  return {ds.digits().begin() + iv.level(), ds.digits().end()};
}

}  // namespace

ElementaryInterval::ElementaryInterval(LSSequence sequence, unsigned level, std::uint64_t anchor)
    : sequence_(std::move(sequence)), level_(level), anchor_(anchor) {
  if (level >= sequence_.small_levels()) {
    throw Error(ErrorKind::IndexOutOfRange, "level " + std::to_string(level) + " too deep");
  }
  if (anchor >= sequence_.longs(level)) {
    throw Error(ErrorKind::InvalidAnchor, "anchor " + std::to_string(anchor) +
                                              " must be below l_" + std::to_string(level) + " = " +
                                              std::to_string(sequence_.longs(level)));
  }
}

bool contains(const ElementaryInterval& iv, std::uint64_t index) {
  return iv.sequence().truncate(index, iv.level()) == iv.anchor();
}

bool contains_geometric(const ElementaryInterval& iv, std::uint64_t index) {
  const QuadExact p = iv.sequence().point(index);
  const QuadExact left = iv.left();
  return left <= p && p < left + iv.width();
}

std::uint64_t count_in_interval(const ElementaryInterval& iv, std::uint64_t index) {
  require_member(iv, index);
  const auto digits = upper_digits(iv, index);
  const LSSequence& seq = iv.sequence();
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < digits.size(); ++j) {
    count += digits[j].epsilon * seq.total(static_cast<unsigned>(j)) +
             std::uint64_t{digits[j].eta} * seq.longs(static_cast<unsigned>(j));
  }
  return count;
}

std::uint64_t count_in_interval_brute(const ElementaryInterval& iv, std::uint64_t index) {
  std::uint64_t count = 0;
  for (std::uint64_t m = 0; m <= index; ++m) {
    if (contains(iv, m)) ++count;
  }
  return count;
}

ABDecomposition ab_decompose(const ElementaryInterval& iv, std::uint64_t index) {
  require_member(iv, index);
  const auto digits = upper_digits(iv, index);
  const LSParams& p = iv.sequence().params();
  std::vector<u128> eps(digits.size()), eta(digits.size());
  for (std::size_t j = 0; j < digits.size(); ++j) {
    eps[j] = digits[j].epsilon;
    eta[j] = digits[j].eta;
  }
  // t_{j} = L t_{j-1} + S t_{j-2} holds for both the absolute (j + k) and the
  // shifted (j) indices, so folding the top coefficient down preserves both
  // sums at once.
  std::size_t top = digits.size();
  while (top > 2) {
    const std::size_t j = top - 1;
    eps[j - 1] += p.L() * eps[j];
    eps[j - 2] += p.S() * eps[j];
    eta[j - 1] += p.L() * eta[j];
    eta[j - 2] += p.S() * eta[j];
    --top;
  }
  u128 a = 0, b = 0;
  if (top == 1) {
    a = eps[0];
    b = eta[0];
  } else if (top == 2) {
    const u128 t1 = p.L() + p.S();
    const u128 l1 = p.L();
    a = eps[0] + eps[1] + eta[1];
    b = eta[0] + eps[1] * (t1 - 1) + eta[1] * (l1 - 1);
  }
  return {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
          static_cast<std::uint64_t>(1 + a + b)};
}

QuadExact remainder_digit_bound(const LSParams& params) {
  const RecurrenceConstants k = recurrence_constants(params);
  const QuadExact top = k.tau1 + k.lambda1 * BigInt(params.L() + params.S() - 2);
  return std::max(k.tau1.abs(), top.abs());
}

QuadExact local_ratio(const ElementaryInterval& iv, std::uint64_t index, const QuadExact& remainder,
                      RemainderFactor factor) {
  if (index == 0) throw Error(ErrorKind::DivisionByZero, "local ratio needs N >= 1");
  const LSParams& p = iv.sequence().params();
  const QuadExact& beta = p.beta();
  const QuadExact base = factor == RemainderFactor::kSquaredBeta
                             ? QuadExact(-static_cast<long>(p.S())) * beta * beta
                             : QuadExact(-static_cast<long>(p.S())) * beta;
  const QuadExact beta_k = iv.width();
  const QuadExact numer = remainder * (QuadExact(1) - base.pow(iv.level())) + QuadExact(1) -
                          beta_k * to_bigint(iv.anchor());
  return beta_k + numer / QuadExact(to_bigint(index));
}

LocalDiscrepancy local_discrepancy(const ElementaryInterval& iv, std::uint64_t index) {
  const LSParams& p = iv.sequence().params();
  if (p.S() == 0) throw Error(ErrorKind::UnsupportedParams, "local discrepancy needs S >= 1");
  if (index == 0) throw Error(ErrorKind::DivisionByZero, "local discrepancy needs N >= 1");
  require_member(iv, index);

  const RecurrenceConstants k = recurrence_constants(p);
  const QuadExact ratio = QuadExact(-static_cast<long>(p.S())) * p.beta();  // -S beta
  const auto digits = upper_digits(iv, index);

  QuadExact remainder(0);
  for (std::size_t j = digits.size(); j-- > 0;) {
    remainder = remainder * ratio + k.tau1 * BigInt(digits[j].epsilon) +
                k.lambda1 * BigInt(digits[j].eta);
  }

  LocalDiscrepancy out;
  out.level = iv.level();
  out.anchor = iv.anchor();
  out.index = index;
  out.count = count_in_interval(iv, index);
  out.remainder = remainder;
  out.ratio_exact = local_ratio(iv, index, remainder, RemainderFactor::kSquaredBeta);
  out.ratio_count = QuadExact::rational(to_bigint(out.count), to_bigint(index));
  out.identity_holds = out.ratio_exact == out.ratio_count;

  // Terms run over levels k..n; there are digits.size() = max(n-k+1, 0) of them.
  const QuadExact digit_bound = remainder_digit_bound(p);
  const QuadExact s_beta = -ratio;
  const auto terms = static_cast<std::int64_t>(digits.size());
  if (s_beta == QuadExact(1)) {
    out.bound = digit_bound * BigInt(terms);
  } else {
    out.bound = digit_bound * (QuadExact(1) - s_beta.pow(terms)) / (QuadExact(1) - s_beta);
  }
  out.bound_holds = remainder.abs() <= out.bound;
  return out;
}

std::vector<SweepRow> sweep(const LSSequence& sequence, unsigned max_level,
                            std::uint64_t max_index) {
  std::vector<SweepRow> rows;
  for (unsigned k = 0; k <= max_level; ++k) {
    const std::uint64_t anchors = sequence.longs(k);
    std::unordered_map<std::uint64_t, std::uint64_t> running;
    for (std::uint64_t n = 0; n <= max_index; ++n) {
      const std::uint64_t x = sequence.truncate(n, k);
      if (x >= anchors) continue;
      const std::uint64_t brute = ++running[x];
      const ElementaryInterval iv(sequence, k, x);
      const std::uint64_t formula = count_in_interval(iv, n);
      rows.push_back({k, x, n, brute, formula, brute == formula});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const LSParams& params, const std::vector<SweepRow>& rows) {
  os << "params,k,x,N,count,formula_count,match\n";
  for (const auto& r : rows) {
    os << '"' << params.to_string() << "\"," << r.level << ',' << r.anchor << ',' << r.index << ','
       << r.count << ',' << r.formula_count << ',' << (r.match ? "true" : "false") << '\n';
  }
}

}  // namespace lsqmc
