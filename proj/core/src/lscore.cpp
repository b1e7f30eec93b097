#include "lsqmc/lscore.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <regex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "lsqmc/error.hpp"

namespace lsqmc {

namespace {

using u128 = unsigned __int128;

BigInt to_bigint(u128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64U)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  mpz_mul_2exp(hi.get_mpz_t(), hi.get_mpz_t(), 64);
  return hi + lo;
}

void extend_rows(const LSParams& params, std::vector<CountsRow>& rows, unsigned n_max) {
  const BigInt L(static_cast<unsigned long>(params.L()));
  const BigInt S(static_cast<unsigned long>(params.S()));
  if (rows.empty()) rows.push_back({1, 1, 0});
  if (rows.size() == 1 && n_max >= 1) rows.push_back({L + S, L, S});
  while (rows.size() <= n_max) {
    const auto& a = rows[rows.size() - 1];
    const auto& b = rows[rows.size() - 2];
    CountsRow next{L * a.total + S * b.total, L * a.longs + S * b.longs,
                   L * a.shorts + S * b.shorts};
    rows.push_back(std::move(next));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LSParams

LSParams::LSParams(std::uint32_t L, std::uint32_t S) : L_(L), S_(S) {
  if (L == 0) throw Error(ErrorKind::InvalidParams, "L must be positive");
  if (std::uint64_t{L} + S < 2) throw Error(ErrorKind::InvalidParams, "L + S must be at least 2");
  if (L > (1U << 20) || S > (1U << 20)) throw Error(ErrorKind::InvalidParams, "L or S too large");
  discriminant_ = std::int64_t{L} * L + 4 * std::int64_t{S};
  if (S == 0) {
    beta_ = QuadExact::rational(1, static_cast<unsigned long>(L));
  } else {
    beta_ = QuadExact(-static_cast<long>(L), 1, BigInt(2UL * S), discriminant_);
  }
}

QuadExact LSParams::inverse_beta() const {
  return QuadExact(static_cast<long>(L_), 1, 2, discriminant_);
}

std::string LSParams::to_string() const {
  return std::to_string(L_) + "," + std::to_string(S_);
}

// ---------------------------------------------------------------------------
// Counts and closed forms

CountsTable counts(const LSParams& params, unsigned n_max) {
  CountsTable table{params, {}};
  extend_rows(params, table.rows, n_max);
  table.rows.resize(n_max + 1);
  return table;
}

RecurrenceConstants recurrence_constants(const LSParams& params) {
  if (params.S() == 0) {
    throw Error(ErrorKind::UnsupportedParams, "closed forms need S >= 1");
  }
  const QuadExact root = params.sqrt_discriminant();
  const QuadExact twice_root = root * QuadExact(2);
  const QuadExact L(static_cast<long>(params.L()));
  const QuadExact two_s(2L * params.S());
  RecurrenceConstants k;
  k.tau0 = (L + two_s + root) / twice_root;
  k.tau1 = (root - L - two_s) / twice_root;
  k.lambda0 = (L + root) / twice_root;
  k.lambda1 = (root - L) / twice_root;
  // s_n = t_n - l_n, so the sigma pair is the difference of the others:
  // sigma0 = S/sqrt(D), sigma1 = -S/sqrt(D).
  k.sigma0 = k.tau0 - k.lambda0;
  k.sigma1 = k.tau1 - k.lambda1;
  return k;
}

ExplicitCounts explicit_counts(const LSParams& params, unsigned n) {
  const RecurrenceConstants k = recurrence_constants(params);
  const QuadExact grow = params.beta().pow(-static_cast<std::int64_t>(n));
  const QuadExact decay = (params.beta() * QuadExact(-static_cast<long>(params.S()))).pow(n);
  return {k.tau0 * grow + k.tau1 * decay, k.lambda0 * grow + k.lambda1 * decay,
          k.sigma0 * grow + k.sigma1 * decay};
}

bool mixed_recurrence_check(const LSParams& params, unsigned n_max) {
  const CountsTable table = counts(params, n_max);
  const BigInt wide(static_cast<unsigned long>(params.L() + params.S() - 1));
  const BigInt narrow(static_cast<unsigned long>(params.L() - 1));
  for (unsigned n = 0; n < n_max; ++n) {
    const auto& row = table.rows[n];
    const auto& next = table.rows[n + 1];
    if (next.total != row.total + wide * row.longs) return false;
    if (next.longs != row.total + narrow * row.longs) return false;
  }
  return true;
}

bool beta_is_irrational(const LSParams& params) {
  const BigInt d(static_cast<long>(params.discriminant()));
  const BigInt r = isqrt(d);
  return r * r != d;
}

// ---------------------------------------------------------------------------
// Digit strings

DigitString::DigitString(LSParams params, std::vector<Digit> digits)
    : params_(std::move(params)), digits_(std::move(digits)) {}

std::optional<std::string> DigitString::violation() const {
  if (digits_.empty()) return "empty digit string";
  const std::uint32_t eta_max = params_.L() + params_.S() - 2;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    const Digit& d = digits_[i];
    const std::string at = " at level " + std::to_string(i);
    if (d.epsilon > 1) return "epsilon not in {0,1}" + at;
    if (d.eta > eta_max) return "eta exceeds L+S-2" + at;
    if (d.epsilon == 0 && d.eta != 0) return "eta nonzero with epsilon = 0" + at;
    if (i + 1 < digits_.size() && d.epsilon == 1 && d.eta + 1 >= params_.L() &&
        digits_[i + 1].epsilon == 1) {
      return "eta >= L-1 followed by epsilon = 1" + at;
    }
  }
  if (digits_.back().epsilon != 1) return "leading epsilon must be 1";
  return std::nullopt;
}

std::string DigitString::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (digits_[i].epsilon == 0 && digits_[i].eta == 0) continue;
    if (!first) os << ';';
    first = false;
    os << i << ":(" << digits_[i].epsilon << ',' << digits_[i].eta << ')';
  }
  return os.str();
}

DigitString DigitString::parse(std::string_view text, const LSParams& params) {
  static const std::regex entry(R"(^\s*([0-9]+)\s*:\s*\(\s*([0-9]+)\s*,\s*([0-9]+)\s*\)\s*$)");
  std::vector<Digit> digits;
  std::vector<bool> seen;
  std::size_t start = 0;
  if (text.find_first_not_of(" \t") == std::string_view::npos) {
    throw Error(ErrorKind::ParseError, "empty digit string");
  }
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string item(text.substr(start, end - start));
    std::smatch m;
    if (!std::regex_match(item, m, entry)) {
      throw Error(ErrorKind::ParseError, "bad digit entry '" + item + "'");
    }
    const unsigned long level = std::stoul(m[1].str());
    if (level > 4096) throw Error(ErrorKind::ParseError, "digit level too large");
    if (level >= digits.size()) {
      digits.resize(level + 1);
      seen.resize(level + 1, false);
    }
    if (seen[level]) throw Error(ErrorKind::ParseError, "duplicate level " + m[1].str());
    seen[level] = true;
    digits[level] = {static_cast<std::uint32_t>(std::stoul(m[2].str())),
                     static_cast<std::uint32_t>(std::stoul(m[3].str()))};
    start = end + 1;
  }
  return DigitString(params, std::move(digits));
}

BigInt decode(const DigitString& digits) {
  if (auto why = digits.violation()) throw Error(ErrorKind::InvalidDigits, *why);
  const CountsTable table = counts(digits.params(), digits.top_level());
  BigInt sum = 0;
  for (std::size_t i = 0; i < digits.digits().size(); ++i) {
    const Digit& d = digits.digits()[i];
    if (d.epsilon != 0) sum += table.rows[i].total;
    if (d.eta != 0) sum += table.rows[i].longs * static_cast<unsigned long>(d.eta);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// LSSequence

struct LSSequence::Tables {
  explicit Tables(LSParams p) : params(std::move(p)) {
    const u128 L = params.L();
    const u128 S = params.S();
    const u128 limit = std::numeric_limits<std::uint64_t>::max();
    u128 t_prev = 0, t = 1, l_prev = 0, l = 1;
    for (unsigned n = 0;; ++n) {
      small_total.push_back(static_cast<std::uint64_t>(t));
      small_longs.push_back(static_cast<std::uint64_t>(l));
      u128 t_next, l_next;
      if (n == 0) {
        t_next = L + S;
        l_next = L;
      } else {
        t_next = L * t + S * t_prev;
        l_next = L * l + S * l_prev;
      }
      if (t_next > limit) break;
      t_prev = t;
      t = t_next;
      l_prev = l;
      l = l_next;
    }
    const std::size_t powers = small_total.size() + 3;
    beta_pow.reserve(powers);
    beta_pow.emplace_back(1);
    for (std::size_t e = 1; e < powers; ++e) beta_pow.push_back(beta_pow.back() * params.beta());
    const double b = params.beta().to_double();
    beta_pow_d.push_back(1.0);
    for (std::size_t e = 1; e < powers; ++e) beta_pow_d.push_back(beta_pow_d.back() * b);
  }

  unsigned top_level(std::uint64_t index) const {
    const auto it = std::upper_bound(small_total.begin(), small_total.end(), index);
    return static_cast<unsigned>(it - small_total.begin()) - 1;
  }

  // Greedy expansion: calls f(level, eps, eta) from the top level down,
  // stopping early once the remainder reaches `stop` levels.
  template <typename F>
  std::uint64_t expand(std::uint64_t index, unsigned stop, F&& f) const {
    if (index == 0) return 0;
    std::uint64_t rem = index;
    const unsigned n = top_level(index);
    for (unsigned i = n + 1; i-- > stop;) {
      if (rem >= small_total[i]) {
        const std::uint64_t eta = (rem - small_total[i]) / small_longs[i];
        rem -= small_total[i] + eta * small_longs[i];
        f(i, 1U, static_cast<std::uint32_t>(eta));
      } else {
        f(i, 0U, 0U);
      }
    }
    return rem;
  }

  LSParams params;
  std::vector<std::uint64_t> small_total;
  std::vector<std::uint64_t> small_longs;
  std::vector<QuadExact> beta_pow;
  std::vector<double> beta_pow_d;

  mutable std::shared_mutex memo_mutex;
  mutable std::vector<CountsRow> memo_rows;
};

LSSequence::LSSequence(LSParams params)
    : tables_(std::make_shared<const Tables>(std::move(params))) {}

const LSParams& LSSequence::params() const noexcept { return tables_->params; }

unsigned LSSequence::small_levels() const noexcept {
  return static_cast<unsigned>(tables_->small_total.size());
}

std::uint64_t LSSequence::total(unsigned n) const {
  if (n >= tables_->small_total.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "t_" + std::to_string(n) + " exceeds 64 bits");
  }
  return tables_->small_total[n];
}

std::uint64_t LSSequence::longs(unsigned n) const {
  if (n >= tables_->small_longs.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "l_" + std::to_string(n) + " exceeds 64 bits");
  }
  return tables_->small_longs[n];
}

const QuadExact& LSSequence::beta_power(unsigned e) const {
  if (e >= tables_->beta_pow.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "beta power " + std::to_string(e));
  }
  return tables_->beta_pow[e];
}

double LSSequence::beta_power_double(unsigned e) const {
  if (e >= tables_->beta_pow_d.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "beta power " + std::to_string(e));
  }
  return tables_->beta_pow_d[e];
}

CountsTable LSSequence::counts(unsigned n_max) const {
  const Tables& t = *tables_;
  {
    std::shared_lock lock(t.memo_mutex);
    if (t.memo_rows.size() > n_max) {
      return {t.params, {t.memo_rows.begin(), t.memo_rows.begin() + n_max + 1}};
    }
  }
  std::unique_lock lock(t.memo_mutex);
  extend_rows(t.params, t.memo_rows, n_max);
  return {t.params, {t.memo_rows.begin(), t.memo_rows.begin() + n_max + 1}};
}

unsigned LSSequence::top_level(std::uint64_t index) const {
  if (index == 0) throw Error(ErrorKind::InvalidDigits, "index 0 has no expansion");
  return tables_->top_level(index);
}

DigitString LSSequence::encode(std::uint64_t index) const {
  if (index == 0) throw Error(ErrorKind::InvalidDigits, "only positive integers are encoded");
  std::vector<Digit> digits(tables_->top_level(index) + 1);
  tables_->expand(index, 0, [&](unsigned level, std::uint32_t eps, std::uint32_t eta) {
    digits[level] = {eps, eta};
  });
  return DigitString(tables_->params, std::move(digits));
}

QuadExact LSSequence::point(std::uint64_t index) const {
  if (index == 0) return QuadExact(0);
  const Tables& t = *tables_;
  const std::uint32_t L = t.params.L();
  const unsigned n = t.top_level(index);
  // Coefficients c_j of beta^j for j = 1..n+2.
  const unsigned top = n + 2;
  std::vector<std::uint64_t> coeff(top + 1, 0);
  t.expand(index, 0, [&](unsigned level, std::uint32_t eps, std::uint32_t eta) {
    const std::uint32_t units = eps + eta;
    coeff[level + 1] += std::min(L, units);
    coeff[level + 2] += units > L ? units - L : 0;
  });
  // Horner in gamma = 1/beta over the integer basis {1, gamma}, using
  // gamma^2 = L gamma + S:  sum c_j beta^j = beta^top (u + v gamma).
  u128 u = 0, v = 0;
  for (unsigned j = 1; j <= top; ++j) {
    const u128 nu = v * t.params.S();
    const u128 nv = u + v * L;
    u = nu + coeff[j];
    v = nv;
  }
  QuadExact result = t.beta_pow[top] * to_bigint(u);
  result += t.beta_pow[top - 1] * to_bigint(v);
  return result;
}

double LSSequence::point_double(std::uint64_t index) const {
  const Tables& t = *tables_;
  const std::uint32_t L = t.params.L();
  double sum = 0.0;
  t.expand(index, 0, [&](unsigned level, std::uint32_t eps, std::uint32_t eta) {
    const std::uint32_t units = eps + eta;
    sum += t.beta_pow_d[level + 1] * std::min(L, units);
    if (units > L) sum += t.beta_pow_d[level + 2] * (units - L);
  });
  return sum;
}

std::uint64_t LSSequence::truncate(std::uint64_t index, unsigned level) const {
  return tables_->expand(index, level, [](unsigned, std::uint32_t, std::uint32_t) {});
}

// ---------------------------------------------------------------------------
// Partition oracle

PartitionOracle partition_oracle(const LSParams& params, unsigned n, std::uint64_t cap) {
  const CountsTable table = counts(params, n);
  if (table.rows[n].total > to_bigint(cap)) {
    throw Error(ErrorKind::ResourceLimit, "t_" + std::to_string(n) + " = " +
                                              table.rows[n].total.get_str() + " exceeds cap " +
                                              std::to_string(cap));
  }
  const std::uint32_t L = params.L();
  const std::uint32_t S = params.S();

  PartitionOracle out;
  out.intervals.push_back({QuadExact(0), 0});
  out.first_appearance.emplace_back(0);

  QuadExact step_long = 1;  // beta^{level+1} during the refinement of `level`
  for (unsigned level = 0; level < n; ++level) {
    step_long *= params.beta();
    const QuadExact step_short = step_long * params.beta();

    std::vector<QuadExact> displacement;
    for (std::uint32_t i = 1; i < L; ++i) displacement.push_back(step_long * BigInt(i));
    for (std::uint32_t s = 0; s < S; ++s) {
      displacement.push_back(step_long * BigInt(L) + step_short * BigInt(s));
    }

    std::vector<PartitionInterval> refined;
    refined.reserve(out.intervals.size() + displacement.size() * out.intervals.size());
    // New endpoints per long interval, keyed by its left endpoint.
    std::unordered_map<QuadExact, std::vector<QuadExact>, QuadExactHash> spawned;
    for (auto& iv : out.intervals) {
      if (iv.exponent != level) {
        refined.push_back(std::move(iv));
        continue;
      }
      std::vector<QuadExact> fresh;
      fresh.reserve(displacement.size());
      refined.push_back({iv.left, level + 1});
      for (std::size_t b = 0; b < displacement.size(); ++b) {
        fresh.push_back(iv.left + displacement[b]);
        const bool is_long_piece = b + 1 < L;
        refined.push_back({fresh.back(), is_long_piece ? level + 1 : level + 2});
      }
      spawned.emplace(iv.left, std::move(fresh));
    }
    out.intervals = std::move(refined);

    std::vector<const std::vector<QuadExact>*> anchors;
    for (const auto& x : out.first_appearance) {
      if (auto it = spawned.find(x); it != spawned.end()) anchors.push_back(&it->second);
    }
    for (std::size_t b = 0; b < displacement.size(); ++b) {
      for (const auto* fresh : anchors) out.first_appearance.push_back((*fresh)[b]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radical inverse

QuadExact radical_inverse(std::uint64_t index, std::uint32_t base) {
  if (base < 2) throw Error(ErrorKind::InvalidParams, "radical inverse base must be >= 2");
  BigInt num = 0, den = 1;
  const BigInt b(static_cast<unsigned long>(base));
  while (index != 0) {
    num = num * b + static_cast<unsigned long>(index % base);
    den *= b;
    index /= base;
  }
  return QuadExact::rational(num, den);
}

double radical_inverse_double(std::uint64_t index, std::uint32_t base) {
  if (base < 2) throw Error(ErrorKind::InvalidParams, "radical inverse base must be >= 2");
  double value = 0.0;
  double scale = 1.0 / base;
  while (index != 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return value;
}

}  // namespace lsqmc
