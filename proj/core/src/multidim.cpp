#include "lsqmc/multidim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "lsqmc/error.hpp"

namespace lsqmc {

namespace {

constexpr unsigned kMaxExtraLevels = 4096;

std::int64_t field_of(const LSParams& p) { return squarefree_split(p.discriminant()).radicand; }

void require_2d(const MultiBase& base) {
  if (base.dimension() != 2) {
    throw Error(ErrorKind::InvalidParams, "certificates need a 2D base, got dimension " +
                                              std::to_string(base.dimension()) +
                                              " (project first)");
  }
}

void require_level(const LSSequence& seq, unsigned level, const char* what) {
  if (level >= seq.small_levels()) {
    throw Error(ErrorKind::IndexOutOfRange, std::string(what) + " level " + std::to_string(level) +
                                                " exceeds the 64-bit index range");
  }
}

// Smallest j with (S beta)^j < bound, or 0 if c = 0.
unsigned minimal_extra_levels(const LSParams& params, const Threshold& t) {
  if (t.c.is_zero()) return 0;
  const QuadExact s_beta = params.beta() * BigInt(params.S());
  QuadExact power(1);
  for (unsigned j = 0; j <= kMaxExtraLevels; ++j) {
    if (power < t.bound) return j;
    power *= s_beta;
  }
  throw Error(ErrorKind::ResourceLimit, "threshold not reached within " +
                                            std::to_string(kMaxExtraLevels) + " extra levels");
}

Threshold make_threshold(const LSParams& params, unsigned level, const QuadExact& epsilon,
                         const BigInt& q, const QuadExact& scale) {
  const RecurrenceConstants rc = recurrence_constants(params);
  const QuadExact& beta = params.beta();
  const QuadExact neg_s_beta2 = QuadExact(-static_cast<long>(params.S())) * beta * beta;
  Threshold t;
  t.c = beta * (rc.lambda0 / rc.lambda1 + neg_s_beta2.pow(level)) * scale;
  if (t.c.is_zero()) {
    t.bound = QuadExact(0);
  } else {
    const QuadExact one_minus_sb = QuadExact(1) - beta * BigInt(params.S());
    t.bound = (QuadExact(1) - epsilon) * one_minus_sb /
              (t.c.abs() * BigInt(q * 4) * remainder_digit_bound(params));
  }
  t.extra_levels = minimal_extra_levels(params, t);
  return t;
}

BoxSide side_of(const ElementaryInterval& iv) {
  return {iv.left(), iv.right(), iv.level(), iv.anchor()};
}

template <typename Test>
VerifyResult parallel_scan(std::uint64_t n_max, unsigned threads, const Test& test) {
  threads = std::max(1U, threads);
  const std::uint64_t total = n_max + 1;  // n_max < 2^64 - 1 in practice
  if (threads > total) threads = static_cast<unsigned>(total);
  struct Part {
    std::uint64_t hits = 0;
    std::optional<std::uint64_t> first;
  };
  std::vector<Part> parts(threads);
  const auto work = [&](unsigned w) {
    const std::uint64_t lo = total / threads * w + std::min<std::uint64_t>(w, total % threads);
    const std::uint64_t len = total / threads + (w < total % threads ? 1 : 0);
    Part& part = parts[w];
    for (std::uint64_t n = lo; n < lo + len; ++n) {
      if (test(n)) {
        if (!part.first) part.first = n;
        ++part.hits;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  VerifyResult out{n_max, 0, std::nullopt};
  for (const auto& part : parts) {
    out.hits += part.hits;
    if (part.first && !out.first_hit) out.first_hit = part.first;
  }
  return out;
}

// lo <= xi^N < hi, decided exactly; the float value only skips clear misses.
bool in_side(const LSSequence& seq, std::uint64_t n, const BoxSide& side, double lo, double hi) {
  constexpr double kMargin = 1e-9;
  const double v = seq.point_double(n);
  if (v < lo - kMargin || v >= hi + kMargin) return false;
  const QuadExact p = seq.point(n);
  return side.lo <= p && p < side.hi;
}

nlohmann::ordered_json quad_json(const QuadExact& v) {
  return {{"exact", v.to_string()}, {"float", v.to_double()}};
}

}  // namespace

MultiBase::MultiBase(std::vector<LSParams> params) {
  if (params.empty()) throw Error(ErrorKind::InvalidParams, "base needs at least one (L,S) pair");
  components_.reserve(params.size());
  for (auto& p : params) components_.emplace_back(std::move(p));
}

std::string MultiBase::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ';';
    out += components_[i].params().to_string();
  }
  return out;
}

std::vector<QuadExact> multi_point(std::uint64_t index, const MultiBase& base) {
  std::vector<QuadExact> out;
  out.reserve(base.dimension());
  for (std::size_t i = 0; i < base.dimension(); ++i) out.push_back(base.component(i).point(index));
  return out;
}

std::vector<double> multi_point_double(std::uint64_t index, const MultiBase& base) {
  std::vector<double> out;
  out.reserve(base.dimension());
  for (std::size_t i = 0; i < base.dimension(); ++i) {
    out.push_back(base.component(i).point_double(index));
  }
  return out;
}

bool relation_holds(const LSParams& first, const LSParams& second, const PowerRelation& rel) {
  if (rel.p <= 0 || rel.q <= 0) return false;
  if (field_of(first) != field_of(second)) return false;
  return first.beta().pow(rel.k + 1) * rel.q == second.beta().pow(rel.m + 1) * rel.p;
}

std::optional<QuadExact> GapCertificate::exact_area() const {
  const QuadExact w1 = side1.hi - side1.lo;
  const QuadExact w2 = side2.hi - side2.lo;
  if (!w1.is_rational() && !w2.is_rational() && w1.radicand() != w2.radicand()) {
    return std::nullopt;
  }
  return w1 * w2;
}

double GapCertificate::area() const {
  if (const auto exact = exact_area()) return exact->to_double();
  return (side1.hi - side1.lo).to_double() * (side2.hi - side2.lo).to_double();
}

std::optional<PowerRelation> detect_relation(const LSParams& first, const LSParams& second,
                                             unsigned max_exp) {
  if (first.S() == 0 || second.S() == 0) {
    throw Error(ErrorKind::UnsupportedParams, "relation search needs S >= 1 in both components");
  }
  if (max_exp == 0) throw Error(ErrorKind::InvalidParams, "max_exp must be positive");
  if (field_of(first) != field_of(second)) return std::nullopt;

  std::vector<QuadExact> pow1(max_exp + 1), pow2(max_exp + 1);
  pow1[0] = pow2[0] = QuadExact(1);
  for (unsigned e = 1; e <= max_exp; ++e) {
    pow1[e] = pow1[e - 1] * first.beta();
    pow2[e] = pow2[e - 1] * second.beta();
  }
  for (unsigned sum = 0; sum + 2 <= 2 * max_exp; ++sum) {
    for (unsigned k = 0; k <= sum; ++k) {
      const unsigned m = sum - k;
      if (k + 1 > max_exp || m + 1 > max_exp) continue;
      const QuadExact ratio = pow1[k + 1] / pow2[m + 1];
      if (ratio.is_rational()) return PowerRelation{k, m, ratio.a(), ratio.c()};
    }
  }
  return std::nullopt;
}

std::optional<PowerRelation> relation_at(const LSParams& first, const LSParams& second,
                                         unsigned k, unsigned m) {
  if (field_of(first) != field_of(second)) {
    throw Error(ErrorKind::FieldMismatch, "betas of " + first.to_string() + " and " +
                                              second.to_string() + " lie in different fields");
  }
  const QuadExact ratio = first.beta().pow(k + 1) / second.beta().pow(m + 1);
  if (!ratio.is_rational()) return std::nullopt;
  return PowerRelation{k, m, ratio.a(), ratio.c()};
}

MultiBase project(const MultiBase& base, std::pair<std::size_t, std::size_t> dims) {
  const auto [i, j] = dims;
  if (i == j || i >= base.dimension() || j >= base.dimension()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "projection needs two distinct coordinates below " +
                    std::to_string(base.dimension()) + ", got (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
  }
  return MultiBase({base.params(i), base.params(j)});
}

std::uint32_t common_divisor(const LSParams& first, const LSParams& second) {
  return std::gcd(std::gcd(first.L(), first.S()), std::gcd(second.L(), second.S()));
}

bool threshold_satisfied(const LSParams& params, const Threshold& threshold,
                         unsigned extra_levels) {
  if (threshold.c.is_zero()) return true;
  const QuadExact s_beta = params.beta() * BigInt(params.S());
  return s_beta.pow(extra_levels) < threshold.bound;
}

GapCertificate build_power_relation_certificate(const MultiBase& base,
                                                const PowerRelation& relation, std::uint64_t x1,
                                                std::uint64_t x2) {
  require_2d(base);
  const LSParams& p1 = base.params(0);
  const LSParams& p2 = base.params(1);
  for (const LSParams* p : {&p1, &p2}) {
    if (p->S() == 0 || p->L() < p->S()) {
      throw Error(ErrorKind::HypothesisViolated,
                  "need L > S - 1 >= 0 in both components, got " + p->to_string());
    }
  }
  if (field_of(p1) != field_of(p2)) {
    throw Error(ErrorKind::FieldMismatch, "betas of " + p1.to_string() + " and " +
                                              p2.to_string() + " lie in different fields");
  }
  if (!relation_holds(p1, p2, relation)) {
    throw Error(ErrorKind::HypothesisViolated, "beta1^" + std::to_string(relation.k + 1) +
                                                   " / beta2^" + std::to_string(relation.m + 1) +
                                                   " != " + relation.p.get_str() + "/" +
                                                   relation.q.get_str());
  }
  const LSSequence& s1 = base.component(0);
  const LSSequence& s2 = base.component(1);
  require_level(s1, relation.k, "k");
  require_level(s2, relation.m, "m");
  if (x1 == x2) throw Error(ErrorKind::HypothesisViolated, "anchors must differ (x1 = x2)");
  if (x1 >= s1.longs(relation.k) || x2 >= s2.longs(relation.m)) {
    throw Error(ErrorKind::HypothesisViolated,
                "anchors need x1 < " + std::to_string(s1.longs(relation.k)) + " and x2 < " +
                    std::to_string(s2.longs(relation.m)));
  }

  const BigInt gap = to_bigint(x2) - to_bigint(x1);
  const QuadExact epsilon =
      odd_distance(p1.beta().pow(relation.k + 1) * BigInt(2 * relation.q * gap));
  if (!(epsilon < QuadExact(1))) {
    throw Error(ErrorKind::HypothesisViolated, "odd distance is not below 1");
  }

  GapCertificate cert(CertificateKind::kPowerRelation, base);
  cert.relation = relation;
  cert.x1 = x1;
  cert.x2 = x2;
  cert.epsilon = epsilon;
  cert.first = make_threshold(p1, relation.k, epsilon, relation.q, QuadExact(1));
  cert.second = make_threshold(p2, relation.m, epsilon, relation.q,
                               QuadExact::rational(relation.p, relation.q));
  const unsigned level1 = relation.k + cert.first->extra_levels;
  const unsigned level2 = relation.m + cert.second->extra_levels;
  require_level(s1, level1, "box");
  require_level(s2, level2, "box");
  cert.side1 = side_of(ElementaryInterval(s1, level1, x1));
  cert.side2 = side_of(ElementaryInterval(s2, level2, x2));
  return cert;
}

GapCertificate build_power_relation_certificate(const MultiBase& base,
                                                const PowerRelation& relation) {
  require_2d(base);
  const LSSequence& s1 = base.component(0);
  const LSSequence& s2 = base.component(1);
  require_level(s1, relation.k, "k");
  require_level(s2, relation.m, "m");
  if (s1.longs(relation.k) > 1) return build_power_relation_certificate(base, relation, 1, 0);
  if (s2.longs(relation.m) > 1) return build_power_relation_certificate(base, relation, 0, 1);
  throw Error(ErrorKind::HypothesisViolated, "no valid anchor pair: l_k = l_m = 1");
}

GapCertificate build_common_divisor_certificate(const MultiBase& base) {
  require_2d(base);
  const LSParams& p1 = base.params(0);
  const LSParams& p2 = base.params(1);
  const std::uint32_t b = common_divisor(p1, p2);
  if (b < 2) {
    throw Error(ErrorKind::HypothesisViolated,
                "gcd(L1,S1,L2,S2) = 1 for " + base.to_string() + "; need a common divisor >= 2");
  }
  GapCertificate cert(CertificateKind::kCommonDivisor, base);
  cert.divisor = b;
  cert.side1 = {QuadExact(0), p1.beta(), std::nullopt, std::nullopt};
  cert.side2 = {p2.beta(), p2.beta() * BigInt(2), std::nullopt, std::nullopt};
  return cert;
}

VerifyResult count_box_hits(const ElementaryInterval& first, const ElementaryInterval& second,
                            std::uint64_t n_max, unsigned threads) {
  return parallel_scan(n_max, threads,
                       [&](std::uint64_t n) { return contains(first, n) && contains(second, n); });
}

VerifyResult verify_empty(const GapCertificate& cert, std::uint64_t n_max, unsigned threads) {
  const LSSequence& s1 = cert.base.component(0);
  const LSSequence& s2 = cert.base.component(1);
  if (cert.kind == CertificateKind::kPowerRelation) {
    const ElementaryInterval iv1(s1, *cert.side1.level, *cert.side1.anchor);
    const ElementaryInterval iv2(s2, *cert.side2.level, *cert.side2.anchor);
    return count_box_hits(iv1, iv2, n_max, threads);
  }
  const double lo1 = cert.side1.lo.to_double(), hi1 = cert.side1.hi.to_double();
  const double lo2 = cert.side2.lo.to_double(), hi2 = cert.side2.hi.to_double();
  return parallel_scan(n_max, threads, [&](std::uint64_t n) {
    return in_side(s1, n, cert.side1, lo1, hi1) && in_side(s2, n, cert.side2, lo2, hi2);
  });
}

std::string certificate_json(const GapCertificate& cert, const std::optional<VerifyResult>& verify) {
  using json = nlohmann::ordered_json;
  json j;
  j["kind"] = cert.kind == CertificateKind::kPowerRelation ? "theorem1" : "theorem2";
  j["base"] = cert.base.to_string();
  json params = json::array();
  for (std::size_t i = 0; i < cert.base.dimension(); ++i) {
    params.push_back({{"L", cert.base.params(i).L()}, {"S", cert.base.params(i).S()}});
  }
  j["parameters"] = params;
  if (cert.projection) j["projection"] = {cert.projection->first, cert.projection->second};

  if (cert.kind == CertificateKind::kPowerRelation) {
    const PowerRelation& r = *cert.relation;
    j["relation"] = {{"k", r.k}, {"m", r.m}, {"p", r.p.get_str()}, {"q", r.q.get_str()}};
    j["anchors"] = {{"x1", cert.x1}, {"x2", cert.x2}};
    j["epsilon"] = quad_json(cert.epsilon);
    j["c1"] = quad_json(cert.first->c);
    j["c2"] = quad_json(cert.second->c);
    j["threshold1"] = quad_json(cert.first->bound);
    j["threshold2"] = quad_json(cert.second->bound);
    j["k_tilde"] = cert.first->extra_levels;
    j["m_tilde"] = cert.second->extra_levels;
  } else {
    j["divisor"] = cert.divisor;
    j["residues"] = {{"first", 0}, {"second", 1}, {"modulus", cert.divisor}};
  }

  json box = json::array();
  for (const BoxSide* side : {&cert.side1, &cert.side2}) {
    json s = {{"lo", quad_json(side->lo)}, {"hi", quad_json(side->hi)}};
    if (side->level) s["level"] = *side->level;
    if (side->anchor) s["anchor"] = *side->anchor;
    box.push_back(s);
  }
  j["box"] = box;
  if (const auto exact = cert.exact_area()) {
    j["area"] = quad_json(*exact);
  } else {
    j["area"] = {{"exact", nullptr}, {"float", cert.area()}};
  }

  if (verify) {
    j["verification"] = {{"n_max", verify->n_max}, {"hits", verify->hits}};
    j["verification"]["first_hit"] =
        verify->first_hit ? json(*verify->first_hit) : json(nullptr);
  }
  return j.dump(2);
}

}  // namespace lsqmc
