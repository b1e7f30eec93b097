// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lsqmc/discrepancy.hpp"
#include "lsqmc/error.hpp"
#include "lsqmc/format.hpp"
#include "lsqmc/intervals.hpp"
#include "lsqmc/lscore.hpp"
#include "lsqmc/multidim.hpp"

using namespace lsqmc;

namespace {

// Frozen regression values, measured once with this implementation.
constexpr double kHaltonDStar4096 = 0.0018634839749085419;
constexpr double kScaledDStarMax11 = 0.511265;  // max N D*_N / log N, (1,1), N = 2^7..2^17
constexpr double kScaledDStarMax21 = 0.44745;   // same for (2,1)
constexpr double kMargin = 1.2;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

std::vector<LSParams> grid(bool need_short) {
  std::vector<LSParams> out;
  for (std::uint32_t L = 1; L <= 5; ++L) {
    for (std::uint32_t S = need_short ? 1 : 0; S <= 5; ++S) {
      if (L + S >= 2) out.emplace_back(L, S);
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome power_relation_gap() {
  Outcome o;
  const MultiBase base({LSParams(1, 1), LSParams(4, 1)});
  const PowerRelation rel{2, 0, 1, 1};
  const GapCertificate cert = build_power_relation_certificate(base, rel, 1, 0);
  o.require(cert.epsilon == QuadExact(5, -2, 1, 5), "epsilon " + cert.epsilon.to_string());

  const auto t0 = std::chrono::steady_clock::now();
  const VerifyResult v = verify_empty(cert, 999'999, 1);
  const double secs = seconds_since(t0);
  o.require(v.hits == 0, "hits " + std::to_string(v.hits));
  o.require(secs < 60.0, "scan took " + format_double(secs) + " s");

  // Same levels, so the same area, with the anchors made equal.
  const ElementaryInterval c1(base.component(0), *cert.side1.level, 1);
  const ElementaryInterval c2(base.component(1), *cert.side2.level, 1);
  const VerifyResult control = count_box_hits(c1, c2, 9'999);
  o.require(control.hits >= 1, "control box empty");

  o.detail << (o.pass ? "" : "; ") << "epsilon=" << cert.epsilon.to_string()
           << " levels=(" << *cert.side1.level << "," << *cert.side2.level << ")"
           << " hits=" << v.hits << " over N<1e6 in " << format_double(secs).substr(0, 5)
           << " s; control I_1^(" << *cert.side1.level << ")xI_1^(" << *cert.side2.level
           << ") hits=" << control.hits;
  return o;
}

Outcome common_divisor_gap() {
  Outcome o;
  for (const auto& base : {MultiBase({LSParams(2, 2), LSParams(4, 2)}),
                           MultiBase({LSParams(2, 0), LSParams(2, 0)})}) {
    const GapCertificate cert = build_common_divisor_certificate(base);
    const VerifyResult v = verify_empty(cert, 999'999, 1);
    o.require(v.hits == 0, base.to_string() + " hits " + std::to_string(v.hits));

    const LSSequence& s1 = base.component(0);
    const LSSequence& s2 = base.component(1);
    const std::uint64_t b = cert.divisor;
    std::uint64_t bad = 0;
    for (std::uint64_t n = 0; n <= 100'000; ++n) {
      if (s1.point(n) < cert.side1.hi && n % b != 0) ++bad;
      const QuadExact y = s2.point(n);
      if (cert.side2.lo <= y && y < cert.side2.hi && n % b != 1) ++bad;
    }
    o.require(bad == 0, base.to_string() + " residue failures " + std::to_string(bad));
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << base.to_string() << " b=" << b
             << " hits=" << v.hits;
  }
  return o;
}

Outcome codec_bijection() {
  Outcome o;
  std::uint64_t failures = 0, cases = 0;
  for (const auto& p : grid(false)) {
    const LSSequence seq(p);
    for (std::uint64_t n = 1; n <= 10'000; ++n, ++cases) {
      const DigitString ds = seq.encode(n);
      if (ds.violation() || decode(ds) != to_bigint(n)) ++failures;
    }
  }
  o.require(failures == 0, std::to_string(failures) + " failures");
  o.detail << cases << " cases, " << failures << " failures";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::uint64_t mismatches = 0, compared = 0;
  for (const auto& p : grid(false)) {
    const LSSequence seq(p);
    const CountsTable table = counts(p, 7);
    for (unsigned n = 0; n <= 7; ++n) {
      const PartitionOracle oracle = partition_oracle(p, n);
      const std::uint64_t t = seq.total(n);
      if (oracle.first_appearance.size() != t || oracle.intervals.size() != t) {
        ++mismatches;
        continue;
      }
      std::vector<QuadExact> points;
      points.reserve(t);
      for (std::uint64_t i = 0; i < t; ++i) {
        points.push_back(seq.point(i));
        if (!(points.back() == oracle.first_appearance[i])) ++mismatches;
        ++compared;
      }
      std::sort(points.begin(), points.end());
      std::uint64_t longs = 0;
      for (std::uint64_t i = 0; i < t; ++i) {
        if (!(points[i] == oracle.intervals[i].left)) ++mismatches;
        if (oracle.intervals[i].exponent == n) ++longs;
      }
      if (to_bigint(longs) != table.rows[n].longs) ++mismatches;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.detail << compared << " points compared, " << mismatches << " mismatches";
  return o;
}

// Member cases (k, x, N) for the counting and local-discrepancy criteria,
// found by exact geometry: the level-k anchors x < l_k start disjoint
// intervals, so a binary search over their left ends locates xi^N.
struct MemberCase {
  const LSSequence* seq;
  unsigned k;
  std::uint64_t x;
  std::uint64_t n;
  std::uint64_t brute;
};

std::vector<MemberCase> member_sweep(const std::vector<LSSequence>& seqs, std::uint64_t& truncation_disagreements) {
  std::vector<MemberCase> out;
  truncation_disagreements = 0;
  for (const auto& seq : seqs) {
    for (unsigned k = 0; k <= 5; ++k) {
      const std::uint64_t anchors = seq.longs(k);
      std::vector<std::pair<QuadExact, std::uint64_t>> lefts;
      for (std::uint64_t x = 0; x < anchors; ++x) lefts.emplace_back(seq.point(x), x);
      std::sort(lefts.begin(), lefts.end());
      const QuadExact width = seq.beta_power(k);
      std::vector<std::uint64_t> running(anchors, 0);
      for (std::uint64_t n = 0; n <= 5000; ++n) {
        const QuadExact p = seq.point(n);
        auto it = std::upper_bound(lefts.begin(), lefts.end(), p,
                                   [](const QuadExact& v, const auto& e) { return v < e.first; });
        std::optional<std::uint64_t> anchor;
        if (it != lefts.begin()) {
          --it;
          if (p < it->first + width) anchor = it->second;
        }
        const std::uint64_t trunc = seq.truncate(n, k);
        const bool digit_member = trunc < anchors;
        if (digit_member != anchor.has_value() || (anchor && *anchor != trunc)) {
          ++truncation_disagreements;
        }
        if (anchor) out.push_back({&seq, k, *anchor, n, ++running[*anchor]});
      }
    }
  }
  return out;
}

const std::vector<MemberCase>& shared_sweep(std::uint64_t& disagreements) {
  static const std::vector<LSSequence> seqs{LSSequence(LSParams(1, 1)), LSSequence(LSParams(2, 1)),
                                            LSSequence(LSParams(3, 2))};
  static std::uint64_t stored = 0;
  static const std::vector<MemberCase> cases = member_sweep(seqs, stored);
  disagreements = stored;
  return cases;
}

Outcome counting_exactness() {
  Outcome o;
  std::uint64_t disagreements = 0;
  const auto& cases = shared_sweep(disagreements);
  std::uint64_t count_fail = 0, ab_fail = 0;
  for (const auto& c : cases) {
    const ElementaryInterval iv(*c.seq, c.k, c.x);
    if (count_in_interval(iv, c.n) != c.brute) ++count_fail;
    const ABDecomposition ab = ab_decompose(iv, c.n);
    const std::uint64_t rebuilt = c.x + ab.a * c.seq->total(c.k) + ab.b * c.seq->longs(c.k);
    if (rebuilt != c.n || ab.count != 1 + ab.a + ab.b || ab.count != c.brute) ++ab_fail;
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " membership disagreements");
  o.require(count_fail == 0, std::to_string(count_fail) + " count failures");
  o.require(ab_fail == 0, std::to_string(ab_fail) + " decomposition failures");
  o.detail << (o.pass ? "" : "; ") << cases.size() << " member cases, " << count_fail + ab_fail
           << " failures, " << disagreements << " membership disagreements";
  return o;
}

Outcome local_discrepancy_identity() {
  Outcome o;
  std::uint64_t disagreements = 0;
  const auto& cases = shared_sweep(disagreements);
  std::uint64_t checked = 0, identity_fail = 0, bound_fail = 0, linear_fail = 0;
  for (const auto& c : cases) {
    if (c.n == 0) continue;
    const ElementaryInterval iv(*c.seq, c.k, c.x);
    const LocalDiscrepancy ld = local_discrepancy(iv, c.n);
    ++checked;
    if (!ld.identity_holds || ld.count != c.brute) ++identity_fail;
    if (!ld.bound_holds) ++bound_fail;
    if (!(local_ratio(iv, c.n, ld.remainder, RemainderFactor::kLinearBeta) == ld.ratio_count)) {
      ++linear_fail;
    }
  }
  o.require(identity_fail == 0, std::to_string(identity_fail) + " identity failures");
  o.require(bound_fail == 0, std::to_string(bound_fail) + " bound failures");
  o.require(linear_fail > 0, "the (-S beta)^k variant never failed");
  o.detail << (o.pass ? "" : "; ") << checked << " cases, identity failures " << identity_fail
           << ", bound failures " << bound_fail << ", (-S beta)^k variant failures " << linear_fail;
  return o;
}

Outcome closed_forms() {
  Outcome o;
  std::uint64_t fails = 0;
  for (const auto& p : grid(true)) {
    const CountsTable table = counts(p, 60);
    for (unsigned n = 0; n <= 40; ++n) {
      const ExplicitCounts e = explicit_counts(p, n);
      const auto& row = table.rows[n];
      if (!(e.total == QuadExact(row.total) && e.longs == QuadExact(row.longs) &&
            e.shorts == QuadExact(row.shorts))) {
        ++fails;
      }
    }
    if (!mixed_recurrence_check(p, 60)) ++fails;

    const RecurrenceConstants rc = recurrence_constants(p);
    const QuadExact& beta = p.beta();
    const QuadExact neg_sb = QuadExact(-static_cast<long>(p.S())) * beta;
    const QuadExact neg_sb2 = neg_sb * beta;
    const QuadExact ratio = rc.lambda0 / rc.lambda1;
    for (int k = 1; k <= 30; ++k) {
      const QuadExact lk(table.rows[k].longs);
      const QuadExact tk(table.rows[k].total);
      const QuadExact den = QuadExact(1) - lk * beta.pow(k);
      if (!((tk - lk) / den == beta.pow(-k - 1))) ++fails;
      if (!(lk * (QuadExact(1) - neg_sb2.pow(k)) / den == ratio * beta.pow(-k) + neg_sb.pow(k))) {
        ++fails;
      }
    }
  }
  o.require(fails == 0, std::to_string(fails) + " failures");
  o.detail << "closed forms n<=40, mixed recurrences n<=60, two identities k=1..30: "
           << fails << " failures";
  return o;
}

Outcome special_cases() {
  Outcome o;
  std::uint64_t fails = 0;
  for (std::uint32_t b : {2U, 3U, 5U}) {
    const LSSequence seq(LSParams(b, 0));
    for (std::uint64_t n = 0; n <= 10'000; ++n) {
      if (!(seq.point(n) == radical_inverse(n, b))) ++fails;
    }
  }
  o.require(fails == 0, std::to_string(fails) + " radical-inverse mismatches");

  const auto pts = PointGenerator::halton({2, 3}).generate(4096);
  std::vector<std::array<double, 2>> pairs(4096);
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {pts[2 * i], pts[2 * i + 1]};
  const double d = star_discrepancy_2d(pairs).d_star;
  o.require(d <= kHaltonDStar4096 * kMargin, "Halton D* " + format_double(d));
  o.detail << (o.pass ? "" : "; ") << "radical inverse mismatches " << fails
           << "; Halton(2,3) D*_4096=" << format_double(d) << " (limit "
           << format_double(kHaltonDStar4096 * kMargin) << ")";
  return o;
}

Outcome low_discrepancy() {
  Outcome o;
  const std::pair<LSParams, double> cases[] = {{LSParams(1, 1), kScaledDStarMax11},
                                               {LSParams(2, 1), kScaledDStarMax21}};
  for (const auto& [p, frozen] : cases) {
    const LSSequence seq(p);
    double worst = 0.0;
    for (unsigned e = 7; e <= 17; ++e) {
      const std::size_t n = std::size_t{1} << e;
      std::vector<double> xs(n);
      for (std::size_t i = 0; i < n; ++i) xs[i] = seq.point_double(i);
      const double scaled =
          static_cast<double>(n) * star_discrepancy_1d(xs).d_star / std::log(static_cast<double>(n));
      worst = std::max(worst, scaled);
    }
    o.require(worst <= frozen * kMargin, p.to_string() + " max " + format_double(worst));
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << "(" << p.to_string()
             << ") max N*D/logN=" << format_double(worst).substr(0, 6) << " (limit "
             << format_double(frozen * kMargin).substr(0, 6) << ")";
  }

  const MultiBase base({LSParams(1, 1), LSParams(4, 1)});
  const GapCertificate cert = build_power_relation_certificate(base, PowerRelation{2, 0, 1, 1}, 1, 0);
  const std::uint64_t n = 4096;
  const VerifyResult v = verify_empty(cert, n - 1, 1);
  const QuadExact expected = *cert.exact_area() * to_bigint(n);
  const QuadExact deviation = (QuadExact(to_bigint(v.hits)) - expected).abs();
  o.require(v.hits == 0 && deviation == expected, "box deviation " + deviation.to_string());
  o.detail << "; ((1,1),(4,1)) box deviation at N=4096: " << deviation.to_string() << " = "
           << format_double(deviation.to_double()).substr(0, 7) << " with " << v.hits
           << " points inside";
  return o;
}

Outcome relation_detector() {
  Outcome o;
  const auto r1 = detect_relation(LSParams(1, 1), LSParams(4, 1), 8);
  const auto r2 = detect_relation(LSParams(1, 1), LSParams(11, 1), 8);
  const auto r3 = detect_relation(LSParams(1, 1), LSParams(2, 1), 8);
  o.require(r1 && *r1 == PowerRelation{2, 0, 1, 1}, "(1,1),(4,1)");
  o.require(r2 && *r2 == PowerRelation{4, 0, 1, 1}, "(1,1),(11,1)");
  o.require(!r3, "(1,1),(2,1) returned a relation");
  if (r1) o.require(relation_holds(LSParams(1, 1), LSParams(4, 1), *r1), "r1 unsound");
  if (r2) o.require(relation_holds(LSParams(1, 1), LSParams(11, 1), *r2), "r2 unsound");
  o.detail << (o.pass ? "" : "; ") << "(1,1)/(4,1): k=2 m=0 p/q=1/1; (1,1)/(11,1): k=4 m=0 "
           << "p/q=1/1; (1,1)/(2,1): none";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<bool> selected(11, argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int i = std::atoi(argv[a]);
    if (i >= 1 && i <= 10) selected[i] = true;
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"power-relation gap ((1,1),(4,1))", power_relation_gap},
      {"common-divisor gaps ((2,2),(4,2)), ((2,0),(2,0))", common_divisor_gap},
      {"codec bijection on the L,S<=5 grid", codec_bijection},
      {"digit points equal partition-oracle order, n<=7", oracle_equivalence},
      {"interval counting and (A,B) decomposition", counting_exactness},
      {"local discrepancy identity and remainder bound", local_discrepancy_identity},
      {"closed forms, mixed recurrences, power identities", closed_forms},
      {"van der Corput equivalence and Halton D*", special_cases},
      {"low-discrepancy scaling and empty-box deviation", low_discrepancy},
      {"beta-power relation detector", relation_detector},
  };
  int failed = 0;
  int ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i + 1]) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << "  [" << o.detail.str() << "] ("
              << format_double(seconds_since(t0)).substr(0, 5) << " s)" << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
