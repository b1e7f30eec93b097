#include "cli.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsqmc/discrepancy.hpp"
#include "lsqmc/error.hpp"
#include "lsqmc/format.hpp"
#include "lsqmc/intervals.hpp"

namespace lsqmc::cli {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::ParseError,
                "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_dims(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorKind::ParseError, "dims must be 'i,j'");
  return {parse_number<std::size_t>(parts[0], "dimension index"),
          parse_number<std::size_t>(parts[1], "dimension index")};
}

// Options shared by the commands that sample points.
struct GeneratorFlags {
  std::string base;
  std::string halton;
  std::size_t uniform = 0;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    auto* b = cmd->add_option("--base", base, "LS base \"L1,S1;L2,S2;...\"");
    auto* h = cmd->add_option("--halton", halton, "Halton bases \"2,3\"");
    auto* u = cmd->add_option("--uniform", uniform, "pseudo-random points of this dimension");
    cmd->add_option("--seed", seed, "seed for --uniform");
    b->excludes(h)->excludes(u);
    h->excludes(u);
  }

  PointGenerator make() const {
    if (!base.empty()) return PointGenerator::ls(parse_base(base));
    if (!halton.empty()) {
      std::vector<std::uint32_t> bases;
      for (auto part : split(halton, ',')) bases.push_back(parse_number<std::uint32_t>(part, "base"));
      return PointGenerator::halton(std::move(bases));
    }
    if (uniform > 0) return PointGenerator::uniform(uniform, seed);
    throw Error(ErrorKind::InvalidParams, "one of --base, --halton, --uniform is required");
  }
};

void check_count(std::uint64_t count, const Limits& limits) {
  if (count > limits.max_count) {
    throw Error(ErrorKind::ResourceLimit, "count " + std::to_string(count) + " above max_count " +
                                              std::to_string(limits.max_count));
  }
}

int cmd_generate(const std::string& base_text, std::uint64_t count, const std::string& format,
                 bool exact, const Limits& limits, std::ostream& out) {
  const MultiBase base = parse_base(base_text);
  check_count(count, limits);
  const std::size_t d = base.dimension();
  if (format == "json") {
    json doc;
    doc["base"] = base.to_string();
    doc["count"] = count;
    json points = json::array();
    for (std::uint64_t i = 0; i < count; ++i) {
      json row{{"index", i}, {"x", multi_point_double(i, base)}};
      if (exact) {
        json ex = json::array();
        for (const auto& v : multi_point(i, base)) ex.push_back(v.to_string());
        row["exact"] = ex;
      }
      points.push_back(row);
    }
    doc["points"] = points;
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "index";
  for (std::size_t j = 1; j <= d; ++j) out << ",x" << j;
  if (exact) {
    for (std::size_t j = 1; j <= d; ++j) out << ",x" << j << "_exact";
  }
  out << '\n';
  for (std::uint64_t i = 0; i < count; ++i) {
    out << i;
    for (double v : multi_point_double(i, base)) out << ',' << format_double(v);
    if (exact) {
      for (const auto& v : multi_point(i, base)) out << ',' << v.to_string();
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_replay(const std::string& input, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    if (input == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(input);
      if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + input + "'");
      doc = json::parse(in);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad JSON: ") + e.what());
  }
  std::uint64_t checked = 0, mismatches = 0;
  try {
    const MultiBase base = parse_base(doc.at("base").get<std::string>());
    for (const auto& row : doc.at("points")) {
      const auto index = row.at("index").get<std::uint64_t>();
      const auto expected = row.at("x").get<std::vector<double>>();
      bool ok = expected == multi_point_double(index, base);
      if (ok && row.contains("exact")) {
        const auto exact = multi_point(index, base);
        const auto& strings = row.at("exact");
        ok = strings.size() == exact.size();
        for (std::size_t j = 0; ok && j < exact.size(); ++j) {
          ok = strings[j].get<std::string>() == exact[j].to_string();
        }
      }
      if (!ok) {
        if (mismatches == 0) err << "first mismatch at index " << index << '\n';
        ++mismatches;
      }
      ++checked;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad point record: ") + e.what());
  }
  out << "replayed " << checked << " points, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitHits;
}

struct GapsFlags {
  std::string base;
  std::string kind = "auto";
  std::uint64_t verify = 0;
  std::optional<unsigned> k, m;
  std::optional<std::uint64_t> x1, x2;
  unsigned max_exp = 8;
  std::string dims;
  std::optional<unsigned> threads;
};

GapCertificate power_relation_certificate(const MultiBase& base, const GapsFlags& f) {
  const LSParams& p1 = base.params(0);
  const LSParams& p2 = base.params(1);
  std::optional<PowerRelation> rel;
  if (f.k.has_value() != f.m.has_value()) {
    throw Error(ErrorKind::InvalidParams, "--k and --m must be given together");
  }
  if (f.k) {
    rel = relation_at(p1, p2, *f.k, *f.m);
    if (!rel) {
      throw Error(ErrorKind::HypothesisViolated,
                  "beta1^" + std::to_string(*f.k + 1) + " / beta2^" + std::to_string(*f.m + 1) +
                      " is irrational");
    }
  } else {
    rel = detect_relation(p1, p2, f.max_exp);
    if (!rel) {
      throw Error(ErrorKind::NoRelationFound,
                  "no rational ratio of beta powers up to exponent " + std::to_string(f.max_exp));
    }
  }
  if (f.x1.has_value() != f.x2.has_value()) {
    throw Error(ErrorKind::InvalidParams, "--x1 and --x2 must be given together");
  }
  if (f.x1) return build_power_relation_certificate(base, *rel, *f.x1, *f.x2);
  return build_power_relation_certificate(base, *rel);
}

int cmd_gaps(const GapsFlags& f, const Limits& limits, std::ostream& out, std::ostream& err) {
  const MultiBase full = parse_base(f.base);
  std::optional<std::pair<std::size_t, std::size_t>> dims;
  if (!f.dims.empty()) {
    dims = parse_dims(f.dims);
  } else if (full.dimension() != 2) {
    throw Error(ErrorKind::InvalidParams, "base has dimension " + std::to_string(full.dimension()) +
                                              "; choose two coordinates with --dims i,j");
  }
  const MultiBase base = dims ? project(full, *dims) : full;

  std::optional<GapCertificate> cert;
  if (f.kind == "theorem1") {
    cert = power_relation_certificate(base, f);
  } else if (f.kind == "theorem2") {
    cert = build_common_divisor_certificate(base);
  } else {
    std::string reasons;
    try {
      cert = power_relation_certificate(base, f);
    } catch (const Error& e) {
      reasons = e.what();
    }
    if (!cert) {
      try {
        cert = build_common_divisor_certificate(base);
      } catch (const Error& e) {
        reasons += std::string("; ") + e.what();
      }
    }
    if (!cert) {
      err << "no certificate for " << base.to_string() << ": " << reasons << '\n';
      return kExitData;
    }
  }
  if (dims) cert->projection = dims;

  std::optional<VerifyResult> verified;
  if (f.verify > 0) verified = verify_empty(*cert, f.verify, f.threads.value_or(limits.threads));
  out << certificate_json(*cert, verified) << '\n';
  if (verified && verified->hits > 0) {
    err << "certificate falsified: " << verified->hits << " points inside, first at N = "
        << *verified->first_hit << '\n';
    return kExitHits;
  }
  return kExitOk;
}

int cmd_relation(const std::string& base_text, const std::string& dims_text, unsigned max_exp,
                 std::ostream& out) {
  MultiBase base = parse_base(base_text);
  if (!dims_text.empty()) base = project(base, parse_dims(dims_text));
  if (base.dimension() != 2) {
    throw Error(ErrorKind::InvalidParams, "relation needs a 2D base (or --dims)");
  }
  const auto rel = detect_relation(base.params(0), base.params(1), max_exp);
  if (!rel) {
    out << "none\n";
    return kExitOk;
  }
  out << "k=" << rel->k << " m=" << rel->m << " p/q=" << rel->p.get_str() << '/'
      << rel->q.get_str() << '\n';
  return kExitOk;
}

int cmd_discrepancy(const GeneratorFlags& g, const std::vector<std::uint64_t>& counts,
                    const Limits& limits, std::ostream& out) {
  const PointGenerator gen = g.make();
  const std::size_t d = gen.dimension();
  if (d > 2) throw Error(ErrorKind::UnsupportedParams, "exact discrepancy only in 1D and 2D");
  std::vector<DiscrepancyReport> reports;
  for (const auto n : counts) {
    check_count(n, limits);
    const auto pts = gen.generate(n);
    if (d == 1) {
      reports.push_back(star_discrepancy_1d(pts));
    } else {
      std::vector<std::array<double, 2>> pairs(n);
      for (std::size_t i = 0; i < n; ++i) pairs[i] = {pts[2 * i], pts[2 * i + 1]};
      reports.push_back(star_discrepancy_2d(pairs, limits.exact_2d_cap));
    }
  }
  write_report_csv(out, reports);
  return kExitOk;
}

int cmd_qmc(const GeneratorFlags& g, const std::string& function,
            const std::vector<std::uint64_t>& counts, const Limits& limits, std::ostream& out) {
  const PointGenerator gen = g.make();
  std::vector<QmcResult> results;
  for (const auto n : counts) {
    check_count(n, limits);
    results.push_back(qmc_integrate(function, gen, n));
  }
  write_qmc_csv(out, results);
  return kExitOk;
}

int cmd_sweep(const std::string& params, unsigned max_level, std::uint64_t max_index,
              const Limits& limits, std::ostream& out) {
  check_count(max_index, limits);
  const LSParams p = parse_params(params);
  const auto rows = sweep(LSSequence(p), max_level, max_index);
  write_sweep_csv(out, p, rows);
  for (const auto& r : rows) {
    if (!r.match) return kExitHits;
  }
  return kExitOk;
}

int cmd_partition(const std::string& params, unsigned level, bool order, const Limits& limits,
                  std::ostream& out) {
  const auto oracle = partition_oracle(parse_params(params), level, limits.max_partition);
  if (order) {
    out << "N,point,point_exact\n";
    for (std::size_t i = 0; i < oracle.first_appearance.size(); ++i) {
      const auto& v = oracle.first_appearance[i];
      out << i << ',' << format_double(v.to_double()) << ',' << v.to_string() << '\n';
    }
    return kExitOk;
  }
  out << "i,left,left_exact,exponent\n";
  for (std::size_t i = 0; i < oracle.intervals.size(); ++i) {
    const auto& iv = oracle.intervals[i];
    out << i << ',' << format_double(iv.left.to_double()) << ',' << iv.left.to_string() << ','
        << iv.exponent << '\n';
  }
  return kExitOk;
}

}  // namespace

void apply_config(std::istream& in, Limits& limits) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "config line " + std::to_string(lineno) + ": expected key=value");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = view.substr(eq + 1);
    if (key == "max_partition") {
      limits.max_partition = parse_number<std::uint64_t>(value, "max_partition");
    } else if (key == "exact_2d_cap") {
      limits.exact_2d_cap = parse_number<std::size_t>(value, "exact_2d_cap");
    } else if (key == "max_count") {
      limits.max_count = parse_number<std::uint64_t>(value, "max_count");
    } else if (key == "threads") {
      limits.threads = parse_number<unsigned>(value, "threads");
    } else {
      throw Error(ErrorKind::ParseError, "config line " + std::to_string(lineno) +
                                             ": unknown key '" + std::string(key) + "'");
    }
  }
}

LSParams parse_params(std::string_view text) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != 2) {
    throw Error(ErrorKind::ParseError, "expected 'L,S', got '" + std::string(text) + "'");
  }
  return LSParams(parse_number<std::uint32_t>(parts[0], "L"),
                  parse_number<std::uint32_t>(parts[1], "S"));
}

MultiBase parse_base(std::string_view text) {
  std::vector<LSParams> params;
  const auto pairs = split(trim(text), ';');
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      params.push_back(parse_params(pairs[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), "pair " + std::to_string(i + 1) + " '" + std::string(trim(pairs[i])) +
                                "': " + e.message());
    }
  }
  return MultiBase(std::move(params));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LS-sequence generator, interval analysis and gap certificates", "lsqmc"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file with resource caps");

  std::string base, params, format = "csv", digits, function = "xy", dims, input = "-";
  std::uint64_t count = 0, value = 0, max_index = 1000;
  std::vector<std::uint64_t> counts;
  unsigned max_exp = 8, max_level = 5, level = 0;
  std::optional<std::uint64_t> max_partition;
  bool exact = false, order = false;
  GeneratorFlags gen_flags;
  GapsFlags gaps;

  auto* generate = app.add_subcommand("generate", "print points of a base");
  generate->add_option("--base", base, "\"L1,S1;L2,S2;...\"")->required();
  generate->add_option("--count", count, "number of points")->required();
  generate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  generate->add_flag("--exact", exact, "add exact quadratic forms");

  auto* replay = app.add_subcommand("replay", "recompute points from generate --format json");
  replay->add_option("--input", input, "file, or - for stdin");

  auto* gaps_cmd = app.add_subcommand("gaps", "build and verify an empty-box certificate");
  gaps_cmd->add_option("--base", gaps.base)->required();
  gaps_cmd->add_option("--kind", gaps.kind)->check(CLI::IsMember({"theorem1", "theorem2", "auto"}));
  gaps_cmd->add_option("--verify", gaps.verify, "scan N = 0..N_max");
  gaps_cmd->add_option("--k", gaps.k);
  gaps_cmd->add_option("--m", gaps.m);
  gaps_cmd->add_option("--x1", gaps.x1);
  gaps_cmd->add_option("--x2", gaps.x2);
  gaps_cmd->add_option("--max-exp", gaps.max_exp);
  gaps_cmd->add_option("--dims", gaps.dims, "coordinates i,j of a higher-dimensional base");
  gaps_cmd->add_option("--threads", gaps.threads);

  auto* codec = app.add_subcommand("codec", "digit expansion of an index");
  codec->require_subcommand(1);
  auto* encode = codec->add_subcommand("encode");
  encode->add_option("--params", params, "\"L,S\"")->required();
  encode->add_option("--value", value)->required();
  auto* decode_cmd = codec->add_subcommand("decode");
  decode_cmd->add_option("--params", params, "\"L,S\"")->required();
  decode_cmd->add_option("--digits", digits, "\"level:(eps,eta);...\"")->required();

  auto* relation = app.add_subcommand("relation", "search for a rational ratio of beta powers");
  relation->add_option("--base", base)->required();
  relation->add_option("--max-exp", max_exp);
  relation->add_option("--dims", dims);

  auto* discrepancy = app.add_subcommand("discrepancy", "exact star discrepancy (1D/2D)");
  gen_flags.attach(discrepancy);
  discrepancy->add_option("--count", counts)->required();

  auto* qmc = app.add_subcommand("qmc", "integrate a test function");
  gen_flags.attach(qmc);
  qmc->add_option("--function", function)->check(CLI::IsMember({"one", "xy", "sq", "cos"}));
  qmc->add_option("--count", counts)->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "interval counts: formula vs brute force");
  sweep_cmd->add_option("--params", params)->required();
  sweep_cmd->add_option("--max-level", max_level);
  sweep_cmd->add_option("--max-index", max_index);

  auto* partition = app.add_subcommand("partition", "the level-n partition by refinement");
  partition->add_option("--params", params)->required();
  partition->add_option("--level", level)->required();
  partition->add_flag("--order", order, "print points in first-appearance order");
  partition->add_option("--max-partition", max_partition, "cap on t_n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Limits limits;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::ParseError, "cannot open config '" + config_path + "'");
      apply_config(in, limits);
    }
    if (const char* env = std::getenv("LSQMC_MAX_PARTITION")) {
      limits.max_partition = parse_number<std::uint64_t>(env, "LSQMC_MAX_PARTITION");
    }
    if (max_partition) limits.max_partition = *max_partition;

    if (generate->parsed()) return cmd_generate(base, count, format, exact, limits, out);
    if (replay->parsed()) return cmd_replay(input, out, err);
    if (gaps_cmd->parsed()) return cmd_gaps(gaps, limits, out, err);
    if (encode->parsed()) {
      out << LSSequence(parse_params(params)).encode(value).to_string() << '\n';
      return kExitOk;
    }
    if (decode_cmd->parsed()) {
      const LSParams p = parse_params(params);
      out << decode(DigitString::parse(digits, p)).get_str() << '\n';
      return kExitOk;
    }
    if (relation->parsed()) return cmd_relation(base, dims, max_exp, out);
    if (discrepancy->parsed()) return cmd_discrepancy(gen_flags, counts, limits, out);
    if (qmc->parsed()) return cmd_qmc(gen_flags, function, counts, limits, out);
    if (sweep_cmd->parsed()) return cmd_sweep(params, max_level, max_index, limits, out);
    if (partition->parsed()) return cmd_partition(params, level, order, limits, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace lsqmc::cli
