#include "lsqmc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "lsqmc/error.hpp"
#include "lsqmc/format.hpp"

namespace lsqmc {

namespace {

void check_unit(double v) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "point coordinate " + format_double(v) + " not in [0,1)");
  }
}

double one(double) { return 1.0; }
double identity(double x) { return x; }
double square(double x) { return x * x; }
double cosine(double x) { return std::cos(x); }

const TestFunction kFunctions[] = {
    {"one", one, 1.0},
    {"xy", identity, 0.5},
    {"sq", square, 1.0 / 3.0},
    {"cos", cosine, 0.8414709848078965},  // sin(1)
};

}  // namespace

std::string_view to_string(DiscrepancyMethod method) {
  return method == DiscrepancyMethod::kExact1d ? "exact_1d" : "exact_2d_grid";
}

DiscrepancyReport star_discrepancy_1d(std::span<const double> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  std::vector<double> xs(points.begin(), points.end());
  for (double v : xs) check_unit(v);
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  DiscrepancyReport out{xs.size(), -1.0, {0.0}, {false}, DiscrepancyMethod::kExact1d};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - xs[i];  // a -> x_(i)+
    const double below = xs[i] - static_cast<double>(i) / n;      // a = x_(i)
    if (above > out.d_star) out = {xs.size(), above, {xs[i]}, {true}, DiscrepancyMethod::kExact1d};
    if (below > out.d_star) out = {xs.size(), below, {xs[i]}, {false}, DiscrepancyMethod::kExact1d};
  }
  return out;
}

DiscrepancyReport star_discrepancy_2d(std::span<const std::array<double, 2>> points,
                                      std::size_t cap) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  if (points.size() > cap) {
    throw Error(ErrorKind::ResourceLimit, "exact 2D discrepancy capped at " + std::to_string(cap) +
                                              " points, got " + std::to_string(points.size()));
  }
  for (const auto& p : points) {
    check_unit(p[0]);
    check_unit(p[1]);
  }
  const std::size_t count = points.size();
  const double n = static_cast<double>(count);

  std::vector<std::size_t> by_y(count);
  std::iota(by_y.begin(), by_y.end(), 0);
  std::stable_sort(by_y.begin(), by_y.end(),
                   [&](std::size_t i, std::size_t j) { return points[i][1] < points[j][1]; });

  std::vector<double> rows;
  rows.reserve(count + 1);
  for (const auto& p : points) rows.push_back(p[0]);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  rows.push_back(1.0);

  DiscrepancyReport best{count, -1.0, {0.0, 0.0}, {false, false}, DiscrepancyMethod::kExact2dGrid};
  const auto consider = [&](double dev, double a1, double a2, bool c1, bool c2) {
    if (dev > best.d_star) best = {count, dev, {a1, a2}, {c1, c2}, DiscrepancyMethod::kExact2dGrid};
  };

  std::vector<double> column;
  column.reserve(count);
  for (const double a1 : rows) {
    // Deficit: volume minus open count, a2 at a filtered x2 value or 1.
    column.clear();
    for (std::size_t i : by_y) {
      if (points[i][0] < a1) column.push_back(points[i][1]);
    }
    for (std::size_t j = 0; j < column.size(); ++j) {
      if (j > 0 && column[j] == column[j - 1]) continue;
      consider(a1 * column[j] - static_cast<double>(j) / n, a1, column[j], false, false);
    }
    consider(a1 - static_cast<double>(column.size()) / n, a1, 1.0, false, false);

    if (a1 >= 1.0) continue;
    // Excess: closed count minus volume at right limits of x1 and x2.
    column.clear();
    for (std::size_t i : by_y) {
      if (points[i][0] <= a1) column.push_back(points[i][1]);
    }
    for (std::size_t j = 0; j < column.size(); ++j) {
      if (j + 1 < column.size() && column[j + 1] == column[j]) continue;
      consider(static_cast<double>(j + 1) / n - a1 * column[j], a1, column[j], true, true);
    }
  }
  return best;
}

double local_deviation(std::span<const double> points, double anchor, bool closed) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  const auto inside = std::count_if(points.begin(), points.end(), [&](double x) {
    return closed ? x <= anchor : x < anchor;
  });
  return std::abs(static_cast<double>(inside) / static_cast<double>(points.size()) - anchor);
}

double local_deviation(std::span<const std::array<double, 2>> points,
                       const std::array<double, 2>& anchor, const std::array<bool, 2>& closed) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no points");
  const auto below = [](double x, double a, bool c) { return c ? x <= a : x < a; };
  const auto inside = std::count_if(points.begin(), points.end(), [&](const auto& p) {
    return below(p[0], anchor[0], closed[0]) && below(p[1], anchor[1], closed[1]);
  });
  return std::abs(static_cast<double>(inside) / static_cast<double>(points.size()) -
                  anchor[0] * anchor[1]);
}

const TestFunction& test_function(std::string_view id) {
  for (const auto& f : kFunctions) {
    if (f.id == id) return f;
  }
  throw Error(ErrorKind::UnknownFunction,
              "unknown test function '" + std::string(id) + "' (one, xy, sq, cos)");
}

PointGenerator PointGenerator::ls(MultiBase base) {
  PointGenerator g(Kind::kLS, base.dimension());
  g.base_ = std::move(base);
  return g;
}

PointGenerator PointGenerator::halton(std::vector<std::uint32_t> bases) {
  if (bases.empty()) throw Error(ErrorKind::InvalidParams, "Halton needs at least one base");
  for (auto b : bases) {
    if (b < 2) throw Error(ErrorKind::InvalidParams, "Halton base must be >= 2");
  }
  PointGenerator g(Kind::kHalton, bases.size());
  g.halton_ = std::move(bases);
  return g;
}

PointGenerator PointGenerator::uniform(std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw Error(ErrorKind::InvalidParams, "dimension must be positive");
  PointGenerator g(Kind::kUniform, dimension);
  g.seed_ = seed;
  return g;
}

std::string PointGenerator::name() const {
  switch (kind_) {
    case Kind::kLS:
      return "ls(" + base_->to_string() + ")";
    case Kind::kHalton: {
      std::string out = "halton(";
      for (std::size_t i = 0; i < halton_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(halton_[i]);
      }
      return out + ")";
    }
    case Kind::kUniform:
      return "uniform(seed=" + std::to_string(seed_) + ")";
  }
  return {};
}

std::vector<double> PointGenerator::generate(std::size_t n) const {
  std::vector<double> out;
  out.reserve(n * dimension_);
  switch (kind_) {
    case Kind::kLS:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dimension_; ++d) {
          out.push_back(base_->component(d).point_double(i));
        }
      }
      break;
    case Kind::kHalton:
      for (std::size_t i = 0; i < n; ++i) {
        for (auto b : halton_) out.push_back(radical_inverse_double(i, b));
      }
      break;
    case Kind::kUniform: {
      std::mt19937_64 rng(seed_);
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      for (std::size_t i = 0; i < n * dimension_; ++i) out.push_back(dist(rng));
      break;
    }
  }
  return out;
}

QmcResult qmc_integrate(std::string_view function, const PointGenerator& generator,
                        std::size_t n) {
  const TestFunction& f = test_function(function);
  if (n == 0) throw Error(ErrorKind::EmptyInput, "need at least one sample");
  const std::size_t d = generator.dimension();
  const std::vector<double> pts = generator.generate(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < d; ++j) v *= f.factor(pts[i * d + j]);
    sum += v;
  }
  const double estimate = sum / static_cast<double>(n);
  const double exact = std::pow(f.factor_integral, static_cast<double>(d));
  return {std::string(f.id), generator.name(), n, estimate, exact, std::abs(estimate - exact)};
}

void write_report_csv(std::ostream& os, const std::vector<DiscrepancyReport>& reports) {
  const std::size_t d = reports.empty() ? 1 : reports.front().witness.size();
  os << "N,d_star";
  for (std::size_t i = 1; i <= d; ++i) os << ",a" << i;
  os << ",method\n";
  for (const auto& r : reports) {
    os << r.n << ',' << format_double(r.d_star);
    for (double a : r.witness) os << ',' << format_double(a);
    os << ',' << to_string(r.method) << '\n';
  }
}

void write_qmc_csv(std::ostream& os, const std::vector<QmcResult>& results) {
  os << "function,generator,N,estimate,error\n";
  for (const auto& r : results) {
    os << r.function << ",\"" << r.generator << "\"," << r.n << ',' << format_double(r.estimate)
       << ',' << format_double(r.abs_error) << '\n';
  }
}

}  // namespace lsqmc
