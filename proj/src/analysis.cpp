#include "splendorqd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "splendorqd/csv.hpp"

namespace sqd::analysis {

int Heatmap2D::filled() const {
  return static_cast<int>(std::count_if(grid.begin(), grid.end(), [](const auto& v) { return v.has_value(); }));
}

std::vector<std::pair<int, int>> projection_pairs() {
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < qd::kBehaviourCount; ++x)
    for (int y = x + 1; y < qd::kBehaviourCount; ++y) pairs.emplace_back(x, y);
  return pairs;
}

namespace {

void check_dims(int dim_x, int dim_y) {
  if (dim_x < 0 || dim_x >= qd::kBehaviourCount || dim_y < 0 || dim_y >= qd::kBehaviourCount)
    throw std::invalid_argument("projection dimension out of range");
  if (dim_x == dim_y) throw std::invalid_argument("projection needs two different dimensions");
}

}  // namespace

Heatmap2D project_2d(const qd::Archive& archive, int dim_x, int dim_y, Reducer reducer) {
  check_dims(dim_x, dim_y);
  Heatmap2D map;
  map.dim_x = dim_x;
  map.dim_y = dim_y;
  map.size_x = archive.spec().metrics[dim_x].buckets;
  map.size_y = archive.spec().metrics[dim_y].buckets;
  map.grid.assign(static_cast<std::size_t>(map.size_x) * map.size_y, std::nullopt);
  std::vector<int> hits(map.grid.size(), 0);
  for (const auto& [cell, elite] : archive.cells()) {
    const std::size_t i = static_cast<std::size_t>(cell[dim_y]) * map.size_x + cell[dim_x];
    std::optional<double>& v = map.grid[i];
    ++hits[i];
    switch (reducer) {
      case Reducer::kMax:
        v = v ? std::max(*v, elite.fitness) : elite.fitness;
        break;
      case Reducer::kMean:
        v = v ? *v + (elite.fitness - *v) / hits[i] : elite.fitness;
        break;
      case Reducer::kCount:
        v = hits[i];
        break;
    }
  }
  return map;
}

std::vector<CurvePoint> coverage_curve(const std::vector<qd::HistoryEntry>& history) {
  std::vector<CurvePoint> out;
  std::map<qd::CellKey, bool> seen;
  for (const qd::HistoryEntry& h : history) {
    seen.emplace(h.cell, true);
    out.push_back({h.elite.iteration, static_cast<double>(seen.size())});
  }
  return out;
}

std::vector<CurvePoint> convergence_curve(const std::vector<qd::HistoryEntry>& history) {
  std::vector<CurvePoint> out;
  std::map<qd::CellKey, double> best;
  double sum = 0.0;
  for (const qd::HistoryEntry& h : history) {
    auto [it, fresh] = best.emplace(h.cell, h.elite.fitness);
    if (fresh) {
      sum += h.elite.fitness;
    } else if (h.elite.fitness > it->second) {
      sum += h.elite.fitness - it->second;
      it->second = h.elite.fitness;
    }
    out.push_back({h.elite.iteration, sum});
  }
  return out;
}

int histogram_bin(double fitness) {
  const int bin = static_cast<int>(std::floor(fitness * kHistogramBins + 1e-9));
  return std::clamp(bin, 0, kHistogramBins - 1);
}

std::array<int, kHistogramBins> performance_histogram(const qd::Archive& archive) {
  std::array<int, kHistogramBins> counts{};
  for (const auto& [cell, elite] : archive.cells()) ++counts[histogram_bin(elite.fitness)];
  return counts;
}

std::string to_string(Coverage c) {
  switch (c) {
    case Coverage::kNeither: return "NEITHER";
    case Coverage::kOnlyA: return "ONLY_A";
    case Coverage::kOnlyB: return "ONLY_B";
    case Coverage::kBoth: return "BOTH";
  }
  return "?";
}

std::array<int, 4> CoverageGrid::counts() const {
  std::array<int, 4> out{};
  for (Coverage c : grid) ++out[static_cast<int>(c)];
  return out;
}

void check_compatible(const qd::BehaviourSpaceSpec& a, const qd::BehaviourSpaceSpec& b) {
  if (!(a == b)) throw IncompatibleSpaces("behaviour spaces differ in metrics, bounds or bucket counts");
}

CoverageGrid compare_coverage(const qd::Archive& a, const qd::Archive& b, int dim_x, int dim_y) {
  check_compatible(a.spec(), b.spec());
  const Heatmap2D ha = project_2d(a, dim_x, dim_y);
  const Heatmap2D hb = project_2d(b, dim_x, dim_y);
  CoverageGrid out{ha.dim_x, ha.dim_y, ha.size_x, ha.size_y, {}};
  out.grid.reserve(ha.grid.size());
  for (std::size_t i = 0; i < ha.grid.size(); ++i) {
    const bool in_a = ha.grid[i].has_value();
    const bool in_b = hb.grid[i].has_value();
    out.grid.push_back(in_a && in_b ? Coverage::kBoth
                       : in_a      ? Coverage::kOnlyA
                       : in_b      ? Coverage::kOnlyB
                                   : Coverage::kNeither);
  }
  return out;
}

DeltaGrid compare_delta(const qd::Archive& a, const qd::Archive& b, int dim_x, int dim_y) {
  check_compatible(a.spec(), b.spec());
  const Heatmap2D ha = project_2d(a, dim_x, dim_y);
  const Heatmap2D hb = project_2d(b, dim_x, dim_y);
  DeltaGrid out{ha.dim_x, ha.dim_y, ha.size_x, ha.size_y, {}};
  out.grid.reserve(ha.grid.size());
  for (std::size_t i = 0; i < ha.grid.size(); ++i) {
    if (ha.grid[i] && hb.grid[i])
      out.grid.push_back(*hb.grid[i] - *ha.grid[i]);
    else
      out.grid.push_back(std::nullopt);
  }
  return out;
}

namespace {

template <typename Cell>
void write_matrix(int size_x, int size_y, const std::filesystem::path& path, Cell&& cell) {
  csv::Row header = {"y"};
  for (int x = 0; x < size_x; ++x) header.push_back("x" + std::to_string(x));
  std::vector<csv::Row> rows;
  for (int y = 0; y < size_y; ++y) {
    csv::Row row = {std::to_string(y)};
    for (int x = 0; x < size_x; ++x) row.push_back(cell(x, y));
    rows.push_back(std::move(row));
  }
  csv::write_file(path.string(), header, rows);
}

std::string number(double v) { return nlohmann::json(v).dump(); }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

std::string pair_name(const qd::BehaviourSpaceSpec& spec, int x, int y) {
  return spec.metrics[x].name + "_vs_" + spec.metrics[y].name;
}

}  // namespace

void write_heatmap_csv(const Heatmap2D& map, const std::filesystem::path& path) {
  write_matrix(map.size_x, map.size_y, path, [&](int x, int y) { return optional_number(map.at(x, y)); });
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& value_name,
                     const std::filesystem::path& path) {
  std::vector<csv::Row> rows;
  for (const CurvePoint& p : curve) rows.push_back({std::to_string(p.iteration), number(p.value)});
  csv::write_file(path.string(), {"iteration", value_name}, rows);
}

void write_histogram_csv(const std::array<int, kHistogramBins>& counts, const std::filesystem::path& path) {
  std::vector<csv::Row> rows;
  for (int b = 0; b < kHistogramBins; ++b)
    rows.push_back({std::to_string(b), number(static_cast<double>(b) / kHistogramBins),
                    number(static_cast<double>(b + 1) / kHistogramBins), std::to_string(counts[b])});
  csv::write_file(path.string(), {"bin", "lo", "hi", "count"}, rows);
}

std::vector<std::string> write_analysis(const qd::Archive& archive, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [x, y] : projection_pairs()) {
    const std::string name = "heatmap_" + pair_name(archive.spec(), x, y) + ".csv";
    write_heatmap_csv(project_2d(archive, x, y), dir / name);
    written.push_back(name);
  }
  write_curve_csv(coverage_curve(archive.history()), "filled_cells", dir / "coverage.csv");
  write_curve_csv(convergence_curve(archive.history()), "fitness_sum", dir / "convergence.csv");
  write_histogram_csv(performance_histogram(archive), dir / "histogram.csv");
  written.insert(written.end(), {"coverage.csv", "convergence.csv", "histogram.csv"});
  return written;
}

std::vector<std::string> write_comparison(const qd::Archive& a, const qd::Archive& b,
                                          const std::filesystem::path& dir) {
  check_compatible(a.spec(), b.spec());
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [x, y] : projection_pairs()) {
    const std::string suffix = pair_name(a.spec(), x, y) + ".csv";
    const CoverageGrid coverage = compare_coverage(a, b, x, y);
    write_matrix(coverage.size_x, coverage.size_y, dir / ("compare_coverage_" + suffix),
                 [&](int cx, int cy) { return to_string(coverage.at(cx, cy)); });
    const DeltaGrid delta = compare_delta(a, b, x, y);
    write_matrix(delta.size_x, delta.size_y, dir / ("compare_delta_" + suffix),
                 [&](int cx, int cy) { return optional_number(delta.at(cx, cy)); });
    written.push_back("compare_coverage_" + suffix);
    written.push_back("compare_delta_" + suffix);
  }
  return written;
}

}  // namespace sqd::analysis
