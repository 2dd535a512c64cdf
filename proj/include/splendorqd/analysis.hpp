#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splendorqd/qd.hpp"

namespace sqd::analysis {

/// Only kMax is used by the reports; the others are available for exploration.
enum class Reducer { kMax, kMean, kCount };

struct Heatmap2D {
  int dim_x = 0;
  int dim_y = 1;
  int size_x = 0;
  int size_y = 0;
  std::vector<std::optional<double>> grid;  // row-major, y * size_x + x

  const std::optional<double>& at(int x, int y) const { return grid[static_cast<std::size_t>(y) * size_x + x]; }
  int filled() const;
};

/// The 10 unordered metric pairs (x < y).
std::vector<std::pair<int, int>> projection_pairs();

/// Reduces the fitness of every elite projecting onto each (x, y) cell.
/// Throws std::invalid_argument when dim_x == dim_y or a dimension is out of range.
Heatmap2D project_2d(const qd::Archive& archive, int dim_x, int dim_y, Reducer reducer = Reducer::kMax);

struct CurvePoint {
  int iteration = 0;
  double value = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

/// Filled-cell count after each history entry.
std::vector<CurvePoint> coverage_curve(const std::vector<qd::HistoryEntry>& history);
/// Sum over cells of the best fitness after each history entry.
std::vector<CurvePoint> convergence_curve(const std::vector<qd::HistoryEntry>& history);

inline constexpr int kHistogramBins = 10;

/// Elite fitness over [0,1] in 10 left-closed bins; 1.0 lands in the last bin.
std::array<int, kHistogramBins> performance_histogram(const qd::Archive& archive);
int histogram_bin(double fitness);

enum class Coverage : std::uint8_t { kNeither, kOnlyA, kOnlyB, kBoth };
std::string to_string(Coverage c);

struct CoverageGrid {
  int dim_x = 0;
  int dim_y = 1;
  int size_x = 0;
  int size_y = 0;
  std::vector<Coverage> grid;

  Coverage at(int x, int y) const { return grid[static_cast<std::size_t>(y) * size_x + x]; }
  /// Cell count per category, indexed by the enum value.
  std::array<int, 4> counts() const;
};

struct DeltaGrid {
  int dim_x = 0;
  int dim_y = 1;
  int size_x = 0;
  int size_y = 0;
  std::vector<std::optional<double>> grid;

  const std::optional<double>& at(int x, int y) const { return grid[static_cast<std::size_t>(y) * size_x + x]; }
};

struct IncompatibleSpaces : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Throws IncompatibleSpaces unless both behaviour spaces are identical.
void check_compatible(const qd::BehaviourSpaceSpec& a, const qd::BehaviourSpaceSpec& b);

CoverageGrid compare_coverage(const qd::Archive& a, const qd::Archive& b, int dim_x, int dim_y);
/// heat_B - heat_A where both projections are defined.
DeltaGrid compare_delta(const qd::Archive& a, const qd::Archive& b, int dim_x, int dim_y);

// CSV exports. Matrices have a leading `y` column followed by x0..x{n-1};
// undefined cells are empty.
void write_heatmap_csv(const Heatmap2D& map, const std::filesystem::path& path);
void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& value_name,
                     const std::filesystem::path& path);
void write_histogram_csv(const std::array<int, kHistogramBins>& counts, const std::filesystem::path& path);

/// heatmap_[mX]_vs_[mY].csv for all pairs, coverage.csv, convergence.csv, histogram.csv.
/// Returns the written file names.
std::vector<std::string> write_analysis(const qd::Archive& archive, const std::filesystem::path& dir);
/// compare_coverage_[mX]_vs_[mY].csv and compare_delta_[mX]_vs_[mY].csv for all pairs.
std::vector<std::string> write_comparison(const qd::Archive& a, const qd::Archive& b, const std::filesystem::path& dir);

}  // namespace sqd::analysis
