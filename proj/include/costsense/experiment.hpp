#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "costsense/costs.hpp"
#include "costsense/metrics.hpp"
#include "costsense/quadrature.hpp"
#include "costsense/ranking.hpp"
#include "costsense/rng.hpp"
#include "costsense/weighting.hpp"

namespace costsense {

/// Revenues read from one column of a CSV file with a header row.
struct CsvRevenue {
    std::string path;
    std::string column{"MonthlyCharges"};
};

/// Revenues drawn uniformly from [lo, hi]; the defaults span the range of
/// monthly charges in the public Telco customer churn data.
struct SyntheticRevenue {
    double lo{18.25};
    double hi{118.75};
    std::size_t count{7043};
};

using RevenueSource = std::variant<CsvRevenue, SyntheticRevenue>;

/// RFC-4180 records: quoted fields may hold commas, newlines and "" escapes.
/// Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv_records(std::istream& in);

std::vector<double> default_grid();
std::vector<MetricId> default_metrics();

inline constexpr std::uint64_t kDefaultSeed = 20240229;

struct ExperimentConfig {
    std::size_t n_tot{400};
    std::size_t n_samples{100};
    double p_eff{0.25};
    std::vector<double> grid{default_grid()};
    std::vector<MetricId> metrics{default_metrics()};
    CorrelationScheme correlation{};
    std::uint64_t seed{kDefaultSeed};
    RevenueSource revenue_source{SyntheticRevenue{}};
    QuadratureConfig quadrature{};

    /// Throws Error(config) describing the first violated constraint.
    void validate() const;
};

/// Applies one `key = value` setting. Keys: n_tot, n_samples, p_eff, grid,
/// metrics, correlation, n0, seed, revenue_csv, revenue_column,
/// revenue_synthetic ("lo:hi:count").
void apply_config_entry(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat key-value text: one `key = value` per line, `#` starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

struct RevenueLoad {
    std::vector<double> values;
    std::size_t skipped{0};
};

/// Reads the named column of an RFC-4180 CSV. Blank, non-numeric or
/// non-positive entries are skipped and counted.
RevenueLoad load_revenues(std::istream& in, const std::string& column);
RevenueLoad load_revenues(const std::filesystem::path& path, const std::string& column);

/// Resolves the configured source into a revenue pool.
RevenueLoad resolve_revenue_pool(const ExperimentConfig& config);

/// n revenues drawn without replacement from the pool, in draw order.
std::vector<double> sample_revenues(std::span<const double> pool, std::size_t n, PhiloxStream& rng);

/// Moments of the per-example cost ratio c_a = M / (R_a P_eff) over the
/// scenario's revenues, each clamped into [eps, 1 - eps].
struct CostRatioMoments {
    double mean{0.0};
    double variance{0.0};
    std::size_t clamped{0};
};

inline constexpr double kCostRatioClamp = 1e-6;

/// Relative gap below which two metric or cost values rank as tied; absorbs
/// rounding between algebraically equal expressions.
inline constexpr double kRankTieTolerance = 1e-12;

CostRatioMoments empirical_c_distribution(const ChurnScenario& scenario);

/// Moment-matched Beta, or a point mass at the mean when the moments admit
/// no Beta (excessive variance, or variance below 1e-10 of the Bernoulli
/// bound mean * (1 - mean)).
Distribution cost_ratio_law(const CostRatioMoments& moments);

struct CellMetricResult {
    MetricValue mean;
    std::size_t defined_samples{0};
    std::size_t undefined_samples{0};
    std::size_t dropped_values{0};
};

struct CellResult {
    double r_plus{0.0};
    double r_c{0.0};
    Count positives{0};
    bool positives_clamped{false};
    CostRatioMoments cost_ratio;
    std::uint64_t draw_digest{0};
    std::vector<CellMetricResult> metrics;  // aligned with config.metrics
};

/// Stream ids used for drawing revenues; cell samples use
/// (sample, r_plus index, r_C index).
inline constexpr std::uint32_t kReservedStream = 0xFFFFFFFFu;

/// One (r_+, r_C) cell: positive labels and predicted-positive sets are drawn
/// once per sample and shared by every configured metric.
CellResult run_cell(std::size_t r_plus_index, std::size_t r_c_index, const ExperimentConfig& config,
                    std::span<const double> revenues);

struct HeatmapGrid {
    MetricId metric;
    std::vector<double> r_plus_axis;
    std::vector<double> r_c_axis;
    /// cells[r_c index][r_plus index]; empty when every sample was undefined.
    std::vector<std::vector<MetricValue>> cells;
    std::vector<std::vector<std::size_t>> undefined_counts;
    std::vector<std::vector<std::size_t>> dropped_values;
};

struct HeatmapRun {
    ExperimentConfig config;
    std::size_t pool_size{0};
    std::size_t pool_skipped{0};
    std::vector<double> revenues;  // the n_tot sampled revenues
    std::vector<CellResult> cells;  // row-major: r_plus index * grid + r_c index
    std::vector<HeatmapGrid> grids;  // aligned with config.metrics
};

using ProgressSink = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every cell of the grid. Output is identical for any worker count.
HeatmapRun run_heatmap(const ExperimentConfig& config, const RevenueLoad& pool, unsigned workers = 1,
                       const ProgressSink& progress = {});
HeatmapRun run_heatmap(const ExperimentConfig& config, unsigned workers = 1, const ProgressSink& progress = {});

/// First row: corner label then the r_+ axis; first column: the r_C axis;
/// cells with 6 decimals, blank when undefined.
void write_grid_csv(const HeatmapGrid& grid, std::ostream& out);
std::string grid_metadata_json(const HeatmapRun& run, std::size_t metric_index);
/// Coefficients multiplied by 10 and rounded, r_C decreasing down the rows.
std::string render_text(const HeatmapGrid& grid);
/// File-system friendly metric name: "wa(0.7)" -> "wa-0.7".
std::string file_stem(const MetricId& id);
/// Writes <stem>.csv and <stem>.json per metric; returns the paths written.
std::vector<std::filesystem::path> write_outputs(const HeatmapRun& run, const std::filesystem::path& dir);

}  // namespace costsense
