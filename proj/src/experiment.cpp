#include "costsense/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "costsense/error.hpp"
#include "costsense/format.hpp"

namespace costsense {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::span<const std::uint32_t> values) {
    for (std::uint32_t v : values) {
        for (int byte = 0; byte < 4; ++byte) {
            h ^= (v >> (8 * byte)) & 0xFFu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << v;
    return out.str();
}

std::vector<double> parse_grid(std::string_view value) {
    if (trim(value) == "default") return default_grid();
    std::vector<double> grid;
    for (const auto& piece : split_trimmed(value, ',')) grid.push_back(parse_double(piece, "grid value"));
    return grid;
}

std::vector<MetricId> parse_metric_list(std::string_view value) {
    if (trim(value) == "all") return default_metrics();
    std::vector<MetricId> out;
    for (const auto& piece : split_trimmed(value, ',')) {
        if (!piece.empty()) out.push_back(MetricId::parse(piece));
    }
    return out;
}

std::uint32_t as_u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

Count positives_for(double r_plus, std::size_t n_tot, bool& clamped) {
    const auto raw = static_cast<long long>(std::llround(static_cast<double>(n_tot) * r_plus));
    const auto bounded = std::clamp<long long>(raw, 1, static_cast<long long>(n_tot) - 1);
    clamped = bounded != raw;
    return static_cast<Count>(bounded);
}

nlohmann::json revenue_source_json(const RevenueSource& source) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CsvRevenue>) {
                return {{"kind", "csv"}, {"path", s.path}, {"column", s.column}};
            } else {
                return {{"kind", "synthetic-uniform"}, {"lo", s.lo}, {"hi", s.hi}, {"count", s.count}};
            }
        },
        source);
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_records(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !row.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw Error(ErrorKind::ingestion, "unterminated quoted field");
    if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> default_grid() { return {0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}; }

std::vector<MetricId> default_metrics() {
    std::vector<MetricId> out;
    for (const auto& d : metric_registry()) out.push_back(d.id);
    return out;
}

void ExperimentConfig::validate() const {
    if (n_tot < 2) throw Error(ErrorKind::config, "n_tot must be at least 2");
    if (n_tot >= kReservedStream) throw Error(ErrorKind::config, "n_tot is too large");
    if (n_samples < 1) throw Error(ErrorKind::config, "n_samples must be at least 1");
    if (n_samples >= kReservedStream) throw Error(ErrorKind::config, "n_samples is too large");
    if (!(p_eff > 0.0 && p_eff <= 1.0)) throw Error(ErrorKind::config, "p_eff must lie in (0, 1]");
    if (grid.empty()) throw Error(ErrorKind::config, "grid must not be empty");
    for (double g : grid) {
        if (!(g > 0.0 && g < 1.0)) throw Error(ErrorKind::config, "grid values must lie strictly inside (0, 1)");
    }
    if (metrics.empty()) throw Error(ErrorKind::config, "at least one metric is required");
    if (!(correlation.n0 > 0.0)) throw Error(ErrorKind::config, "n0 must be positive");
    if (const auto* s = std::get_if<SyntheticRevenue>(&revenue_source)) {
        if (!(s->lo > 0.0 && s->lo <= s->hi) || s->count == 0) {
            throw Error(ErrorKind::config, "synthetic revenues need 0 < lo <= hi and a positive count");
        }
    }
}

void apply_config_entry(ExperimentConfig& config, std::string_view key, std::string_view value) {
    const std::string k(trim(key));
    try {
        if (k == "n_tot") {
            config.n_tot = parse_unsigned(value, k);
        } else if (k == "n_samples") {
            config.n_samples = parse_unsigned(value, k);
        } else if (k == "p_eff") {
            config.p_eff = parse_double(value, k);
        } else if (k == "grid") {
            config.grid = parse_grid(value);
        } else if (k == "metrics") {
            config.metrics = parse_metric_list(value);
        } else if (k == "correlation") {
            const auto v = trim(value);
            if (v == "standard") {
                config.correlation.kind = CorrelationKind::standard;
            } else if (v == "weighted") {
                config.correlation.kind = CorrelationKind::weighted;
            } else {
                throw Error(ErrorKind::config, "correlation must be 'standard' or 'weighted'");
            }
        } else if (k == "n0") {
            config.correlation.n0 = parse_double(value, k);
        } else if (k == "seed") {
            config.seed = parse_unsigned(value, k);
        } else if (k == "revenue_csv") {
            auto column = std::holds_alternative<CsvRevenue>(config.revenue_source)
                              ? std::get<CsvRevenue>(config.revenue_source).column
                              : CsvRevenue{}.column;
            config.revenue_source = CsvRevenue{std::string(trim(value)), column};
        } else if (k == "revenue_column") {
            if (auto* csv = std::get_if<CsvRevenue>(&config.revenue_source)) {
                csv->column = std::string(trim(value));
            } else {
                // Remember the column for a later revenue_csv entry.
                config.revenue_source = CsvRevenue{"", std::string(trim(value))};
            }
        } else if (k == "revenue_synthetic") {
            const auto parts = split_trimmed(value, ':');
            if (parts.size() != 3) throw Error(ErrorKind::config, "revenue_synthetic expects lo:hi:count");
            config.revenue_source =
                SyntheticRevenue{parse_double(parts[0], "lo"), parse_double(parts[1], "hi"),
                                 static_cast<std::size_t>(parse_unsigned(parts[2], "count"))};
        } else {
            throw Error(ErrorKind::config, "unknown configuration key '" + k + "'");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        throw Error(ErrorKind::config, "key '" + k + "': " + e.what());
    }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::config, "line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_config_entry(base, std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path.string() + "'");
    return parse_config(in, std::move(base));
}

RevenueLoad load_revenues(std::istream& in, const std::string& column) {
    const auto rows = read_csv_records(in);
    if (rows.empty()) throw Error(ErrorKind::ingestion, "CSV has no header row");
    const auto& header = rows.front();
    auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) { return trim(h) == column; });
    if (it == header.end()) throw Error(ErrorKind::ingestion, "CSV has no column '" + column + "'");
    const auto col = static_cast<std::size_t>(it - header.begin());
    RevenueLoad out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (col >= row.size()) {
            ++out.skipped;
            continue;
        }
        try {
            const double v = parse_double(row[col], column);
            if (v > 0.0) {
                out.values.push_back(v);
            } else {
                ++out.skipped;
            }
        } catch (const Error&) {
            ++out.skipped;
        }
    }
    return out;
}

RevenueLoad load_revenues(const std::filesystem::path& path, const std::string& column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ingestion, "cannot open revenue file '" + path.string() + "'");
    return load_revenues(in, column);
}

RevenueLoad resolve_revenue_pool(const ExperimentConfig& config) {
    if (const auto* csv = std::get_if<CsvRevenue>(&config.revenue_source)) {
        if (csv->path.empty()) throw Error(ErrorKind::config, "revenue_column given without revenue_csv");
        return load_revenues(std::filesystem::path(csv->path), csv->column);
    }
    const auto& s = std::get<SyntheticRevenue>(config.revenue_source);
    PhiloxStream rng(config.seed, kReservedStream, kReservedStream, kReservedStream - 1);
    RevenueLoad out;
    out.values.reserve(s.count);
    for (std::size_t i = 0; i < s.count; ++i) out.values.push_back(s.lo + (s.hi - s.lo) * rng.next_unit());
    return out;
}

std::vector<double> sample_revenues(std::span<const double> pool, std::size_t n, PhiloxStream& rng) {
    if (pool.size() < n) {
        throw Error(ErrorKind::insufficient_data, "revenue pool holds " + std::to_string(pool.size()) +
                                                      " usable values, " + std::to_string(n) + " needed");
    }
    const auto picks = choose_without_replacement(as_u32(pool.size()), as_u32(n), rng);
    std::vector<double> out;
    out.reserve(n);
    for (auto i : picks) out.push_back(pool[i]);
    return out;
}

CostRatioMoments empirical_c_distribution(const ChurnScenario& scenario) {
    CostRatioMoments m;
    std::vector<double> c;
    c.reserve(scenario.revenues().size());
    for (double r : scenario.revenues()) {
        double value = scenario.retention_cost() / (r * scenario.effectiveness());
        if (!(value > kCostRatioClamp && value < 1.0 - kCostRatioClamp)) {
            value = std::clamp(value, kCostRatioClamp, 1.0 - kCostRatioClamp);
            ++m.clamped;
        }
        c.push_back(value);
    }
    const double n = static_cast<double>(c.size());
    m.mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : c) ss += (v - m.mean) * (v - m.mean);
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    m.variance = *lo == *hi ? 0.0 : ss / n;
    return m;
}

Distribution cost_ratio_law(const CostRatioMoments& moments) {
    const double bound = moments.mean * (1.0 - moments.mean);
    if (moments.variance > 1e-10 * bound && moments.variance < bound) {
        return Distribution::beta(beta_from_moments(moments.mean, moments.variance));
    }
    return Distribution::point(moments.mean);
}

CellResult run_cell(std::size_t r_plus_index, std::size_t r_c_index, const ExperimentConfig& config,
                    std::span<const double> revenues) {
    const std::size_t n_tot = config.n_tot;
    if (revenues.size() != n_tot) throw Error(ErrorKind::invalid_argument, "one revenue per example is required");
    if (r_plus_index >= config.grid.size() || r_c_index >= config.grid.size()) {
        throw Error(ErrorKind::invalid_argument, "grid index out of range");
    }

    CellResult cell;
    cell.r_plus = config.grid[r_plus_index];
    cell.r_c = config.grid[r_c_index];
    const Count positives = positives_for(cell.r_plus, n_tot, cell.positives_clamped);
    const Count negatives = n_tot - positives;
    cell.positives = positives;

    const std::vector<double> revenue_list(revenues.begin(), revenues.end());
    const double r_avg = std::accumulate(revenue_list.begin(), revenue_list.end(), 0.0) / static_cast<double>(n_tot);
    const ChurnScenario scenario(tune_retention_cost(cell.r_c, config.p_eff, r_avg), config.p_eff, revenue_list);
    const ChurnCostTable table(scenario);
    const CostContext cost_ctx{table.average_costs(), 0.0};
    cell.cost_ratio = empirical_c_distribution(scenario);
    const Distribution law = cost_ratio_law(cell.cost_ratio);

    std::vector<MetricEvaluator> evaluators;
    evaluators.reserve(config.metrics.size());
    for (const auto& id : config.metrics) evaluators.emplace_back(id, positives, negatives, cost_ctx, law, config.quadrature);

    struct Accumulator {
        double sum{0.0};
        std::size_t defined{0};
        std::size_t undefined{0};
        std::size_t dropped{0};
    };
    std::vector<Accumulator> acc(config.metrics.size());

    const std::size_t outcomes = n_tot + 1;
    std::vector<double> tcc(outcomes);
    std::vector<ConfusionMatrix> matrices(outcomes);
    std::vector<std::uint8_t> is_positive(n_tot);
    std::vector<std::uint8_t> is_predicted(n_tot);
    std::vector<double> metric_values;
    std::vector<double> kept_tcc;
    metric_values.reserve(outcomes);
    kept_tcc.reserve(outcomes);
    std::uint64_t digest = 14695981039346656037ull;

    for (std::size_t s = 0; s < config.n_samples; ++s) {
        PhiloxStream rng(config.seed, as_u32(s), as_u32(r_plus_index), as_u32(r_c_index));
        const auto positive_ids = choose_without_replacement(as_u32(n_tot), as_u32(positives), rng);
        digest = fnv1a(digest, positive_ids);
        std::fill(is_positive.begin(), is_positive.end(), 0);
        for (auto i : positive_ids) is_positive[i] = 1;

        for (std::size_t pp = 0; pp < outcomes; ++pp) {
            const auto predicted_ids = choose_without_replacement(as_u32(n_tot), as_u32(pp), rng);
            digest = fnv1a(digest, predicted_ids);
            std::fill(is_predicted.begin(), is_predicted.end(), 0);
            for (auto i : predicted_ids) is_predicted[i] = 1;

            ConfusionMatrix cm;
            double cost = 0.0;
            for (std::size_t i = 0; i < n_tot; ++i) {
                if (is_positive[i]) {
                    if (is_predicted[i]) {
                        ++cm.tp;
                    } else {
                        ++cm.fn;
                        cost += table.missed_cost(i);
                    }
                } else if (is_predicted[i]) {
                    ++cm.fp;
                    cost += table.false_alarm_cost();
                } else {
                    ++cm.tn;
                }
            }
            matrices[pp] = cm;
            tcc[pp] = cost;
        }

        const RankVector tcc_ranks = rank_values(tcc, Orientation::lower_is_better, kRankTieTolerance);
        for (std::size_t m = 0; m < evaluators.size(); ++m) {
            metric_values.clear();
            kept_tcc.clear();
            for (std::size_t pp = 0; pp < outcomes; ++pp) {
                const MetricValue v = evaluators[m](matrices[pp]);
                if (v && std::isfinite(*v)) {
                    metric_values.push_back(*v);
                    kept_tcc.push_back(tcc[pp]);
                } else {
                    ++acc[m].dropped;
                }
            }
            MetricValue corr;
            if (metric_values.size() >= 2) {
                const RankVector metric_ranks =
                    rank_values(metric_values, evaluators[m].descriptor().orientation, kRankTieTolerance);
                corr = kept_tcc.size() == outcomes
                           ? correlate(config.correlation, tcc_ranks, metric_ranks)
                           : correlate(config.correlation,
                                       rank_values(kept_tcc, Orientation::lower_is_better, kRankTieTolerance),
                                       metric_ranks);
            }
            if (corr) {
                acc[m].sum += *corr;
                ++acc[m].defined;
            } else {
                ++acc[m].undefined;
            }
        }
    }

    cell.draw_digest = digest;
    cell.metrics.reserve(acc.size());
    for (const auto& a : acc) {
        CellMetricResult r;
        if (a.defined > 0) r.mean = a.sum / static_cast<double>(a.defined);
        r.defined_samples = a.defined;
        r.undefined_samples = a.undefined;
        r.dropped_values = a.dropped;
        cell.metrics.push_back(r);
    }
    return cell;
}

HeatmapRun run_heatmap(const ExperimentConfig& config, const RevenueLoad& pool, unsigned workers,
                       const ProgressSink& progress) {
    config.validate();
    HeatmapRun run;
    run.config = config;
    run.pool_size = pool.values.size();
    run.pool_skipped = pool.skipped;
    PhiloxStream revenue_rng(config.seed, kReservedStream, kReservedStream, kReservedStream);
    run.revenues = sample_revenues(pool.values, config.n_tot, revenue_rng);

    const std::size_t g = config.grid.size();
    const std::size_t total = g * g;
    run.cells.resize(total);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex guard;
    std::exception_ptr failure;

    const auto work = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= total) return;
            try {
                run.cells[k] = run_cell(k / g, k % g, config, run.revenues);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(guard);
                progress(finished, total);
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(count);
        for (unsigned t = 0; t < count; ++t) threads.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        HeatmapGrid grid;
        grid.metric = config.metrics[m];
        grid.r_plus_axis = config.grid;
        grid.r_c_axis = config.grid;
        grid.cells.assign(g, std::vector<MetricValue>(g));
        grid.undefined_counts.assign(g, std::vector<std::size_t>(g, 0));
        grid.dropped_values.assign(g, std::vector<std::size_t>(g, 0));
        for (std::size_t ip = 0; ip < g; ++ip) {
            for (std::size_t ic = 0; ic < g; ++ic) {
                const auto& r = run.cells[ip * g + ic].metrics[m];
                grid.cells[ic][ip] = r.mean;
                grid.undefined_counts[ic][ip] = r.undefined_samples;
                grid.dropped_values[ic][ip] = r.dropped_values;
            }
        }
        run.grids.push_back(std::move(grid));
    }
    return run;
}

HeatmapRun run_heatmap(const ExperimentConfig& config, unsigned workers, const ProgressSink& progress) {
    config.validate();
    return run_heatmap(config, resolve_revenue_pool(config), workers, progress);
}

void write_grid_csv(const HeatmapGrid& grid, std::ostream& out) {
    out << "r_c\\r_plus";
    for (double x : grid.r_plus_axis) out << ',' << shortest_decimal(x);
    out << '\n';
    for (std::size_t ic = 0; ic < grid.r_c_axis.size(); ++ic) {
        out << shortest_decimal(grid.r_c_axis[ic]);
        for (std::size_t ip = 0; ip < grid.r_plus_axis.size(); ++ip) {
            out << ',';
            if (const auto& v = grid.cells[ic][ip]) out << fixed_decimal(*v, 6);
        }
        out << '\n';
    }
}

std::string grid_metadata_json(const HeatmapRun& run, std::size_t metric_index) {
    const auto& config = run.config;
    const auto& grid = run.grids.at(metric_index);
    const std::size_t g = config.grid.size();
    const auto descriptor = describe(grid.metric);

    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& id : config.metrics) metrics.push_back(id.name());

    nlohmann::json doc;
    doc["metric"] = grid.metric.name();
    doc["orientation"] =
        descriptor.orientation == Orientation::higher_is_better ? "higher_is_better" : "lower_is_better";
    doc["rng"] = {{"algorithm", PhiloxStream::algorithm_id},
                  {"seed", config.seed},
                  {"stream_layout", "key=seed; counter=(block, sample, r_plus index, r_c index); revenues on "
                                    "(block, 2^32-1, 2^32-1, 2^32-1)"}};
    doc["config"] = {{"n_tot", config.n_tot},
                     {"n_samples", config.n_samples},
                     {"p_eff", config.p_eff},
                     {"grid", config.grid},
                     {"metrics", metrics},
                     {"correlation", config.correlation.kind == CorrelationKind::standard ? "standard" : "weighted"},
                     {"n0", config.correlation.n0},
                     {"revenue_source", revenue_source_json(config.revenue_source)}};
    const double r_avg =
        std::accumulate(run.revenues.begin(), run.revenues.end(), 0.0) / static_cast<double>(run.revenues.size());
    doc["revenues"] = {{"pool_size", run.pool_size}, {"pool_skipped", run.pool_skipped}, {"r_avg", r_avg}};
    doc["r_plus_axis"] = grid.r_plus_axis;
    doc["r_c_axis"] = grid.r_c_axis;

    nlohmann::json positives = nlohmann::json::array();
    nlohmann::json clamped_p = nlohmann::json::array();
    for (std::size_t ip = 0; ip < g; ++ip) {
        positives.push_back(run.cells[ip * g].positives);
        clamped_p.push_back(run.cells[ip * g].positives_clamped);
    }
    doc["positives"] = positives;
    doc["positives_clamped"] = clamped_p;

    nlohmann::json cells = nlohmann::json::array();
    nlohmann::json undefined = nlohmann::json::array();
    nlohmann::json dropped = nlohmann::json::array();
    nlohmann::json c_clamped = nlohmann::json::array();
    nlohmann::json digests = nlohmann::json::array();
    for (std::size_t ic = 0; ic < g; ++ic) {
        nlohmann::json row = nlohmann::json::array();
        nlohmann::json urow = nlohmann::json::array();
        nlohmann::json drow = nlohmann::json::array();
        nlohmann::json crow = nlohmann::json::array();
        nlohmann::json hrow = nlohmann::json::array();
        for (std::size_t ip = 0; ip < g; ++ip) {
            const auto& v = grid.cells[ic][ip];
            row.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
            urow.push_back(grid.undefined_counts[ic][ip]);
            drow.push_back(grid.dropped_values[ic][ip]);
            crow.push_back(run.cells[ip * g + ic].cost_ratio.clamped);
            hrow.push_back(hex64(run.cells[ip * g + ic].draw_digest));
        }
        cells.push_back(row);
        undefined.push_back(urow);
        dropped.push_back(drow);
        c_clamped.push_back(crow);
        digests.push_back(hrow);
    }
    doc["cells"] = cells;
    doc["undefined_correlations"] = undefined;
    doc["dropped_values"] = dropped;
    doc["cost_ratio_clamped"] = c_clamped;
    doc["draw_digests"] = digests;
    return doc.dump(2) + "\n";
}

std::string render_text(const HeatmapGrid& grid) {
    std::ostringstream out;
    out << grid.metric.name() << " (x10, rounded; rows r_c, columns r_plus)\n";
    out << "      ";
    for (double x : grid.r_plus_axis) {
        auto label = shortest_decimal(x);
        out << std::string(label.size() < 5 ? 5 - label.size() : 0, ' ') << label;
    }
    out << '\n';
    for (std::size_t k = grid.r_c_axis.size(); k-- > 0;) {
        auto label = shortest_decimal(grid.r_c_axis[k]);
        out << label << std::string(label.size() < 6 ? 6 - label.size() : 1, ' ');
        for (std::size_t ip = 0; ip < grid.r_plus_axis.size(); ++ip) {
            const auto& v = grid.cells[k][ip];
            std::string cell = v ? std::to_string(std::lround(10.0 * *v)) : ".";
            out << std::string(5 - std::min<std::size_t>(cell.size(), 4), ' ') << cell;
        }
        out << '\n';
    }
    return out.str();
}

std::string file_stem(const MetricId& id) {
    std::string out;
    for (char c : id.name()) {
        if (c == '(' || c == ',') {
            out += '-';
        } else if (c != ')') {
            out += c;
        }
    }
    return out;
}

std::vector<std::filesystem::path> write_outputs(const HeatmapRun& run, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (std::size_t m = 0; m < run.grids.size(); ++m) {
        const auto stem = file_stem(run.grids[m].metric);
        const auto csv_path = dir / (stem + ".csv");
        const auto json_path = dir / (stem + ".json");
        {
            std::ofstream out(csv_path, std::ios::binary);
            if (!out) throw Error(ErrorKind::ingestion, "cannot write '" + csv_path.string() + "'");
            write_grid_csv(run.grids[m], out);
        }
        {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) throw Error(ErrorKind::ingestion, "cannot write '" + json_path.string() + "'");
            out << grid_metadata_json(run, m);
        }
        written.push_back(csv_path);
        written.push_back(json_path);
    }
    return written;
}

}  // namespace costsense
