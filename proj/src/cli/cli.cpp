#include "costsense/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "costsense/core.hpp"
#include "costsense/costs.hpp"
#include "costsense/error.hpp"
#include "costsense/estimation.hpp"
#include "costsense/experiment.hpp"
#include "costsense/format.hpp"
#include "costsense/metrics.hpp"
#include "costsense/weighting.hpp"

namespace costsense::cli {

namespace {

using nlohmann::json;

enum class Format { json, csv, text };

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};

json value_json(const MetricValue& v) { return v ? json(*v) : json(nullptr); }

std::string value_text(const MetricValue& v) { return v ? shortest_decimal(*v) : std::string("undefined"); }

std::string orientation_name(Orientation o) {
    return o == Orientation::higher_is_better ? "higher_is_better" : "lower_is_better";
}

struct CountArgs {
    Count tp{0};
    Count fn{0};
    Count fp{0};
    Count tn{0};

    void attach(CLI::App& app) {
        app.add_option("--tp", tp, "true positives")->required();
        app.add_option("--fn", fn, "false negatives")->required();
        app.add_option("--fp", fp, "false positives")->required();
        app.add_option("--tn", tn, "true negatives")->required();
    }
    ConfusionMatrix matrix() const { return {tp, fn, fp, tn}; }
};

struct CostArgs {
    std::optional<double> cfn;
    std::optional<double> cfp;
    double tcc_min{0.0};

    void attach(CLI::App& app) {
        auto* a = app.add_option("--cfn", cfn, "shifted false-negative cost");
        auto* b = app.add_option("--cfp", cfp, "shifted false-positive cost");
        a->needs(b);
        b->needs(a);
        app.add_option("--tcc-min", tcc_min, "baseline cost of a perfect classifier");
    }
    std::optional<ShiftedCosts> costs() const {
        if (!cfn) return std::nullopt;
        return ShiftedCosts(*cfn, *cfp);
    }
};

json matrix_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}};
}

void emit_table(std::ostream& out, Format format, const std::vector<std::pair<std::string, std::string>>& rows,
                const json& doc) {
    switch (format) {
        case Format::json:
            out << doc.dump(2) << '\n';
            break;
        case Format::csv:
            out << "key,value\n";
            for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
            break;
        case Format::text: {
            std::size_t width = 0;
            for (const auto& row : rows) width = std::max(width, row.first.size());
            for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
            break;
        }
    }
}

struct MetricsCommand {
    CountArgs counts;
    CostArgs cost;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::vector<std::string> only;

    void attach(CLI::App& app) {
        counts.attach(app);
        cost.attach(app);
        auto* a = app.add_option("--alpha", alpha, "Beta alpha of the cost-ratio law");
        auto* b = app.add_option("--beta", beta, "Beta beta of the cost-ratio law");
        a->needs(b);
        b->needs(a);
        app.add_option("--only", only, "metric ids to evaluate")->delimiter(',');
    }

    int run(std::ostream& out, Format format) const {
        const ConfusionMatrix cm = counts.matrix();
        std::optional<CostContext> ctx;
        if (auto c = cost.costs()) ctx = CostContext{*c, cost.tcc_min};
        std::optional<Distribution> law;
        if (alpha) law = Distribution::beta(BetaParams(*alpha, *beta));

        std::vector<MetricId> ids;
        if (only.empty()) {
            for (const auto& d : metric_registry()) {
                if ((d.needs_costs && !ctx) || (d.needs_distribution && !law)) continue;
                ids.push_back(d.id);
            }
            if (law && ctx) ids.push_back(MetricId{MetricKind::h_measure, 1.0, std::nullopt, true});
        } else {
            for (const auto& s : only) ids.push_back(MetricId::parse(s));
        }

        json doc;
        doc["confusion_matrix"] = matrix_json(cm);
        if (ctx) {
            doc["costs"] = {{"c_fn", ctx->costs.c_fn()},
                            {"c_fp", ctx->costs.c_fp()},
                            {"r_c", ctx->costs.r_c()},
                            {"tcc_min", ctx->tcc_min}};
        }
        json metrics = json::array();
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& id : ids) {
            const auto value = evaluate(id, cm, ctx, law);
            const auto d = describe(id);
            metrics.push_back({{"id", id.name()}, {"value", value_json(value)}, {"orientation", orientation_name(d.orientation)}});
            rows.emplace_back(id.name(), value_text(value));
        }
        doc["metrics"] = metrics;
        emit_table(out, format, rows, doc);
        return kExitOk;
    }
};

struct WaCommand {
    CountArgs counts;
    CostArgs cost;
    std::optional<double> w;
    std::optional<double> r_plus_target;

    void attach(CLI::App& app) {
        counts.attach(app);
        cost.attach(app);
        app.add_option("--w", w, "explicit weight in [0, 1]");
        app.add_option("--r-plus-target", r_plus_target, "positive ratio of the target population");
    }

    int run(std::ostream& out, Format format) const {
        const ConfusionMatrix cm = counts.matrix();
        const auto costs = cost.costs();
        if (w && (costs || r_plus_target)) {
            throw Error(ErrorKind::invalid_argument, "--w cannot be combined with costs or --r-plus-target");
        }
        if (!w && !costs) throw Error(ErrorKind::context, "either --w or --cfn/--cfp is required");

        json doc;
        doc["confusion_matrix"] = matrix_json(cm);
        std::vector<std::pair<std::string, std::string>> rows;
        WeightSpec weight = w ? WeightSpec(*w) : weight_from_costs(*costs);
        if (r_plus_target) {
            if (cm.positives() == 0 || cm.negatives() == 0) {
                throw Error(ErrorKind::precondition, "a target weight needs both classes present");
            }
            const double r_plus = static_cast<double>(cm.positives()) / static_cast<double>(cm.total());
            weight = target_weight(*costs, TargetProfile(r_plus, *r_plus_target));
            doc["r_plus"] = r_plus;
            doc["r_plus_target"] = *r_plus_target;
            rows.emplace_back("r_plus", shortest_decimal(r_plus));
            rows.emplace_back("r_plus_target", shortest_decimal(*r_plus_target));
        }
        const auto wa = weighted_accuracy(cm, weight);
        doc["w"] = weight.value();
        doc["wa"] = value_json(wa);
        rows.emplace_back("w", shortest_decimal(weight.value()));
        rows.emplace_back("wa", value_text(wa));
        if (costs) {
            const double tcc = tcc_example_independent(cm, *costs, cost.tcc_min);
            const double hi = tcc_max(cm, *costs, cost.tcc_min);
            doc["tcc"] = tcc;
            doc["tcc_min"] = cost.tcc_min;
            doc["tcc_max"] = hi;
            rows.emplace_back("tcc", shortest_decimal(tcc));
            rows.emplace_back("tcc_min", shortest_decimal(cost.tcc_min));
            rows.emplace_back("tcc_max", shortest_decimal(hi));
        }
        emit_table(out, format, rows, doc);
        return kExitOk;
    }
};

struct RatioCommand {
    double v{0.0};
    void attach(CLI::App& app) { app.add_option("--v", v, "ratio of false-negative to false-positive cost")->required(); }
    int run(std::ostream& out, Format format) const {
        const WeightSpec w = weight_from_ucc_ratio(v);
        json doc{{"mode", "ratio"}, {"v", v}, {"w", w.value()}};
        emit_table(out, format, {{"v", shortest_decimal(v)}, {"w", shortest_decimal(w.value())}}, doc);
        return kExitOk;
    }
};

struct RankingCommand {
    double alpha{0.6};
    Count p{0};
    Count n{0};
    void attach(CLI::App& app) {
        app.add_option("--alpha", alpha, "fraction misclassified by the M_bad models")->required();
        app.add_option("--p", p, "number of positives")->required();
        app.add_option("--n", n, "number of negatives")->required();
    }
    int run(std::ostream& out, Format format) const {
        const WeightInterval interval = constraints_from_ranking(alpha, p, n);
        const WeightSpec mid(interval.midpoint());
        std::vector<EmblematicModel> models;
        for (auto k : {EmblematicKind::m_plus, EmblematicKind::m_minus, EmblematicKind::m_bad,
                       EmblematicKind::m_bad_minus, EmblematicKind::m_bad_plus}) {
            models.push_back({k, alpha});
        }
        const auto ordered = rank_emblematic(models, mid, p, n);
        json order = json::array();
        std::string order_text;
        for (const auto& m : ordered) {
            order.push_back(std::string(to_string(m.kind)));
            if (!order_text.empty()) order_text += " > ";
            order_text += std::string(to_string(m.kind));
        }
        json doc{{"mode", "ranking"},  {"alpha", alpha},         {"p", p},
                 {"n", n},             {"w_min", interval.w_min}, {"w_max", interval.w_max},
                 {"midpoint", mid.value()}, {"ordering_at_midpoint", order}};
        emit_table(out, format,
                   {{"alpha", shortest_decimal(alpha)},
                    {"w_min", shortest_decimal(interval.w_min)},
                    {"w_max", shortest_decimal(interval.w_max)},
                    {"midpoint", shortest_decimal(mid.value())},
                    {"ordering_at_midpoint", order_text}},
                   doc);
        return kExitOk;
    }
};

Label parse_label(std::string_view text) {
    const auto t = trim(text);
    if (t == "1" || t == "positive" || t == "pos" || t == "+") return Label::positive;
    if (t == "0" || t == "negative" || t == "neg" || t == "-") return Label::negative;
    throw Error(ErrorKind::ingestion, "unrecognized label '" + std::string(t) + "'");
}

struct ReweightCommand {
    std::string data;
    double r_plus_target{0.5};
    CostArgs cost;

    void attach(CLI::App& app) {
        app.add_option("--data", data, "CSV with columns id, label and optionally weight")->required();
        app.add_option("--r-plus-target", r_plus_target, "positive ratio of the target population")->required();
        cost.attach(app);
    }

    int run(std::ostream& out, Format format) const {
        std::ifstream in(data, std::ios::binary);
        if (!in) throw Error(ErrorKind::ingestion, "cannot open '" + data + "'");
        const auto rows = read_csv_records(in);
        if (rows.empty()) throw Error(ErrorKind::ingestion, "CSV has no header row");
        const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
            const auto& h = rows.front();
            for (std::size_t i = 0; i < h.size(); ++i) {
                if (trim(h[i]) == name) return i;
            }
            return std::nullopt;
        };
        const auto id_col = column("id");
        const auto label_col = column("label");
        const auto weight_col = column("weight");
        if (!id_col || !label_col) throw Error(ErrorKind::ingestion, "CSV needs 'id' and 'label' columns");

        std::vector<LabeledExample> examples;
        std::vector<double> base;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& row = rows[r];
            const std::size_t need = std::max({*id_col, *label_col, weight_col.value_or(0)});
            if (row.size() <= need) {
                throw Error(ErrorKind::ingestion, "row " + std::to_string(r + 1) + " has too few fields");
            }
            examples.emplace_back(std::string(trim(row[*id_col])), parse_label(row[*label_col]), 1.0, 0.0);
            base.push_back(weight_col ? parse_double(row[*weight_col], "weight") : 1.0);
        }
        const CostedDataset dataset(std::move(examples));
        if (dataset.positives() == 0 || dataset.negatives() == 0) {
            throw Error(ErrorKind::precondition, "reweighting needs both classes present");
        }
        const auto weights = rescale_example_weights(dataset, base, r_plus_target);
        const auto costs = cost.costs();
        const double r_c = costs ? costs->r_c() : 0.5;
        const WeightSpec w_t = target_weight(r_c, TargetProfile(dataset.r_plus(), r_plus_target));
        const auto [pos_avg, neg_avg] = class_average_weights(dataset, weights);

        switch (format) {
            case Format::json: {
                json ex = json::array();
                for (std::size_t i = 0; i < weights.size(); ++i) {
                    const auto& e = dataset.examples()[i];
                    ex.push_back({{"id", e.id()}, {"label", e.is_positive() ? 1 : 0}, {"weight", weights[i]}});
                }
                json doc{{"r_plus", dataset.r_plus()},
                         {"r_plus_target", r_plus_target},
                         {"r_c", r_c},
                         {"w_t", w_t.value()},
                         {"positive_average_weight", pos_avg},
                         {"negative_average_weight", neg_avg},
                         {"examples", ex}};
                out << doc.dump(2) << '\n';
                break;
            }
            case Format::csv:
                out << "id,label,weight\n";
                for (std::size_t i = 0; i < weights.size(); ++i) {
                    const auto& e = dataset.examples()[i];
                    out << e.id() << ',' << (e.is_positive() ? 1 : 0) << ',' << shortest_decimal(weights[i]) << '\n';
                }
                break;
            case Format::text:
                out << "r_plus " << shortest_decimal(dataset.r_plus()) << "\nr_plus_target "
                    << shortest_decimal(r_plus_target) << "\nr_c " << shortest_decimal(r_c) << "\nw_t "
                    << shortest_decimal(w_t.value()) << '\n';
                for (std::size_t i = 0; i < weights.size(); ++i) {
                    out << dataset.examples()[i].id() << ' ' << shortest_decimal(weights[i]) << '\n';
                }
                break;
        }
        return kExitOk;
    }
};

struct HeatmapCommand {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::vector<std::string> metric;
    unsigned workers{1};
    std::string out_dir{"heatmap"};
    std::string render;
    bool quiet{false};

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "key = value configuration file");
        for (const char* key : {"n_tot", "n_samples", "p_eff", "grid", "metrics", "correlation", "n0", "seed",
                                "revenue_csv", "revenue_column", "revenue_synthetic"}) {
            std::string flag = std::string("--") + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            app.add_option_function<std::string>(
                flag, [this, k = std::string(key)](const std::string& v) { overrides[k] = v; },
                std::string("overrides config key ") + key);
        }
        app.add_option("--metric", metric, "metric id; repeatable, replaces the metric list");
        app.add_option("--workers", workers, "concurrent cell workers")->check(CLI::PositiveNumber);
        app.add_option("--out", out_dir, "output directory");
        app.add_option("--render", render, "print grids in a human format")->check(CLI::IsMember({"text"}));
        app.add_flag("--quiet", quiet, "suppress the summary report");
    }

    int run(std::ostream& out, std::ostream& err, Format format) const {
        ExperimentConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        // Source-selecting keys apply first so a column override lands on the csv source.
        for (const char* key : {"revenue_synthetic", "revenue_csv"}) {
            if (auto it = overrides.find(key); it != overrides.end()) apply_config_entry(config, key, it->second);
        }
        for (const auto& [k, v] : overrides) {
            if (k != "revenue_synthetic" && k != "revenue_csv") apply_config_entry(config, k, v);
        }
        if (!metric.empty()) {
            config.metrics.clear();
            for (const auto& m : metric) config.metrics.push_back(MetricId::parse(m));
        }
        config.validate();

        const HeatmapRun run = run_heatmap(config, workers);
        const auto written = write_outputs(run, out_dir);

        std::size_t blank = 0;
        for (const auto& g : run.grids) {
            for (const auto& row : g.cells) blank += static_cast<std::size_t>(std::count(row.begin(), row.end(), std::nullopt));
        }
        if (blank > 0) err << "warning: " << blank << " heatmap cells are undefined and left blank\n";

        if (render == "text") {
            for (const auto& g : run.grids) out << render_text(g) << '\n';
        } else if (!quiet) {
            json files = json::array();
            for (const auto& p : written) files.push_back(p.generic_string());
            json doc{{"metrics", run.grids.size()}, {"grid_size", config.grid.size()}, {"blank_cells", blank},
                     {"seed", config.seed}, {"files", files}};
            if (format == Format::json) {
                out << doc.dump(2) << '\n';
            } else {
                for (const auto& p : written) out << p.generic_string() << '\n';
            }
        }
        return kExitOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cost-sensitive evaluation of binary classifiers"};
    app.require_subcommand(1, 1);
    std::string format_name = "json";
    app.add_option("--format", format_name, "output format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    MetricsCommand metrics;
    WaCommand wa;
    RatioCommand ratio;
    RankingCommand ranking;
    ReweightCommand reweight;
    HeatmapCommand heatmap;

    auto* metrics_app = app.add_subcommand("metrics", "evaluate the metric catalog on a confusion matrix");
    metrics.attach(*metrics_app);
    auto* wa_app = app.add_subcommand("wa", "weighted accuracy with its cost relation");
    wa.attach(*wa_app);
    auto* estimate_app = app.add_subcommand("estimate-weight", "estimate the WA weight");
    estimate_app->require_subcommand(1, 1);
    auto* ratio_app = estimate_app->add_subcommand("ratio", "from the ratio of unit costs");
    ratio.attach(*ratio_app);
    auto* ranking_app = estimate_app->add_subcommand("ranking", "from a ranking of emblematic models");
    ranking.attach(*ranking_app);
    auto* reweight_app = app.add_subcommand("reweight", "rescale example weights to a target positive ratio");
    reweight.attach(*reweight_app);
    auto* heatmap_app = app.add_subcommand("heatmap", "run the correlation heatmap experiment");
    heatmap.attach(*heatmap_app);
    for (auto* sub : {metrics_app, wa_app, ratio_app, ranking_app, reweight_app, heatmap_app}) {
        sub->add_option("--format", format_name, "output format: json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
    }

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Format format = kFormats.at(format_name);
    try {
        if (*metrics_app) return metrics.run(out, format);
        if (*wa_app) return wa.run(out, format);
        if (*ratio_app) return ratio.run(out, format);
        if (*ranking_app) return ranking.run(out, format);
        if (*reweight_app) return reweight.run(out, format);
        if (*heatmap_app) return heatmap.run(out, err, format);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    err << "internal error: no subcommand dispatched\n";
    return kExitInternal;
}

}  // namespace costsense::cli
