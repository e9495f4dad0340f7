#include "cascade/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace cascade::report {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

std::string fixed_or_dash(const std::optional<double>& v, int digits) {
    return v ? fixed(*v, digits) : "-";
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Renders rows as left-aligned first column, right-aligned others.
std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << "  ";
            if (c == 0) {
                out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
            } else {
                out << std::right << std::setw(static_cast<int>(width[c])) << row[c];
            }
        }
        out << '\n';
    }
    return out.str();
}

// "Nice" tick step covering `span` with about `target` ticks.
double tick_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

std::string outcomes_jsonl(std::span<const CascadeOutcome> outcomes) {
    std::string out;
    for (const auto& o : outcomes) {
        json obj = {{"instance_id", o.instance_id},   {"used", o.used},       {"answered_by", o.answered_by},
                    {"predicted_label", o.predicted_label}, {"correct", o.correct}, {"cost", o.cost}};
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::string curve_csv(std::span<const CurvePoint> points, std::size_t stages) {
    const bool routing = std::any_of(points.begin(), points.end(),
                                     [](const CurvePoint& p) { return !p.skip_thresholds.empty(); });
    std::string out;
    for (std::size_t j = 1; j < stages; ++j) out += "t" + std::to_string(j) + ",";
    if (routing) {
        for (std::size_t j = 1; j < stages; ++j) out += "s" + std::to_string(j) + ",";
    }
    out += "mean_cost_flops,accuracy_pct\n";
    for (const auto& p : points) {
        for (double t : p.thresholds) out += format_number(t) + ",";
        if (routing) {
            for (double s : p.skip_thresholds) out += format_number(s) + ",";
        }
        out += format_number(p.mean_cost) + "," + format_number(p.accuracy) + "\n";
    }
    return out;
}

std::string run_summary_json(const RunSummary& summary, const CascadeConfig& config) {
    json counts = json::object();
    for (const auto& id : config.model_order) counts[id] = 0;
    for (const auto& o : summary.outcomes) counts[o.answered_by] = counts[o.answered_by].get<int>() + 1;
    json doc = {{"model_order", config.model_order},
                {"policy", std::string(to_string(config.confidence.policy))},
                {"mode", std::string(to_string(config.mode))},
                {"thresholds", config.thresholds},
                {"skip_thresholds", config.skip_thresholds},
                {"instances", summary.outcomes.size()},
                {"mean_cost_flops", summary.mean_cost},
                {"accuracy_pct", summary.accuracy},
                {"answered_counts", counts}};
    return doc.dump(2) + "\n";
}

std::string curve_summary_json(const CurveSummary& summary, const ImprovementReport& improvement,
                               Policy policy, Mode mode, std::size_t sweep_points) {
    json matched = json::array();
    for (const auto& row : improvement.rows) {
        matched.push_back({{"model_id", row.model_id},
                           {"standalone_accuracy_pct", row.standalone_accuracy},
                           {"standalone_cost_flops", row.standalone_cost},
                           {"cascade_cost_at_match_flops", optional_number(row.matched_cost)},
                           {"improvement_pct", optional_number(row.improvement_percent)},
                           {"cost_fraction_pct", optional_number(row.cost_fraction_percent)},
                           {"reached", row.matched_cost.has_value()}});
    }
    json doc = {{"policy", std::string(to_string(policy))},
                {"mode", std::string(to_string(mode))},
                {"sweep_points", sweep_points},
                {"frontier_points", summary.points.size()},
                {"auc", summary.auc},
                {"max_accuracy", summary.max_accuracy},
                {"largest_model", improvement.largest_model},
                {"max_accuracy_gain", summary.max_accuracy_gain},
                {"matched", matched}};
    return doc.dump(2) + "\n";
}

std::string contribution_json(const ContributionReport& report, std::span<const double> thresholds,
                              std::span<const double> skips, Flops mean_cost) {
    json models = json::array();
    for (const auto& m : report.models) {
        models.push_back({{"model_id", m.model_id},
                          {"answered_count", m.answered_count},
                          {"answered_fraction_pct", m.answered_fraction},
                          {"accuracy_on_answered_pct", optional_number(m.accuracy_on_answered)},
                          {"escalated_count", m.escalated_count},
                          {"accuracy_on_escalated_pct", optional_number(m.accuracy_on_escalated)},
                          {"escalation_drop", optional_number(m.escalation_drop)},
                          {"previous_accuracy_on_answered_pct", optional_number(m.previous_accuracy_on_answered)},
                          {"takeover_gain", optional_number(m.takeover_gain)}});
    }
    json doc = {{"thresholds", std::vector<double>(thresholds.begin(), thresholds.end())},
                {"skip_thresholds", std::vector<double>(skips.begin(), skips.end())},
                {"mean_cost_flops", mean_cost},
                {"instances", report.instance_count},
                {"correct", report.correct_count},
                {"overall_accuracy_pct", report.overall_accuracy},
                {"models", models}};
    return doc.dump(2) + "\n";
}

std::string tuning_json(const TunedOperatingPoint& tuned) {
    json doc = {{"budget_flops", tuned.budget},
                {"thresholds", tuned.thresholds},
                {"skip_thresholds", tuned.skip_thresholds},
                {"validation_cost_flops", tuned.validation_cost},
                {"validation_accuracy_pct", tuned.validation_accuracy},
                {"test_cost_flops", optional_number(tuned.test_cost)},
                {"test_accuracy_pct", optional_number(tuned.test_accuracy)}};
    return doc.dump(2) + "\n";
}

std::string contribution_table(const ContributionReport& report) {
    std::vector<std::vector<std::string>> rows = {
        {"model", "answered", "share%", "acc%", "escalated", "acc_esc%", "drop", "prev_acc%", "gain"}};
    for (const auto& m : report.models) {
        rows.push_back({m.model_id, std::to_string(m.answered_count), fixed(m.answered_fraction, 2),
                        fixed_or_dash(m.accuracy_on_answered, 2), std::to_string(m.escalated_count),
                        fixed_or_dash(m.accuracy_on_escalated, 2), fixed_or_dash(m.escalation_drop, 2),
                        fixed_or_dash(m.previous_accuracy_on_answered, 2), fixed_or_dash(m.takeover_gain, 2)});
    }
    return table(rows) + "overall accuracy " + fixed(report.overall_accuracy, 2) + "% on " +
           std::to_string(report.instance_count) + " instances\n";
}

std::string improvement_table(const ImprovementReport& report) {
    std::vector<std::vector<std::string>> rows = {
        {"model", "acc%", "cost(1e9)", "matched(1e9)", "saved%", "of_cost%"}};
    auto giga = [](std::optional<double> v) { return v ? std::optional<double>(*v / 1e9) : std::nullopt; };
    for (const auto& r : report.rows) {
        rows.push_back({r.model_id, fixed(r.standalone_accuracy, 2), fixed(r.standalone_cost / 1e9, 3),
                        fixed_or_dash(giga(r.matched_cost), 3), fixed_or_dash(r.improvement_percent, 2),
                        fixed_or_dash(r.cost_fraction_percent, 2)});
    }
    std::string sign = report.accuracy_gain >= 0 ? "+" : "";
    return table(rows) + "max cascade accuracy " + fixed(report.max_accuracy, 2) + "% (" + sign +
           fixed(report.accuracy_gain, 2) + " vs " + report.largest_model + ")\n";
}

std::string accuracy_cost_svg(std::span<const PlotSeries> series, std::span<const MatchedEntry> standalone,
                              const PlotOptions& options) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = options.width, h = options.height;
    const double pw = w - left - right, ph = h - top - bottom;

    double xmin = 0.0, xmax = 0.0, ymin = 100.0, ymax = 0.0;
    auto include = [&](double cost, double acc) {
        xmax = std::max(xmax, cost / 1e9);
        ymin = std::min(ymin, acc);
        ymax = std::max(ymax, acc);
    };
    for (const auto& s : series) {
        for (const auto& p : s.frontier) include(p.mean_cost, p.accuracy);
    }
    for (const auto& m : standalone) include(m.standalone_cost, m.standalone_accuracy);
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double ypad = (ymax - ymin) * 0.08;
    ymin = std::max(0.0, ymin - ypad);
    ymax = std::min(100.0, ymax + ypad);
    xmax *= 1.05;

    auto X = [&](double cost) { return left + (cost / 1e9 - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double acc) { return top + (ymax - acc) / (ymax - ymin) * ph; };
    auto num = [](double v) { return fixed(v, 2); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";
    svg << "  <text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << xml_escape(options.title) << "</text>\n";

    // axes and ticks
    svg << "  <g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "    <line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(top + ph) << "\"/>\n";
    svg << "    <line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(top + ph) << "\"/>\n";
    svg << "  </g>\n";
    svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    const double xs = tick_step(xmax - xmin, 6);
    for (double t = 0.0; t <= xmax + 1e-12; t += xs) {
        const double x = left + (t - xmin) / (xmax - xmin) * pw;
        svg << "    <line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x) << "\" y2=\""
            << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
        svg << "    <text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
            << format_number(std::round(t * 1000.0) / 1000.0) << "</text>\n";
    }
    const double ys = tick_step(ymax - ymin, 6);
    for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12; t += ys) {
        const double y = Y(t);
        svg << "    <line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\""
            << num(y) << "\" stroke=\"black\"/>\n";
        svg << "    <text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
            << format_number(std::round(t * 100.0) / 100.0) << "</text>\n";
    }
    svg << "    <text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 12)
        << "\" text-anchor=\"middle\">Cost (10^9 FLOPs)</text>\n";
    svg << "    <text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num(top + ph / 2) << ")\">Accuracy (%)</text>\n";
    svg << "  </g>\n";

    // curves
    for (const auto& s : series) {
        svg << "  <polyline fill=\"none\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.frontier.size(); ++i) {
            if (i) svg << ' ';
            svg << num(X(s.frontier[i].mean_cost)) << ',' << num(Y(s.frontier[i].accuracy));
        }
        svg << "\"/>\n";
    }

    // matched-accuracy guides against the first series
    if (!series.empty()) {
        for (const auto& m : standalone) {
            auto match = matched_cost(series.front().frontier, m.standalone_accuracy, m.standalone_cost);
            if (!match) continue;
            const double y = Y(m.standalone_accuracy);
            const double x0 = X(std::min(match->cascade_cost, m.standalone_cost));
            const double x1 = X(std::max(match->cascade_cost, m.standalone_cost));
            const double xm = X(match->cascade_cost);
            svg << "  <line class=\"guide\" x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x1)
                << "\" y2=\"" << num(y) << "\" stroke=\"red\" stroke-dasharray=\"5,4\"/>\n";
            svg << "  <line class=\"guide\" x1=\"" << num(xm) << "\" y1=\"" << num(y) << "\" x2=\"" << num(xm)
                << "\" y2=\"" << num(top + ph) << "\" stroke=\"red\" stroke-dasharray=\"5,4\"/>\n";
        }
    }

    // standalone model markers
    for (const auto& m : standalone) {
        const double x = X(m.standalone_cost), y = Y(m.standalone_accuracy);
        svg << "  <circle class=\"model\" cx=\"" << num(x) << "\" cy=\"" << num(y)
            << "\" r=\"5\" fill=\"red\"/>\n";
        svg << "  <text x=\"" << num(x + 7) << "\" y=\"" << num(y - 7)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"red\">" << xml_escape(m.model_id)
            << "</text>\n";
    }

    // legend
    double ly = top + 10;
    for (const auto& s : series) {
        svg << "  <line x1=\"" << num(left + pw - 130) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw - 105)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"2\"/>\n";
        svg << "  <text x=\"" << num(left + pw - 100) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
        ly += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace cascade::report
