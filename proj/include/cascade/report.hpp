#pragma once

#include <span>
#include <string>
#include <vector>

#include "cascade/analysis.hpp"
#include "cascade/engine.hpp"
#include "cascade/sweep.hpp"

namespace cascade::report {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// One JSON object per line: instance_id, used, answered_by,
/// predicted_label, correct, cost.
std::string outcomes_jsonl(std::span<const CascadeOutcome> outcomes);

/// Columns t_1..t_{K-1}[, s_1..s_{K-1}], mean_cost_flops, accuracy_pct.
std::string curve_csv(std::span<const CurvePoint> points, std::size_t stages);

std::string run_summary_json(const RunSummary& summary, const CascadeConfig& config);
std::string curve_summary_json(const CurveSummary& summary, const ImprovementReport& improvement,
                               Policy policy, Mode mode, std::size_t sweep_points);
std::string contribution_json(const ContributionReport& report, std::span<const double> thresholds,
                              std::span<const double> skips, Flops mean_cost);
std::string tuning_json(const TunedOperatingPoint& tuned);

/// Aligned-column text tables.
std::string contribution_table(const ContributionReport& report);
std::string improvement_table(const ImprovementReport& report);

struct PlotSeries {
    std::string label;
    std::string color;
    std::vector<CurvePoint> frontier;
};

struct PlotOptions {
    std::string title = "Accuracy vs. computation cost";
    int width = 720;
    int height = 480;
};

/// Standalone SVG: one polyline per series, one red marker per standalone
/// model, dashed guides from each marker to where the first series reaches
/// its accuracy.
std::string accuracy_cost_svg(std::span<const PlotSeries> series, std::span<const MatchedEntry> standalone,
                              const PlotOptions& options = {});

}  // namespace cascade::report
