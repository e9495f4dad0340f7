#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/engine.hpp"

namespace cascade {

struct CurvePoint {
    Flops mean_cost = 0.0;
    double accuracy = 0.0;  // percent
    std::vector<double> thresholds;
    std::vector<double> skip_thresholds;  // routing only
};

/// Per-stage candidate thresholds, stages 1..K-1, each sorted ascending.
using ThresholdGrid = std::vector<std::vector<double>>;

/// Empirical quantiles (nearest rank) of each stage's confidences plus the
/// policy minimum and maximum, deduplicated. `points_per_stage - 2` interior
/// quantiles are taken at levels i / (points_per_stage - 1).
ThresholdGrid threshold_grid(const CascadePlan& plan, std::size_t points_per_stage);

/// Nearest-rank quantiles of `values` at levels i/(count+1), i = 1..count.
std::vector<double> interior_quantiles(std::vector<double> values, std::size_t count);

struct SweepOptions {
    std::size_t max_points = 1'000'000;
    unsigned threads = 1;  // 0: hardware concurrency
};

/// Number of operating points `sweep` evaluates for a grid.
std::size_t sweep_size(const ThresholdGrid& grid, Mode mode);

/// Evaluates every element of the Cartesian product of the per-stage grids
/// (for routing, every (skip, output) pair with skip <= output at stages
/// before K-1). Stage 1 varies slowest; the first point is the all-minimum
/// element. Throws GridTooLarge.
std::vector<CurvePoint> sweep(const CascadePlan& plan, Mode mode, const ThresholdGrid& grid,
                              const SweepOptions& options = {});

/// Cost-sorted subset in which every point is strictly more accurate than
/// every cheaper point. Among equal points the earliest input wins.
std::vector<CurvePoint> pareto_frontier(std::span<const CurvePoint> points);

/// Trapezoidal area under accuracy over cost divided by the cost range, i.e.
/// mean accuracy in percent. A single point returns its accuracy.
double auc(std::span<const CurvePoint> frontier);

/// AUC over [cheapest frontier cost, max_cost], holding the last frontier
/// accuracy flat beyond the frontier's most expensive point.
double auc(std::span<const CurvePoint> frontier, Flops max_cost);

struct Match {
    Flops cascade_cost = 0.0;
    double improvement_percent = 0.0;
};

/// Cheapest cost at which the linearly interpolated frontier reaches
/// `standalone_accuracy`; nullopt when it never does.
std::optional<Match> matched_cost(std::span<const CurvePoint> frontier, double standalone_accuracy,
                                  Flops standalone_cost);

double max_accuracy_gain(std::span<const CurvePoint> frontier, double largest_model_accuracy);

struct MatchedEntry {
    std::string model_id;
    double standalone_accuracy = 0.0;
    Flops standalone_cost = 0.0;
    std::optional<Match> match;
};

struct CurveSummary {
    std::vector<CurvePoint> points;  // frontier
    double auc = 0.0;                // over the whole swept cost range
    double max_accuracy = 0.0;
    std::vector<MatchedEntry> matched;  // one per cascade model
    double max_accuracy_gain = 0.0;     // versus the largest model
};

CurveSummary summarize(const CascadePlan& plan, std::span<const CurvePoint> points);

/// Cheapest frontier point whose accuracy reaches `target` (the operating
/// point at the matched cost); nullopt when none does.
std::optional<CurvePoint> frontier_point_at(std::span<const CurvePoint> frontier, double target);

}  // namespace cascade
