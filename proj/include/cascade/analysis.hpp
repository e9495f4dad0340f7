#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/engine.hpp"
#include "cascade/sweep.hpp"

namespace cascade {

/// How one cascade model performs on the partition of instances it answered.
/// Accuracies are percentages of the named subset; empty subsets give nullopt.
struct ModelContribution {
    std::string model_id;
    std::size_t answered_count = 0;
    std::size_t answered_correct = 0;
    double answered_fraction = 0.0;                 // percent of all instances
    std::optional<double> accuracy_on_answered;
    // j < K: this model on instances answered by a later model
    std::size_t escalated_count = 0;
    std::optional<double> accuracy_on_escalated;
    std::optional<double> escalation_drop;
    // j > 1: the previous stage's model on this model's answered subset
    std::optional<double> previous_accuracy_on_answered;
    std::optional<double> takeover_gain;
};

struct ContributionReport {
    std::size_t instance_count = 0;
    std::size_t correct_count = 0;
    double overall_accuracy = 0.0;
    std::vector<ModelContribution> models;
};

/// Partitions instances by answering model. Throws CountMismatch unless the
/// outcomes cover the bundle one-to-one in bundle order.
ContributionReport contribution(std::span<const CascadeOutcome> outcomes, const EvaluationBundle& bundle,
                                std::span<const std::string> model_order);

/// Σ_j answered_fraction_j · accuracy_on_answered_j / 100.
double weighted_accuracy(const ContributionReport& report);

struct TunedOperatingPoint {
    std::vector<double> thresholds;
    std::vector<double> skip_thresholds;
    Flops budget = 0.0;
    Flops validation_cost = 0.0;
    double validation_accuracy = 0.0;
    std::optional<Flops> test_cost;
    std::optional<double> test_accuracy;
};

/// Exhaustive budgeted selection over the sweep grid: the most accurate
/// validation point with mean cost <= budget (ties: lower cost, then
/// lexicographically smaller thresholds). When `test` is given, the chosen
/// thresholds are also evaluated there. Throws InfeasibleBudget.
TunedOperatingPoint tune(const CascadePlan& validation, Mode mode, Flops budget, const ThresholdGrid& grid,
                         const CascadePlan* test = nullptr, const SweepOptions& options = {});

/// Picks the budget-feasible best point out of already evaluated points.
std::optional<CurvePoint> select_within_budget(std::span<const CurvePoint> points, Flops budget);

struct ImprovementRow {
    std::string model_id;
    double standalone_accuracy = 0.0;
    Flops standalone_cost = 0.0;
    std::optional<Flops> matched_cost;
    std::optional<double> improvement_percent;   // computation saved at equal accuracy
    std::optional<double> cost_fraction_percent; // 100 - improvement
};

struct ImprovementReport {
    std::vector<ImprovementRow> rows;
    std::string largest_model;
    double max_accuracy = 0.0;
    double accuracy_gain = 0.0;  // versus the largest model
};

ImprovementReport improvement_report(const CurveSummary& summary);

}  // namespace cascade
