#include "cascade/analysis.hpp"

#include <algorithm>

#include "cascade/error.hpp"

namespace cascade {

namespace {

std::optional<double> percent(std::size_t hits, std::size_t total) {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

std::optional<double> difference(std::optional<double> a, std::optional<double> b) {
    if (!a || !b) return std::nullopt;
    return *a - *b;
}

bool lexicographically_less(const CurvePoint& a, const CurvePoint& b) {
    if (a.thresholds != b.thresholds) return a.thresholds < b.thresholds;
    return a.skip_thresholds < b.skip_thresholds;
}

}  // namespace

ContributionReport contribution(std::span<const CascadeOutcome> outcomes, const EvaluationBundle& bundle,
                                std::span<const std::string> model_order) {
    if (outcomes.size() != bundle.size()) {
        throw Error(ErrorCode::CountMismatch, std::to_string(outcomes.size()) + " outcomes for " +
                                                  std::to_string(bundle.size()) + " instances");
    }
    std::vector<std::size_t> models;
    for (const auto& id : model_order) {
        auto pos = bundle.model_position(id);
        if (!pos) throw Error(ErrorCode::UnknownModel, "model '" + id + "' is not in the bundle");
        models.push_back(*pos);
    }
    const std::size_t k = models.size();

    // Stage index of the answering model for every instance.
    std::vector<std::size_t> answered_stage(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].instance_id != bundle.instances()[i].instance_id) {
            throw Error(ErrorCode::CountMismatch, "outcome " + std::to_string(i) + " is for '" +
                                                      outcomes[i].instance_id + "', expected '" +
                                                      bundle.instances()[i].instance_id + "'");
        }
        auto it = std::find(model_order.begin(), model_order.end(), outcomes[i].answered_by);
        if (it == model_order.end()) {
            throw Error(ErrorCode::UnknownModel, "outcome answered by '" + outcomes[i].answered_by +
                                                     "', which is not in the cascade");
        }
        answered_stage[i] = static_cast<std::size_t>(std::distance(model_order.begin(), it));
    }

    auto model_correct = [&](std::size_t stage, std::size_t i) {
        return bundle.prediction(models[stage], i).predicted_label == bundle.instances()[i].gold_label;
    };

    ContributionReport report;
    report.instance_count = outcomes.size();
    for (const auto& o : outcomes) report.correct_count += o.correct ? 1 : 0;
    report.overall_accuracy = *percent(report.correct_count, report.instance_count);

    for (std::size_t j = 0; j < k; ++j) {
        ModelContribution c;
        c.model_id = model_order[j];
        std::size_t escalated_correct = 0;
        std::size_t previous_correct = 0;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (answered_stage[i] == j) {
                ++c.answered_count;
                if (outcomes[i].correct) ++c.answered_correct;
                if (j > 0 && model_correct(j - 1, i)) ++previous_correct;
            } else if (answered_stage[i] > j) {
                ++c.escalated_count;
                if (model_correct(j, i)) ++escalated_correct;
            }
        }
        c.answered_fraction = *percent(c.answered_count, report.instance_count);
        c.accuracy_on_answered = percent(c.answered_correct, c.answered_count);
        if (j + 1 < k) {
            c.accuracy_on_escalated = percent(escalated_correct, c.escalated_count);
            c.escalation_drop = difference(c.accuracy_on_answered, c.accuracy_on_escalated);
        }
        if (j > 0) {
            c.previous_accuracy_on_answered = percent(previous_correct, c.answered_count);
            c.takeover_gain = difference(c.accuracy_on_answered, c.previous_accuracy_on_answered);
        }
        report.models.push_back(std::move(c));
    }
    return report;
}

double weighted_accuracy(const ContributionReport& report) {
    double total = 0.0;
    for (const auto& m : report.models) {
        if (m.accuracy_on_answered) total += m.answered_fraction * *m.accuracy_on_answered / 100.0;
    }
    return total;
}

std::optional<CurvePoint> select_within_budget(std::span<const CurvePoint> points, Flops budget) {
    const CurvePoint* best = nullptr;
    for (const auto& p : points) {
        if (p.mean_cost > budget) continue;
        if (!best || p.accuracy > best->accuracy ||
            (p.accuracy == best->accuracy &&
             (p.mean_cost < best->mean_cost || (p.mean_cost == best->mean_cost && lexicographically_less(p, *best))))) {
            best = &p;
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

TunedOperatingPoint tune(const CascadePlan& validation, Mode mode, Flops budget, const ThresholdGrid& grid,
                         const CascadePlan* test, const SweepOptions& options) {
    const auto points = sweep(validation, mode, grid, options);
    auto chosen = select_within_budget(points, budget);
    if (!chosen) {
        Flops cheapest = points.empty() ? 0.0 : points.front().mean_cost;
        for (const auto& p : points) cheapest = std::min(cheapest, p.mean_cost);
        throw Error(ErrorCode::InfeasibleBudget, "budget " + std::to_string(budget) +
                                                     " FLOPs is below the cheapest operating point (" +
                                                     std::to_string(cheapest) + " FLOPs)");
    }
    TunedOperatingPoint out;
    out.thresholds = chosen->thresholds;
    out.skip_thresholds = chosen->skip_thresholds;
    out.budget = budget;
    out.validation_cost = chosen->mean_cost;
    out.validation_accuracy = chosen->accuracy;
    if (test) {
        test->validate(mode, out.thresholds, out.skip_thresholds);
        const auto stats = test->evaluate(mode, out.thresholds, out.skip_thresholds);
        out.test_cost = stats.mean_cost;
        out.test_accuracy = stats.accuracy;
    }
    return out;
}

ImprovementReport improvement_report(const CurveSummary& summary) {
    ImprovementReport report;
    for (const auto& m : summary.matched) {
        ImprovementRow row;
        row.model_id = m.model_id;
        row.standalone_accuracy = m.standalone_accuracy;
        row.standalone_cost = m.standalone_cost;
        if (m.match) {
            row.matched_cost = m.match->cascade_cost;
            row.improvement_percent = m.match->improvement_percent;
            row.cost_fraction_percent = 100.0 * m.match->cascade_cost / m.standalone_cost;
        }
        report.rows.push_back(std::move(row));
    }
    if (!summary.matched.empty()) report.largest_model = summary.matched.back().model_id;
    report.max_accuracy = summary.max_accuracy;
    report.accuracy_gain = summary.max_accuracy_gain;
    return report;
}

}  // namespace cascade
