#include "cascade/engine.hpp"

#include <algorithm>
#include <sstream>

#include "cascade/error.hpp"

namespace cascade {

namespace {

std::string describe(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

std::string_view to_string(Mode mode) {
    return mode == Mode::Routing ? "routing" : "sequential";
}

std::optional<Mode> parse_mode(std::string_view name) {
    if (name == "sequential") return Mode::Sequential;
    if (name == "routing") return Mode::Routing;
    return std::nullopt;
}

std::vector<std::string> all_models(const EvaluationBundle& bundle) {
    std::vector<std::string> ids;
    for (const auto& p : bundle.profiles()) ids.push_back(p.model_id);
    return ids;
}

double stage_confidence(const EvaluationBundle& bundle, std::size_t model, std::size_t instance,
                        int stage, const ConfidenceOptions& options) {
    const auto& pred = bundle.prediction(model, instance);
    switch (options.policy) {
    case Policy::MaxProb: return max_prob(pred.distribution).value;
    case Policy::DTU: return dtu(pred.distribution).value;
    case Policy::Random: return random_conf(options.seed, pred.instance_id, stage).value;
    case Policy::Heuristic: {
        std::uint32_t max_len = options.heuristic_max_length;
        if (max_len == 0) {
            for (const auto& inst : bundle.instances()) max_len = std::max(max_len, inst.input_length);
        }
        return heuristic_conf(bundle.instances()[instance].input_length, max_len, options.heuristic_invert)
            .value;
    }
    }
    throw Error(ErrorCode::InvariantViolation, "unhandled policy");
}

// ---------------------------------------------------------------------------

CascadePlan::CascadePlan(const EvaluationBundle& bundle, std::span<const std::string> model_order,
                         const ConfidenceOptions& options)
    : bundle_(&bundle), options_(options) {
    if (model_order.empty()) throw Error(ErrorCode::InvalidConfig, "cascade needs at least one model");
    for (const auto& id : model_order) {
        auto pos = bundle.model_position(id);
        if (!pos) throw Error(ErrorCode::UnknownModel, "model '" + id + "' is not in the bundle");
        if (!models_.empty() && *pos <= models_.back()) {
            throw Error(ErrorCode::InvalidConfig,
                        "model_order must follow increasing cost order ('" + id + "' is out of order)");
        }
        models_.push_back(*pos);
    }
    if (options_.policy == Policy::Heuristic && options_.heuristic_max_length == 0) {
        for (const auto& inst : bundle.instances()) {
            options_.heuristic_max_length = std::max(options_.heuristic_max_length, inst.input_length);
        }
    }
    confidences_.assign(models_.size(), std::vector<double>(bundle.size()));
    for (std::size_t s = 0; s < models_.size(); ++s) {
        for (std::size_t i = 0; i < bundle.size(); ++i) {
            confidences_[s][i] = stage_confidence(bundle, models_[s], i, static_cast<int>(s + 1), options_);
        }
    }
}

const std::string& CascadePlan::model_id(std::size_t stage) const {
    return bundle_->profiles()[models_[stage]].model_id;
}

double CascadePlan::min_threshold() const {
    return policy_min_threshold(options_.policy, bundle_->label_count());
}

double CascadePlan::max_threshold() const {
    return policy_max_threshold(options_.policy, bundle_->label_count());
}

void CascadePlan::validate(Mode mode, std::span<const double> thresholds,
                           std::span<const double> skips) const {
    const std::size_t k = stages();
    if (thresholds.size() != k - 1) {
        throw Error(ErrorCode::InvalidConfig, "expected " + std::to_string(k - 1) + " thresholds for K=" +
                                                  std::to_string(k) + ", got " +
                                                  std::to_string(thresholds.size()));
    }
    const double lo = min_threshold();
    const double hi = max_threshold();
    auto in_range = [&](double t, std::size_t j, const char* what) {
        if (!(t >= lo && t <= hi)) {
            throw Error(ErrorCode::ThresholdOutOfRange,
                        std::string(what) + " " + describe(t) + " at stage " + std::to_string(j + 1) +
                            " outside [" + describe(lo) + ", " + describe(hi) + "] for policy " +
                            std::string(to_string(options_.policy)));
        }
    };
    for (std::size_t j = 0; j < thresholds.size(); ++j) in_range(thresholds[j], j, "threshold");

    if (mode == Mode::Sequential) {
        if (!skips.empty()) throw Error(ErrorCode::InvalidConfig, "routing bands given in sequential mode");
        return;
    }
    if (k < 3) throw Error(ErrorCode::RoutingRequiresK3, "routing needs K >= 3, got K=" + std::to_string(k));
    if (!skips.empty() && skips.size() != k - 1) {
        throw Error(ErrorCode::InvalidConfig, "expected " + std::to_string(k - 1) + " routing bands");
    }
    for (std::size_t j = 0; j < skips.size(); ++j) {
        in_range(skips[j], j, "skip threshold");
        if (skips[j] > thresholds[j]) {
            throw Error(ErrorCode::BandViolation, "stage " + std::to_string(j + 1) + ": skip threshold " +
                                                      describe(skips[j]) + " > output threshold " +
                                                      describe(thresholds[j]));
        }
    }
}

void CascadePlan::route(Mode mode, std::span<const double> thresholds, std::span<const double> skips,
                        std::size_t instance, std::vector<std::size_t>& stages_out) const {
    stages_out.clear();
    const std::size_t last = stages() - 1;
    std::size_t s = 0;
    while (true) {
        stages_out.push_back(s);
        if (s == last) return;
        const double c = confidences_[s][instance];
        if (c >= thresholds[s]) return;
        if (mode == Mode::Routing && !skips.empty() && c < skips[s]) {
            s = last;
        } else {
            ++s;
        }
    }
}

OperatingStats CascadePlan::evaluate(Mode mode, std::span<const double> thresholds,
                                     std::span<const double> skips) const {
    const auto& b = *bundle_;
    std::vector<std::size_t> used;
    used.reserve(stages());
    Flops total_cost = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        route(mode, thresholds, skips, i, used);
        Flops cost = 0.0;
        for (std::size_t s : used) cost += b.cost(models_[s], i);
        total_cost += cost;
        if (b.prediction(models_[used.back()], i).predicted_label == b.instances()[i].gold_label) ++correct;
    }
    const double n = static_cast<double>(b.size());
    return {total_cost / n, 100.0 * static_cast<double>(correct) / n};
}

// ---------------------------------------------------------------------------

RunSummary run_plan(const CascadePlan& plan, Mode mode, std::span<const double> thresholds,
                    std::span<const double> skips) {
    plan.validate(mode, thresholds, skips);
    const auto& b = plan.bundle();
    std::vector<CascadeOutcome> outcomes;
    outcomes.reserve(b.size());
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < b.size(); ++i) {
        plan.route(mode, thresholds, skips, i, used);
        CascadeOutcome out;
        out.instance_id = b.instances()[i].instance_id;
        for (std::size_t s : used) {
            out.used.push_back(plan.model_id(s));
            out.cost += b.cost(plan.model(s), i);
        }
        const std::size_t answering = plan.model(used.back());
        out.answered_by = plan.model_id(used.back());
        out.predicted_label = b.prediction(answering, i).predicted_label;
        out.correct = out.predicted_label == b.instances()[i].gold_label;
        outcomes.push_back(std::move(out));
    }
    return aggregate(std::move(outcomes), b);
}

RunSummary run_sequential(const EvaluationBundle& bundle, const CascadeConfig& config) {
    if (config.mode != Mode::Sequential) throw Error(ErrorCode::InvalidConfig, "config mode is not sequential");
    CascadePlan plan(bundle, config.model_order, config.confidence);
    return run_plan(plan, Mode::Sequential, config.thresholds, config.skip_thresholds);
}

RunSummary run_routing(const EvaluationBundle& bundle, const CascadeConfig& config) {
    if (config.mode != Mode::Routing) throw Error(ErrorCode::InvalidConfig, "config mode is not routing");
    if (config.model_order.size() < 3) {
        throw Error(ErrorCode::RoutingRequiresK3,
                    "routing needs K >= 3, got K=" + std::to_string(config.model_order.size()));
    }
    CascadePlan plan(bundle, config.model_order, config.confidence);
    return run_plan(plan, Mode::Routing, config.thresholds, config.skip_thresholds);
}

RunSummary run_cascade(const EvaluationBundle& bundle, const CascadeConfig& config) {
    return config.mode == Mode::Routing ? run_routing(bundle, config) : run_sequential(bundle, config);
}

RunSummary aggregate(std::vector<CascadeOutcome> outcomes, const EvaluationBundle& bundle) {
    if (outcomes.size() != bundle.size()) {
        throw Error(ErrorCode::CountMismatch, std::to_string(outcomes.size()) + " outcomes for " +
                                                  std::to_string(bundle.size()) + " instances");
    }
    RunSummary summary;
    Flops total = 0.0;
    std::size_t correct = 0;
    for (const auto& o : outcomes) {
        total += o.cost;
        if (o.correct) ++correct;
    }
    const double n = static_cast<double>(outcomes.size());
    summary.mean_cost = total / n;
    summary.accuracy = 100.0 * static_cast<double>(correct) / n;
    summary.outcomes = std::move(outcomes);
    return summary;
}

}  // namespace cascade
