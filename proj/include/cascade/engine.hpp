#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/confidence.hpp"
#include "cascade/ingest.hpp"

namespace cascade {

enum class Mode { Sequential, Routing };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct ConfidenceOptions {
    Policy policy = Policy::MaxProb;
    std::uint64_t seed = 0;             // Random policy
    bool heuristic_invert = false;      // Heuristic: longer inputs more confident
    std::uint32_t heuristic_max_length = 0;  // 0: longest input in the bundle
};

struct CascadeConfig {
    std::vector<std::string> model_order;  // smallest to largest, K >= 1
    ConfidenceOptions confidence;
    Mode mode = Mode::Sequential;
    std::vector<double> thresholds;        // output threshold t_j, stages 1..K-1
    std::vector<double> skip_thresholds;   // routing band s_j <= t_j; empty = policy minimum
};

struct CascadeOutcome {
    std::string instance_id;
    std::vector<std::string> used;  // models actually run, in order
    std::string answered_by;
    LabelIndex predicted_label = 0;
    bool correct = false;
    Flops cost = 0.0;
};

struct RunSummary {
    Flops mean_cost = 0.0;
    double accuracy = 0.0;  // percent
    std::vector<CascadeOutcome> outcomes;
};

/// (mean cost, accuracy) of one threshold setting without per-instance records.
struct OperatingStats {
    Flops mean_cost = 0.0;
    double accuracy = 0.0;
};

/// A cascade resolved against a bundle: model positions plus precomputed
/// confidences for every (stage, instance). Confidences do not depend on
/// thresholds, so one plan serves a whole sweep.
class CascadePlan {
public:
    CascadePlan(const EvaluationBundle& bundle, std::span<const std::string> model_order,
                const ConfidenceOptions& options);

    const EvaluationBundle& bundle() const { return *bundle_; }
    std::size_t stages() const { return models_.size(); }
    std::size_t model(std::size_t stage) const { return models_[stage]; }
    const std::string& model_id(std::size_t stage) const;
    double confidence(std::size_t stage, std::size_t instance) const {
        return confidences_[stage][instance];
    }
    std::span<const double> confidences(std::size_t stage) const { return confidences_[stage]; }
    const ConfidenceOptions& options() const { return options_; }

    double min_threshold() const;
    double max_threshold() const;

    /// Throws ThresholdOutOfRange / RoutingRequiresK3 / BandViolation.
    void validate(Mode mode, std::span<const double> thresholds, std::span<const double> skips) const;

    /// Stage indices run for one instance (the last one answers).
    void route(Mode mode, std::span<const double> thresholds, std::span<const double> skips,
               std::size_t instance, std::vector<std::size_t>& stages_out) const;

    OperatingStats evaluate(Mode mode, std::span<const double> thresholds,
                            std::span<const double> skips) const;

private:
    const EvaluationBundle* bundle_;
    std::vector<std::size_t> models_;
    ConfidenceOptions options_;
    std::vector<std::vector<double>> confidences_;
};

/// Confidence of one instance at one cascade stage (1-based) under a policy.
double stage_confidence(const EvaluationBundle& bundle, std::size_t model, std::size_t instance,
                        int stage, const ConfidenceOptions& options);

RunSummary run_sequential(const EvaluationBundle& bundle, const CascadeConfig& config);
RunSummary run_routing(const EvaluationBundle& bundle, const CascadeConfig& config);
/// Dispatches on config.mode.
RunSummary run_cascade(const EvaluationBundle& bundle, const CascadeConfig& config);
RunSummary run_plan(const CascadePlan& plan, Mode mode, std::span<const double> thresholds,
                    std::span<const double> skips);

RunSummary aggregate(std::vector<CascadeOutcome> outcomes, const EvaluationBundle& bundle);

/// Model ids of a bundle in order (the default cascade).
std::vector<std::string> all_models(const EvaluationBundle& bundle);

}  // namespace cascade
