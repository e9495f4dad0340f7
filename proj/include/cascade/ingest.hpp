#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cascade {

using Flops = double;
using LabelIndex = std::uint32_t;

struct InstanceRecord {
    std::string instance_id;
    LabelIndex gold_label = 0;
    std::uint32_t input_length = 1;
};

struct PredictionRecord {
    std::string instance_id;
    std::string model_id;
    std::vector<double> distribution;
    LabelIndex predicted_label = 0;
};

/// Sequence length (tokens) -> inference cost in FLOPs.
using CostTable = std::map<std::uint32_t, Flops>;

struct ModelProfile {
    std::string model_id;
    int order_index = 1;  // 1 = smallest
    CostTable cost_table;
    std::optional<std::uint64_t> param_count;
};

/// Immutable, validated join of instances, per-model predictions and cost
/// profiles. Predictions and costs are stored densely: row = model position
/// (order_index - 1), column = instance position.
class EvaluationBundle {
public:
    EvaluationBundle(std::vector<InstanceRecord> instances,
                     std::vector<ModelProfile> profiles,
                     std::vector<std::vector<PredictionRecord>> predictions,
                     std::optional<std::uint32_t> dataset_seq_len,
                     bool per_instance_cost);

    std::span<const InstanceRecord> instances() const { return instances_; }
    std::span<const ModelProfile> profiles() const { return profiles_; }
    std::size_t size() const { return instances_.size(); }
    std::size_t model_count() const { return profiles_.size(); }
    std::size_t label_count() const { return label_count_; }
    std::optional<std::uint32_t> dataset_seq_len() const { return dataset_seq_len_; }
    bool per_instance_cost() const { return per_instance_cost_; }

    const PredictionRecord& prediction(std::size_t model, std::size_t instance) const {
        return predictions_[model][instance];
    }
    std::span<const PredictionRecord> predictions(std::size_t model) const {
        return predictions_[model];
    }
    Flops cost(std::size_t model, std::size_t instance) const {
        return costs_[model][instance];
    }

    /// Position of a model id in profile order; nullopt when absent.
    std::optional<std::size_t> model_position(std::string_view model_id) const;
    std::optional<std::size_t> instance_position(std::string_view instance_id) const;

    /// Sequence length used for cost lookup of one instance.
    std::uint32_t cost_length(std::size_t instance) const;

    /// Standalone accuracy of one model in percent.
    double standalone_accuracy(std::size_t model) const;
    /// Mean standalone inference cost of one model.
    Flops standalone_cost(std::size_t model) const;

private:
    std::vector<InstanceRecord> instances_;
    std::vector<ModelProfile> profiles_;
    std::vector<std::vector<PredictionRecord>> predictions_;
    std::vector<std::vector<Flops>> costs_;
    std::map<std::string, std::size_t, std::less<>> instance_index_;
    std::optional<std::uint32_t> dataset_seq_len_;
    bool per_instance_cost_ = false;
    std::size_t label_count_ = 0;
};

struct ProfileDocument {
    std::vector<ModelProfile> profiles;
    std::optional<std::uint32_t> seq_len;
    bool per_instance_cost = false;
    std::optional<std::size_t> label_count;
};

/// Softmax with max-shift. Throws NonFiniteScore.
std::vector<double> normalize_scores(std::span<const double> raw_scores);

/// Argmax with ties broken by the lowest index.
LabelIndex argmax_label(std::span<const double> distribution);

/// Throws InvalidDistribution unless entries lie in [0,1] and sum to 1 within 1e-6.
void validate_distribution(std::span<const double> distribution);

/// Cost lookup: exact entry, else linear interpolation between the two
/// nearest lengths, else linear extrapolation from the two nearest entries.
Flops instance_cost(const ModelProfile& profile, std::uint32_t seq_len);

/// Throws NonMonotoneCosts when a larger order index is not strictly more
/// expensive at some length in the union of all table keys.
void check_cost_monotonicity(std::span<const ModelProfile> profiles);

/// Cost tables of the four BERT variants (mini, medium, base, large).
const std::vector<ModelProfile>& bert_profiles();
std::optional<ModelProfile> builtin_profile(std::string_view name);

std::vector<InstanceRecord> read_instances(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
ProfileDocument read_profiles(const std::filesystem::path& path);

/// Loads and validates a bundle. One prediction file per model, ordered
/// smallest to largest; model ids come from each record's `model_id` or
/// from the `preds_<model>.jsonl` filename.
EvaluationBundle load_bundle(const std::filesystem::path& instances_path,
                             std::span<const std::filesystem::path> prediction_paths,
                             const std::filesystem::path& profiles_path);

/// Loads `instances.jsonl`, `profiles.json` and `preds_<id>.jsonl` for every
/// profile from one directory.
EvaluationBundle load_bundle_dir(const std::filesystem::path& dir);

struct BundlePaths {
    std::filesystem::path instances;
    std::vector<std::filesystem::path> predictions;
    std::filesystem::path profiles;
};

BundlePaths bundle_dir_paths(const std::filesystem::path& dir);

/// Writes the bundle in the same layout `load_bundle_dir` reads.
BundlePaths write_bundle(const EvaluationBundle& bundle, const std::filesystem::path& dir);

/// Copy of a bundle with different cost accounting (fixed length and/or
/// per-instance lengths).
EvaluationBundle with_cost_accounting(const EvaluationBundle& bundle, std::optional<std::uint32_t> seq_len,
                                      bool per_instance_cost);

/// Copy of a bundle restricted to the given models (order_index renumbered).
EvaluationBundle select_models(const EvaluationBundle& bundle,
                               std::span<const std::string> model_ids);

}  // namespace cascade
