#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace cascade {

enum class Policy { MaxProb, DTU, Random, Heuristic };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view name);

struct ConfidenceScore {
    double value = 0.0;
    Policy policy = Policy::MaxProb;
};

/// Closed interval of attainable confidence values for a policy.
struct ConfidenceRange {
    double lo = 0.0;
    double hi = 1.0;
};

ConfidenceRange confidence_range(Policy policy, std::size_t label_count);

/// Threshold at which every instance is answered by the first model.
double policy_min_threshold(Policy policy, std::size_t label_count);
/// Threshold strictly above every attainable confidence: escalates everything.
double policy_max_threshold(Policy policy, std::size_t label_count);

/// Maximum softmax probability.
ConfidenceScore max_prob(std::span<const double> distribution);

/// Euclidean distance between the distribution and the uniform distribution
/// over the same labels.
ConfidenceScore dtu(std::span<const double> distribution);

/// Keyed pseudo-random value in [0,1); a pure function of its arguments.
ConfidenceScore random_conf(std::uint64_t seed, std::string_view instance_id, int stage);

/// 1 - input_length / max_length clamped to [0,1] (shorter is more
/// confident); `invert` flips this to input_length / max_length.
ConfidenceScore heuristic_conf(std::uint32_t input_length, std::uint32_t max_length, bool invert = false);

}  // namespace cascade
