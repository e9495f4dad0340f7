#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cascade/ingest.hpp"

namespace cascade {

struct SynthModel {
    std::string model_id;
    double target_accuracy = 0.8;       // in (0, 1]
    double calibration_sharpness = 2.0; // 0: confidence independent of correctness
    ModelProfile profile;               // cost table; id and order are overwritten
};

struct SynthSpec {
    std::size_t n_instances = 1000;
    std::size_t label_count = 2;
    std::vector<SynthModel> models;     // smallest to largest
    std::uint32_t seq_len = 100;
    std::uint64_t seed = 0;
    double agreement = 0.9;             // chance a model reuses the previous model's correctness draw
    double confidence_base = 1.0;       // centre of the logit the MaxProb is drawn from
};

/// Spec with BERT cost tables for the named builtin models.
SynthSpec make_synth_spec(std::size_t n_instances, std::size_t label_count,
                          const std::vector<std::pair<std::string, double>>& models, double sharpness,
                          std::uint32_t seq_len, std::uint64_t seed);

/// Throws InvalidSpec.
void validate_spec(const SynthSpec& spec);

/// Deterministic in the seed. Correct predictions put the sampled MaxProb on
/// the gold label, incorrect ones on a uniformly drawn wrong label.
EvaluationBundle generate(const SynthSpec& spec);

}  // namespace cascade
