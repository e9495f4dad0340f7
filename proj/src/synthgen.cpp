#include "cascade/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cascade/error.hpp"

namespace cascade {

namespace {

// Distribution helpers built directly on mt19937_64 output so generated files
// do not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }

    double normal() {
        // Box-Muller; log(0) avoided by shifting u1 into (0, 1].
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::vector<double> make_distribution(Rng& rng, std::size_t labels, LabelIndex predicted, double max_prob) {
    std::vector<double> weights(labels, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < labels; ++k) {
        weights[k] = 0.5 + rng.uniform();
        if (k != predicted) total += weights[k];
    }
    const double rest = 1.0 - max_prob;
    std::vector<double> dist(labels, 0.0);
    bool ok = true;
    for (std::size_t k = 0; k < labels; ++k) {
        if (k == predicted) continue;
        dist[k] = rest * weights[k] / total;
        if (dist[k] >= max_prob) ok = false;
    }
    if (!ok) {
        for (std::size_t k = 0; k < labels; ++k) {
            if (k != predicted) dist[k] = rest / static_cast<double>(labels - 1);
        }
    }
    dist[predicted] = max_prob;
    return dist;
}

}  // namespace

SynthSpec make_synth_spec(std::size_t n_instances, std::size_t label_count,
                          const std::vector<std::pair<std::string, double>>& models, double sharpness,
                          std::uint32_t seq_len, std::uint64_t seed) {
    SynthSpec spec;
    spec.n_instances = n_instances;
    spec.label_count = label_count;
    spec.seq_len = seq_len;
    spec.seed = seed;
    for (const auto& [name, accuracy] : models) {
        auto profile = builtin_profile(name);
        if (!profile) throw Error(ErrorCode::InvalidSpec, "no builtin cost profile named '" + name + "'");
        spec.models.push_back({name, accuracy, sharpness, *profile});
    }
    return spec;
}

void validate_spec(const SynthSpec& spec) {
    if (spec.n_instances == 0) throw Error(ErrorCode::InvalidSpec, "n_instances must be positive");
    if (spec.label_count < 2) throw Error(ErrorCode::InvalidSpec, "label_count must be >= 2");
    if (spec.models.empty()) throw Error(ErrorCode::InvalidSpec, "at least one model required");
    if (spec.seq_len < 1) throw Error(ErrorCode::InvalidSpec, "seq_len must be >= 1");
    if (!(spec.agreement >= 0.0 && spec.agreement <= 1.0)) {
        throw Error(ErrorCode::InvalidSpec, "agreement must lie in [0,1]");
    }
    double previous = 0.0;
    for (const auto& m : spec.models) {
        if (!(m.target_accuracy > 0.0 && m.target_accuracy <= 1.0)) {
            throw Error(ErrorCode::InvalidSpec, "target accuracy of '" + m.model_id + "' must lie in (0,1]");
        }
        if (m.target_accuracy < previous) {
            throw Error(ErrorCode::InvalidSpec, "target accuracies must be non-decreasing ('" + m.model_id + "')");
        }
        if (!(m.calibration_sharpness >= 0.0) || !std::isfinite(m.calibration_sharpness)) {
            throw Error(ErrorCode::InvalidSpec, "calibration sharpness of '" + m.model_id + "' must be >= 0");
        }
        if (m.profile.cost_table.empty()) {
            throw Error(ErrorCode::InvalidSpec, "model '" + m.model_id + "' has no cost table");
        }
        previous = m.target_accuracy;
    }
}

EvaluationBundle generate(const SynthSpec& spec) {
    validate_spec(spec);
    Rng rng(spec.seed);
    const std::size_t k = spec.models.size();
    const std::size_t labels = spec.label_count;
    const double floor = 1.0 / static_cast<double>(labels);
    const std::uint32_t min_len = std::max<std::uint32_t>(1, spec.seq_len / 4);

    std::vector<InstanceRecord> instances;
    instances.reserve(spec.n_instances);
    std::vector<std::vector<PredictionRecord>> predictions(k);
    const int width = static_cast<int>(std::to_string(spec.n_instances).size());

    for (std::size_t i = 0; i < spec.n_instances; ++i) {
        InstanceRecord inst;
        std::string num = std::to_string(i);
        inst.instance_id = "q" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;
        inst.gold_label = static_cast<LabelIndex>(rng.below(labels));
        inst.input_length = min_len + static_cast<std::uint32_t>(rng.below(spec.seq_len - min_len + 1));

        bool previous_correct = false;
        for (std::size_t j = 0; j < k; ++j) {
            const auto& model = spec.models[j];
            const double target = model.target_accuracy;
            const double u_agree = rng.uniform();
            const double u_draw = rng.uniform();
            bool correct;
            if (j > 0 && u_agree < spec.agreement) {
                const double prev_target = spec.models[j - 1].target_accuracy;
                const double upgrade = prev_target < 1.0 ? (target - prev_target) / (1.0 - prev_target) : 0.0;
                correct = previous_correct || u_draw < upgrade;
            } else {
                correct = u_draw < target;
            }
            previous_correct = correct;

            LabelIndex predicted = inst.gold_label;
            const std::size_t wrong = rng.below(labels - 1);
            if (!correct) predicted = static_cast<LabelIndex>(wrong >= inst.gold_label ? wrong + 1 : wrong);

            const double centre = spec.confidence_base +
                                  (correct ? model.calibration_sharpness : -model.calibration_sharpness);
            const double logit = std::clamp(centre + rng.normal(), -30.0, 30.0);
            const double squash = 1.0 / (1.0 + std::exp(-logit));
            const double max_prob = std::min(1.0, floor + (1.0 - floor) * squash);

            PredictionRecord pred;
            pred.instance_id = inst.instance_id;
            pred.model_id = model.model_id;
            pred.distribution = make_distribution(rng, labels, predicted, max_prob);
            pred.predicted_label = predicted;
            predictions[j].push_back(std::move(pred));
        }
        instances.push_back(std::move(inst));
    }

    std::vector<ModelProfile> profiles;
    for (std::size_t j = 0; j < k; ++j) {
        ModelProfile p = spec.models[j].profile;
        p.model_id = spec.models[j].model_id;
        p.order_index = static_cast<int>(j + 1);
        profiles.push_back(std::move(p));
    }
    return EvaluationBundle(std::move(instances), std::move(profiles), std::move(predictions), spec.seq_len,
                            false);
}

}  // namespace cascade
