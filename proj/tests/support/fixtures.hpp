#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cascade/ingest.hpp"

namespace testsupport {

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("cascade_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

/// Binary bundle over the builtin BERT profiles. `top[m][i]` is model m's
/// probability for label 0 on instance i.
inline cascade::EvaluationBundle binary_bundle(const std::vector<std::string>& models,
                                               const std::vector<std::uint32_t>& gold,
                                               const std::vector<std::vector<double>>& p0,
                                               std::uint32_t seq_len = 100) {
    std::vector<cascade::InstanceRecord> instances;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        instances.push_back({"q" + std::to_string(i + 1), gold[i], seq_len});
    }
    std::vector<cascade::ModelProfile> profiles;
    std::vector<std::vector<cascade::PredictionRecord>> preds;
    for (std::size_t m = 0; m < models.size(); ++m) {
        auto p = *cascade::builtin_profile(models[m]);
        p.order_index = static_cast<int>(m + 1);
        profiles.push_back(p);
        std::vector<cascade::PredictionRecord> rows;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            rows.push_back({instances[i].instance_id, p.model_id, {p0[m][i], 1.0 - p0[m][i]}, 0});
        }
        preds.push_back(std::move(rows));
    }
    return cascade::EvaluationBundle(std::move(instances), std::move(profiles), std::move(preds), seq_len,
                                     false);
}

}  // namespace testsupport
