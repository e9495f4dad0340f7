#include "cascade/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cascade/error.hpp"
#include "cascade/io.hpp"

namespace cascade {

using nlohmann::json;

namespace {

constexpr double kDistributionTolerance = 1e-6;

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

// Calls `fn(object, line_number)` for every non-blank line of a JSONL file.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::ParseError, where(path, line_no) + ": " + e.what());
        }
        if (!obj.is_object()) {
            throw Error(ErrorCode::ParseError, where(path, line_no) + ": expected a JSON object");
        }
        try {
            fn(obj, line_no);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, where(path, line_no) + ": " + e.what());
        }
    }
}

std::string id_field(const json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a string");
}

std::vector<double> number_array(const json& v) {
    if (!v.is_array()) throw Error(ErrorCode::ParseError, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw Error(ErrorCode::ParseError, "expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::string model_id_from_filename(const std::filesystem::path& path) {
    std::string stem = path.stem().string();
    constexpr std::string_view prefix = "preds_";
    if (stem.rfind(prefix, 0) == 0) return stem.substr(prefix.size());
    return stem;
}

CostTable parse_cost_table(const json& v, const std::string& model_id) {
    CostTable table;
    auto add = [&](long long len, double flops) {
        if (len < 1) {
            throw Error(ErrorCode::NonPositiveLength,
                        "cost_table of '" + model_id + "' has length " + std::to_string(len));
        }
        if (!std::isfinite(flops) || flops < 0) {
            throw Error(ErrorCode::ParseError, "cost_table of '" + model_id + "' has invalid cost");
        }
        table[static_cast<std::uint32_t>(len)] = flops;
    };
    if (v.is_object()) {
        for (const auto& [key, value] : v.items()) {
            try {
                add(std::stoll(key), value.get<double>());
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::ParseError, "cost_table key '" + key + "' is not a length");
            }
        }
    } else if (v.is_array()) {
        for (const auto& pair : v) {
            if (!pair.is_array() || pair.size() != 2) {
                throw Error(ErrorCode::ParseError, "cost_table entries must be [length, flops] pairs");
            }
            add(pair[0].get<long long>(), pair[1].get<double>());
        }
    } else {
        throw Error(ErrorCode::ParseError, "cost_table must be an object or an array of pairs");
    }
    return table;
}

ModelProfile make_profile(std::string id, int order, std::uint64_t params,
                          std::initializer_list<std::pair<std::uint32_t, Flops>> costs) {
    ModelProfile p;
    p.model_id = std::move(id);
    p.order_index = order;
    p.param_count = params;
    for (const auto& [len, flops] : costs) p.cost_table[len] = flops;
    return p;
}

}  // namespace

std::vector<double> normalize_scores(std::span<const double> raw_scores) {
    if (raw_scores.empty()) throw Error(ErrorCode::NonFiniteScore, "empty score vector");
    for (double s : raw_scores) {
        if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteScore, "score is not finite");
    }
    const double shift = *std::max_element(raw_scores.begin(), raw_scores.end());
    std::vector<double> out(raw_scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < raw_scores.size(); ++i) {
        out[i] = std::exp(raw_scores[i] - shift);
        total += out[i];
    }
    for (double& p : out) p /= total;
    return out;
}

LabelIndex argmax_label(std::span<const double> distribution) {
    auto it = std::max_element(distribution.begin(), distribution.end());
    return static_cast<LabelIndex>(std::distance(distribution.begin(), it));
}

void validate_distribution(std::span<const double> distribution) {
    if (distribution.empty()) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
    double total = 0.0;
    for (double p : distribution) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw Error(ErrorCode::InvalidDistribution, "entry outside [0,1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kDistributionTolerance) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "entries sum to " << total;
        throw Error(ErrorCode::InvalidDistribution, msg.str());
    }
}

Flops instance_cost(const ModelProfile& profile, std::uint32_t seq_len) {
    if (seq_len < 1) throw Error(ErrorCode::NonPositiveLength, "sequence length must be >= 1");
    const auto& table = profile.cost_table;
    if (table.empty()) {
        throw Error(ErrorCode::EmptyCostTable, "model '" + profile.model_id + "' has no cost entries");
    }
    if (auto it = table.find(seq_len); it != table.end()) return it->second;
    if (table.size() == 1) return table.begin()->second;

    auto hi = table.upper_bound(seq_len);
    if (hi == table.begin()) {
        hi = std::next(hi);                     // below range: first two entries
    } else if (hi == table.end()) {
        hi = std::prev(table.end());            // above range: last two entries
    }
    auto lo = std::prev(hi);
    const double x0 = lo->first, x1 = hi->first;
    const double slope = (hi->second - lo->second) / (x1 - x0);
    return lo->second + slope * (static_cast<double>(seq_len) - x0);
}

void check_cost_monotonicity(std::span<const ModelProfile> profiles) {
    std::set<std::uint32_t> lengths;
    for (const auto& p : profiles) {
        if (p.cost_table.empty()) {
            throw Error(ErrorCode::EmptyCostTable, "model '" + p.model_id + "' has no cost entries");
        }
        for (const auto& [len, _] : p.cost_table) lengths.insert(len);
    }
    std::vector<const ModelProfile*> ordered;
    for (const auto& p : profiles) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](auto* a, auto* b) { return a->order_index < b->order_index; });
    for (std::uint32_t len : lengths) {
        for (std::size_t j = 0; j < ordered.size(); ++j) {
            for (std::size_t k = j + 1; k < ordered.size(); ++k) {
                if (!(instance_cost(*ordered[j], len) < instance_cost(*ordered[k], len))) {
                    throw Error(ErrorCode::NonMonotoneCosts,
                                "at length " + std::to_string(len) + ": order " +
                                    std::to_string(ordered[j]->order_index) + " ('" +
                                    ordered[j]->model_id + "') is not cheaper than order " +
                                    std::to_string(ordered[k]->order_index) + " ('" +
                                    ordered[k]->model_id + "')");
                }
            }
        }
    }
}

const std::vector<ModelProfile>& bert_profiles() {
    // Inference cost of BERT variants, FLOPs per sequence length.
    static const std::vector<ModelProfile> profiles = {
        make_profile("mini", 1, 11'300'000,
                     {{50, 160'000'000.0}, {80, 250'000'000.0}, {100, 310'000'000.0},
                      {120, 380'000'000.0}, {150, 470'000'000.0}, {220, 690'000'000.0},
                      {275, 870'000'000.0}}),
        make_profile("medium", 2, 41'700'000,
                     {{50, 1'260'000'000.0}, {80, 2'010'000'000.0}, {100, 2'520'000'000.0},
                      {120, 3'020'000'000.0}, {150, 3'780'000'000.0}, {220, 5'540'000'000.0},
                      {275, 6'920'000'000.0}}),
        make_profile("base", 3, 110'000'000,
                     {{50, 4'250'000'000.0}, {80, 6'800'000'000.0}, {100, 8'490'000'000.0},
                      {120, 10'190'000'000.0}, {150, 12'740'000'000.0}, {220, 18'690'000'000.0},
                      {275, 23'360'000'000.0}}),
        make_profile("large", 4, 340'000'000,
                     {{50, 5'100'000'000.0}, {80, 24'160'000'000.0}, {100, 30'200'000'000.0},
                      {120, 36'240'000'000.0}, {150, 45'300'000'000.0}, {220, 66'440'000'000.0},
                      {275, 83'050'000'000.0}}),
    };
    return profiles;
}

std::optional<ModelProfile> builtin_profile(std::string_view name) {
    for (const auto& p : bert_profiles()) {
        if (p.model_id == name) return p;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// EvaluationBundle

EvaluationBundle::EvaluationBundle(std::vector<InstanceRecord> instances,
                                   std::vector<ModelProfile> profiles,
                                   std::vector<std::vector<PredictionRecord>> predictions,
                                   std::optional<std::uint32_t> dataset_seq_len,
                                   bool per_instance_cost)
    : instances_(std::move(instances)),
      profiles_(std::move(profiles)),
      predictions_(std::move(predictions)),
      dataset_seq_len_(dataset_seq_len),
      per_instance_cost_(per_instance_cost) {
    if (instances_.empty()) throw Error(ErrorCode::EmptyBundle, "bundle has no instances");
    if (profiles_.empty()) throw Error(ErrorCode::EmptyBundle, "bundle has no models");
    if (predictions_.size() != profiles_.size()) {
        throw Error(ErrorCode::CountMismatch, "one prediction list per model required");
    }

    std::sort(profiles_.begin(), profiles_.end(),
              [](const auto& a, const auto& b) { return a.order_index < b.order_index; });
    for (std::size_t j = 0; j < profiles_.size(); ++j) {
        if (profiles_[j].order_index != static_cast<int>(j + 1)) {
            throw Error(ErrorCode::InvalidConfig, "order_index values must form 1..K");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (profiles_[k].model_id == profiles_[j].model_id) {
                throw Error(ErrorCode::InvalidConfig, "duplicate model id '" + profiles_[j].model_id + "'");
            }
        }
    }
    check_cost_monotonicity(profiles_);
    if (dataset_seq_len_ && *dataset_seq_len_ < 1) {
        throw Error(ErrorCode::NonPositiveLength, "dataset seq_len must be >= 1");
    }

    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const auto& inst = instances_[i];
        if (!instance_index_.emplace(inst.instance_id, i).second) {
            throw Error(ErrorCode::DuplicateInstance, "instance '" + inst.instance_id + "'");
        }
        if (inst.input_length < 1) {
            throw Error(ErrorCode::InvalidInstance, "instance '" + inst.instance_id + "' has input_length < 1");
        }
    }

    label_count_ = predictions_[0].empty() ? 0 : predictions_[0][0].distribution.size();
    for (std::size_t m = 0; m < predictions_.size(); ++m) {
        auto& row = predictions_[m];
        if (row.size() != instances_.size()) {
            throw Error(ErrorCode::MissingPrediction,
                        "model '" + profiles_[m].model_id + "' has " + std::to_string(row.size()) +
                            " predictions for " + std::to_string(instances_.size()) + " instances");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            auto& pred = row[i];
            if (pred.instance_id != instances_[i].instance_id) {
                throw Error(ErrorCode::MissingPrediction,
                            "model '" + profiles_[m].model_id + "', instance '" + instances_[i].instance_id + "'");
            }
            pred.model_id = profiles_[m].model_id;
            if (pred.distribution.size() != label_count_) {
                throw Error(ErrorCode::LabelCountMismatch,
                            "model '" + pred.model_id + "', instance '" + pred.instance_id + "' has " +
                                std::to_string(pred.distribution.size()) + " labels, expected " +
                                std::to_string(label_count_));
            }
            try {
                validate_distribution(pred.distribution);
            } catch (const Error& e) {
                throw Error(ErrorCode::InvalidDistribution,
                            "model '" + pred.model_id + "', instance '" + pred.instance_id + "': " + e.what());
            }
            pred.predicted_label = argmax_label(pred.distribution);
        }
    }
    if (label_count_ < 2) throw Error(ErrorCode::LabelCountMismatch, "at least two labels required");
    for (const auto& inst : instances_) {
        if (inst.gold_label >= label_count_) {
            throw Error(ErrorCode::InvalidInstance,
                        "instance '" + inst.instance_id + "' gold_label " + std::to_string(inst.gold_label) +
                            " >= label_count " + std::to_string(label_count_));
        }
    }

    costs_.assign(profiles_.size(), std::vector<Flops>(instances_.size()));
    for (std::size_t m = 0; m < profiles_.size(); ++m) {
        for (std::size_t i = 0; i < instances_.size(); ++i) {
            costs_[m][i] = instance_cost(profiles_[m], cost_length(i));
        }
    }
}

std::optional<std::size_t> EvaluationBundle::model_position(std::string_view model_id) const {
    for (std::size_t j = 0; j < profiles_.size(); ++j) {
        if (profiles_[j].model_id == model_id) return j;
    }
    return std::nullopt;
}

std::optional<std::size_t> EvaluationBundle::instance_position(std::string_view instance_id) const {
    auto it = instance_index_.find(instance_id);
    if (it == instance_index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t EvaluationBundle::cost_length(std::size_t instance) const {
    if (per_instance_cost_ || !dataset_seq_len_) return instances_[instance].input_length;
    return *dataset_seq_len_;
}

double EvaluationBundle::standalone_accuracy(std::size_t model) const {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        if (predictions_[model][i].predicted_label == instances_[i].gold_label) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(instances_.size());
}

Flops EvaluationBundle::standalone_cost(std::size_t model) const {
    Flops total = 0.0;
    for (Flops c : costs_[model]) total += c;
    return total / static_cast<double>(instances_.size());
}

// ---------------------------------------------------------------------------
// File formats

std::vector<InstanceRecord> read_instances(const std::filesystem::path& path) {
    std::vector<InstanceRecord> out;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj, std::size_t line) {
        InstanceRecord rec;
        rec.instance_id = id_field(obj, "instance_id");
        const long long gold = obj.at("gold_label").get<long long>();
        if (gold < 0) throw Error(ErrorCode::InvalidInstance, where(path, line) + ": negative gold_label");
        rec.gold_label = static_cast<LabelIndex>(gold);
        const long long len = obj.value("input_length", 1LL);
        if (len < 1) {
            throw Error(ErrorCode::InvalidInstance, where(path, line) + ": input_length must be >= 1");
        }
        rec.input_length = static_cast<std::uint32_t>(len);
        if (!seen.insert(rec.instance_id).second) {
            throw Error(ErrorCode::DuplicateInstance, where(path, line) + ": instance '" + rec.instance_id + "'");
        }
        out.push_back(std::move(rec));
    });
    return out;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    std::vector<PredictionRecord> out;
    const std::string default_model = model_id_from_filename(path);
    for_each_jsonl(path, [&](const json& obj, std::size_t line) {
        PredictionRecord rec;
        rec.instance_id = id_field(obj, "instance_id");
        rec.model_id = obj.contains("model_id") ? id_field(obj, "model_id") : default_model;
        try {
            if (obj.contains("distribution")) {
                rec.distribution = number_array(obj.at("distribution"));
                validate_distribution(rec.distribution);
            } else if (obj.contains("raw_scores")) {
                rec.distribution = normalize_scores(number_array(obj.at("raw_scores")));
            } else {
                throw Error(ErrorCode::ParseError, "record needs 'distribution' or 'raw_scores'");
            }
        } catch (const Error& e) {
            throw Error(e.code(), where(path, line) + ": " + e.what());
        }
        rec.predicted_label = argmax_label(rec.distribution);
        out.push_back(std::move(rec));
    });
    return out;
}

ProfileDocument read_profiles(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    ProfileDocument out;
    try {
        if (doc.contains("seq_len") && !doc["seq_len"].is_null()) {
            const long long len = doc["seq_len"].get<long long>();
            if (len < 1) throw Error(ErrorCode::NonPositiveLength, path.string() + ": seq_len must be >= 1");
            out.seq_len = static_cast<std::uint32_t>(len);
        }
        out.per_instance_cost = doc.value("per_instance_cost", false);
        if (doc.contains("label_count")) out.label_count = doc["label_count"].get<std::size_t>();
        for (const auto& m : doc.at("models")) {
            ModelProfile p;
            p.model_id = id_field(m, "id");
            p.order_index = m.at("order").get<int>();
            if (m.contains("params") && !m["params"].is_null()) p.param_count = m["params"].get<std::uint64_t>();
            if (m.contains("cost_table")) {
                p.cost_table = parse_cost_table(m["cost_table"], p.model_id);
            } else if (m.contains("builtin")) {
                auto builtin = builtin_profile(m["builtin"].get<std::string>());
                if (!builtin) throw Error(ErrorCode::ParseError, "unknown builtin profile '" + m["builtin"].get<std::string>() + "'");
                p.cost_table = builtin->cost_table;
                if (!p.param_count) p.param_count = builtin->param_count;
            }
            if (p.cost_table.empty()) {
                throw Error(ErrorCode::EmptyCostTable, path.string() + ": model '" + p.model_id + "' has no cost entries");
            }
            out.profiles.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    std::vector<int> orders;
    for (const auto& p : out.profiles) orders.push_back(p.order_index);
    std::sort(orders.begin(), orders.end());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] != static_cast<int>(i + 1)) {
            throw Error(ErrorCode::ParseError, path.string() + ": model order values must form 1..K");
        }
    }
    check_cost_monotonicity(out.profiles);
    return out;
}

EvaluationBundle load_bundle(const std::filesystem::path& instances_path,
                             std::span<const std::filesystem::path> prediction_paths,
                             const std::filesystem::path& profiles_path) {
    auto instances = read_instances(instances_path);
    auto doc = read_profiles(profiles_path);
    if (prediction_paths.size() != doc.profiles.size()) {
        throw Error(ErrorCode::MissingPrediction,
                    std::to_string(prediction_paths.size()) + " prediction files for " +
                        std::to_string(doc.profiles.size()) + " model profiles");
    }
    std::sort(doc.profiles.begin(), doc.profiles.end(),
              [](const auto& a, const auto& b) { return a.order_index < b.order_index; });

    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < instances.size(); ++i) index.emplace(instances[i].instance_id, i);

    std::vector<std::vector<PredictionRecord>> predictions(doc.profiles.size());
    for (std::size_t m = 0; m < prediction_paths.size(); ++m) {
        const auto& path = prediction_paths[m];
        auto records = read_predictions(path);
        const std::string& expected = doc.profiles[m].model_id;
        std::vector<std::optional<PredictionRecord>> slots(instances.size());
        for (auto& rec : records) {
            if (rec.model_id != expected) {
                throw Error(ErrorCode::UnknownModel,
                            path.string() + ": predictions for '" + rec.model_id + "' but position " +
                                std::to_string(m + 1) + " in the cascade is '" + expected + "'");
            }
            if (doc.label_count && rec.distribution.size() != *doc.label_count) {
                throw Error(ErrorCode::LabelCountMismatch,
                            path.string() + ": instance '" + rec.instance_id + "' has " +
                                std::to_string(rec.distribution.size()) + " labels, expected " +
                                std::to_string(*doc.label_count));
            }
            auto it = index.find(rec.instance_id);
            if (it == index.end()) {
                throw Error(ErrorCode::UnknownInstance, path.string() + ": instance '" + rec.instance_id + "'");
            }
            if (slots[it->second]) {
                throw Error(ErrorCode::DuplicatePrediction,
                            path.string() + ": instance '" + rec.instance_id + "' appears twice");
            }
            slots[it->second] = std::move(rec);
        }
        auto& row = predictions[m];
        row.reserve(instances.size());
        for (std::size_t i = 0; i < instances.size(); ++i) {
            if (!slots[i]) {
                throw Error(ErrorCode::MissingPrediction,
                            "model '" + expected + "' (" + path.string() + "), instance '" +
                                instances[i].instance_id + "'");
            }
            row.push_back(std::move(*slots[i]));
        }
    }
    return EvaluationBundle(std::move(instances), std::move(doc.profiles), std::move(predictions),
                            doc.seq_len, doc.per_instance_cost);
}

BundlePaths bundle_dir_paths(const std::filesystem::path& dir) {
    BundlePaths paths;
    paths.instances = dir / "instances.jsonl";
    paths.profiles = dir / "profiles.json";
    auto doc = read_profiles(paths.profiles);
    std::sort(doc.profiles.begin(), doc.profiles.end(),
              [](const auto& a, const auto& b) { return a.order_index < b.order_index; });
    for (const auto& p : doc.profiles) paths.predictions.push_back(dir / ("preds_" + p.model_id + ".jsonl"));
    return paths;
}

EvaluationBundle load_bundle_dir(const std::filesystem::path& dir) {
    auto paths = bundle_dir_paths(dir);
    return load_bundle(paths.instances, paths.predictions, paths.profiles);
}

BundlePaths write_bundle(const EvaluationBundle& bundle, const std::filesystem::path& dir) {
    BundlePaths paths;
    paths.instances = dir / "instances.jsonl";
    paths.profiles = dir / "profiles.json";

    std::string text;
    for (const auto& inst : bundle.instances()) {
        json obj = {{"instance_id", inst.instance_id},
                    {"gold_label", inst.gold_label},
                    {"input_length", inst.input_length}};
        text += obj.dump();
        text += '\n';
    }
    io::write_file_atomic(paths.instances, text);

    json models = json::array();
    for (std::size_t m = 0; m < bundle.model_count(); ++m) {
        const auto& profile = bundle.profiles()[m];
        json table = json::array();
        for (const auto& [len, flops] : profile.cost_table) table.push_back({len, flops});
        json entry = {{"id", profile.model_id}, {"order", profile.order_index}, {"cost_table", table}};
        if (profile.param_count) entry["params"] = *profile.param_count;
        models.push_back(entry);

        std::string preds;
        for (const auto& rec : bundle.predictions(m)) {
            json obj = {{"instance_id", rec.instance_id}, {"distribution", rec.distribution}};
            preds += obj.dump();
            preds += '\n';
        }
        auto path = dir / ("preds_" + profile.model_id + ".jsonl");
        io::write_file_atomic(path, preds);
        paths.predictions.push_back(path);
    }
    json doc = {{"label_count", bundle.label_count()},
                {"per_instance_cost", bundle.per_instance_cost()},
                {"models", models}};
    if (bundle.dataset_seq_len()) doc["seq_len"] = *bundle.dataset_seq_len();
    io::write_file_atomic(paths.profiles, doc.dump(2) + "\n");
    return paths;
}

EvaluationBundle with_cost_accounting(const EvaluationBundle& bundle, std::optional<std::uint32_t> seq_len,
                                      bool per_instance_cost) {
    std::vector<std::vector<PredictionRecord>> predictions;
    for (std::size_t m = 0; m < bundle.model_count(); ++m) {
        auto preds = bundle.predictions(m);
        predictions.emplace_back(preds.begin(), preds.end());
    }
    return EvaluationBundle({bundle.instances().begin(), bundle.instances().end()},
                            {bundle.profiles().begin(), bundle.profiles().end()}, std::move(predictions), seq_len,
                            per_instance_cost);
}

EvaluationBundle select_models(const EvaluationBundle& bundle, std::span<const std::string> model_ids) {
    std::vector<std::size_t> positions;
    for (const auto& id : model_ids) {
        auto pos = bundle.model_position(id);
        if (!pos) throw Error(ErrorCode::UnknownModel, "model '" + id + "' not in bundle");
        if (!positions.empty() && *pos <= positions.back()) {
            throw Error(ErrorCode::InvalidConfig, "models must be listed smallest to largest");
        }
        positions.push_back(*pos);
    }
    std::vector<ModelProfile> profiles;
    std::vector<std::vector<PredictionRecord>> predictions;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        ModelProfile p = bundle.profiles()[positions[k]];
        p.order_index = static_cast<int>(k + 1);
        profiles.push_back(std::move(p));
        auto preds = bundle.predictions(positions[k]);
        predictions.emplace_back(preds.begin(), preds.end());
    }
    return EvaluationBundle({bundle.instances().begin(), bundle.instances().end()}, std::move(profiles),
                            std::move(predictions), bundle.dataset_seq_len(), bundle.per_instance_cost());
}

}  // namespace cascade
