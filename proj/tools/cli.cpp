#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascade/analysis.hpp"
#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "cascade/ingest.hpp"
#include "cascade/io.hpp"
#include "cascade/report.hpp"
#include "cascade/sweep.hpp"
#include "cascade/synthgen.hpp"

namespace cascade::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOutDirEnv = "CASCADE_OUT_DIR";

struct Options {
    std::string command;

    // bundle inputs
    std::string bundle_dir;
    std::string instances;
    std::vector<std::string> preds;
    std::string profiles;
    std::optional<std::uint32_t> seq_len;
    bool per_instance_cost = false;

    // cascade
    std::vector<std::string> models;
    std::string policy = "maxprob";
    std::string mode = "sequential";
    std::uint64_t seed = 0;
    bool heuristic_invert = false;
    std::uint32_t heuristic_max_length = 0;
    std::vector<std::string> thresholds;
    std::vector<std::string> skips;

    // sweep
    std::size_t grid_points = 20;
    std::size_t max_points = 1'000'000;
    unsigned threads = 0;

    // analyze / tune
    std::string at_match;
    std::optional<double> budget;
    std::string test_bundle;

    // synth
    std::size_t n_instances = 1000;
    std::size_t labels = 2;
    std::vector<std::string> synth_models;
    double sharpness = 2.0;
    double agreement = 0.9;
    std::uint32_t synth_seq_len = 100;

    // plot
    std::vector<std::string> plot_policies;

    std::string out_dir;
    std::string manifest;
};

std::string num(double v) { return report::format_number(v); }

std::string absolute(const std::string& p) {
    return p.empty() ? p : fs::absolute(fs::path(p)).lexically_normal().string();
}

bool uses_bundle(const std::string& cmd) {
    return cmd == "validate" || cmd == "simulate" || cmd == "sweep" || cmd == "analyze" || cmd == "tune" ||
           cmd == "plot";
}

bool uses_cascade(const std::string& cmd) {
    return cmd == "simulate" || cmd == "sweep" || cmd == "analyze" || cmd == "tune" || cmd == "plot";
}

bool uses_grid(const std::string& cmd) {
    return cmd == "sweep" || cmd == "tune" || cmd == "plot" || cmd == "analyze";
}

// Fully resolved argument list: replaying it reproduces the run.
std::vector<std::string> canonical_args(const Options& o) {
    std::vector<std::string> a = {"cascade", o.command};
    auto add = [&](const std::string& flag, const std::string& value) {
        a.push_back(flag);
        a.push_back(value);
    };
    auto add_list = [&](const std::string& flag, const std::vector<std::string>& values) {
        if (values.empty()) return;
        std::string joined;
        for (std::size_t i = 0; i < values.size(); ++i) joined += (i ? "," : "") + values[i];
        add(flag, joined);
    };
    if (uses_bundle(o.command)) {
        if (!o.bundle_dir.empty()) {
            add("--bundle", absolute(o.bundle_dir));
        } else {
            add("--instances", absolute(o.instances));
            std::vector<std::string> preds;
            for (const auto& p : o.preds) preds.push_back(absolute(p));
            add_list("--preds", preds);
            add("--profiles", absolute(o.profiles));
        }
        if (o.seq_len) add("--seq-len", std::to_string(*o.seq_len));
        if (o.per_instance_cost) a.push_back("--per-instance-cost");
    }
    if (uses_cascade(o.command)) {
        add_list("--models", o.models);
        if (o.command == "plot") {
            add_list("--policy", o.plot_policies);
        } else {
            add("--policy", o.policy);
        }
        add("--mode", o.mode);
        add("--seed", std::to_string(o.seed));
        if (o.heuristic_invert) a.push_back("--heuristic-invert");
        if (o.heuristic_max_length) add("--heuristic-max-length", std::to_string(o.heuristic_max_length));
    }
    if (o.command == "simulate" || o.command == "analyze") {
        add_list("--thresholds", o.thresholds);
        add_list("--skip", o.skips);
    }
    if (uses_grid(o.command)) {
        add("--grid-points", std::to_string(o.grid_points));
        add("--max-points", std::to_string(o.max_points));
    }
    if (o.command == "analyze" && !o.at_match.empty()) add("--at-match", o.at_match);
    if (o.command == "tune") {
        if (o.budget) add("--budget", num(*o.budget));
        if (!o.test_bundle.empty()) add("--test-bundle", absolute(o.test_bundle));
    }
    if (o.command == "synth") {
        add("--n", std::to_string(o.n_instances));
        add("--labels", std::to_string(o.labels));
        for (const auto& m : o.synth_models) add("--model", m);
        add("--sharpness", num(o.sharpness));
        add("--agreement", num(o.agreement));
        add("--seq-len", std::to_string(o.synth_seq_len));
        add("--seed", std::to_string(o.seed));
    }
    if (o.command != "validate") add("--out", absolute(o.out_dir));
    return a;
}

struct Inputs {
    std::vector<fs::path> files;
};

EvaluationBundle load_from_options(const Options& o, Inputs& inputs) {
    BundlePaths paths;
    if (!o.bundle_dir.empty()) {
        paths = bundle_dir_paths(o.bundle_dir);
    } else {
        if (o.instances.empty() || o.preds.empty() || o.profiles.empty()) {
            throw Error(ErrorCode::InvalidConfig, "give --bundle DIR or all of --instances, --preds, --profiles");
        }
        paths.instances = o.instances;
        for (const auto& p : o.preds) paths.predictions.emplace_back(p);
        paths.profiles = o.profiles;
    }
    auto bundle = load_bundle(paths.instances, paths.predictions, paths.profiles);
    inputs.files.push_back(paths.instances);
    for (const auto& p : paths.predictions) inputs.files.push_back(p);
    inputs.files.push_back(paths.profiles);
    if (o.seq_len || o.per_instance_cost) {
        return with_cost_accounting(bundle, o.seq_len ? o.seq_len : bundle.dataset_seq_len(),
                                    o.per_instance_cost || bundle.per_instance_cost());
    }
    return bundle;
}

Policy policy_of(const std::string& name) {
    auto p = parse_policy(name);
    if (!p) throw Error(ErrorCode::InvalidConfig, "unknown policy '" + name + "' (maxprob, dtu, random, heuristic)");
    return *p;
}

Mode mode_of(const std::string& name) {
    auto m = parse_mode(name);
    if (!m) throw Error(ErrorCode::InvalidConfig, "unknown mode '" + name + "' (sequential, routing)");
    return *m;
}

ConfidenceOptions confidence_options(const Options& o, Policy policy) {
    ConfidenceOptions c;
    c.policy = policy;
    c.seed = o.seed;
    c.heuristic_invert = o.heuristic_invert;
    c.heuristic_max_length = o.heuristic_max_length;
    return c;
}

std::vector<std::string> model_order(const Options& o, const EvaluationBundle& bundle) {
    return o.models.empty() ? all_models(bundle) : o.models;
}

// "min" / "max" map to the policy endpoints; anything else must be a number.
std::vector<double> resolve_thresholds(const std::vector<std::string>& values, const CascadePlan& plan) {
    std::vector<double> out;
    for (const auto& v : values) {
        if (v == "min") {
            out.push_back(plan.min_threshold());
        } else if (v == "max") {
            out.push_back(plan.max_threshold());
        } else {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(v, &used));
                if (used != v.size()) throw std::invalid_argument(v);
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::InvalidConfig, "threshold '" + v + "' is not a number, 'min' or 'max'");
            }
        }
    }
    return out;
}

SweepOptions sweep_options(const Options& o) {
    SweepOptions s;
    s.max_points = o.max_points;
    s.threads = o.threads;
    return s;
}

class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& contents) {
        io::write_file_atomic(dir_ / name, contents);
        digests_.emplace_back(name, io::sha256_hex(contents));
    }
    void record(const std::string& name, const fs::path& path) {
        digests_.emplace_back(name, io::sha256_file(path));
    }
    const fs::path& dir() const { return dir_; }

    void write_manifest(const Options& o, const Inputs& inputs) {
        json in = json::array();
        for (const auto& f : inputs.files) {
            in.push_back({{"path", absolute(f.string())}, {"sha256", io::sha256_file(f)}});
        }
        json out = json::array();
        for (const auto& [name, digest] : digests_) out.push_back({{"file", name}, {"sha256", digest}});
        json doc = {{"tool", "cascade"},
                    {"command", o.command},
                    {"argv", canonical_args(o)},
                    {"seed", o.seed},
                    {"inputs", in},
                    {"outputs", out}};
        io::write_file_atomic(dir_ / "manifest.json", doc.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> digests_;
};

// ---------------------------------------------------------------------------
// subcommands

int cmd_validate(const Options& o, std::ostream& out) {
    Inputs inputs;
    auto bundle = load_from_options(o, inputs);
    out << "bundle ok: K=" << bundle.model_count() << " |D|=" << bundle.size() << " labels=" << bundle.label_count();
    if (bundle.dataset_seq_len()) out << " seq_len=" << *bundle.dataset_seq_len();
    out << (bundle.per_instance_cost() ? " (per-instance cost)" : "") << "\n";
    for (std::size_t m = 0; m < bundle.model_count(); ++m) {
        out << "  " << bundle.profiles()[m].order_index << " " << bundle.profiles()[m].model_id
            << "  accuracy " << report::format_number(bundle.standalone_accuracy(m)) << "%  mean cost "
            << report::format_number(bundle.standalone_cost(m)) << " FLOPs\n";
    }
    return kSuccess;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    Inputs inputs;
    auto bundle = load_from_options(o, inputs);
    CascadeConfig config;
    config.model_order = model_order(o, bundle);
    config.confidence = confidence_options(o, policy_of(o.policy));
    config.mode = mode_of(o.mode);
    CascadePlan plan(bundle, config.model_order, config.confidence);
    config.thresholds = resolve_thresholds(o.thresholds, plan);
    config.skip_thresholds = resolve_thresholds(o.skips, plan);
    if (config.mode == Mode::Routing && plan.stages() < 3) {
        throw Error(ErrorCode::RoutingRequiresK3, "routing needs K >= 3 models");
    }
    auto summary = run_plan(plan, config.mode, config.thresholds, config.skip_thresholds);

    OutputSet outputs(o.out_dir);
    outputs.write("outcomes.jsonl", report::outcomes_jsonl(summary.outcomes));
    outputs.write("run_summary.json", report::run_summary_json(summary, config));
    outputs.write_manifest(o, inputs);
    out << "accuracy " << report::format_number(summary.accuracy) << "%  mean cost "
        << report::format_number(summary.mean_cost) << " FLOPs  (" << summary.outcomes.size() << " instances)\n";
    return kSuccess;
}

struct SweepResult {
    std::vector<CurvePoint> points;
    CurveSummary summary;
};

SweepResult run_sweep(const CascadePlan& plan, Mode mode, const Options& o) {
    auto grid = threshold_grid(plan, o.grid_points);
    SweepResult r;
    r.points = sweep(plan, mode, grid, sweep_options(o));
    r.summary = summarize(plan, r.points);
    return r;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    Inputs inputs;
    auto bundle = load_from_options(o, inputs);
    const auto order = model_order(o, bundle);
    const Policy policy = policy_of(o.policy);
    const Mode mode = mode_of(o.mode);
    CascadePlan plan(bundle, order, confidence_options(o, policy));
    auto result = run_sweep(plan, mode, o);
    auto improvement = improvement_report(result.summary);

    OutputSet outputs(o.out_dir);
    outputs.write("curve.csv", report::curve_csv(result.summary.points, plan.stages()));
    outputs.write("sweep_points.csv", report::curve_csv(result.points, plan.stages()));
    outputs.write("summary.json",
                  report::curve_summary_json(result.summary, improvement, policy, mode, result.points.size()));
    outputs.write_manifest(o, inputs);
    out << to_string(policy) << " (" << to_string(mode) << "): AUC " << report::format_number(result.summary.auc)
        << " over " << result.points.size() << " operating points, " << result.summary.points.size()
        << " on the frontier\n";
    out << report::improvement_table(improvement);
    return kSuccess;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    Inputs inputs;
    auto bundle = load_from_options(o, inputs);
    const auto order = model_order(o, bundle);
    const Mode mode = mode_of(o.mode);
    CascadePlan plan(bundle, order, confidence_options(o, policy_of(o.policy)));

    std::vector<double> thresholds, skips;
    if (!o.thresholds.empty()) {
        thresholds = resolve_thresholds(o.thresholds, plan);
        skips = resolve_thresholds(o.skips, plan);
    } else {
        const std::string target_model = o.at_match.empty() ? order.back() : o.at_match;
        auto pos = bundle.model_position(target_model);
        if (!pos || std::find(order.begin(), order.end(), target_model) == order.end()) {
            throw Error(ErrorCode::UnknownModel, "--at-match model '" + target_model + "' is not in the cascade");
        }
        auto result = run_sweep(plan, mode, o);
        auto point = frontier_point_at(result.summary.points, bundle.standalone_accuracy(*pos));
        if (!point) {
            throw Error(ErrorCode::InfeasibleBudget,
                        "the cascade never reaches the accuracy of '" + target_model + "'");
        }
        thresholds = point->thresholds;
        skips = point->skip_thresholds;
        out << "operating point matching " << target_model << ": thresholds";
        for (double t : thresholds) out << ' ' << report::format_number(t);
        out << '\n';
    }
    auto run = run_plan(plan, mode, thresholds, skips);
    auto contrib = contribution(run.outcomes, bundle, order);

    OutputSet outputs(o.out_dir);
    outputs.write("contribution.json", report::contribution_json(contrib, thresholds, skips, run.mean_cost));
    outputs.write("contribution.txt", report::contribution_table(contrib));
    outputs.write_manifest(o, inputs);
    out << report::contribution_table(contrib);
    return kSuccess;
}

int cmd_tune(const Options& o, std::ostream& out) {
    if (!o.budget) throw Error(ErrorCode::InvalidConfig, "tune needs --budget FLOPs");
    Inputs inputs;
    auto validation = load_from_options(o, inputs);
    const auto order = model_order(o, validation);
    const Mode mode = mode_of(o.mode);
    const auto conf = confidence_options(o, policy_of(o.policy));
    CascadePlan val_plan(validation, order, conf);

    std::optional<EvaluationBundle> test;
    std::optional<CascadePlan> test_plan;
    if (!o.test_bundle.empty()) {
        auto paths = bundle_dir_paths(o.test_bundle);
        test.emplace(load_bundle(paths.instances, paths.predictions, paths.profiles));
        inputs.files.push_back(paths.instances);
        for (const auto& p : paths.predictions) inputs.files.push_back(p);
        inputs.files.push_back(paths.profiles);
        if (o.seq_len || o.per_instance_cost) {
            test.emplace(with_cost_accounting(*test, o.seq_len ? o.seq_len : test->dataset_seq_len(),
                                              o.per_instance_cost || test->per_instance_cost()));
        }
        test_plan.emplace(*test, order, conf);
    }
    auto grid = threshold_grid(val_plan, o.grid_points);
    auto tuned = tune(val_plan, mode, *o.budget, grid, test_plan ? &*test_plan : nullptr, sweep_options(o));

    OutputSet outputs(o.out_dir);
    outputs.write("tuning.json", report::tuning_json(tuned));
    outputs.write_manifest(o, inputs);
    out << "thresholds";
    for (double t : tuned.thresholds) out << ' ' << report::format_number(t);
    out << "\nvalidation: accuracy " << report::format_number(tuned.validation_accuracy) << "%  cost "
        << report::format_number(tuned.validation_cost) << " FLOPs (budget " << report::format_number(tuned.budget)
        << ")\n";
    if (tuned.test_accuracy) {
        out << "test:       accuracy " << report::format_number(*tuned.test_accuracy) << "%  cost "
            << report::format_number(*tuned.test_cost) << " FLOPs\n";
    }
    return kSuccess;
}

int cmd_synth(const Options& o, std::ostream& out) {
    if (o.synth_models.empty()) throw Error(ErrorCode::InvalidSpec, "synth needs at least one --model id:accuracy");
    SynthSpec spec;
    spec.n_instances = o.n_instances;
    spec.label_count = o.labels;
    spec.seq_len = o.synth_seq_len;
    spec.seed = o.seed;
    spec.agreement = o.agreement;
    for (const auto& m : o.synth_models) {
        // id:accuracy[:builtin-profile]
        std::vector<std::string> parts;
        std::stringstream ss(m);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() < 2 || parts.size() > 3) {
            throw Error(ErrorCode::InvalidSpec, "--model expects id:accuracy[:profile], got '" + m + "'");
        }
        const std::string profile_name = parts.size() == 3 ? parts[2] : parts[0];
        auto profile = builtin_profile(profile_name);
        if (!profile) throw Error(ErrorCode::InvalidSpec, "no builtin cost profile '" + profile_name + "'");
        double acc = 0.0;
        try {
            acc = std::stod(parts[1]);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::InvalidSpec, "accuracy in '" + m + "' is not a number");
        }
        spec.models.push_back({parts[0], acc, o.sharpness, *profile});
    }
    auto bundle = generate(spec);

    OutputSet outputs(o.out_dir);
    auto paths = write_bundle(bundle, o.out_dir);
    outputs.record("instances.jsonl", paths.instances);
    for (const auto& p : paths.predictions) outputs.record(p.filename().string(), p);
    outputs.record("profiles.json", paths.profiles);
    outputs.write_manifest(o, Inputs{});
    out << "wrote " << bundle.size() << " instances for " << bundle.model_count() << " models to " << o.out_dir
        << "\n";
    for (std::size_t m = 0; m < bundle.model_count(); ++m) {
        out << "  " << bundle.profiles()[m].model_id << " accuracy "
            << report::format_number(bundle.standalone_accuracy(m)) << "%\n";
    }
    return kSuccess;
}

int cmd_plot(const Options& o, std::ostream& out) {
    Inputs inputs;
    auto bundle = load_from_options(o, inputs);
    const auto order = model_order(o, bundle);
    const Mode mode = mode_of(o.mode);
    std::vector<std::string> policies = o.plot_policies;
    if (policies.empty()) policies = {"maxprob", "random"};
    static const std::map<std::string, std::string> colors = {
        {"maxprob", "#1f4e9c"}, {"dtu", "#2a9d55"}, {"random", "#000000"}, {"heuristic", "#b8860b"}};

    std::vector<report::PlotSeries> series;
    std::vector<MatchedEntry> standalone;
    for (const auto& name : policies) {
        const Policy policy = policy_of(name);
        CascadePlan plan(bundle, order, confidence_options(o, policy));
        auto result = run_sweep(plan, mode, o);
        series.push_back({std::string(to_string(policy)), colors.at(std::string(to_string(policy))),
                          result.summary.points});
        if (standalone.empty()) standalone = result.summary.matched;
    }
    OutputSet outputs(o.out_dir);
    report::PlotOptions plot;
    plot.title = "Accuracy vs. cost (K=" + std::to_string(order.size()) + ")";
    outputs.write("curve.svg", report::accuracy_cost_svg(series, standalone, plot));
    outputs.write_manifest(o, inputs);
    out << "wrote " << (fs::path(o.out_dir) / "curve.svg").string() << "\n";
    return kSuccess;
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err);

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.manifest.empty()) throw Error(ErrorCode::InvalidConfig, "replay needs --manifest FILE");
    json doc;
    try {
        doc = json::parse(io::read_file(o.manifest));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, o.manifest + ": " + e.what());
    }
    if (!doc.contains("argv") || !doc["argv"].is_array()) {
        throw Error(ErrorCode::ParseError, o.manifest + ": no argv recorded");
    }
    for (const auto& input : doc.value("inputs", json::array())) {
        const std::string path = input.at("path").get<std::string>();
        if (!fs::exists(path)) throw Error(ErrorCode::ManifestMismatch, "input " + path + " no longer exists");
        if (io::sha256_file(path) != input.at("sha256").get<std::string>()) {
            throw Error(ErrorCode::ManifestMismatch, "input " + path + " changed since the recorded run");
        }
    }
    auto argv = doc["argv"].get<std::vector<std::string>>();
    std::string out_dir;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
        if (argv[i] == "--out") {
            if (!o.out_dir.empty()) argv[i + 1] = absolute(o.out_dir);
            out_dir = argv[i + 1];
        }
    }
    std::ostringstream sink;
    const int code = run(argv, sink, err);
    if (code != kSuccess) return code;

    std::size_t compared = 0;
    for (const auto& output : doc.value("outputs", json::array())) {
        const fs::path path = fs::path(out_dir) / output.at("file").get<std::string>();
        if (io::sha256_file(path) != output.at("sha256").get<std::string>()) {
            err << "replay: " << path.string() << " differs from the recorded output\n";
            return kInternalError;
        }
        ++compared;
    }
    out << "replay: " << compared << " outputs byte-identical to the manifest\n";
    return kSuccess;
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.command == "validate") return cmd_validate(o, out);
    if (o.command == "simulate") return cmd_simulate(o, out);
    if (o.command == "sweep") return cmd_sweep(o, out);
    if (o.command == "analyze") return cmd_analyze(o, out);
    if (o.command == "tune") return cmd_tune(o, out);
    if (o.command == "synth") return cmd_synth(o, out);
    if (o.command == "plot") return cmd_plot(o, out);
    if (o.command == "replay") return cmd_replay(o, out, err);
    throw Error(ErrorCode::InvalidConfig, "unknown command '" + o.command + "'");
}

void add_bundle_options(CLI::App* sub, Options& o) {
    sub->add_option("--bundle", o.bundle_dir, "Directory with instances.jsonl, profiles.json, preds_<id>.jsonl");
    sub->add_option("--instances", o.instances, "Instances JSONL file");
    sub->add_option("--preds", o.preds, "Prediction JSONL files, smallest model first")->delimiter(',');
    sub->add_option("--profiles", o.profiles, "Model profiles JSON document");
    sub->add_option("--seq-len", o.seq_len, "Fixed sequence length for cost lookup");
    sub->add_flag("--per-instance-cost", o.per_instance_cost, "Charge cost at each instance's input_length");
}

void add_cascade_options(CLI::App* sub, Options& o, bool multi_policy = false) {
    sub->add_option("--models", o.models, "Cascade models, smallest first (default: all)")->delimiter(',');
    if (multi_policy) {
        sub->add_option("--policy", o.plot_policies, "Policies to draw (default: maxprob,random)")->delimiter(',');
    } else {
        sub->add_option("--policy", o.policy, "maxprob | dtu | random | heuristic")->capture_default_str();
    }
    sub->add_option("--mode", o.mode, "sequential | routing");
    sub->add_option("--seed", o.seed, "Seed for the random policy");
    sub->add_flag("--heuristic-invert", o.heuristic_invert, "Treat longer inputs as more confident");
    sub->add_option("--heuristic-max-length", o.heuristic_max_length, "Length normalizer (default: longest input)");
}

void add_grid_options(CLI::App* sub, Options& o) {
    sub->add_option("--grid-points", o.grid_points, "Thresholds per stage, endpoints included");
    sub->add_option("--max-points", o.max_points, "Cap on evaluated operating points");
    sub->add_option("--threads", o.threads, "Sweep worker threads (0: all cores)");
}

void add_out_option(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out_dir, "Output directory")->envname(kOutDirEnv);
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Simulate, sweep, analyze and tune model cascades over precomputed predictions", "cascade"};
    app.set_config("--config", "", "TOML/INI file of option defaults (flags win)");
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "Load and validate a bundle");
    add_bundle_options(validate, o);

    auto* simulate = app.add_subcommand("simulate", "Run one cascade configuration");
    add_bundle_options(simulate, o);
    add_cascade_options(simulate, o);
    simulate->add_option("--thresholds", o.thresholds, "Output threshold per stage 1..K-1 (number, min, max)")
        ->delimiter(',');
    simulate->add_option("--skip", o.skips, "Routing skip threshold per stage 1..K-1")->delimiter(',');
    add_out_option(simulate, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "Trace the accuracy-cost curve over a threshold grid");
    add_bundle_options(sweep_cmd, o);
    add_cascade_options(sweep_cmd, o);
    add_grid_options(sweep_cmd, o);
    add_out_option(sweep_cmd, o);

    auto* analyze = app.add_subcommand("analyze", "Per-model contribution at an operating point");
    add_bundle_options(analyze, o);
    add_cascade_options(analyze, o);
    analyze->add_option("--thresholds", o.thresholds, "Operating point (default: matched-cost point)")
        ->delimiter(',');
    analyze->add_option("--skip", o.skips, "Routing skip thresholds")->delimiter(',');
    analyze->add_option("--at-match", o.at_match, "Model whose accuracy the operating point matches");
    add_grid_options(analyze, o);
    add_out_option(analyze, o);

    auto* tune_cmd = app.add_subcommand("tune", "Pick thresholds under a cost budget on validation data");
    add_bundle_options(tune_cmd, o);
    add_cascade_options(tune_cmd, o);
    add_grid_options(tune_cmd, o);
    tune_cmd->add_option("--budget", o.budget, "Mean cost budget in FLOPs")->required();
    tune_cmd->add_option("--test-bundle", o.test_bundle, "Bundle directory to evaluate the choice on");
    add_out_option(tune_cmd, o);

    auto* synth = app.add_subcommand("synth", "Write a synthetic prediction bundle");
    synth->add_option("--n", o.n_instances, "Number of instances");
    synth->add_option("--labels", o.labels, "Number of labels");
    synth->add_option("--model", o.synth_models, "id:accuracy[:profile], smallest first (repeatable)");
    synth->add_option("--sharpness", o.sharpness, "Confidence/correctness separation (0: uninformative)");
    synth->add_option("--agreement", o.agreement, "Chance a model reuses the previous model's correctness");
    synth->add_option("--seq-len", o.synth_seq_len, "Dataset sequence length");
    synth->add_option("--seed", o.seed, "Generator seed");
    add_out_option(synth, o);

    auto* plot = app.add_subcommand("plot", "Draw accuracy-cost curves as SVG");
    add_bundle_options(plot, o);
    add_cascade_options(plot, o, true);
    add_grid_options(plot, o);
    add_out_option(plot, o);

    auto* replay = app.add_subcommand("replay", "Re-run a recorded manifest and compare outputs");
    replay->add_option("--manifest", o.manifest, "manifest.json of an earlier run")->required();
    replay->add_option("--out", o.out_dir, "Output directory (default: the recorded one)");

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (o.out_dir.empty() && o.command != "replay") {
        const char* env = std::getenv(kOutDirEnv);
        o.out_dir = env ? env : "cascade_out";
    }

    try {
        return dispatch(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (category(e.code())) {
        case ErrorCategory::Input: return kInputError;
        case ErrorCategory::Config: return kConfigError;
        case ErrorCategory::Internal: return kInternalError;
        }
        return kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace cascade::cli
