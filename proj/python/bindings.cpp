#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cascade/analysis.hpp"
#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "cascade/ingest.hpp"
#include "cascade/report.hpp"
#include "cascade/sweep.hpp"
#include "cascade/synthgen.hpp"
#include "cli.hpp"

namespace py = pybind11;
using namespace cascade;

namespace {

Policy policy_arg(const std::string& name) {
    auto p = parse_policy(name);
    if (!p) throw Error(ErrorCode::InvalidConfig, "unknown policy '" + name + "'");
    return *p;
}

Mode mode_arg(const std::string& name) {
    auto m = parse_mode(name);
    if (!m) throw Error(ErrorCode::InvalidConfig, "unknown mode '" + name + "'");
    return *m;
}

std::vector<std::string> order_arg(const EvaluationBundle& b, const std::optional<std::vector<std::string>>& models) {
    return models ? *models : all_models(b);
}

py::dict point_dict(const CurvePoint& p) {
    py::dict d;
    d["mean_cost"] = p.mean_cost;
    d["accuracy"] = p.accuracy;
    d["thresholds"] = p.thresholds;
    d["skip_thresholds"] = p.skip_thresholds;
    return d;
}

std::vector<CurvePoint> points_arg(const std::vector<std::pair<double, double>>& xs) {
    std::vector<CurvePoint> out;
    for (auto [c, a] : xs) out.push_back({c, a, {}, {}});
    return out;
}

py::object optional_value(const std::optional<double>& v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(modelcascade, m) {
    m.doc() = "Simulate, sweep, analyze and tune model cascades over precomputed predictions";

    static py::exception<Error> cascade_error(m, "CascadeError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(cascade_error.ptr(), e.what());
        }
    });

    py::class_<EvaluationBundle>(m, "Bundle")
        .def_property_readonly("size", &EvaluationBundle::size)
        .def_property_readonly("model_count", &EvaluationBundle::model_count)
        .def_property_readonly("label_count", &EvaluationBundle::label_count)
        .def_property_readonly("model_ids", [](const EvaluationBundle& b) { return all_models(b); })
        .def_property_readonly("instance_ids",
                               [](const EvaluationBundle& b) {
                                   std::vector<std::string> ids;
                                   for (const auto& i : b.instances()) ids.push_back(i.instance_id);
                                   return ids;
                               })
        .def("standalone_accuracy",
             [](const EvaluationBundle& b, const std::string& id) {
                 auto pos = b.model_position(id);
                 if (!pos) throw Error(ErrorCode::UnknownModel, id);
                 return b.standalone_accuracy(*pos);
             })
        .def("standalone_cost",
             [](const EvaluationBundle& b, const std::string& id) {
                 auto pos = b.model_position(id);
                 if (!pos) throw Error(ErrorCode::UnknownModel, id);
                 return b.standalone_cost(*pos);
             })
        .def("__len__", &EvaluationBundle::size);

    m.def("load_bundle", &load_bundle_dir, py::arg("directory"),
          "Load instances.jsonl, profiles.json and preds_<id>.jsonl from a directory.");
    m.def(
        "write_bundle", [](const EvaluationBundle& b, const std::filesystem::path& dir) { write_bundle(b, dir); },
        py::arg("bundle"), py::arg("directory"));
    m.def(
        "synth",
        [](std::size_t n, std::size_t labels, const std::vector<std::pair<std::string, double>>& models,
           double sharpness, std::uint32_t seq_len, std::uint64_t seed, double agreement) {
            auto spec = make_synth_spec(n, labels, models, sharpness, seq_len, seed);
            spec.agreement = agreement;
            return generate(spec);
        },
        py::arg("n"), py::arg("labels"), py::arg("models"), py::arg("sharpness") = 2.0, py::arg("seq_len") = 100,
        py::arg("seed") = 0, py::arg("agreement") = 0.9,
        "Synthetic bundle; models are (builtin id, target accuracy) pairs, smallest first.");

    m.def("normalize_scores", [](const std::vector<double>& s) { return normalize_scores(s); });
    m.def("max_prob", [](const std::vector<double>& p) { return max_prob(p).value; });
    m.def("dtu", [](const std::vector<double>& p) { return dtu(p).value; });
    m.def(
        "random_conf", [](std::uint64_t seed, const std::string& id, int stage) {
            return random_conf(seed, id, stage).value;
        },
        py::arg("seed"), py::arg("instance_id"), py::arg("stage"));
    m.def(
        "heuristic_conf",
        [](std::uint32_t len, std::uint32_t max_len, bool invert) { return heuristic_conf(len, max_len, invert).value; },
        py::arg("length"), py::arg("max_length"), py::arg("invert") = false);
    m.def(
        "instance_cost",
        [](const std::string& model, std::uint32_t len) {
            auto p = builtin_profile(model);
            if (!p) throw Error(ErrorCode::UnknownModel, "no builtin profile '" + model + "'");
            return instance_cost(*p, len);
        },
        py::arg("model"), py::arg("seq_len"));

    m.def(
        "simulate",
        [](const EvaluationBundle& b, const std::vector<double>& thresholds,
           const std::optional<std::vector<std::string>>& models, const std::string& policy, const std::string& mode,
           const std::vector<double>& skips, std::uint64_t seed) {
            const auto order = order_arg(b, models);
            CascadePlan plan(b, order, {policy_arg(policy), seed});
            auto run = run_plan(plan, mode_arg(mode), thresholds, skips);
            py::list outcomes;
            for (const auto& o : run.outcomes) {
                py::dict d;
                d["instance_id"] = o.instance_id;
                d["used"] = o.used;
                d["answered_by"] = o.answered_by;
                d["predicted_label"] = o.predicted_label;
                d["correct"] = o.correct;
                d["cost"] = o.cost;
                outcomes.append(d);
            }
            py::dict out;
            out["accuracy"] = run.accuracy;
            out["mean_cost"] = run.mean_cost;
            out["outcomes"] = outcomes;
            return out;
        },
        py::arg("bundle"), py::arg("thresholds"), py::arg("models") = py::none(), py::arg("policy") = "maxprob",
        py::arg("mode") = "sequential", py::arg("skips") = std::vector<double>{}, py::arg("seed") = 0);

    m.def(
        "threshold_bounds",
        [](const EvaluationBundle& b, const std::string& policy) {
            CascadePlan plan(b, all_models(b), {policy_arg(policy)});
            return std::make_pair(plan.min_threshold(), plan.max_threshold());
        },
        py::arg("bundle"), py::arg("policy") = "maxprob",
        "(minimum, maximum) thresholds: answer everything at stage 1 / escalate everything.");

    m.def(
        "sweep",
        [](const EvaluationBundle& b, const std::optional<std::vector<std::string>>& models, const std::string& policy,
           const std::string& mode, std::size_t grid_points, std::uint64_t seed, unsigned threads) {
            const auto order = order_arg(b, models);
            CascadePlan plan(b, order, {policy_arg(policy), seed});
            SweepOptions opts;
            opts.threads = threads;
            const Mode md = mode_arg(mode);
            py::gil_scoped_release release;
            auto points = sweep(plan, md, threshold_grid(plan, grid_points), opts);
            auto summary = summarize(plan, points);
            py::gil_scoped_acquire acquire;
            py::list frontier, matched;
            for (const auto& p : summary.points) frontier.append(point_dict(p));
            for (const auto& e : summary.matched) {
                py::dict d;
                d["model_id"] = e.model_id;
                d["standalone_accuracy"] = e.standalone_accuracy;
                d["standalone_cost"] = e.standalone_cost;
                d["cascade_cost"] = e.match ? py::object(py::float_(e.match->cascade_cost)) : py::object(py::none());
                d["improvement_percent"] =
                    e.match ? py::object(py::float_(e.match->improvement_percent)) : py::object(py::none());
                matched.append(d);
            }
            py::dict out;
            out["auc"] = summary.auc;
            out["max_accuracy"] = summary.max_accuracy;
            out["max_accuracy_gain"] = summary.max_accuracy_gain;
            out["frontier"] = frontier;
            out["matched"] = matched;
            out["sweep_points"] = points.size();
            return out;
        },
        py::arg("bundle"), py::arg("models") = py::none(), py::arg("policy") = "maxprob",
        py::arg("mode") = "sequential", py::arg("grid_points") = 20, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "contribution",
        [](const EvaluationBundle& b, const std::vector<double>& thresholds,
           const std::optional<std::vector<std::string>>& models, const std::string& policy, const std::string& mode,
           const std::vector<double>& skips, std::uint64_t seed) {
            const auto order = order_arg(b, models);
            CascadePlan plan(b, order, {policy_arg(policy), seed});
            auto run = run_plan(plan, mode_arg(mode), thresholds, skips);
            auto report = contribution(run.outcomes, b, order);
            py::list rows;
            for (const auto& c : report.models) {
                py::dict d;
                d["model_id"] = c.model_id;
                d["answered_count"] = c.answered_count;
                d["answered_fraction"] = c.answered_fraction;
                d["accuracy_on_answered"] = optional_value(c.accuracy_on_answered);
                d["accuracy_on_escalated"] = optional_value(c.accuracy_on_escalated);
                d["escalation_drop"] = optional_value(c.escalation_drop);
                d["takeover_gain"] = optional_value(c.takeover_gain);
                rows.append(d);
            }
            py::dict out;
            out["overall_accuracy"] = report.overall_accuracy;
            out["models"] = rows;
            return out;
        },
        py::arg("bundle"), py::arg("thresholds"), py::arg("models") = py::none(), py::arg("policy") = "maxprob",
        py::arg("mode") = "sequential", py::arg("skips") = std::vector<double>{}, py::arg("seed") = 0);

    m.def(
        "tune",
        [](const EvaluationBundle& b, double budget, const std::optional<std::vector<std::string>>& models,
           const std::string& policy, const std::string& mode, std::size_t grid_points, std::uint64_t seed) {
            const auto order = order_arg(b, models);
            CascadePlan plan(b, order, {policy_arg(policy), seed});
            auto t = tune(plan, mode_arg(mode), budget, threshold_grid(plan, grid_points));
            py::dict out;
            out["thresholds"] = t.thresholds;
            out["skip_thresholds"] = t.skip_thresholds;
            out["validation_cost"] = t.validation_cost;
            out["validation_accuracy"] = t.validation_accuracy;
            return out;
        },
        py::arg("bundle"), py::arg("budget"), py::arg("models") = py::none(), py::arg("policy") = "maxprob",
        py::arg("mode") = "sequential", py::arg("grid_points") = 20, py::arg("seed") = 0);

    m.def(
        "auc", [](const std::vector<std::pair<double, double>>& xs) { return auc(points_arg(xs)); },
        py::arg("points"), "Normalized area under (cost, accuracy) points sorted by cost.");
    m.def(
        "pareto_frontier",
        [](const std::vector<std::pair<double, double>>& xs) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : pareto_frontier(points_arg(xs))) out.emplace_back(p.mean_cost, p.accuracy);
            return out;
        },
        py::arg("points"));

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "cascade");
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
