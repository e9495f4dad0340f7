#include "cascade/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "cascade/error.hpp"

namespace cascade {

namespace {

struct StageOption {
    double threshold;
    double skip;
};

// Per-stage choices in enumeration order (output threshold, then skip).
std::vector<std::vector<StageOption>> stage_options(const ThresholdGrid& grid, Mode mode, double min_threshold) {
    std::vector<std::vector<StageOption>> options(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const bool banded = mode == Mode::Routing && j + 1 < grid.size();
        for (double t : grid[j]) {
            if (!banded) {
                options[j].push_back({t, min_threshold});
                continue;
            }
            for (double s : grid[j]) {
                if (s > t) break;
                options[j].push_back({t, s});
            }
        }
    }
    return options;
}

std::size_t product_size(const std::vector<std::vector<StageOption>>& options, std::size_t cap) {
    std::size_t total = 1;
    for (const auto& o : options) {
        if (o.empty()) return 0;
        if (total > cap / o.size()) return cap + 1;
        total *= o.size();
    }
    return total;
}

}  // namespace

std::vector<double> interior_quantiles(std::vector<double> values, std::size_t count) {
    std::vector<double> out;
    if (values.empty() || count == 0) return out;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 1; i <= count; ++i) {
        const double level = static_cast<double>(i) / static_cast<double>(count + 1);
        auto rank = static_cast<std::size_t>(std::ceil(level * n));
        rank = std::clamp<std::size_t>(rank, 1, values.size());
        out.push_back(values[rank - 1]);
    }
    return out;
}

ThresholdGrid threshold_grid(const CascadePlan& plan, std::size_t points_per_stage) {
    if (points_per_stage < 2) throw Error(ErrorCode::InvalidConfig, "points_per_stage must be >= 2");
    if (plan.bundle().size() == 0) throw Error(ErrorCode::EmptyBundle, "no instances to take quantiles of");
    ThresholdGrid grid;
    const double lo = plan.min_threshold();
    const double hi = plan.max_threshold();
    for (std::size_t s = 0; s + 1 < plan.stages(); ++s) {
        auto conf = plan.confidences(s);
        std::vector<double> values = interior_quantiles({conf.begin(), conf.end()}, points_per_stage - 2);
        values.push_back(lo);
        values.push_back(hi);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        grid.push_back(std::move(values));
    }
    return grid;
}

std::size_t sweep_size(const ThresholdGrid& grid, Mode mode) {
    return product_size(stage_options(grid, mode, 0.0), std::numeric_limits<std::size_t>::max() / 2);
}

std::vector<CurvePoint> sweep(const CascadePlan& plan, Mode mode, const ThresholdGrid& grid,
                              const SweepOptions& options) {
    if (grid.size() != plan.stages() - 1) {
        throw Error(ErrorCode::InvalidConfig, "grid has " + std::to_string(grid.size()) + " stages, cascade needs " +
                                                  std::to_string(plan.stages() - 1));
    }
    if (mode == Mode::Routing && plan.stages() < 3) {
        throw Error(ErrorCode::RoutingRequiresK3, "routing needs K >= 3");
    }
    for (const auto& stage : grid) {
        if (stage.empty()) throw Error(ErrorCode::InvalidConfig, "empty grid stage");
        if (!std::is_sorted(stage.begin(), stage.end())) {
            throw Error(ErrorCode::InvalidConfig, "grid stages must be sorted ascending");
        }
    }
    const auto choices = stage_options(grid, mode, plan.min_threshold());
    const std::size_t total = product_size(choices, options.max_points);
    if (total > options.max_points) {
        throw Error(ErrorCode::GridTooLarge, "sweep would evaluate more than " +
                                                 std::to_string(options.max_points) + " operating points");
    }

    std::vector<CurvePoint> points(total);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            CurvePoint& p = points[idx];
            p.thresholds.resize(choices.size());
            if (mode == Mode::Routing) p.skip_thresholds.resize(choices.size());
            std::size_t rest = idx;
            for (std::size_t j = choices.size(); j-- > 0;) {
                const auto& opt = choices[j][rest % choices[j].size()];
                rest /= choices[j].size();
                p.thresholds[j] = opt.threshold;
                if (mode == Mode::Routing) p.skip_thresholds[j] = opt.skip;
            }
            plan.validate(mode, p.thresholds, p.skip_thresholds);
            const auto stats = plan.evaluate(mode, p.thresholds, p.skip_thresholds);
            p.mean_cost = stats.mean_cost;
            p.accuracy = stats.accuracy;
        }
    };

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, total / 16)));
    if (threads <= 1) {
        fill(0, total);
        return points;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (total + threads - 1) / threads;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(total, t * chunk);
        const std::size_t end = std::min(total, begin + chunk);
        workers.emplace_back([&, t, begin, end] {
            try {
                fill(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return points;
}

std::vector<CurvePoint> pareto_frontier(std::span<const CurvePoint> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].mean_cost != points[b].mean_cost) return points[a].mean_cost < points[b].mean_cost;
        return points[a].accuracy > points[b].accuracy;
    });
    std::vector<CurvePoint> frontier;
    for (std::size_t idx : order) {
        if (frontier.empty() || points[idx].accuracy > frontier.back().accuracy) frontier.push_back(points[idx]);
    }
    return frontier;
}

double auc(std::span<const CurvePoint> frontier) {
    if (frontier.empty()) throw Error(ErrorCode::EmptyCurve, "AUC of an empty curve");
    if (frontier.size() == 1) return frontier.front().accuracy;
    double area = 0.0;
    for (std::size_t i = 1; i < frontier.size(); ++i) {
        const double width = frontier[i].mean_cost - frontier[i - 1].mean_cost;
        area += width * (frontier[i].accuracy + frontier[i - 1].accuracy) / 2.0;
    }
    const double range = frontier.back().mean_cost - frontier.front().mean_cost;
    if (!(range > 0.0)) throw Error(ErrorCode::InvalidConfig, "curve costs must be strictly increasing");
    return area / range;
}

double auc(std::span<const CurvePoint> frontier, Flops max_cost) {
    if (frontier.empty()) throw Error(ErrorCode::EmptyCurve, "AUC of an empty curve");
    if (!(max_cost > frontier.back().mean_cost)) return auc(frontier);
    std::vector<CurvePoint> extended(frontier.begin(), frontier.end());
    extended.push_back({max_cost, frontier.back().accuracy, {}, {}});
    return auc(extended);
}

std::optional<Match> matched_cost(std::span<const CurvePoint> frontier, double standalone_accuracy,
                                  Flops standalone_cost) {
    if (frontier.empty()) return std::nullopt;
    auto make = [&](Flops cost) {
        return Match{cost, 100.0 * (1.0 - cost / standalone_cost)};
    };
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        const auto& p = frontier[i];
        if (p.accuracy < standalone_accuracy) continue;
        if (i == 0 || p.accuracy == standalone_accuracy) return make(p.mean_cost);
        const auto& prev = frontier[i - 1];
        const double frac = (standalone_accuracy - prev.accuracy) / (p.accuracy - prev.accuracy);
        return make(prev.mean_cost + frac * (p.mean_cost - prev.mean_cost));
    }
    return std::nullopt;
}

double max_accuracy_gain(std::span<const CurvePoint> frontier, double largest_model_accuracy) {
    if (frontier.empty()) throw Error(ErrorCode::EmptyCurve, "max accuracy of an empty curve");
    double best = frontier.front().accuracy;
    for (const auto& p : frontier) best = std::max(best, p.accuracy);
    return best - largest_model_accuracy;
}

std::optional<CurvePoint> frontier_point_at(std::span<const CurvePoint> frontier, double target) {
    for (const auto& p : frontier) {
        if (p.accuracy >= target) return p;
    }
    return std::nullopt;
}

CurveSummary summarize(const CascadePlan& plan, std::span<const CurvePoint> points) {
    if (points.empty()) throw Error(ErrorCode::EmptyCurve, "no sweep points");
    CurveSummary summary;
    summary.points = pareto_frontier(points);
    Flops max_cost = points.front().mean_cost;
    for (const auto& p : points) max_cost = std::max(max_cost, p.mean_cost);
    summary.auc = auc(summary.points, max_cost);
    summary.max_accuracy = summary.points.back().accuracy;
    const auto& bundle = plan.bundle();
    for (std::size_t s = 0; s < plan.stages(); ++s) {
        MatchedEntry entry;
        entry.model_id = plan.model_id(s);
        entry.standalone_accuracy = bundle.standalone_accuracy(plan.model(s));
        entry.standalone_cost = bundle.standalone_cost(plan.model(s));
        entry.match = matched_cost(summary.points, entry.standalone_accuracy, entry.standalone_cost);
        summary.matched.push_back(std::move(entry));
    }
    summary.max_accuracy_gain = max_accuracy_gain(summary.points, summary.matched.back().standalone_accuracy);
    return summary;
}

}  // namespace cascade
