#pragma once

// Exhaustive budgeted search written against the reference oracle: every
// threshold combination of the grid is walked instance by instance.

#include <optional>
#include <vector>

#include "oracle.hpp"

namespace oracle {

struct Choice {
    std::vector<double> t;
    std::vector<double> s;
    double cost = 0.0;
    double accuracy = 0.0;
};

inline Choice score(const testsupport::RawBundle& raw, Setup setup) {
    const auto outcomes = run(raw, setup);
    double total = 0.0;
    std::size_t correct = 0;
    for (const auto& o : outcomes) {
        total += o.cost;
        correct += o.correct ? 1 : 0;
    }
    const double n = static_cast<double>(outcomes.size());
    return {setup.t, setup.s, total / n, 100.0 * static_cast<double>(correct) / n};
}

inline bool better(const Choice& a, const Choice& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.t != b.t) return a.t < b.t;
    return a.s < b.s;
}

/// grid[j] lists stage j's thresholds; `lowest` is the policy minimum used
/// as the skip threshold where no band is searched.
inline std::optional<Choice> brute_tune(const testsupport::RawBundle& raw, Setup setup,
                                        const std::vector<std::vector<double>>& grid, double lowest,
                                        double budget) {
    std::optional<Choice> best;
    const std::size_t stages = grid.size();
    setup.t.assign(stages, 0.0);
    setup.s.assign(setup.routing ? stages : 0, lowest);
    auto visit = [&](auto&& self, std::size_t j) -> void {
        if (j == stages) {
            Choice c = score(raw, setup);
            if (c.cost <= budget && (!best || better(c, *best))) best = c;
            return;
        }
        for (double t : grid[j]) {
            setup.t[j] = t;
            if (setup.routing && j + 1 < stages) {
                for (double s : grid[j]) {
                    if (s > t) continue;
                    setup.s[j] = s;
                    self(self, j + 1);
                }
            } else {
                self(self, j + 1);
            }
        }
    };
    visit(visit, 0);
    return best;
}

}  // namespace oracle
