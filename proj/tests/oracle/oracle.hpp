#pragma once

// Reference cascade: walks each instance through the models one rule at a
// time, reading only the plain test data. Shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "../support/raw_bundle.hpp"

namespace oracle {

enum class Kind { MaxProb, DTU, Random, Heuristic };

struct Outcome {
    std::string instance_id;
    std::vector<std::string> used;
    std::string answered_by;
    std::uint32_t predicted_label = 0;
    bool correct = false;
    double cost = 0.0;
};

struct Setup {
    Kind kind = Kind::MaxProb;
    std::uint64_t seed = 0;
    bool invert = false;
    std::uint32_t max_length = 0;
    bool routing = false;
    std::vector<std::size_t> models;  // indices into raw.models, increasing
    std::vector<double> t;            // output thresholds
    std::vector<double> s;            // skip thresholds (routing), may be empty
};

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline double confidence(const testsupport::RawBundle& raw, const Setup& setup, std::size_t model,
                         std::size_t stage, std::size_t i) {
    const auto& p = raw.dists[model][i];
    const double y = static_cast<double>(p.size());
    switch (setup.kind) {
    case Kind::MaxProb: {
        double best = p[0];
        for (double v : p) best = v > best ? v : best;
        if (best < 1.0 / y) best = 1.0 / y;
        if (best > 1.0) best = 1.0;
        return best;
    }
    case Kind::DTU: {
        double total = 0.0;
        const double u = 1.0 / y;
        for (double v : p) total += (v - u) * (v - u);
        double d = std::sqrt(total);
        const double top = std::sqrt((y - 1.0) / y);
        if (d > top) d = top;
        return d;
    }
    case Kind::Random: {
        std::uint64_t h = mix(setup.seed);
        h = mix(h ^ fnv(raw.ids[i]));
        h = mix(h ^ static_cast<std::uint64_t>(stage));
        return std::ldexp(static_cast<double>(h >> 11), -53);
    }
    case Kind::Heuristic: {
        std::uint32_t m = setup.max_length;
        if (m == 0) {
            for (auto len : raw.lengths) m = std::max(m, len);
        }
        double r = static_cast<double>(raw.lengths[i]) / static_cast<double>(m);
        if (r > 1.0) r = 1.0;
        return setup.invert ? r : 1.0 - r;
    }
    }
    return 0.0;
}

inline double cost_of(const testsupport::RawBundle& raw, std::size_t model, std::size_t i) {
    const std::uint32_t len = raw.per_instance_cost ? raw.lengths[i] : raw.seq_len;
    return raw.models[model].costs.at(len);
}

inline std::uint32_t top_label(const std::vector<double>& p) {
    std::uint32_t arg = 0;
    for (std::uint32_t k = 1; k < p.size(); ++k) {
        if (p[k] > p[arg]) arg = k;
    }
    return arg;
}

inline std::vector<Outcome> run(const testsupport::RawBundle& raw, const Setup& setup) {
    std::vector<Outcome> out;
    const std::size_t k = setup.models.size();
    for (std::size_t i = 0; i < raw.ids.size(); ++i) {
        Outcome o;
        o.instance_id = raw.ids[i];
        std::size_t stage = 0;
        for (;;) {
            const std::size_t model = setup.models[stage];
            o.used.push_back(raw.models[model].id);
            o.cost += cost_of(raw, model, i);
            bool answer = stage + 1 == k;
            std::size_t next = stage + 1;
            if (!answer) {
                const double c = confidence(raw, setup, model, stage + 1, i);
                if (c >= setup.t[stage]) {
                    answer = true;
                } else if (setup.routing && !setup.s.empty() && c < setup.s[stage]) {
                    next = k - 1;
                }
            }
            if (answer) {
                o.answered_by = raw.models[model].id;
                o.predicted_label = top_label(raw.dists[model][i]);
                o.correct = o.predicted_label == raw.gold[i];
                break;
            }
            stage = next;
        }
        out.push_back(o);
    }
    return out;
}

}  // namespace oracle
