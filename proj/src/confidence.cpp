#include "cascade/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/error.hpp"
#include "cascade/ingest.hpp"

namespace cascade {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void check(std::span<const double> distribution) {
    try {
        validate_distribution(distribution);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidDistribution, e.what());
    }
}

}  // namespace

std::string_view to_string(Policy policy) {
    switch (policy) {
    case Policy::MaxProb: return "maxprob";
    case Policy::DTU: return "dtu";
    case Policy::Random: return "random";
    case Policy::Heuristic: return "heuristic";
    }
    return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "maxprob") return Policy::MaxProb;
    if (lower == "dtu") return Policy::DTU;
    if (lower == "random") return Policy::Random;
    if (lower == "heuristic") return Policy::Heuristic;
    return std::nullopt;
}

ConfidenceRange confidence_range(Policy policy, std::size_t label_count) {
    const double n = static_cast<double>(label_count);
    switch (policy) {
    case Policy::MaxProb: return {1.0 / n, 1.0};
    case Policy::DTU: return {0.0, std::sqrt((n - 1.0) / n)};
    case Policy::Random:
    case Policy::Heuristic: return {0.0, 1.0};
    }
    return {0.0, 1.0};
}

double policy_min_threshold(Policy policy, std::size_t label_count) {
    return confidence_range(policy, label_count).lo;
}

double policy_max_threshold(Policy policy, std::size_t label_count) {
    return std::nextafter(confidence_range(policy, label_count).hi, std::numeric_limits<double>::infinity());
}

ConfidenceScore max_prob(std::span<const double> distribution) {
    check(distribution);
    const auto range = confidence_range(Policy::MaxProb, distribution.size());
    const double m = *std::max_element(distribution.begin(), distribution.end());
    return {std::clamp(m, range.lo, range.hi), Policy::MaxProb};
}

ConfidenceScore dtu(std::span<const double> distribution) {
    check(distribution);
    const double u = 1.0 / static_cast<double>(distribution.size());
    double sq = 0.0;
    for (double p : distribution) sq += (p - u) * (p - u);
    const auto range = confidence_range(Policy::DTU, distribution.size());
    return {std::clamp(std::sqrt(sq), range.lo, range.hi), Policy::DTU};
}

ConfidenceScore random_conf(std::uint64_t seed, std::string_view instance_id, int stage) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a(instance_id));
    h = splitmix64(h ^ static_cast<std::uint64_t>(stage));
    return {static_cast<double>(h >> 11) * 0x1.0p-53, Policy::Random};
}

ConfidenceScore heuristic_conf(std::uint32_t input_length, std::uint32_t max_length, bool invert) {
    if (input_length < 1 || max_length < 1) {
        throw Error(ErrorCode::NonPositiveLength, "heuristic confidence needs positive lengths");
    }
    const double ratio = std::min(1.0, static_cast<double>(input_length) / static_cast<double>(max_length));
    return {std::clamp(invert ? ratio : 1.0 - ratio, 0.0, 1.0), Policy::Heuristic};
}

}  // namespace cascade
