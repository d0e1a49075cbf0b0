// explore.hpp
//
//  Design-space exploration: a Cartesian sweep over scalar configuration
//  knobs, each candidate run through the pipeline (PPA only, no netlists),
//  reduced to the accuracy-vs-power Pareto front.
#ifndef TNN_EXPLORE_HPP
#define TNN_EXPLORE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnn/config.hpp"

namespace tnn
{

struct SweepSpec
{
    // Knob -> candidate values. Knobs: p, q, theta, T, w_max, mu_capture,
    // mu_backoff, mu_search, epochs.
    std::map<std::string, std::vector<double>> axes;
    std::size_t cap{256};
};

// {"axes": {"theta": [4, 8], ...}, "cap": 256}. Throws ConfigError on an
// unknown knob, an empty axis or a product above the cap.
[[nodiscard]] SweepSpec parse_sweep(const nlohmann::json &doc);

// Candidates in row-major order of the (sorted) knob names.
[[nodiscard]] std::vector<std::map<std::string, double>> sweep_points(const SweepSpec &sweep);

// Applies one candidate to a base configuration. Throws ConfigError.
[[nodiscard]] RunConfig apply_candidate(const RunConfig &base, const std::map<std::string, double> &point);

struct DesignPoint
{
    double accuracy{0.0};
    double power_mw{0.0};
};

// Indices of non-dominated points (maximize accuracy, minimize power).
// Identical points are all kept.
[[nodiscard]] std::vector<std::size_t> pareto_front(std::span<const DesignPoint> points);

struct CandidateResult
{
    std::size_t index{0};
    std::map<std::string, double> params;
    std::optional<DesignPoint> metrics;
    std::string error;
};

struct ExploreReport
{
    std::vector<CandidateResult> candidates;
    std::vector<std::size_t> front; // indices into candidates
};

// Candidates run on `threads` workers, each writing into
// <out>/candidates/cNNN. Failed candidates are recorded and excluded from
// the front.
[[nodiscard]] ExploreReport explore(const SweepSpec &sweep, const RunConfig &base, std::size_t threads);

[[nodiscard]] nlohmann::json to_json(const ExploreReport &report);

// TNN_THREADS if set and positive, else hardware concurrency (at least 1).
[[nodiscard]] std::size_t sweep_threads();

} // namespace tnn

#endif
