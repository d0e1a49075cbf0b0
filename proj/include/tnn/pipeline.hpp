// pipeline.hpp
//
//  The end-to-end flow: encode -> train -> label -> evaluate -> compile
//  columns to netlists -> check netlists against the behavioral simulator ->
//  estimate PPA. Every artifact is JSON or netlist text and is a pure
//  function of the configuration, so reruns are byte-identical.
#ifndef TNN_PIPELINE_HPP
#define TNN_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnn/config.hpp"
#include "tnn/network.hpp"
#include "tnn/ppa.hpp"

namespace tnn
{

inline constexpr const char *tool_version = "0.1.0";

struct PipelineOptions
{
    // Stop after evaluation: no netlists, no PPA.
    bool skip_hw{false};
    // Keep PPA estimation but skip netlist emission and the spot check.
    bool emit_netlists{true};
    bool write_files{true};
};

struct EncodedData
{
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
};

// Loads and encodes the configured dataset(s); applies the stratified split
// when no test file is given. Throws DataError on parse failure and
// ConfigError when the encoded width does not match the network input.
[[nodiscard]] EncodedData prepare_data(const RunConfig &cfg);

// Encodes one row into windows (one window when window_stride is 0).
[[nodiscard]] std::vector<SpikeVector> encode_row(
        std::span<const double> values, const RunConfig &cfg);

struct SpotCheck
{
    std::size_t checked{0};
    std::size_t passed{0};
};

struct PipelineResult
{
    std::optional<Network> network;
    TrainLog log;
    LabelMap labels;
    EvalReport eval;
    std::optional<hw::PpaReport> ppa;
    std::optional<SpotCheck> spot_check;
    std::vector<std::filesystem::path> artifacts;
};

// Throws ConfigError / DataError for invalid inputs (detected before any
// compute) and StageError for failures inside a stage. On StageError the
// manifest is still written, marked failed.
PipelineResult run_pipeline(const RunConfig &cfg, const PipelineOptions &options = {});

// Total gates over every column of the network.
[[nodiscard]] std::uint64_t network_gates(const NetworkSpec &spec);

[[nodiscard]] nlohmann::json to_json(const EvalReport &report, const LabelMap &labels);
[[nodiscard]] nlohmann::json to_json(const hw::PpaReport &report);
[[nodiscard]] nlohmann::json to_json(const TrainLog &log);
// Network spec, raw fixed-point weights and (optionally) the label map.
[[nodiscard]] nlohmann::json model_to_json(const Network &network, const LabelMap *labels);
[[nodiscard]] Network model_from_json(const nlohmann::json &doc, LabelMap *labels);

// Writes text with LF endings; throws StageError("io", ...) on failure.
void write_text(const std::filesystem::path &path, const std::string &text);

} // namespace tnn

#endif
