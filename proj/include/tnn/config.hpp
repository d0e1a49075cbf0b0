// config.hpp
//
//  Run configuration: JSON in, validated RunConfig out. A run manifest
//  (which embeds the resolved configuration under "config") is accepted
//  anywhere a configuration file is.
#ifndef TNN_CONFIG_HPP
#define TNN_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tnn/dataset.hpp"
#include "tnn/encoder.hpp"
#include "tnn/network.hpp"
#include "tnn/ppa.hpp"
#include "tnn/stdp.hpp"

namespace tnn
{

struct DatasetConfig
{
    std::filesystem::path train;
    // Without a separate test file the train file is split 80/20.
    std::optional<std::filesystem::path> test;
    DatasetFormat format{DatasetFormat::csv_labeled};
    bool header{false};
};

struct HardwareConfig
{
    hw::TechNode tech{hw::TechNode::n7_tnn7};
    // Emit every layer's columns instead of only the final layer's.
    bool emit_all_layers{false};
    std::size_t emission_cap{4096};
    std::size_t spot_checks{32};
};

struct RunConfig
{
    EncoderConfig encoder;
    // 0: one window per row. Otherwise rows are series cut into windows of
    // the network's input length (per channel) at this stride.
    std::size_t window_stride{0};
    NetworkSpec network;
    StdpParams learning;
    InitScheme init{UniformRandomInit{}};
    std::uint32_t epochs{10};
    DatasetConfig dataset;
    HardwareConfig hardware;
    std::filesystem::path out_dir{"tnn_out"};
    std::uint64_t seed{1};
};

// Relative dataset paths resolve against base_dir. Throws ConfigError.
[[nodiscard]] RunConfig parse_run_config(
        const nlohmann::json &doc, const std::filesystem::path &base_dir = {});
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path &path);

// Canonical form (absolute paths, every default spelled out).
[[nodiscard]] nlohmann::json to_json(const RunConfig &cfg);
[[nodiscard]] nlohmann::json to_json(const NetworkSpec &spec);
[[nodiscard]] NetworkSpec network_spec_from_json(
        const nlohmann::json &doc, std::uint32_t encoder_T);

// Structural checks that need no data: network shape, encoder/column window
// agreement, STDP step sizes, dataset files present. Throws ConfigError.
void validate(const RunConfig &cfg);

// FNV-1a 64 over the canonical JSON text, as 16 hex digits.
[[nodiscard]] std::string config_hash(const RunConfig &cfg);

} // namespace tnn

#endif
