#include "tnn/config.hpp"

#include <fstream>
#include <sstream>

#include "tnn/errors.hpp"

namespace tnn
{

using nlohmann::json;

namespace
{

template <typename T>
T get_or(const json &obj, const char *key, T fallback)
{
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null())
    {
        return fallback;
    }
    return obj.at(key).get<T>();
}

const json &require(const json &obj, const char *key)
{
    if (!obj.is_object() || !obj.contains(key))
    {
        throw ConfigError(std::string("missing required field '") + key + "'");
    }
    return obj.at(key);
}

Weight weight_field(const json &obj, const char *key, Weight fallback)
{
    if (!obj.is_object() || !obj.contains(key))
    {
        return fallback;
    }
    try
    {
        return Weight::from_double(obj.at(key).get<double>());
    }
    catch (const DomainError &e)
    {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p)
{
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty())
    {
        path = base / path;
    }
    return std::filesystem::absolute(path).lexically_normal();
}

} // namespace

NetworkSpec network_spec_from_json(const json &doc, std::uint32_t encoder_T)
{
    NetworkSpec spec;
    const json &layers = require(doc, "layers");
    if (!layers.is_array() || layers.empty())
    {
        throw ConfigError("network.layers must be a nonempty array");
    }
    std::uint32_t upstream_horizon = 0;
    for (std::size_t l = 0; l < layers.size(); ++l)
    {
        LayerSpec layer;
        const json &columns = require(layers[l], "columns");
        std::size_t packed = 0;
        std::uint32_t horizon = 0;
        for (const json &col : columns)
        {
            ColumnConfig cfg;
            cfg.p = require(col, "p").get<std::uint32_t>();
            cfg.q = require(col, "q").get<std::uint32_t>();
            cfg.theta = require(col, "theta").get<std::uint32_t>();
            cfg.model = parse_neuron_model(get_or<std::string>(col, "model", "ramp-no-leak"));
            cfg.w_max = get_or<std::uint32_t>(col, "w_max", 7);
            cfg.T = get_or<std::uint32_t>(col, "T", l == 0 ? encoder_T : upstream_horizon);
            if (col.contains("H") && !col.at("H").is_null())
            {
                cfg.horizon = col.at("H").get<std::uint32_t>();
            }
            const std::size_t offset = get_or<std::size_t>(col, "offset", packed);
            layer.columns.push_back(cfg);
            layer.input_map.push_back({offset, cfg.p});
            packed = std::max(packed, offset + cfg.p);
            horizon = std::max(horizon, cfg.H());
        }
        if (l == 0)
        {
            spec.input_width = get_or<std::size_t>(doc, "input_width", packed);
        }
        spec.layers.push_back(std::move(layer));
        upstream_horizon = horizon;
    }
    return spec;
}

json to_json(const NetworkSpec &spec)
{
    json layers = json::array();
    for (const LayerSpec &layer : spec.layers)
    {
        json columns = json::array();
        for (std::size_t c = 0; c < layer.columns.size(); ++c)
        {
            const ColumnConfig &cfg = layer.columns[c];
            columns.push_back({{"p", cfg.p}, {"q", cfg.q}, {"theta", cfg.theta},
                    {"model", std::string(to_string(cfg.model))}, {"w_max", cfg.w_max},
                    {"T", cfg.T}, {"H", cfg.horizon ? json(*cfg.horizon) : json(nullptr)},
                    {"offset", layer.input_map[c].offset}});
        }
        layers.push_back({{"columns", columns}});
    }
    return {{"input_width", spec.input_width}, {"layers", layers}};
}

RunConfig parse_run_config(const json &input, const std::filesystem::path &base_dir)
{
    // A manifest carries the resolved configuration.
    const json &doc = input.is_object() && input.contains("config") && input.contains("config_hash")
            ? input.at("config")
            : input;
    RunConfig cfg;
    try
    {
        const json encoder = get_or<json>(doc, "encoder", json::object());
        cfg.encoder.T = get_or<std::uint32_t>(encoder, "T", 8);
        cfg.encoder.v_max = get_or<double>(encoder, "v_max", 255.0);
        cfg.encoder.mode = parse_encoding_mode(get_or<std::string>(encoder, "mode", "direct-latency"));
        cfg.encoder.normalization =
                parse_normalization(get_or<std::string>(encoder, "normalization", "global"));
        cfg.window_stride = get_or<std::size_t>(encoder, "window_stride", 0);

        cfg.network = network_spec_from_json(require(doc, "network"), cfg.encoder.T);

        const json learning = get_or<json>(doc, "learning", json::object());
        cfg.learning.mu_capture = weight_field(learning, "mu_capture", cfg.learning.mu_capture);
        cfg.learning.mu_backoff = weight_field(learning, "mu_backoff", cfg.learning.mu_backoff);
        cfg.learning.mu_search = weight_field(learning, "mu_search", cfg.learning.mu_search);
        if (learning.contains("init"))
        {
            const json &init = learning.at("init");
            if (init.is_string() && init.get<std::string>() == "uniform-random")
            {
                cfg.init = UniformRandomInit{};
            }
            else if (init.is_object() && init.contains("constant"))
            {
                cfg.init = ConstantInit{weight_field(init, "constant", Weight{})};
            }
            else
            {
                throw ConfigError("learning.init must be \"uniform-random\" or {\"constant\": c}");
            }
        }
        cfg.epochs = get_or<std::uint32_t>(doc, "epochs", 10);
        cfg.seed = get_or<std::uint64_t>(doc, "seed", 1);
        cfg.learning.seed = cfg.seed;

        const json &dataset = require(doc, "dataset");
        cfg.dataset.train = resolve(base_dir, require(dataset, "train").get<std::string>());
        if (dataset.contains("test") && !dataset.at("test").is_null())
        {
            cfg.dataset.test = resolve(base_dir, dataset.at("test").get<std::string>());
        }
        cfg.dataset.format = parse_dataset_format(get_or<std::string>(dataset, "format", "csv-labeled"));
        cfg.dataset.header = get_or<bool>(dataset, "header", false);

        const json hardware = get_or<json>(doc, "hardware", json::object());
        cfg.hardware.tech = hw::parse_tech_node(get_or<std::string>(hardware, "tech", "7nm-tnn7"));
        cfg.hardware.emit_all_layers = get_or<bool>(hardware, "emit_all_layers", false);
        cfg.hardware.emission_cap = get_or<std::size_t>(hardware, "emission_cap", 4096);
        cfg.hardware.spot_checks = get_or<std::size_t>(hardware, "spot_checks", 32);

        cfg.out_dir = get_or<std::string>(doc, "out", "tnn_out");
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    catch (const DomainError &e)
    {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open configuration " + path.string());
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_run_config(doc, std::filesystem::absolute(path).parent_path());
}

json to_json(const RunConfig &cfg)
{
    json init = std::holds_alternative<UniformRandomInit>(cfg.init)
            ? json("uniform-random")
            : json{{"constant", std::get<ConstantInit>(cfg.init).value.to_double()}};
    return {
            {"encoder",
                    {{"T", cfg.encoder.T}, {"v_max", cfg.encoder.v_max},
                            {"mode", std::string(to_string(cfg.encoder.mode))},
                            {"normalization", std::string(to_string(cfg.encoder.normalization))},
                            {"window_stride", cfg.window_stride}}},
            {"network", to_json(cfg.network)},
            {"learning",
                    {{"mu_capture", cfg.learning.mu_capture.to_double()},
                            {"mu_backoff", cfg.learning.mu_backoff.to_double()},
                            {"mu_search", cfg.learning.mu_search.to_double()}, {"init", init}}},
            {"epochs", cfg.epochs},
            {"seed", cfg.seed},
            {"dataset",
                    {{"train", cfg.dataset.train.string()},
                            {"test", cfg.dataset.test ? json(cfg.dataset.test->string()) : json(nullptr)},
                            {"format", std::string(to_string(cfg.dataset.format))},
                            {"header", cfg.dataset.header}}},
            {"hardware",
                    {{"tech", std::string(hw::to_string(cfg.hardware.tech))},
                            {"emit_all_layers", cfg.hardware.emit_all_layers},
                            {"emission_cap", cfg.hardware.emission_cap},
                            {"spot_checks", cfg.hardware.spot_checks}}},
            {"out", cfg.out_dir.string()},
    };
}

void validate(const RunConfig &cfg)
{
    try
    {
        cfg.encoder.validate();
        cfg.network.validate();
        for (const ColumnConfig &col : cfg.network.layers.front().columns)
        {
            if (col.T < cfg.encoder.T)
            {
                throw ConfigError("layer-0 column T " + std::to_string(col.T) +
                        " is shorter than the encoder window " + std::to_string(cfg.encoder.T));
            }
        }
        for (const LayerSpec &layer : cfg.network.layers)
        {
            for (const ColumnConfig &col : layer.columns)
            {
                cfg.learning.validate(col.w_max);
            }
        }
        if (const auto *constant = std::get_if<ConstantInit>(&cfg.init))
        {
            for (const LayerSpec &layer : cfg.network.layers)
            {
                for (const ColumnConfig &col : layer.columns)
                {
                    if (constant->value > Weight::from_int(col.w_max))
                    {
                        throw ConfigError("constant initial weight exceeds w_max");
                    }
                }
            }
        }
    }
    catch (const DomainError &e)
    {
        throw ConfigError(e.what());
    }
    if (cfg.epochs == 0)
    {
        throw ConfigError("epochs must be >= 1");
    }
    if (cfg.window_stride > 0 && cfg.network.input_width % cfg.encoder.channels() != 0)
    {
        throw ConfigError("windowed input width must be a multiple of the encoder channel count");
    }
    if (!std::filesystem::is_regular_file(cfg.dataset.train))
    {
        throw ConfigError("dataset file not found: " + cfg.dataset.train.string());
    }
    if (cfg.dataset.test && !std::filesystem::is_regular_file(*cfg.dataset.test))
    {
        throw ConfigError("test dataset file not found: " + cfg.dataset.test->string());
    }
}

std::string config_hash(const RunConfig &cfg)
{
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

} // namespace tnn
