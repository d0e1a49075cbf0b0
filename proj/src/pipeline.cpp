#include "tnn/pipeline.hpp"

#include <fstream>
#include <functional>

#include "tnn/errors.hpp"
#include "tnn/netlist.hpp"
#include "tnn/rng.hpp"

namespace tnn
{

using nlohmann::json;

std::vector<SpikeVector> encode_row(std::span<const double> values, const RunConfig &cfg)
{
    std::vector<SpikeVector> windows;
    if (cfg.window_stride == 0)
    {
        windows.push_back(encode_image(normalize_window(values, cfg.encoder), cfg.encoder));
        return windows;
    }
    const std::size_t length = cfg.network.input_width / cfg.encoder.channels();
    if (length == 0 || values.size() < length)
    {
        throw ConfigError("series of length " + std::to_string(values.size()) +
                " is shorter than the input window " + std::to_string(length));
    }
    for (std::size_t start = 0; start + length <= values.size(); start += cfg.window_stride)
    {
        const auto window = values.subspan(start, length);
        windows.push_back(encode_image(normalize_window(window, cfg.encoder), cfg.encoder));
    }
    return windows;
}

namespace
{

std::vector<LabeledSample> encode_rows(const Dataset &data,
        const std::vector<std::size_t> &order, const RunConfig &cfg)
{
    std::vector<LabeledSample> out;
    out.reserve(order.size());
    for (const std::size_t k : order)
    {
        const LabeledRow &row = data.rows[k];
        try
        {
            out.push_back({encode_row(row.values, cfg), row.label});
        }
        catch (const DomainError &e)
        {
            throw DataError("row " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return out;
}

void check_width(const Dataset &data, const RunConfig &cfg, const std::string &which)
{
    if (data.rows.empty())
    {
        throw DataError(which + " dataset is empty");
    }
    const std::size_t width = data.width();
    const std::size_t channels = cfg.encoder.channels();
    if (cfg.window_stride == 0 && width * channels != cfg.network.input_width)
    {
        throw ConfigError(which + " rows have " + std::to_string(width) + " values (" +
                std::to_string(width * channels) + " spike lines) but the network expects " +
                std::to_string(cfg.network.input_width));
    }
    if (cfg.window_stride > 0 && width < cfg.network.input_width / channels)
    {
        throw ConfigError(which + " series are shorter than the input window");
    }
}

std::vector<std::size_t> iota(std::size_t n)
{
    std::vector<std::size_t> out(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        out[k] = k;
    }
    return out;
}

template <typename Fn>
auto run_stage(const std::string &name, Fn &&fn)
{
    try
    {
        return fn();
    }
    catch (const StageError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw StageError(name, e.what());
    }
}

std::string column_file(std::size_t layer, std::size_t column)
{
    return "l" + std::to_string(layer) + "_c" + std::to_string(column) + ".v";
}

} // namespace

EncodedData prepare_data(const RunConfig &cfg)
{
    const Dataset primary = load_dataset(cfg.dataset.train, cfg.dataset.format, cfg.dataset.header);
    check_width(primary, cfg, "training");
    EncodedData out;
    if (cfg.dataset.test)
    {
        const Dataset test = load_dataset(*cfg.dataset.test, cfg.dataset.format, cfg.dataset.header);
        check_width(test, cfg, "test");
        out.train = encode_rows(primary, iota(primary.rows.size()), cfg);
        out.test = encode_rows(test, iota(test.rows.size()), cfg);
        return out;
    }
    const Split split = stratified_split(primary, cfg.seed);
    out.train = encode_rows(primary, split.train, cfg);
    out.test = encode_rows(primary, split.test, cfg);
    if (out.train.empty())
    {
        throw DataError("training split is empty");
    }
    return out;
}

std::uint64_t network_gates(const NetworkSpec &spec)
{
    std::uint64_t total = 0;
    for (const LayerSpec &layer : spec.layers)
    {
        for (const ColumnConfig &col : layer.columns)
        {
            total += hw::estimate_gates(col.p, col.q);
        }
    }
    return total;
}

json to_json(const EvalReport &report, const LabelMap &labels)
{
    json label_map = json::array();
    for (const int label : labels)
    {
        label_map.push_back(label == reject_label ? json(nullptr) : json(label));
    }
    return {{"accuracy", report.accuracy}, {"purity", report.purity},
            {"samples", report.samples}, {"classes", report.classes},
            {"confusion", report.confusion}, {"no_winner", report.no_winner},
            {"label_map", label_map}};
}

json to_json(const hw::PpaReport &report)
{
    return {{"gates", report.gates}, {"area_mm2", report.area_mm2},
            {"power_mw", report.power_mw},
            {"latency_ns", report.latency_ns ? json(*report.latency_ns) : json(nullptr)},
            {"node", report.node}, {"mode", report.mode}};
}

json to_json(const TrainLog &log)
{
    json entries = json::array();
    for (const TrainLogEntry &e : log.entries)
    {
        entries.push_back({{"layer", e.layer}, {"epoch", e.epoch},
                {"weight_change_l1", e.weight_change_l1}});
    }
    return {{"entries", entries}};
}

json model_to_json(const Network &network, const LabelMap *labels)
{
    json layers = json::array();
    for (const auto &layer : network.layers())
    {
        json columns = json::array();
        for (const ColumnState &column : layer)
        {
            json raw = json::array();
            for (const Weight w : column.weights())
            {
                raw.push_back(w.raw());
            }
            columns.push_back(raw);
        }
        layers.push_back(columns);
    }
    json doc{{"format", "tnn-model"}, {"version", 1}, {"network", to_json(network.spec())},
            {"weights_raw", layers}};
    if (labels != nullptr)
    {
        json label_map = json::array();
        for (const int label : *labels)
        {
            label_map.push_back(label == reject_label ? json(nullptr) : json(label));
        }
        doc["label_map"] = label_map;
    }
    return doc;
}

Network model_from_json(const json &doc, LabelMap *labels)
{
    try
    {
        if (doc.value("format", "") != "tnn-model")
        {
            throw ConfigError("not a tnn-model document");
        }
        NetworkSpec spec = network_spec_from_json(doc.at("network"), 8);
        const json &raw = doc.at("weights_raw");
        std::vector<std::vector<ColumnState>> layers;
        for (std::size_t l = 0; l < spec.layers.size(); ++l)
        {
            std::vector<ColumnState> columns;
            for (std::size_t c = 0; c < spec.layers[l].columns.size(); ++c)
            {
                std::vector<Weight> weights;
                for (const json &w : raw.at(l).at(c))
                {
                    weights.push_back(Weight::from_raw(w.get<std::uint32_t>()));
                }
                columns.emplace_back(spec.layers[l].columns[c], std::move(weights));
            }
            layers.push_back(std::move(columns));
        }
        if (labels != nullptr && doc.contains("label_map"))
        {
            labels->clear();
            for (const json &label : doc.at("label_map"))
            {
                labels->push_back(label.is_null() ? reject_label : label.get<int>());
            }
        }
        return Network(std::move(spec), std::move(layers));
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("malformed model: ") + e.what());
    }
    catch (const DomainError &e)
    {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::error_code ec;
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out)
    {
        throw StageError("io", "cannot write " + path.string());
    }
}

PipelineResult run_pipeline(const RunConfig &cfg, const PipelineOptions &options)
{
    validate(cfg);
    const EncodedData data = prepare_data(cfg);

    PipelineResult result;
    json manifest{{"tool", "tnn"}, {"version", tool_version}, {"compiler", __VERSION__},
            {"config_hash", config_hash(cfg)}, {"seed", cfg.seed}, {"config", to_json(cfg)},
            {"status", "running"}, {"failed_stage", nullptr}};
    const auto emit_file = [&](const std::string &name, const std::string &text) {
        if (options.write_files)
        {
            write_text(cfg.out_dir / name, text);
            result.artifacts.push_back(cfg.out_dir / name);
        }
    };
    const auto write_manifest = [&] {
        if (!options.write_files)
        {
            return;
        }
        json artifacts = json::array();
        for (const auto &path : result.artifacts)
        {
            artifacts.push_back(path.lexically_relative(cfg.out_dir).generic_string());
        }
        manifest["artifacts"] = artifacts;
        write_text(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
    };

    try
    {
        result.network = run_stage("train", [&] {
            Network network(cfg.network, cfg.init, cfg.learning);
            std::vector<SpikeVector> windows;
            for (const LabeledSample &sample : data.train)
            {
                windows.insert(windows.end(), sample.windows.begin(), sample.windows.end());
            }
            result.log = train(network, windows, cfg.learning, cfg.epochs);
            return network;
        });
        const Network &network = *result.network;
        result.labels = run_stage("label", [&] { return label_neurons(network, data.train); });
        result.eval = run_stage("evaluate", [&] { return evaluate(network, data.test, result.labels); });
        run_stage("write", [&] {
            emit_file("eval.json", to_json(result.eval, result.labels).dump(2) + "\n");
            emit_file("train_log.json", to_json(result.log).dump(2) + "\n");
            emit_file("model.json", model_to_json(network, &result.labels).dump() + "\n");
            return 0;
        });

        if (!options.skip_hw)
        {
            if (options.emit_netlists)
            {
                struct Emitted
                {
                    std::size_t layer;
                    std::size_t column;
                    hw::Netlist netlist;
                };
                std::vector<Emitted> emitted;
                json skipped = json::array();
                run_stage("emit", [&] {
                    const std::size_t layers = network.layers().size();
                    const std::size_t first = cfg.hardware.emit_all_layers ? 0 : layers - 1;
                    for (std::size_t l = first; l < layers; ++l)
                    {
                        for (std::size_t c = 0; c < network.layers()[l].size(); ++c)
                        {
                            const ColumnState &column = network.layers()[l][c];
                            const std::size_t synapses =
                                    static_cast<std::size_t>(column.config().p) * column.config().q;
                            if (synapses > cfg.hardware.emission_cap)
                            {
                                skipped.push_back(column_file(l, c));
                                continue;
                            }
                            hw::EmitOptions emit_options;
                            emit_options.max_synapses = cfg.hardware.emission_cap;
                            emit_options.module_name =
                                    "tnn_l" + std::to_string(l) + "_c" + std::to_string(c);
                            hw::Netlist netlist = hw::emit_netlist(column, emit_options);
                            hw::lint(netlist);
                            emit_file("netlists/" + column_file(l, c), hw::serialize(netlist));
                            emitted.push_back({l, c, std::move(netlist)});
                        }
                    }
                    return 0;
                });
                manifest["netlists_skipped"] = skipped;

                result.spot_check = run_stage("verify", [&] {
                    SpotCheck check;
                    const auto &pool = data.test.empty() ? data.train : data.test;
                    if (emitted.empty() || pool.empty())
                    {
                        return check;
                    }
                    std::vector<hw::NetlistSimulator> sims;
                    sims.reserve(emitted.size());
                    for (const Emitted &e : emitted)
                    {
                        sims.emplace_back(e.netlist);
                    }
                    Rng rng(cfg.seed ^ 0xC0FFEE5EEDULL);
                    for (std::size_t k = 0; k < cfg.hardware.spot_checks; ++k)
                    {
                        const LabeledSample &sample = pool[rng.below(pool.size())];
                        const SpikeVector &window = sample.windows[rng.below(sample.windows.size())];
                        std::vector<SpikeVector> inputs;
                        const NetworkOutput out =
                                network.forward_until(window, network.layers().size() - 1, &inputs);
                        bool ok = true;
                        for (std::size_t e = 0; e < emitted.size(); ++e)
                        {
                            const auto l = emitted[e].layer;
                            const auto c = emitted[e].column;
                            const InputSlice slice = network.spec().layers[l].input_map[c];
                            const auto view = std::span<const SpikeTime>(inputs[l]).subspan(
                                    slice.offset, slice.length);
                            const auto cycles = network.layers()[l][c].config().H();
                            ok = ok && sims[e].run(view, cycles) == out[l][c].post_wta_times;
                        }
                        ++check.checked;
                        check.passed += ok ? 1 : 0;
                    }
                    return check;
                });
                manifest["spot_check"] = {{"checked", result.spot_check->checked},
                        {"passed", result.spot_check->passed}};
                if (result.spot_check->passed != result.spot_check->checked)
                {
                    throw StageError("verify", "netlist disagrees with the simulator on " +
                            std::to_string(result.spot_check->checked - result.spot_check->passed) +
                            " of " + std::to_string(result.spot_check->checked) + " samples");
                }
            }
            result.ppa = run_stage("ppa", [&] {
                return hw::estimate_ppa(network_gates(cfg.network), hw::tech_model(cfg.hardware.tech));
            });
            emit_file("ppa.json", to_json(*result.ppa).dump(2) + "\n");
        }
    }
    catch (const StageError &e)
    {
        manifest["status"] = "failed";
        manifest["failed_stage"] = e.stage();
        manifest["error"] = e.what();
        try
        {
            write_manifest();
        }
        catch (const std::exception &)
        {
            // The stage error is the one worth reporting.
        }
        throw;
    }
    manifest["status"] = "ok";
    write_manifest();
    return result;
}

} // namespace tnn
