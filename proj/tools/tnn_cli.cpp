// tnn: command-line front-end for the TNN toolchain.
//
//   tnn datagen  synthetic fixtures (orthogonal-patterns, sine-vs-square)
//   tnn train    train a network, write model.json and train_log.json
//   tnn eval     full flow: train, label, evaluate, netlists, spot check, PPA
//   tnn genrtl   compile a trained model's columns to netlist text
//   tnn simrtl   run a netlist file on one input spike vector
//   tnn ppa      gate/area/power/latency estimate for a column or model
//   tnn explore  design-space sweep with an accuracy/power Pareto report
//
// Exit codes: 0 ok, 1 usage, 2 config error, 3 data error, 4 stage error.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnn/config.hpp"
#include "tnn/dataset.hpp"
#include "tnn/errors.hpp"
#include "tnn/explore.hpp"
#include "tnn/netlist.hpp"
#include "tnn/pipeline.hpp"
#include "tnn/ppa.hpp"

namespace
{

using nlohmann::json;

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 2,
    exit_data = 3,
    exit_stage = 4,
};

struct CommonFlags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool skip_hw{false};
    std::string format;
};

void add_common(CLI::App *cmd, CommonFlags &flags)
{
    cmd->add_option("--config", flags.config, "Run configuration (JSON) or run manifest");
    cmd->add_option("--seed", flags.seed, "Override the configured seed");
    cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_flag("--skip-hw", flags.skip_hw, "Stop after evaluation");
    cmd->add_option("--format", flags.format, "Dataset format")
            ->check(CLI::IsMember({"csv-labeled", "ucr-tsv"}));
}

tnn::RunConfig resolve_config(const CommonFlags &flags)
{
    if (flags.config.empty())
    {
        throw tnn::ConfigError("--config is required");
    }
    tnn::RunConfig cfg = tnn::load_run_config(flags.config);
    if (flags.seed)
    {
        cfg.seed = *flags.seed;
        cfg.learning.seed = *flags.seed;
    }
    if (!flags.out.empty())
    {
        cfg.out_dir = flags.out;
    }
    if (!flags.format.empty())
    {
        cfg.dataset.format = tnn::parse_dataset_format(flags.format);
    }
    return cfg;
}

json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw tnn::ConfigError("cannot open " + path);
    }
    try
    {
        return json::parse(in);
    }
    catch (const json::exception &e)
    {
        throw tnn::ConfigError(path + ": " + e.what());
    }
}

std::string read_text(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw tnn::ConfigError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

tnn::SpikeVector parse_spikes(const std::string &text)
{
    tnn::SpikeVector out;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ','))
    {
        if (field == "ABSENT" || field == "-" || field.empty())
        {
            out.push_back(tnn::SpikeTime::absent());
        }
        else
        {
            try
            {
                out.push_back(tnn::SpikeTime::at(static_cast<std::uint32_t>(std::stoul(field))));
            }
            catch (const std::exception &)
            {
                throw tnn::ConfigError("bad spike time '" + field + "'");
            }
        }
    }
    return out;
}

int cmd_datagen(const std::string &kind, std::size_t classes, std::size_t n, std::size_t length,
        double noise, std::uint64_t seed, const std::string &out, const std::string &format)
{
    tnn::SyntheticSpec spec;
    spec.kind = tnn::parse_synthetic_kind(kind);
    spec.classes = classes;
    spec.n_per_class = n;
    spec.length = length;
    spec.noise = noise;
    spec.seed = seed;
    const tnn::Dataset data = tnn::gen_synthetic(spec);
    const auto fmt = tnn::parse_dataset_format(format.empty() ? "csv-labeled" : format);
    std::ostringstream text;
    tnn::write_dataset(text, data, fmt);
    if (out.empty())
    {
        std::cout << text.str();
    }
    else
    {
        tnn::write_text(out, text.str());
        std::cerr << "wrote " << data.rows.size() << " rows to " << out << '\n';
    }
    return exit_ok;
}

int cmd_train(const CommonFlags &flags)
{
    const tnn::RunConfig cfg = resolve_config(flags);
    tnn::validate(cfg);
    const tnn::EncodedData data = tnn::prepare_data(cfg);
    tnn::Network network(cfg.network, cfg.init, cfg.learning);
    std::vector<tnn::SpikeVector> windows;
    for (const auto &sample : data.train)
    {
        windows.insert(windows.end(), sample.windows.begin(), sample.windows.end());
    }
    tnn::TrainLog log;
    try
    {
        log = tnn::train(network, windows, cfg.learning, cfg.epochs);
    }
    catch (const std::exception &e)
    {
        throw tnn::StageError("train", e.what());
    }
    const tnn::LabelMap labels = tnn::label_neurons(network, data.train);
    tnn::write_text(cfg.out_dir / "model.json", tnn::model_to_json(network, &labels).dump() + "\n");
    tnn::write_text(cfg.out_dir / "train_log.json", tnn::to_json(log).dump(2) + "\n");
    for (const auto &e : log.entries)
    {
        std::cout << "layer " << e.layer << " epoch " << e.epoch << " |dw|_1 = " << e.weight_change_l1 << '\n';
    }
    return exit_ok;
}

int cmd_eval(const CommonFlags &flags)
{
    const tnn::RunConfig cfg = resolve_config(flags);
    tnn::PipelineOptions options;
    options.skip_hw = flags.skip_hw;
    const tnn::PipelineResult result = tnn::run_pipeline(cfg, options);
    std::cout << "accuracy " << result.eval.accuracy << "  purity " << result.eval.purity
              << "  test samples " << result.eval.samples << '\n';
    if (result.spot_check)
    {
        std::cout << "netlist spot check " << result.spot_check->passed << '/'
                  << result.spot_check->checked << '\n';
    }
    if (result.ppa)
    {
        std::cout << "ppa " << tnn::to_json(*result.ppa).dump() << '\n';
    }
    std::cout << "artifacts in " << cfg.out_dir.string() << '\n';
    return exit_ok;
}

int cmd_genrtl(const std::string &model_path, const std::string &out, std::size_t cap, bool all_layers)
{
    const tnn::Network network = tnn::model_from_json(read_json(model_path), nullptr);
    const std::size_t layers = network.layers().size();
    for (std::size_t l = all_layers ? 0 : layers - 1; l < layers; ++l)
    {
        for (std::size_t c = 0; c < network.layers()[l].size(); ++c)
        {
            tnn::hw::EmitOptions options;
            options.max_synapses = cap;
            options.module_name = "tnn_l" + std::to_string(l) + "_c" + std::to_string(c);
            tnn::hw::Netlist netlist;
            try
            {
                netlist = tnn::hw::emit_netlist(network.layers()[l][c], options);
            }
            catch (const tnn::EmissionError &e)
            {
                throw tnn::StageError("emit", e.what());
            }
            const std::filesystem::path path = std::filesystem::path(out) /
                    ("l" + std::to_string(l) + "_c" + std::to_string(c) + ".v");
            tnn::write_text(path, tnn::hw::serialize(netlist));
            std::cout << path.string() << ": " << netlist.gates.size() << " primitives\n";
        }
    }
    return exit_ok;
}

int cmd_simrtl(const std::string &netlist_path, const std::string &inputs, std::optional<std::uint32_t> cycles)
{
    tnn::hw::Netlist netlist;
    try
    {
        netlist = tnn::hw::parse_netlist(read_text(netlist_path));
    }
    catch (const tnn::StructuralError &e)
    {
        throw tnn::StageError("parse", e.what());
    }
    const tnn::SpikeVector x = parse_spikes(inputs);
    const auto out = tnn::hw::simulate_netlist(netlist, x, cycles.value_or(netlist.metadata.config.H()));
    for (std::size_t j = 0; j < out.size(); ++j)
    {
        std::cout << (j ? "," : "") << tnn::to_string(out[j]);
    }
    std::cout << '\n';
    return exit_ok;
}

int cmd_ppa(std::uint64_t p, std::uint64_t q, const std::string &model_path, const std::string &tech,
        const std::string &out)
{
    std::uint64_t gates = 0;
    if (!model_path.empty())
    {
        gates = tnn::network_gates(tnn::model_from_json(read_json(model_path), nullptr).spec());
    }
    else
    {
        if (p == 0 || q == 0)
        {
            throw tnn::ConfigError("ppa needs --p and --q, or --model");
        }
        gates = tnn::hw::estimate_gates(p, q);
    }
    const auto report = tnn::hw::estimate_ppa(gates, tnn::hw::tech_model(tnn::hw::parse_tech_node(tech)));
    const std::string text = tnn::to_json(report).dump(2) + "\n";
    if (!out.empty())
    {
        tnn::write_text(out, text);
    }
    std::cout << text;
    return exit_ok;
}

int cmd_explore(const CommonFlags &flags, const std::string &sweep_path)
{
    const tnn::RunConfig base = resolve_config(flags);
    const tnn::SweepSpec sweep = tnn::parse_sweep(read_json(sweep_path));
    tnn::validate(base);
    const tnn::ExploreReport report = tnn::explore(sweep, base, tnn::sweep_threads());
    const json doc = tnn::to_json(report);
    tnn::write_text(base.out_dir / "explore.json", doc.dump(2) + "\n");
    for (const auto &c : report.candidates)
    {
        std::cout << "candidate " << c.index << ' ' << json(c.params).dump() << ' ';
        if (c.metrics)
        {
            std::cout << "accuracy " << c.metrics->accuracy << " power_mw " << c.metrics->power_mw << '\n';
        }
        else
        {
            std::cout << "error: " << c.error << '\n';
        }
    }
    std::cout << "pareto front: " << json(report.front).dump() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"TNN design toolchain: simulate, train, compile and estimate TNN columns"};
    app.require_subcommand(1);

    CommonFlags flags;

    std::string kind = "orthogonal-patterns";
    std::size_t classes = 4;
    std::size_t n_per_class = 10;
    std::size_t length = 16;
    double noise = 0.0;
    std::uint64_t data_seed = 1;
    std::string data_out;
    std::string data_format;
    auto *datagen = app.add_subcommand("datagen", "Generate a synthetic labeled dataset");
    datagen->add_option("--kind", kind)->check(CLI::IsMember({"orthogonal-patterns", "sine-vs-square"}));
    datagen->add_option("--classes", classes);
    datagen->add_option("--n-per-class", n_per_class);
    datagen->add_option("--length", length);
    datagen->add_option("--noise", noise, "Noise amplitude as a fraction of full scale");
    datagen->add_option("--seed", data_seed);
    datagen->add_option("--out", data_out, "Output file (stdout if omitted)");
    datagen->add_option("--format", data_format)->check(CLI::IsMember({"csv-labeled", "ucr-tsv"}));

    auto *train = app.add_subcommand("train", "Train a network and write model.json");
    add_common(train, flags);

    auto *eval = app.add_subcommand("eval", "Run the full train/evaluate/hardware pipeline");
    add_common(eval, flags);

    std::string model_path;
    std::size_t cap = 4096;
    bool all_layers = false;
    std::string rtl_out = "netlists";
    auto *genrtl = app.add_subcommand("genrtl", "Compile model columns to netlists");
    genrtl->add_option("--model", model_path, "Trained model (model.json)")->required();
    genrtl->add_option("--out", rtl_out, "Output directory");
    genrtl->add_option("--cap", cap, "Largest p*q to emit");
    genrtl->add_flag("--all-layers", all_layers, "Emit every layer, not only the last");

    std::string netlist_path;
    std::string spikes;
    std::optional<std::uint32_t> cycles;
    auto *simrtl = app.add_subcommand("simrtl", "Simulate a netlist file on one input vector");
    simrtl->add_option("--netlist", netlist_path)->required();
    simrtl->add_option("--inputs", spikes, "Comma-separated spike ticks, ABSENT for none")->required();
    simrtl->add_option("--cycles", cycles);

    std::uint64_t p = 0;
    std::uint64_t q = 0;
    std::string tech = "45nm-std";
    std::string ppa_model;
    std::string ppa_out;
    auto *ppa = app.add_subcommand("ppa", "Estimate gates, area, power and latency");
    ppa->add_option("--p", p, "Column inputs");
    ppa->add_option("--q", q, "Column neurons");
    ppa->add_option("--model", ppa_model, "Estimate a whole trained model instead");
    ppa->add_option("--tech", tech)->check(CLI::IsMember({"45nm-std", "7nm-std", "7nm-tnn7"}));
    ppa->add_option("--out", ppa_out, "Also write the JSON report here");

    std::string sweep_path;
    auto *explore = app.add_subcommand("explore", "Design-space sweep with Pareto report");
    add_common(explore, flags);
    explore->add_option("--sweep", sweep_path, "Sweep description (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*datagen)
            return cmd_datagen(kind, classes, n_per_class, length, noise, data_seed, data_out, data_format);
        if (*train)
            return cmd_train(flags);
        if (*eval)
            return cmd_eval(flags);
        if (*genrtl)
            return cmd_genrtl(model_path, rtl_out, cap, all_layers);
        if (*simrtl)
            return cmd_simrtl(netlist_path, spikes, cycles);
        if (*ppa)
            return cmd_ppa(p, q, ppa_model, tech, ppa_out);
        if (*explore)
            return cmd_explore(flags, sweep_path);
    }
    catch (const tnn::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const tnn::DataError &e)
    {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_data;
    }
    catch (const tnn::StageError &e)
    {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return exit_stage;
    }
    catch (const tnn::DomainError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return exit_stage;
    }
    return exit_ok;
}
