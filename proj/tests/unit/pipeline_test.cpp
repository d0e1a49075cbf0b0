#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "tnn/config.hpp"
#include "tnn/errors.hpp"
#include "tnn/pipeline.hpp"

using namespace tnn;
using fixtures::read_file;
using fixtures::ScratchDir;
using nlohmann::json;
namespace fs = std::filesystem;

TEST(RunConfig, ParsesDefaultsAndRoundTrips)
{
    ScratchDir dir("cfg");
    const RunConfig cfg = parse_run_config(fixtures::orthogonal_json(dir.path()));
    EXPECT_EQ(cfg.encoder.T, 8U);
    EXPECT_EQ(cfg.network.input_width, 16U);
    EXPECT_EQ(cfg.network.layers[0].columns[0].w_max, 7U);
    EXPECT_EQ(cfg.hardware.tech, hw::TechNode::n7_tnn7);
    EXPECT_EQ(cfg.hardware.spot_checks, 32U);
    EXPECT_EQ(cfg.epochs, 20U);
    EXPECT_NO_THROW(validate(cfg));

    const RunConfig again = parse_run_config(to_json(cfg));
    EXPECT_EQ(to_json(again), to_json(cfg));
    EXPECT_EQ(config_hash(again), config_hash(cfg));
    EXPECT_EQ(config_hash(cfg).size(), 16U);
}

TEST(RunConfig, ErrorsAreConfigErrors)
{
    ScratchDir dir("cfgerr");
    json doc = fixtures::orthogonal_json(dir.path());
    json bad = doc;
    bad.erase("network");
    EXPECT_THROW((void)parse_run_config(bad), ConfigError);

    bad = doc;
    bad["encoder"]["mode"] = "rate";
    EXPECT_THROW((void)parse_run_config(bad), ConfigError);

    bad = doc;
    bad["learning"]["mu_capture"] = 0.1;
    EXPECT_THROW((void)parse_run_config(bad), ConfigError);

    bad = doc;
    bad["dataset"]["train"] = (dir.path() / "missing.csv").string();
    EXPECT_THROW(validate(parse_run_config(bad)), ConfigError);

    bad = doc;
    bad["network"]["layers"][0]["columns"][0]["p"] = 8;
    EXPECT_THROW((void)prepare_data(parse_run_config(bad)), ConfigError);

    EXPECT_THROW((void)load_run_config(dir.path() / "nope.json"), ConfigError);
}

TEST(RunPipeline, OrthogonalFixtureEndToEnd)
{
    ScratchDir dir("orth");
    const RunConfig cfg = parse_run_config(fixtures::orthogonal_json(dir.path()));
    const PipelineResult r = run_pipeline(cfg);
    EXPECT_EQ(r.eval.accuracy, 1.0);
    ASSERT_TRUE(r.spot_check);
    EXPECT_EQ(r.spot_check->checked, 32U);
    EXPECT_EQ(r.spot_check->passed, 32U);
    ASSERT_TRUE(r.ppa);
    EXPECT_EQ(r.ppa->gates, hw::estimate_gates(16, 4));
    for (const char *name : {"eval.json", "ppa.json", "model.json", "train_log.json", "manifest.json",
                 "netlists/l0_c0.v"})
    {
        EXPECT_TRUE(fs::exists(cfg.out_dir / name)) << name;
    }
    const json manifest = json::parse(read_file(cfg.out_dir / "manifest.json"));
    EXPECT_EQ(manifest.at("status"), "ok");
    EXPECT_EQ(manifest.at("config_hash"), config_hash(cfg));
    EXPECT_EQ(manifest.at("seed"), cfg.seed);
    const json eval = json::parse(read_file(cfg.out_dir / "eval.json"));
    EXPECT_EQ(eval.at("accuracy"), 1.0);
    EXPECT_EQ(eval.at("samples"), 16);
}

TEST(RunPipeline, ByteIdenticalReruns)
{
    ScratchDir dir("determinism");
    const RunConfig cfg = parse_run_config(fixtures::orthogonal_json(dir.path()));
    (void)run_pipeline(cfg);
    const std::string eval = read_file(cfg.out_dir / "eval.json");
    const std::string ppa = read_file(cfg.out_dir / "ppa.json");
    const std::string netlist = read_file(cfg.out_dir / "netlists/l0_c0.v");
    const std::string model = read_file(cfg.out_dir / "model.json");

    // Second run from the manifest alone.
    const RunConfig replay = load_run_config(cfg.out_dir / "manifest.json");
    EXPECT_EQ(config_hash(replay), config_hash(cfg));
    (void)run_pipeline(replay);
    EXPECT_EQ(read_file(cfg.out_dir / "eval.json"), eval);
    EXPECT_EQ(read_file(cfg.out_dir / "ppa.json"), ppa);
    EXPECT_EQ(read_file(cfg.out_dir / "netlists/l0_c0.v"), netlist);
    EXPECT_EQ(read_file(cfg.out_dir / "model.json"), model);
}

TEST(RunPipeline, SkipHwWritesEvalArtifactsOnly)
{
    ScratchDir dir("skiphw");
    const RunConfig cfg = parse_run_config(fixtures::orthogonal_json(dir.path()));
    PipelineOptions options;
    options.skip_hw = true;
    const PipelineResult r = run_pipeline(cfg, options);
    EXPECT_FALSE(r.ppa);
    EXPECT_FALSE(r.spot_check);
    EXPECT_TRUE(fs::exists(cfg.out_dir / "eval.json"));
    EXPECT_FALSE(fs::exists(cfg.out_dir / "ppa.json"));
    EXPECT_FALSE(fs::exists(cfg.out_dir / "netlists"));
}

TEST(RunPipeline, OversizedColumnsAreSkippedAndRecorded)
{
    ScratchDir dir("cap");
    json doc = fixtures::orthogonal_json(dir.path());
    doc["hardware"] = {{"emission_cap", 32}};
    const RunConfig cfg = parse_run_config(doc);
    const PipelineResult r = run_pipeline(cfg);
    EXPECT_TRUE(r.ppa);
    EXPECT_FALSE(fs::exists(cfg.out_dir / "netlists/l0_c0.v"));
    const json manifest = json::parse(read_file(cfg.out_dir / "manifest.json"));
    EXPECT_EQ(manifest.at("netlists_skipped"), json::array({"l0_c0.v"}));
}

TEST(RunPipeline, DataAndStageErrors)
{
    ScratchDir dir("errors");
    json doc = fixtures::orthogonal_json(dir.path());
    {
        std::ofstream ragged(dir.path() / "ragged.csv");
        ragged << "0,1,2\n1,2\n";
    }
    json bad = doc;
    bad["dataset"]["train"] = (dir.path() / "ragged.csv").string();
    EXPECT_THROW((void)run_pipeline(parse_run_config(bad)), DataError);

    // Output path occupied by a regular file: the write stage fails.
    {
        std::ofstream blocker(dir.path() / "blocked");
        blocker << "x";
    }
    bad = doc;
    bad["out"] = (dir.path() / "blocked").string();
    try
    {
        (void)run_pipeline(parse_run_config(bad));
        FAIL() << "expected a stage error";
    }
    catch (const StageError &e)
    {
        EXPECT_FALSE(e.stage().empty());
    }
}

TEST(RunPipeline, SeparateTestFileAndUcrFormat)
{
    ScratchDir dir("ucr");
    json doc = fixtures::orthogonal_json(dir.path());
    const Dataset data = load_dataset(doc["dataset"]["train"].get<std::string>(), DatasetFormat::csv_labeled);
    {
        std::ofstream out(dir.path() / "train.tsv");
        write_dataset(out, data, DatasetFormat::ucr_tsv);
        std::ofstream test(dir.path() / "test.tsv");
        write_dataset(test, data, DatasetFormat::ucr_tsv);
    }
    doc["dataset"] = {{"train", (dir.path() / "train.tsv").string()},
            {"test", (dir.path() / "test.tsv").string()}, {"format", "ucr-tsv"}};
    PipelineOptions options;
    options.skip_hw = true;
    const PipelineResult r = run_pipeline(parse_run_config(doc), options);
    EXPECT_EQ(r.eval.samples, data.rows.size());
    EXPECT_EQ(r.eval.accuracy, 1.0);
}

TEST(Model, JsonRoundTrip)
{
    ScratchDir dir("model");
    const RunConfig cfg = parse_run_config(fixtures::orthogonal_json(dir.path()));
    PipelineOptions options;
    options.skip_hw = true;
    const PipelineResult r = run_pipeline(cfg, options);
    LabelMap labels;
    const Network back = model_from_json(model_to_json(*r.network, &r.labels), &labels);
    EXPECT_EQ(back, *r.network);
    EXPECT_EQ(labels, r.labels);
}

TEST(EncodeRow, SlidingWindows)
{
    ScratchDir dir("windows");
    const RunConfig cfg = parse_run_config(fixtures::sine_square_json(dir.path()));
    std::vector<double> row(64);
    for (std::size_t i = 0; i < row.size(); ++i)
    {
        row[i] = static_cast<double>(i);
    }
    const auto windows = encode_row(row, cfg);
    EXPECT_EQ(windows.size(), (64U - 16U) / 2U + 1U);
    for (const auto &w : windows)
    {
        EXPECT_EQ(w.size(), 16U);
        EXPECT_EQ(w.front(), SpikeTime::at(7));
        EXPECT_EQ(w.back(), SpikeTime::at(0));
    }
}
