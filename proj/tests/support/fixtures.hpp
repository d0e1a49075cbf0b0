// fixtures.hpp
//
//  The two desk-scale learning fixtures, written to a scratch directory.
#ifndef TNN_TEST_FIXTURES_HPP
#define TNN_TEST_FIXTURES_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "tnn/config.hpp"
#include "tnn/dataset.hpp"

namespace fixtures
{

namespace fs = std::filesystem;

// Fresh directory under the system temp dir; removed by the destructor.
class ScratchDir
{
public:
    explicit ScratchDir(const std::string &tag)
    {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                ("tnn_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~ScratchDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir &) = delete;
    ScratchDir &operator=(const ScratchDir &) = delete;

    [[nodiscard]] const fs::path &path() const noexcept { return path_; }

private:
    fs::path path_;
};

inline fs::path write_synthetic(const fs::path &dir, const std::string &name, const tnn::SyntheticSpec &spec)
{
    const fs::path file = dir / name;
    std::ofstream out(file, std::ios::binary);
    tnn::write_dataset(out, tnn::gen_synthetic(spec), tnn::DatasetFormat::csv_labeled);
    return file;
}

// Four classes on 16 inputs, no noise, 20 rows per class.
inline nlohmann::json orthogonal_json(const fs::path &dir, std::uint64_t seed = 1)
{
    tnn::SyntheticSpec spec;
    spec.kind = tnn::SyntheticKind::orthogonal_patterns;
    spec.classes = 4;
    spec.n_per_class = 20;
    spec.length = 16;
    spec.seed = seed;
    const fs::path data = write_synthetic(dir, "orthogonal.csv", spec);
    return {
            {"encoder", {{"T", 8}}},
            {"network", {{"layers", {{{"columns", {{{"p", 16}, {"q", 4}, {"theta", 4}}}}}}}}},
            {"learning",
                    {{"mu_capture", 0.5}, {"mu_backoff", 0.5}, {"mu_search", 0.0625},
                            {"init", {{"constant", 0}}}}},
            {"epochs", 20},
            {"seed", seed},
            {"dataset", {{"train", data.string()}}},
            {"out", (dir / "out").string()},
    };
}

// Sine vs square, 10% noise, 64-sample series in one-period (16) windows at
// stride 2; series-level majority vote.
inline nlohmann::json sine_square_json(const fs::path &dir, std::uint64_t seed = 1)
{
    tnn::SyntheticSpec spec;
    spec.kind = tnn::SyntheticKind::sine_vs_square;
    spec.n_per_class = 50;
    spec.length = 64;
    spec.noise = 0.1;
    spec.seed = seed;
    const fs::path data = write_synthetic(dir, "sine_square.csv", spec);
    return {
            {"encoder", {{"T", 8}, {"normalization", "per-window"}, {"window_stride", 2}}},
            {"network",
                    {{"layers", {{{"columns", {{{"p", 16}, {"q", 32}, {"theta", 5}, {"w_max", 3}}}}}}}}},
            {"learning",
                    {{"mu_capture", 0.125}, {"mu_backoff", 1.0}, {"mu_search", 0.0625},
                            {"init", {{"constant", 0}}}}},
            {"epochs", 5},
            {"seed", seed},
            {"dataset", {{"train", data.string()}}},
            {"out", (dir / "out").string()},
    };
}

inline fs::path write_json(const fs::path &file, const nlohmann::json &doc)
{
    std::ofstream out(file, std::ios::binary);
    out << doc.dump(2) << '\n';
    return file;
}

inline std::string read_file(const fs::path &file)
{
    std::ifstream in(file, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace fixtures

#endif
