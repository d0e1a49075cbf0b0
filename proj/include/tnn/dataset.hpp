// dataset.hpp
//
//  Labeled numeric datasets: CSV ("label,v1,...,vn") and UCR-style TSV
//  (label first, tab separated), plus seeded synthetic fixtures.
#ifndef TNN_DATASET_HPP
#define TNN_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace tnn
{

enum class DatasetFormat : std::uint8_t
{
    csv_labeled,
    ucr_tsv,
};

[[nodiscard]] std::string_view to_string(DatasetFormat format) noexcept;
[[nodiscard]] DatasetFormat parse_dataset_format(std::string_view name);

struct LabeledRow
{
    int label{0};
    std::vector<double> values;

    friend bool operator==(const LabeledRow &, const LabeledRow &) = default;
};

struct Dataset
{
    std::vector<LabeledRow> rows;

    [[nodiscard]] std::size_t width() const noexcept
    {
        return rows.empty() ? 0 : rows.front().values.size();
    }
    friend bool operator==(const Dataset &, const Dataset &) = default;
};

// Throws DataError naming the 1-based line of a ragged row, a non-numeric
// field or a non-integer label, or when there are no rows at all. Blank
// lines are skipped; CR before LF is tolerated. `header` skips the first
// non-blank line.
[[nodiscard]] Dataset parse_dataset(std::string_view text, DatasetFormat format, bool header = false);
[[nodiscard]] Dataset load_dataset(
        const std::filesystem::path &path, DatasetFormat format, bool header = false);

// Shortest round-trip decimal representation of each value.
void write_dataset(std::ostream &out, const Dataset &data, DatasetFormat format);

enum class SyntheticKind : std::uint8_t
{
    // Class c is amplitude v_max on inputs [c*L/k, (c+1)*L/k), 0 elsewhere,
    // plus uniform noise in [0, noise * v_max].
    orthogonal_patterns,
    // Class 0 sine, class 1 square wave of the same period (L / 2) with a
    // phase jitter of up to 1/8 period; noise uniform in [-noise, noise] * v_max.
    sine_vs_square,
};

[[nodiscard]] std::string_view to_string(SyntheticKind kind) noexcept;
[[nodiscard]] SyntheticKind parse_synthetic_kind(std::string_view name);

struct SyntheticSpec
{
    SyntheticKind kind{SyntheticKind::orthogonal_patterns};
    std::size_t classes{4}; // ignored for sine-vs-square (always 2)
    std::size_t n_per_class{10};
    std::size_t length{16};
    double noise{0.0}; // fraction of v_max
    std::uint64_t seed{1};
    double v_max{255.0};
};

// Rows are emitted class-interleaved: sample 0 of every class, then sample 1,
// and so on. Values are clamped to [0, v_max].
[[nodiscard]] Dataset gen_synthetic(const SyntheticSpec &spec);

struct Split
{
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Stratified 80/20 split: each class's rows are shuffled with the seed and
// every fifth goes to test. Both index lists interleave classes round-robin
// in ascending label order.
[[nodiscard]] Split stratified_split(const Dataset &data, std::uint64_t seed);

} // namespace tnn

#endif
