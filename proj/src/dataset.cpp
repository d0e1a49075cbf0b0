#include "tnn/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "tnn/errors.hpp"
#include "tnn/rng.hpp"

namespace tnn
{

std::string_view to_string(DatasetFormat format) noexcept
{
    return format == DatasetFormat::csv_labeled ? "csv-labeled" : "ucr-tsv";
}

DatasetFormat parse_dataset_format(std::string_view name)
{
    if (name == "csv-labeled")
    {
        return DatasetFormat::csv_labeled;
    }
    if (name == "ucr-tsv")
    {
        return DatasetFormat::ucr_tsv;
    }
    throw ConfigError("unknown dataset format '" + std::string(name) +
            "' (expected csv-labeled or ucr-tsv)");
}

namespace
{

std::string_view trim(std::string_view s)
{
    const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && space(s.front()))
    {
        s.remove_prefix(1);
    }
    while (!s.empty() && space(s.back()))
    {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, std::size_t line)
{
    field = trim(field);
    if (!field.empty() && field.front() == '+')
    {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
            !std::isfinite(value))
    {
        throw DataError("line " + std::to_string(line) + ": non-numeric field '" +
                std::string(field) + "'");
    }
    return value;
}

} // namespace

Dataset parse_dataset(std::string_view text, DatasetFormat format, bool header)
{
    const char sep = format == DatasetFormat::csv_labeled ? ',' : '\t';
    Dataset data;
    std::size_t line_no = 0;
    bool skipped_header = !header;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (trim(line).empty())
        {
            continue;
        }
        if (!skipped_header)
        {
            skipped_header = true;
            continue;
        }
        if (format == DatasetFormat::ucr_tsv)
        {
            line = trim(line);
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true)
        {
            const std::size_t cut = line.find(sep, start);
            fields.push_back(line.substr(start, cut == std::string_view::npos ? cut : cut - start));
            if (cut == std::string_view::npos)
            {
                break;
            }
            start = cut + 1;
        }
        if (fields.size() < 2)
        {
            throw DataError("line " + std::to_string(line_no) + ": expected a label and at least one value");
        }
        const double label = parse_number(fields[0], line_no);
        if (std::floor(label) != label || std::abs(label) > 1e9)
        {
            throw DataError("line " + std::to_string(line_no) + ": label '" +
                    std::string(trim(fields[0])) + "' is not an integer");
        }
        LabeledRow row;
        row.label = static_cast<int>(label);
        row.values.reserve(fields.size() - 1);
        for (std::size_t k = 1; k < fields.size(); ++k)
        {
            row.values.push_back(parse_number(fields[k], line_no));
        }
        if (!data.rows.empty() && row.values.size() != data.width())
        {
            throw DataError("line " + std::to_string(line_no) + ": ragged row with " +
                    std::to_string(row.values.size()) + " values, expected " +
                    std::to_string(data.width()));
        }
        data.rows.push_back(std::move(row));
    }
    if (data.rows.empty())
    {
        throw DataError("no data rows");
    }
    return data;
}

Dataset load_dataset(const std::filesystem::path &path, DatasetFormat format, bool header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw DataError("cannot open dataset " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try
    {
        return parse_dataset(buffer.str(), format, header);
    }
    catch (const DataError &e)
    {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_dataset(std::ostream &out, const Dataset &data, DatasetFormat format)
{
    const char sep = format == DatasetFormat::csv_labeled ? ',' : '\t';
    std::array<char, 64> buf{};
    for (const LabeledRow &row : data.rows)
    {
        out << row.label;
        for (const double v : row.values)
        {
            const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            out << sep << std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data()));
        }
        out << '\n';
    }
}

std::string_view to_string(SyntheticKind kind) noexcept
{
    return kind == SyntheticKind::orthogonal_patterns ? "orthogonal-patterns" : "sine-vs-square";
}

SyntheticKind parse_synthetic_kind(std::string_view name)
{
    if (name == "orthogonal-patterns")
    {
        return SyntheticKind::orthogonal_patterns;
    }
    if (name == "sine-vs-square")
    {
        return SyntheticKind::sine_vs_square;
    }
    throw ConfigError("unknown synthetic dataset '" + std::string(name) + "'");
}

Dataset gen_synthetic(const SyntheticSpec &spec)
{
    const std::size_t classes =
            spec.kind == SyntheticKind::sine_vs_square ? 2 : spec.classes;
    if (classes == 0 || spec.n_per_class == 0 || spec.length == 0 || spec.noise < 0.0 ||
            !(spec.v_max > 0.0))
    {
        throw ConfigError("synthetic dataset parameters must be positive");
    }
    if (spec.kind == SyntheticKind::orthogonal_patterns && spec.length < classes)
    {
        throw ConfigError("orthogonal patterns need length >= classes");
    }
    Rng rng(spec.seed);
    const double amplitude = spec.noise * spec.v_max;
    const auto clamp = [&](double v) { return std::clamp(v, 0.0, spec.v_max); };
    const double period = std::max(2.0, static_cast<double>(spec.length) / 2.0);

    Dataset data;
    for (std::size_t n = 0; n < spec.n_per_class; ++n)
    {
        for (std::size_t c = 0; c < classes; ++c)
        {
            LabeledRow row;
            row.label = static_cast<int>(c);
            row.values.resize(spec.length);
            if (spec.kind == SyntheticKind::orthogonal_patterns)
            {
                const std::size_t chunk = spec.length / classes;
                for (std::size_t i = 0; i < spec.length; ++i)
                {
                    const bool on = i >= c * chunk && i < (c + 1) * chunk;
                    row.values[i] = clamp((on ? spec.v_max : 0.0) + amplitude * rng.unit());
                }
            }
            else
            {
                // Phase jitter of up to an eighth of a period either way.
                const double phase = std::numbers::pi * 0.25 * (2.0 * rng.unit() - 1.0);
                for (std::size_t i = 0; i < spec.length; ++i)
                {
                    const double s = std::sin(
                            2.0 * std::numbers::pi * static_cast<double>(i) / period + phase);
                    const double clean = c == 0 ? spec.v_max * 0.5 * (1.0 + s)
                                                : (s >= 0.0 ? spec.v_max : 0.0);
                    row.values[i] = clamp(clean + amplitude * (2.0 * rng.unit() - 1.0));
                }
            }
            data.rows.push_back(std::move(row));
        }
    }
    return data;
}

Split stratified_split(const Dataset &data, std::uint64_t seed)
{
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t k = 0; k < data.rows.size(); ++k)
    {
        by_class[data.rows[k].label].push_back(k);
    }
    Rng rng(seed ^ 0x5EEDC0DE5EEDC0DEULL);
    std::vector<std::vector<std::size_t>> train_lists;
    std::vector<std::vector<std::size_t>> test_lists;
    for (auto &[label, indices] : by_class)
    {
        // Fisher-Yates with the deterministic bounded draw.
        for (std::size_t k = indices.size(); k > 1; --k)
        {
            std::swap(indices[k - 1], indices[rng.below(k)]);
        }
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t k = 0; k < indices.size(); ++k)
        {
            (k % 5 == 4 ? test : train).push_back(indices[k]);
        }
        train_lists.push_back(std::move(train));
        test_lists.push_back(std::move(test));
    }
    const auto interleave = [](const std::vector<std::vector<std::size_t>> &lists) {
        std::vector<std::size_t> out;
        for (std::size_t round = 0;; ++round)
        {
            bool any = false;
            for (const auto &list : lists)
            {
                if (round < list.size())
                {
                    out.push_back(list[round]);
                    any = true;
                }
            }
            if (!any)
            {
                return out;
            }
        }
    };
    return {interleave(train_lists), interleave(test_lists)};
}

} // namespace tnn
