#include "tnn/explore.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "tnn/errors.hpp"
#include "tnn/pipeline.hpp"

namespace tnn
{

using nlohmann::json;

namespace
{

const std::set<std::string> &known_knobs()
{
    static const std::set<std::string> knobs{"p", "q", "theta", "T", "w_max", "mu_capture",
            "mu_backoff", "mu_search", "epochs"};
    return knobs;
}

std::uint32_t positive_int(const std::string &knob, double v)
{
    if (!(v >= 1.0) || std::floor(v) != v || v > 1e9)
    {
        throw ConfigError(knob + " must be a positive integer, got " + std::to_string(v));
    }
    return static_cast<std::uint32_t>(v);
}

Weight step_size(const std::string &knob, double v)
{
    try
    {
        return Weight::from_double(v);
    }
    catch (const DomainError &e)
    {
        throw ConfigError(knob + ": " + e.what());
    }
}

} // namespace

SweepSpec parse_sweep(const json &doc)
{
    SweepSpec sweep;
    try
    {
        sweep.cap = doc.value("cap", std::size_t{256});
        const json &axes = doc.contains("axes") ? doc.at("axes") : doc;
        for (const auto &[knob, values] : axes.items())
        {
            if (knob == "cap")
            {
                continue;
            }
            if (known_knobs().count(knob) == 0)
            {
                throw ConfigError("unknown sweep knob '" + knob + "'");
            }
            if (!values.is_array() || values.empty())
            {
                throw ConfigError("sweep knob '" + knob + "' needs a nonempty list");
            }
            sweep.axes[knob] = values.get<std::vector<double>>();
        }
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("malformed sweep: ") + e.what());
    }
    if (sweep.axes.empty())
    {
        throw ConfigError("sweep has no axes");
    }
    std::size_t product = 1;
    for (const auto &[knob, values] : sweep.axes)
    {
        product *= values.size();
        if (product > sweep.cap)
        {
            throw ConfigError("sweep has more than " + std::to_string(sweep.cap) + " candidates");
        }
    }
    return sweep;
}

std::vector<std::map<std::string, double>> sweep_points(const SweepSpec &sweep)
{
    std::vector<std::map<std::string, double>> points{{}};
    for (const auto &[knob, values] : sweep.axes)
    {
        std::vector<std::map<std::string, double>> next;
        next.reserve(points.size() * values.size());
        for (const auto &point : points)
        {
            for (const double v : values)
            {
                auto extended = point;
                extended[knob] = v;
                next.push_back(std::move(extended));
            }
        }
        points = std::move(next);
    }
    return points;
}

RunConfig apply_candidate(const RunConfig &base, const std::map<std::string, double> &point)
{
    RunConfig cfg = base;
    auto &layers = cfg.network.layers;
    for (const auto &[knob, v] : point)
    {
        if (knob == "p")
        {
            if (layers.front().columns.size() != 1)
            {
                throw ConfigError("sweeping p needs a single-column first layer");
            }
            const std::uint32_t p = positive_int(knob, v);
            layers.front().columns.front().p = p;
            layers.front().input_map.front() = {0, p};
            cfg.network.input_width = p;
        }
        else if (knob == "q")
        {
            for (ColumnConfig &col : layers.back().columns)
            {
                col.q = positive_int(knob, v);
            }
        }
        else if (knob == "theta" || knob == "w_max")
        {
            for (LayerSpec &layer : layers)
            {
                for (ColumnConfig &col : layer.columns)
                {
                    (knob == "theta" ? col.theta : col.w_max) = positive_int(knob, v);
                }
            }
        }
        else if (knob == "T")
        {
            cfg.encoder.T = positive_int(knob, v);
            for (ColumnConfig &col : layers.front().columns)
            {
                col.T = cfg.encoder.T;
            }
        }
        else if (knob == "mu_capture")
        {
            cfg.learning.mu_capture = step_size(knob, v);
        }
        else if (knob == "mu_backoff")
        {
            cfg.learning.mu_backoff = step_size(knob, v);
        }
        else if (knob == "mu_search")
        {
            cfg.learning.mu_search = step_size(knob, v);
        }
        else if (knob == "epochs")
        {
            cfg.epochs = positive_int(knob, v);
        }
        else
        {
            throw ConfigError("unknown sweep knob '" + knob + "'");
        }
    }
    return cfg;
}

std::vector<std::size_t> pareto_front(std::span<const DesignPoint> points)
{
    const auto dominates = [](const DesignPoint &a, const DesignPoint &b) {
        return a.accuracy >= b.accuracy && a.power_mw <= b.power_mw &&
                (a.accuracy > b.accuracy || a.power_mw < b.power_mw);
    };
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
        {
            dominated = j != i && dominates(points[j], points[i]);
        }
        if (!dominated)
        {
            front.push_back(i);
        }
    }
    return front;
}

ExploreReport explore(const SweepSpec &sweep, const RunConfig &base, std::size_t threads)
{
    const auto points = sweep_points(sweep);
    if (points.size() > sweep.cap)
    {
        throw ConfigError("sweep has more than " + std::to_string(sweep.cap) + " candidates");
    }
    ExploreReport report;
    report.candidates.resize(points.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < points.size(); k = next++)
        {
            CandidateResult &slot = report.candidates[k];
            slot.index = k;
            slot.params = points[k];
            try
            {
                RunConfig cfg = apply_candidate(base, points[k]);
                std::ostringstream dir;
                dir << 'c' << std::setw(3) << std::setfill('0') << k;
                cfg.out_dir = base.out_dir / "candidates" / dir.str();
                PipelineOptions options;
                options.emit_netlists = false;
                const PipelineResult result = run_pipeline(cfg, options);
                slot.metrics = DesignPoint{result.eval.accuracy, result.ppa->power_mw};
            }
            catch (const std::exception &e)
            {
                slot.error = e.what();
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(threads, points.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread &t : pool)
    {
        t.join();
    }

    std::vector<DesignPoint> metrics;
    std::vector<std::size_t> owner;
    for (const CandidateResult &c : report.candidates)
    {
        if (c.metrics)
        {
            metrics.push_back(*c.metrics);
            owner.push_back(c.index);
        }
    }
    for (const std::size_t k : pareto_front(metrics))
    {
        report.front.push_back(owner[k]);
    }
    return report;
}

json to_json(const ExploreReport &report)
{
    json candidates = json::array();
    for (const CandidateResult &c : report.candidates)
    {
        json entry{{"index", c.index}, {"params", c.params}};
        if (c.metrics)
        {
            entry["accuracy"] = c.metrics->accuracy;
            entry["power_mw"] = c.metrics->power_mw;
            entry["error"] = nullptr;
        }
        else
        {
            entry["accuracy"] = nullptr;
            entry["power_mw"] = nullptr;
            entry["error"] = c.error;
        }
        candidates.push_back(entry);
    }
    return {{"objectives", {"maximize accuracy", "minimize power_mw"}},
            {"candidates", candidates}, {"front", report.front}};
}

std::size_t sweep_threads()
{
    if (const char *env = std::getenv("TNN_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
        {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

} // namespace tnn
