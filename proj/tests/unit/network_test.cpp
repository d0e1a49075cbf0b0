#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "convert.hpp"
#include "oracles.hpp"
#include "tnn/errors.hpp"
#include "tnn/network.hpp"
#include "tnn/stdp.hpp"

using namespace tnn;
using testing_support::spike;
using testing_support::spikes;

namespace
{

ColumnConfig column(std::uint32_t p, std::uint32_t q, std::uint32_t theta, std::uint32_t T = 8)
{
    ColumnConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.theta = theta;
    cfg.T = T;
    return cfg;
}

NetworkSpec single(const ColumnConfig &cfg)
{
    NetworkSpec spec;
    spec.input_width = cfg.p;
    spec.layers.push_back({{cfg}, {{0, cfg.p}}});
    return spec;
}

StdpParams params(double capture, double backoff, double search)
{
    StdpParams p;
    p.mu_capture = Weight::from_double(capture);
    p.mu_backoff = Weight::from_double(backoff);
    p.mu_search = Weight::from_double(search);
    return p;
}

// Two neurons, each listening to one input line only.
Network two_detectors()
{
    const auto cfg = column(2, 2, 1);
    ColumnState state(cfg, {Weight::from_int(1), Weight::from_int(0), Weight::from_int(0), Weight::from_int(1)});
    return Network(single(cfg), {{state}});
}

LabeledSample sample(std::initializer_list<long> x, int label)
{
    return {{spikes(x)}, label};
}

} // namespace

TEST(NetworkSpec, ValidationAtConstruction)
{
    NetworkSpec spec = single(column(4, 2, 2));
    EXPECT_NO_THROW(spec.validate());

    NetworkSpec bad = spec;
    bad.input_width = 3;
    EXPECT_THROW(bad.validate(), DomainError);

    bad = spec;
    bad.layers[0].input_map[0] = {1, 4};
    EXPECT_THROW(bad.validate(), DomainError);

    // Layer 1 needs width 2 and T covering layer 0's horizon of 15.
    bad = spec;
    bad.layers.push_back({{column(3, 1, 1, 15)}, {{0, 3}}});
    EXPECT_THROW(bad.validate(), DomainError);
    bad.layers[1] = {{column(2, 1, 1, 8)}, {{0, 2}}};
    EXPECT_THROW(bad.validate(), DomainError);
    bad.layers[1] = {{column(2, 1, 1, 15)}, {{0, 2}}};
    EXPECT_NO_THROW(bad.validate());
    EXPECT_THROW(Network(bad, {{ColumnState(column(4, 2, 2))}}), DomainError);
}

TEST(NetworkSpec, OverlappingSlicesAreAllowed)
{
    NetworkSpec spec;
    spec.input_width = 3;
    spec.layers.push_back({{column(2, 1, 1), column(2, 1, 1)}, {{0, 2}, {1, 2}}});
    EXPECT_NO_THROW(spec.validate());
    EXPECT_EQ(spec.output_width(), 2U);
}

TEST(NetworkForward, SingleColumnMatchesColumnForward)
{
    const auto cfg = column(5, 3, 6);
    const Network net(single(cfg), ConstantInit{Weight::from_int(2)}, StdpParams{});
    std::mt19937_64 gen(3);
    for (int k = 0; k < 200; ++k)
    {
        SpikeVector x;
        for (int i = 0; i < 5; ++i)
        {
            x.push_back(spike(std::uniform_int_distribution<long>(-1, 7)(gen)));
        }
        const auto out = net.forward(x);
        const auto ref = column_forward(x, net.layers()[0][0]);
        EXPECT_EQ(out[0][0].raw_fire_times, ref.raw_fire_times);
        EXPECT_EQ(out[0][0].post_wta_times, ref.post_wta_times);
        EXPECT_EQ(net.winner(x), ref.winner);
    }
}

TEST(NetworkForward, SilentInputStaysSilentEverywhere)
{
    NetworkSpec spec = single(column(4, 3, 1));
    spec.layers.push_back({{column(3, 2, 1, 15)}, {{0, 3}}});
    const Network net(spec, ConstantInit{Weight::from_int(7)}, StdpParams{});
    for (const auto &layer : net.forward(spikes({-1, -1, -1, -1})))
    {
        for (const auto &out : layer)
        {
            EXPECT_FALSE(out.winner);
            for (auto t : out.post_wta_times)
            {
                EXPECT_TRUE(t.is_absent());
            }
        }
    }
}

TEST(NetworkForward, SecondLayerFiresIffFirstLayerHasWinner)
{
    NetworkSpec spec = single(column(2, 2, 3));
    spec.layers.push_back({{column(2, 1, 1, 15)}, {{0, 2}}});
    const ColumnState l0(spec.layers[0].columns[0],
            {Weight::from_int(2), Weight::from_int(0), Weight::from_int(0), Weight::from_int(2)});
    const ColumnState l1(spec.layers[1].columns[0], {Weight::from_int(1), Weight::from_int(1)});
    const Network net(spec, {{l0}, {l1}});
    for (long a = -1; a < 8; ++a)
    {
        for (long b = -1; b < 8; ++b)
        {
            const auto x = spikes({a, b});
            const auto out = net.forward(x);
            // Each neuron sees one line whose ramp saturates at 2 < theta.
            const bool first = out[0][0].winner.has_value();
            EXPECT_FALSE(first);
            EXPECT_EQ(out[1][0].winner.has_value(), first);
        }
    }
    NetworkSpec easy = spec;
    easy.layers[0].columns[0].theta = 1;
    const ColumnState l0e(easy.layers[0].columns[0], std::vector<Weight>(l0.weights().begin(), l0.weights().end()));
    const Network net2(easy, {{l0e}, {l1}});
    for (long a = -1; a < 8; ++a)
    {
        for (long b = -1; b < 8; ++b)
        {
            const auto out = net2.forward(spikes({a, b}));
            EXPECT_EQ(out[0][0].winner.has_value(), a >= 0 || b >= 0);
            EXPECT_EQ(out[1][0].winner.has_value(), out[0][0].winner.has_value());
            if (out[0][0].winner)
            {
                const auto winner_time = out[0][0].post_wta_times[*out[0][0].winner].tick();
                EXPECT_EQ(out[1][0].post_wta_times[0], SpikeTime::at(winner_time + 1));
            }
        }
    }
}

TEST(NetworkForward, WidthMismatchIsAnError)
{
    const Network net(single(column(3, 1, 1)), ConstantInit{}, StdpParams{});
    EXPECT_THROW((void)net.forward(spikes({0, 1})), DomainError);
}

TEST(Train, ZeroStepSizesLeaveWeightsUnchanged)
{
    Network net(single(column(6, 3, 4)), UniformRandomInit{}, StdpParams{});
    const Network before = net;
    const std::vector<SpikeVector> data{spikes({0, 1, 2, 3, 4, 5}), spikes({5, -1, 3, -1, 1, 0})};
    const TrainLog log = train(net, data, params(0, 0, 0), 3);
    EXPECT_EQ(net, before);
    ASSERT_EQ(log.entries.size(), 3U);
    for (const auto &e : log.entries)
    {
        EXPECT_EQ(e.weight_change_l1, 0.0);
    }
}

TEST(Train, RepeatedSampleFollowsHandWalkedTable)
{
    const auto cfg = column(2, 1, 3);
    Network net(single(cfg), ConstantInit{Weight::from_int(1)}, StdpParams{});
    const auto x = spikes({0, 2});
    const std::vector<SpikeVector> data{x};
    const auto prm = params(0.5, 0.25, 0.125);

    std::vector<std::int64_t> w{256, 256};
    for (int epoch = 0; epoch < 12; ++epoch)
    {
        (void)train(net, data, prm, 1);
        const long y = oracle::fire_time({0, 2}, {w[0] >> 8, w[1] >> 8}, 3, cfg.H(), false);
        w[0] = oracle::stdp(0, y, w[0], 128, 64, 32, 7);
        w[1] = oracle::stdp(2, y, w[1], 128, 64, 32, 7);
        ASSERT_EQ(static_cast<std::int64_t>(net.layers()[0][0].weight(0, 0).raw()), w[0]) << epoch;
        ASSERT_EQ(static_cast<std::int64_t>(net.layers()[0][0].weight(1, 0).raw()), w[1]) << epoch;
    }
}

TEST(Train, ConstantDatasetConvergesToZeroChange)
{
    Network net(single(column(4, 2, 4)), ConstantInit{Weight::from_int(2)}, StdpParams{});
    // Every spiking input precedes the output, so the winner only captures
    // and backs off while the loser searches until it saturates too.
    const std::vector<SpikeVector> data(5, spikes({0, 0, 0, -1}));
    const TrainLog log = train(net, data, params(0.5, 0.5, 0.0625), 25);
    ASSERT_EQ(log.entries.size(), 25U);
    for (std::size_t e = 1; e < log.entries.size(); ++e)
    {
        EXPECT_LE(log.entries[e].weight_change_l1, log.entries[e - 1].weight_change_l1);
    }
    EXPECT_EQ(log.entries.back().weight_change_l1, 0.0);
}

TEST(Train, EmptyDataOrZeroEpochsIsAnError)
{
    Network net(single(column(2, 1, 1)), ConstantInit{}, StdpParams{});
    EXPECT_THROW((void)train(net, std::vector<SpikeVector>{}, StdpParams{}, 1), DomainError);
    EXPECT_THROW((void)train(net, std::vector<SpikeVector>{spikes({0, 0})}, StdpParams{}, 0), DomainError);
}

TEST(Train, GreedyLayerWiseAndFrozenLayers)
{
    NetworkSpec spec = single(column(6, 3, 4));
    spec.layers.push_back({{column(3, 2, 2, 15)}, {{0, 3}}});
    StdpParams prm = params(0.5, 0.25, 0.125);
    prm.seed = 9;
    std::mt19937_64 gen(1);
    std::vector<SpikeVector> data;
    for (int k = 0; k < 20; ++k)
    {
        SpikeVector x;
        for (int i = 0; i < 6; ++i)
        {
            x.push_back(spike(std::uniform_int_distribution<long>(-1, 7)(gen)));
        }
        data.push_back(x);
    }

    Network full(spec, UniformRandomInit{}, prm);
    const Network initial = full;
    const TrainLog log = train(full, data, prm, 4);
    ASSERT_EQ(log.entries.size(), 8U);
    EXPECT_EQ(log.entries[0].layer, 0U);
    EXPECT_EQ(log.entries[7].layer, 1U);

    // Layer 0 alone, same init: layer 1's training never touched it.
    Network first(single(spec.layers[0].columns[0]), UniformRandomInit{}, prm);
    (void)train(first, data, prm, 4);
    EXPECT_EQ(full.layers()[0][0], first.layers()[0][0]);

    // Layer 1 replayed by hand on frozen layer-0 outputs.
    ColumnState second = initial.layers()[1][0];
    for (int epoch = 0; epoch < 4; ++epoch)
    {
        for (const auto &x : data)
        {
            const auto mid = column_forward(x, first.layers()[0][0]).post_wta_times;
            stdp_update_column(second, mid, column_forward(mid, second), prm);
        }
    }
    EXPECT_EQ(full.layers()[1][0], second);
}

TEST(Train, ReproducibleForFixedSeed)
{
    NetworkSpec spec = single(column(8, 4, 6));
    StdpParams prm;
    prm.seed = 123;
    std::vector<SpikeVector> data;
    for (long k = 0; k < 8; ++k)
    {
        data.push_back(spikes({k % 8, (k + 3) % 8, -1, 2, (7 * k) % 8, 1, -1, k % 3}));
    }
    Network a(spec, UniformRandomInit{}, prm);
    Network b(spec, UniformRandomInit{}, prm);
    (void)train(a, data, prm, 5);
    (void)train(b, data, prm, 5);
    EXPECT_EQ(a, b);
}

TEST(LabelNeurons, MajorityTiesAndReject)
{
    const Network net = two_detectors();
    const std::vector<LabeledSample> only_three{sample({0, -1}, 3), sample({1, -1}, 3)};
    EXPECT_EQ(label_neurons(net, only_three), (LabelMap{3, reject_label}));

    std::vector<LabeledSample> tie;
    for (int k = 0; k < 5; ++k)
    {
        tie.push_back(sample({-1, 0}, 7));
        tie.push_back(sample({-1, 0}, 2));
    }
    EXPECT_EQ(label_neurons(net, tie), (LabelMap{reject_label, 2}));
}

TEST(SampleWinner, MajorityOverWindows)
{
    const Network net = two_detectors();
    LabeledSample s{{spikes({-1, 0}), spikes({0, -1}), spikes({-1, 2}), spikes({-1, -1})}, 0};
    EXPECT_EQ(sample_winner(net, s), 1U);
    s.windows = {spikes({-1, 0}), spikes({0, -1})};
    EXPECT_EQ(sample_winner(net, s), 0U);
    s.windows = {spikes({-1, -1}), spikes({-1, -1})};
    EXPECT_FALSE(sample_winner(net, s));
}

TEST(Evaluate, SeparableSetIsPerfect)
{
    const Network net = two_detectors();
    const std::vector<LabeledSample> data{sample({0, -1}, 0), sample({-1, 0}, 1), sample({2, -1}, 0),
            sample({-1, 5}, 1)};
    const EvalReport r = evaluate(net, data, label_neurons(net, data));
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.purity, 1.0);
    EXPECT_EQ(r.samples, 4U);
    EXPECT_EQ(r.confusion, (std::vector<std::vector<std::size_t>>{{2, 0}, {0, 2}}));
}

TEST(Evaluate, SilentNetworkScoresZero)
{
    const Network net(single(column(2, 2, 1)), ConstantInit{}, StdpParams{});
    const std::vector<LabeledSample> data{sample({0, 1}, 0), sample({1, 0}, 1)};
    const LabelMap labels = label_neurons(net, data);
    EXPECT_EQ(labels, (LabelMap{reject_label, reject_label}));
    const EvalReport r = evaluate(net, data, labels);
    EXPECT_EQ(r.accuracy, 0.0);
    EXPECT_EQ(r.purity, 0.0);
    EXPECT_EQ(r.no_winner, (std::vector<std::size_t>{1, 1}));

    const EvalReport empty = evaluate(net, std::vector<LabeledSample>{}, labels);
    EXPECT_EQ(empty.accuracy, 0.0);
    EXPECT_EQ(empty.purity, 0.0);
}

TEST(Evaluate, BookkeepingAndPurityBoundOnRandomWinners)
{
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 300; ++trial)
    {
        const std::size_t outputs = std::uniform_int_distribution<std::size_t>(1, 6)(gen);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(gen);
        std::vector<std::optional<std::size_t>> winners;
        std::vector<int> truth;
        for (std::size_t s = 0; s < n; ++s)
        {
            const auto w = std::uniform_int_distribution<long>(-1, static_cast<long>(outputs) - 1)(gen);
            winners.push_back(w < 0 ? std::nullopt : std::optional<std::size_t>(w));
            truth.push_back(std::uniform_int_distribution<int>(0, 3)(gen));
        }
        // Majority labels, built by hand.
        LabelMap labels(outputs, reject_label);
        for (std::size_t j = 0; j < outputs; ++j)
        {
            std::map<int, int> count;
            for (std::size_t s = 0; s < n; ++s)
            {
                if (winners[s] == j)
                {
                    ++count[truth[s]];
                }
            }
            int best = 0;
            for (auto [label, c] : count)
            {
                if (c > best)
                {
                    best = c;
                    labels[j] = label;
                }
            }
        }
        const EvalReport r = evaluate_winners(winners, truth, outputs, labels);
        EXPECT_GE(r.purity + 1e-12, r.accuracy);
        EXPECT_LE(r.purity, 1.0);
        std::map<int, std::size_t> per_class;
        for (int t : truth)
        {
            ++per_class[t];
        }
        for (std::size_t row = 0; row < r.classes.size(); ++row)
        {
            std::size_t sum = r.no_winner[row];
            for (auto c : r.confusion[row])
            {
                sum += c;
            }
            EXPECT_EQ(sum, per_class[r.classes[row]]);
        }
        for (std::size_t j = 0; j < outputs; ++j)
        {
            std::size_t column_sum = 0;
            for (const auto &row : r.confusion)
            {
                column_sum += row[j];
            }
            std::size_t wins = 0;
            for (const auto &w : winners)
            {
                wins += w == j;
            }
            EXPECT_EQ(column_sum, wins);
        }
    }
}
