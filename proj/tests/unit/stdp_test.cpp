#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "convert.hpp"
#include "oracles.hpp"
#include "tnn/column.hpp"
#include "tnn/errors.hpp"
#include "tnn/stdp.hpp"

using namespace tnn;
using testing_support::spike;
using testing_support::spikes;

namespace
{

StdpParams params(double capture, double backoff, double search)
{
    StdpParams p;
    p.mu_capture = Weight::from_double(capture);
    p.mu_backoff = Weight::from_double(backoff);
    p.mu_search = Weight::from_double(search);
    return p;
}

ColumnConfig config(std::uint32_t p, std::uint32_t q)
{
    ColumnConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.theta = 1;
    return cfg;
}

} // namespace

TEST(StdpDelta, Examples)
{
    const auto prm = params(0.5, 0.5, 0.0625);
    EXPECT_EQ(stdp_delta(spike(2), spike(4), Weight::from_double(3.0), prm, 7), Weight::from_double(3.5));
    // 6.8 is not representable; 1741 / 256 is the nearest fixed-point value.
    EXPECT_EQ(stdp_delta(spike(1), spike(5), Weight::from_raw(1741), prm, 7), Weight::from_int(7));
    EXPECT_EQ(stdp_delta(spike(-1), spike(3), Weight::from_double(0.25), prm, 7), Weight::from_int(0));
}

TEST(StdpDelta, EachCaseOfTheTable)
{
    const auto prm = params(1.0, 2.0, 0.5);
    const Weight w = Weight::from_int(4);
    EXPECT_EQ(stdp_delta(spike(3), spike(3), w, prm, 7), Weight::from_int(5));
    EXPECT_EQ(stdp_delta(spike(4), spike(3), w, prm, 7), Weight::from_int(2));
    EXPECT_EQ(stdp_delta(spike(4), spike(-1), w, prm, 7), Weight::from_double(4.5));
    EXPECT_EQ(stdp_delta(spike(-1), spike(3), w, prm, 7), Weight::from_int(2));
    EXPECT_EQ(stdp_delta(spike(-1), spike(-1), w, prm, 7), w);

    EXPECT_EQ(classify(spike(3), spike(3)), StdpCase::capture);
    EXPECT_EQ(classify(spike(4), spike(3)), StdpCase::backoff);
    EXPECT_EQ(classify(spike(4), spike(-1)), StdpCase::search);
    EXPECT_EQ(classify(spike(-1), spike(0)), StdpCase::backoff);
    EXPECT_EQ(classify(spike(-1), spike(-1)), StdpCase::no_change);
}

TEST(StdpDelta, MatchesTableWalker)
{
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<long> tick(-1, 20);
    for (int k = 0; k < 20000; ++k)
    {
        const std::uint32_t w_max = std::uniform_int_distribution<std::uint32_t>(1, 15)(gen);
        std::uniform_int_distribution<std::uint32_t> raw(0, w_max * 256);
        StdpParams prm;
        prm.mu_capture = Weight::from_raw(raw(gen));
        prm.mu_backoff = Weight::from_raw(raw(gen));
        prm.mu_search = Weight::from_raw(raw(gen));
        const long x = tick(gen);
        const long y = tick(gen);
        const Weight w = Weight::from_raw(raw(gen));
        const Weight got = stdp_delta(spike(x), spike(y), w, prm, w_max);
        ASSERT_EQ(static_cast<std::int64_t>(got.raw()),
                oracle::stdp(x, y, w.raw(), prm.mu_capture.raw(), prm.mu_backoff.raw(),
                        prm.mu_search.raw(), w_max));
        ASSERT_LE(got.raw(), w_max * 256);
    }
}

TEST(StdpParams, Validation)
{
    EXPECT_NO_THROW(params(0.5, 0.5, 0.0625).validate(7));
    EXPECT_NO_THROW(params(0, 0, 0).validate(7));
    EXPECT_THROW(params(8, 0.5, 0.5).validate(7), DomainError);
}

TEST(StdpUpdateColumn, NoWinnerNoInputsLeavesStateUnchanged)
{
    ColumnState state(config(3, 2), init_weights(3, 2, 7, UniformRandomInit{}, StdpParams{}, 0));
    const ColumnState before = state;
    const auto x = spikes({-1, -1, -1});
    stdp_update_column(state, x, column_forward(x, state), params(0.5, 0.5, 0.0625));
    EXPECT_EQ(state, before);
}

TEST(StdpUpdateColumn, NoWinnerAllInputsSearches)
{
    auto cfg = config(3, 2);
    cfg.theta = 1000;
    ColumnState state(cfg, std::vector<Weight>(6, Weight::from_double(6.9375)));
    const auto x = spikes({0, 1, 2});
    const auto out = column_forward(x, state);
    ASSERT_FALSE(out.winner);
    stdp_update_column(state, x, out, params(0.5, 0.5, 0.125));
    for (const Weight &w : state.weights())
    {
        EXPECT_EQ(w, Weight::from_int(7));
    }
}

TEST(StdpUpdateColumn, WinnerAndLoserExample)
{
    ColumnState state(config(2, 2), std::vector<Weight>(4, Weight::from_int(3)));
    const auto x = spikes({0, -1});
    ColumnOutput out;
    out.raw_fire_times = spikes({1, 2});
    out.winner = 0;
    out.post_wta_times = spikes({1, -1});
    stdp_update_column(state, x, out, params(0.5, 0.5, 0.5));
    EXPECT_EQ(state.weight(0, 0), Weight::from_double(3.5));
    EXPECT_EQ(state.weight(1, 0), Weight::from_double(2.5));
    EXPECT_EQ(state.weight(0, 1), Weight::from_double(3.5));
    EXPECT_EQ(state.weight(1, 1), Weight::from_int(3));
}

TEST(StdpUpdateColumn, MatchesCellByCellWalkAndIsLocal)
{
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 300; ++trial)
    {
        const auto p = std::uniform_int_distribution<std::uint32_t>(1, 6)(gen);
        const auto q = std::uniform_int_distribution<std::uint32_t>(1, 6)(gen);
        const StdpParams prm = params(0.5, 0.25, 0.125);
        ColumnState state(config(p, q), init_weights(p, q, 7, UniformRandomInit{}, StdpParams{}, trial));
        SpikeVector x;
        for (std::uint32_t i = 0; i < p; ++i)
        {
            x.push_back(spike(std::uniform_int_distribution<long>(-1, 7)(gen)));
        }
        const ColumnOutput out = column_forward(x, state);
        const ColumnState before = state;
        stdp_update_column(state, x, out, prm);
        for (std::uint32_t j = 0; j < q; ++j)
        {
            const long y = out.post_wta_times[j].is_absent() ? -1L : static_cast<long>(out.post_wta_times[j].tick());
            for (std::uint32_t i = 0; i < p; ++i)
            {
                const long xi = x[i].is_absent() ? -1L : static_cast<long>(x[i].tick());
                ASSERT_EQ(static_cast<std::int64_t>(state.weight(i, j).raw()),
                        oracle::stdp(xi, y, before.weight(i, j).raw(), 128, 64, 32, 7));
                if (xi == -1 && y == -1)
                {
                    ASSERT_EQ(state.weight(i, j), before.weight(i, j));
                }
            }
        }
    }
}

TEST(StdpUpdateColumn, DimensionMismatchIsAnError)
{
    ColumnState state(config(2, 2));
    const auto x = spikes({0});
    ColumnOutput out;
    out.post_wta_times = spikes({-1, -1});
    EXPECT_THROW(stdp_update_column(state, x, out, StdpParams{}), DomainError);
}

TEST(StdpConvergence, RepeatedPatternSaturatesWinnerWithinBound)
{
    // A single neuron always wins and every spiking input precedes its
    // output, so spiking inputs are captured and the silent one backed off.
    const auto prm = params(0.75, 0.5, 0.0625);
    auto cfg = config(4, 1);
    ColumnState state(cfg, std::vector<Weight>(4, Weight::from_int(1)));
    const auto x = spikes({0, 0, 0, -1});
    const int bound = static_cast<int>(std::ceil(7.0 / 0.75));
    for (int n = 0; n < bound; ++n)
    {
        const auto out = column_forward(x, state);
        ASSERT_EQ(out.winner, 0U);
        stdp_update_column(state, x, out, prm);
    }
    EXPECT_EQ(state.weight(0, 0), Weight::from_int(7));
    EXPECT_EQ(state.weight(1, 0), Weight::from_int(7));
    EXPECT_EQ(state.weight(2, 0), Weight::from_int(7));
    EXPECT_EQ(state.weight(3, 0), Weight::from_int(0));
}

TEST(InitWeights, ConstantAndUniform)
{
    const auto c = init_weights(2, 2, 7, ConstantInit{Weight::from_int(3)}, StdpParams{});
    EXPECT_EQ(c, std::vector<Weight>(4, Weight::from_int(3)));

    StdpParams prm;
    prm.seed = 42;
    const auto a = init_weights(16, 8, 7, UniformRandomInit{}, prm);
    EXPECT_EQ(a, init_weights(16, 8, 7, UniformRandomInit{}, prm));
    EXPECT_NE(a, init_weights(16, 8, 7, UniformRandomInit{}, prm, 1));
    std::vector<int> seen(8, 0);
    for (const Weight &w : a)
    {
        EXPECT_EQ(w.raw() % Weight::one, 0U);
        ASSERT_LE(w.effective_ramp(), 7U);
        ++seen[w.effective_ramp()];
    }
    for (int n : seen)
    {
        EXPECT_GT(n, 0);
    }
    prm.seed = 43;
    EXPECT_NE(a, init_weights(16, 8, 7, UniformRandomInit{}, prm));
    EXPECT_THROW((void)init_weights(0, 1, 7, UniformRandomInit{}, prm), DomainError);
}
