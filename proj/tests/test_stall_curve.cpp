#include "membw/oracles.hpp"
#include "membw/stall_curve.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace membw;
using membw::testing::example_budgets;
using membw::testing::Gen;
using membw::testing::uniform;

namespace {

Rational q(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

std::vector<Segment> segments_of(const StallCurve& c) { return {c.segments().begin(), c.segments().end()}; }

} // namespace

TEST(RawPoints, CoreThreeOfWorkedExample)
{
    const auto raw = build_raw_points(example_budgets(), Core{3});
    EXPECT_EQ(raw.stall, (std::vector<std::int64_t>{0, 3, 6, 7, 8, 11}));
    EXPECT_EQ(raw.budget(), 5);
}

TEST(RawPoints, CoreFourOfWorkedExample)
{
    const auto raw = build_raw_points(example_budgets(), Core{4});
    EXPECT_EQ(raw.stall.front(), 0);
    EXPECT_EQ(raw.stall, (std::vector<std::int64_t>{0, 3, 6, 7, 8, 9, 9, 9}));
}

TEST(RawPoints, RejectsBadCoreAndBudgets)
{
    EXPECT_THROW(build_raw_points(example_budgets(), Core{0}), ValidationError);
    EXPECT_THROW(build_raw_points(example_budgets(), Core{5}), ValidationError);
    EXPECT_THROW(BudgetVector({2, 0, 5}), ValidationError);
    EXPECT_THROW(BudgetVector(std::vector<std::int64_t>{}), ValidationError);
}

TEST(Envelope, CoreThreeIsRefined)
{
    const auto curve = concave_envelope(build_raw_points(example_budgets(), Core{3}));
    EXPECT_EQ(segments_of(curve), (std::vector<Segment>{{0, 0, 6, 2}, {2, 6, 5, 3}}));
    EXPECT_EQ(curve.segments()[0].slope(), q(3));
    EXPECT_EQ(curve.segments()[1].slope(), q(5, 3));
    EXPECT_EQ(curve.start_points(), (std::vector<std::int64_t>{0, 2}));
}

TEST(Envelope, CoreFourIsAlreadyConcave)
{
    const auto raw = build_raw_points(example_budgets(), Core{4});
    const auto curve = concave_envelope(raw);
    EXPECT_EQ(segments_of(curve), (std::vector<Segment>{{0, 0, 6, 2}, {2, 6, 3, 3}, {5, 9, 0, 2}}));
    for (std::int64_t k = 0; k <= raw.budget(); ++k)
        EXPECT_EQ(curve.eval(k), q(raw.stall[static_cast<std::size_t>(k)])) << "k=" << k;
}

TEST(Envelope, ConcaveInputIsUnchanged)
{
    RawStallPoints raw{Core{1}, {0, 4, 7, 9, 10, 10}};
    const auto curve = concave_envelope(raw);
    for (std::int64_t k = 0; k <= raw.budget(); ++k)
        EXPECT_EQ(curve.eval(k), q(raw.stall[static_cast<std::size_t>(k)]));
}

TEST(Envelope, RejectsInvalidRawPoints)
{
    EXPECT_THROW(concave_envelope(RawStallPoints{Core{1}, {1, 2}}), ValidationError);
    EXPECT_THROW(concave_envelope(RawStallPoints{Core{1}, {0, 3, 2}}), ValidationError);
    EXPECT_THROW(concave_envelope(RawStallPoints{Core{1}, {0}}), ValidationError);
}

TEST(Envelope, SingleCoreCurveIsZero)
{
    const auto curve = make_stall_curve(BudgetVector({9}), Core{1});
    ASSERT_EQ(curve.segments().size(), 1u);
    EXPECT_EQ(curve.eval(q(9)), 0);
    EXPECT_EQ(curve.eval(q(7, 2)), 0);
}

TEST(Eval, WorkedExampleValues)
{
    const auto curve = make_stall_curve(example_budgets(), Core{3});
    EXPECT_EQ(curve.eval(q(7, 2)), q(17, 2));
    EXPECT_EQ(curve.eval(q(0)), 0);
    EXPECT_EQ(curve.eval(q(5)), 11);
    EXPECT_EQ(curve.eval(q(35, 9)) * 9, q(247, 3));
    EXPECT_THROW(curve.eval(q(-1, 2)), std::out_of_range);
    EXPECT_THROW(curve.eval(q(11, 2)), std::out_of_range);
}

TEST(Eval, StallOverMatchesRateTimesPeriods)
{
    const auto curve = make_stall_curve(example_budgets(), Core{3});
    EXPECT_EQ(curve.stall_over(35, 10), 85);
    EXPECT_EQ(curve.stall_over(22, 5), 50);
    EXPECT_EQ(curve.stall_over(0, 0), 0);
    EXPECT_THROW(curve.stall_over(26, 5), std::out_of_range);
}

TEST(SegmentQueries, NextStartAndSlope)
{
    const auto c3 = make_stall_curve(example_budgets(), Core{3});
    EXPECT_EQ(c3.next_start(q(0)), 2);
    EXPECT_EQ(c3.slope_at(q(0)), 3);
    EXPECT_EQ(c3.slope_at(q(2)), q(5, 3));
    EXPECT_EQ(c3.slope_at(q(1)), 3);
    EXPECT_FALSE(c3.next_start(q(2)).has_value());
    EXPECT_FALSE(c3.next_start(q(9, 2)).has_value());
    EXPECT_EQ(c3.slope_at(q(5)), 0);
    EXPECT_THROW(c3.next_start(q(5)), std::out_of_range);

    const auto c4 = make_stall_curve(example_budgets(), Core{4});
    EXPECT_EQ(c4.slope_at(q(5)), 0);
    EXPECT_EQ(c4.next_start(q(3)), 5);
}

// --- properties over random budget vectors --------------------------------

TEST(StallCurveProperty, KinkConstructionMatchesFullEnvelope)
{
    Gen g(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(g, 1, 6));
        const auto b = membw::testing::random_budgets(g, m, 12);
        const Core c{static_cast<std::size_t>(uniform(g, 1, static_cast<std::int64_t>(m)))};
        const auto full = concave_envelope(build_raw_points(b, c));
        const auto fast = make_stall_curve(b, c);
        ASSERT_EQ(segments_of(full), segments_of(fast)) << "trial " << trial;
    }
}

TEST(StallCurveProperty, EnvelopeDominatesRawAndTouchesAtStartPoints)
{
    Gen g(12);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto b = membw::testing::random_budgets(g, 4, 10);
        const Core c{static_cast<std::size_t>(uniform(g, 1, 4))};
        const auto raw = build_raw_points(b, c);
        const auto curve = concave_envelope(raw);
        for (std::int64_t k = 0; k <= raw.budget(); ++k)
            ASSERT_GE(curve.eval(k), raw.stall[static_cast<std::size_t>(k)]);
        for (auto p : curve.start_points())
            ASSERT_EQ(curve.eval(p), raw.stall[static_cast<std::size_t>(p)]);
        // independent chord-search envelope agrees on a half-integer grid
        for (std::int64_t h = 0; h <= 2 * raw.budget(); ++h)
            ASSERT_EQ(curve.eval(q(h, 2)), oracle::envelope_at(raw, q(h, 2)));
    }
}

TEST(StallCurveProperty, Concavity)
{
    Gen g(13);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto b = membw::testing::random_budgets(g, 4, 8);
        const auto curve = make_stall_curve(b, Core{static_cast<std::size_t>(uniform(g, 1, 4))});
        const std::int64_t den = 7;
        const auto r1 = q(uniform(g, 0, curve.budget() * den), den);
        const auto r2 = q(uniform(g, 0, curve.budget() * den), den);
        const auto a = q(uniform(g, 0, 10), 10);
        const Rational mid = a * r1 + (1 - a) * r2;
        ASSERT_GE(curve.eval(mid), a * curve.eval(r1) + (1 - a) * curve.eval(r2));
    }
}

TEST(StallCurveProperty, EvenBudgetsGiveLinearStartUpToFirstRegulation)
{
    Gen g(14);
    for (int trial = 0; trial < 500; ++trial) {
        const auto m = static_cast<std::size_t>(uniform(g, 2, 6));
        const std::int64_t other = uniform(g, 1, 8);
        const std::int64_t own = uniform(g, 1, 10);
        std::vector<std::int64_t> v(m, other);
        v[0] = own;
        const auto raw = build_raw_points(BudgetVector(v), Core{1});
        for (std::int64_t k = 0; k < own && k <= other; ++k)
            ASSERT_EQ(raw.stall[static_cast<std::size_t>(k)], static_cast<std::int64_t>(m - 1) * k);
    }
}
