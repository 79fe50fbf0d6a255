#pragma once

/// @file stall_curve.hpp
/// @brief Per-core memory-stall curves under a fixed budget vector.
///
/// For the core under analysis with budget q, the raw stall I(k) is the
/// worst-case number of L_max slots the core is stalled during a regulation
/// period in which it issues k transactions:
///
///     I(k) = sum_{j != i} min(k, q_j)    for k < q
///     I(q) = Q - q                        (core regulated for the rest of P)
///
/// The raw points are not concave in general. StallCurve holds their upper
/// concave envelope as a table of segments whose endpoints are integer
/// points of the raw curve, so every segment has an integer start, an
/// integer start value and a rational slope rise/run.

#include "membw/errors.hpp"
#include "membw/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace membw {

/// 1-based core index, as used in scenario files and on the command line.
struct Core
{
    std::size_t index = 1;

    std::size_t offset() const { return index - 1; }
    friend bool operator==(Core, Core) = default;
};

/// Budgets q_1..q_m of one regulation interval. Q is their sum.
class BudgetVector
{
public:
    BudgetVector() = default;

    explicit BudgetVector(std::vector<std::int64_t> budgets) : budgets_(std::move(budgets))
    {
        // m == 1 is accepted here (curve is identically zero); scenario
        // validation rejects it.
        detail::require(!budgets_.empty(), "budget vector must have at least one core");
        for (std::size_t i = 0; i < budgets_.size(); ++i)
            detail::require(budgets_[i] >= 1, "budget q_" + std::to_string(i + 1) + " must be >= 1");
        total_ = std::accumulate(budgets_.begin(), budgets_.end(), std::int64_t{0});
    }

    std::size_t cores() const { return budgets_.size(); }
    std::int64_t total() const { return total_; }
    std::int64_t operator[](Core c) const { return budgets_.at(c.offset()); }
    std::span<const std::int64_t> values() const { return budgets_; }

    bool contains(Core c) const { return c.index >= 1 && c.index <= budgets_.size(); }

    friend bool operator==(const BudgetVector&, const BudgetVector&) = default;

private:
    std::vector<std::int64_t> budgets_;
    std::int64_t total_ = 0;
};

/// I(0..q) for one core; stall[k] is the worst-case stall with k accesses.
struct RawStallPoints
{
    Core core;
    std::vector<std::int64_t> stall;

    std::int64_t budget() const { return static_cast<std::int64_t>(stall.size()) - 1; }
};

/// One linear piece of a stall curve, from (start, value) to
/// (start + run, value + rise).
struct Segment
{
    std::int64_t start = 0;
    std::int64_t value = 0;
    std::int64_t rise = 0;
    std::int64_t run = 1;

    std::int64_t width() const { return run; }
    Rational slope() const { return make_rational(rise, run); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

namespace detail {

struct Point
{
    std::int64_t x;
    std::int64_t y;
};

/// Sign of the turn o -> a -> b; positive for counter-clockwise.
inline __int128 cross(const Point& o, const Point& a, const Point& b)
{
    return static_cast<__int128>(a.x - o.x) * (b.y - o.y) -
           static_cast<__int128>(a.y - o.y) * (b.x - o.x);
}

/// Upper hull of points sorted by strictly increasing x, collinear
/// interior points dropped (monotone chain).
inline std::vector<Point> upper_hull(std::span<const Point> pts)
{
    std::vector<Point> hull;
    hull.reserve(pts.size());
    for (const auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

inline std::vector<Segment> segments_from_hull(std::span<const Point> hull)
{
    std::vector<Segment> segs;
    segs.reserve(hull.size());
    for (std::size_t k = 0; k + 1 < hull.size(); ++k)
        segs.push_back({hull[k].x, hull[k].y, hull[k + 1].y - hull[k].y, hull[k + 1].x - hull[k].x});
    return segs;
}

} // namespace detail

/// Concave piecewise-linear stall-rate curve Ī(r) on [0, q].
class StallCurve
{
public:
    StallCurve() = default;

    StallCurve(Core core, std::int64_t budget, std::vector<Segment> segments)
        : core_(core), budget_(budget), segments_(std::move(segments))
    {
        detail::require(budget_ >= 1, "stall curve domain must be [0, q] with q >= 1");
        if (segments_.empty()) {
            // identically zero curve (single core)
            segments_.push_back({0, 0, 0, budget_});
        }
        std::int64_t expect = 0;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            const auto& s = segments_[k];
            detail::require(s.start == expect && s.run > 0, "segments must tile [0, q]");
            if (k == 0)
                detail::require(s.value == 0, "curve must start at zero");
            else {
                const auto& p = segments_[k - 1];
                detail::require(s.value == p.value + p.rise, "segments must be continuous");
                detail::require(static_cast<__int128>(s.rise) * p.run <
                                    static_cast<__int128>(p.rise) * s.run,
                                "slopes must be strictly decreasing");
            }
            expect += s.run;
        }
        detail::require(expect == budget_, "segments must tile [0, q]");
    }

    Core core() const { return core_; }
    std::int64_t budget() const { return budget_; }
    std::span<const Segment> segments() const { return segments_; }

    std::vector<std::int64_t> start_points() const
    {
        std::vector<std::int64_t> out;
        out.reserve(segments_.size());
        for (const auto& s : segments_)
            out.push_back(s.start);
        return out;
    }

    /// Ī(r) for 0 <= r <= q.
    Rational eval(const Rational& r) const
    {
        check_domain(r);
        const Segment& s = segments_[segment_index(r)];
        return Rational(s.value) + s.slope() * (r - s.start);
    }

    Rational eval(std::int64_t r) const { return eval(Rational(static_cast<long>(r))); }

    /// Ī(mu / periods) * periods without forming the rate; needs
    /// 0 <= mu <= periods * q. Zero periods yields zero stall.
    Rational stall_over(std::int64_t mu, std::int64_t periods) const
    {
        if (periods == 0)
            return Rational(0);
        if (mu < 0 || mu > periods * budget_)
            throw std::out_of_range("memory rate outside [0, q]");
        const Segment& s = segments_[segment_index(mu, periods)];
        // periods * (value + rise/run * (mu/periods - start))
        Rational out = make_rational(s.rise, s.run);
        out *= static_cast<long>(mu - s.start * periods);
        out += static_cast<long>(s.value * periods);
        return out;
    }

    /// Smallest start point strictly above r; std::nullopt once r is at or
    /// beyond the last start point (saturated).
    std::optional<std::int64_t> next_start(const Rational& r) const
    {
        if (r < 0 || r >= budget_)
            throw std::out_of_range("next_start requires 0 <= r < q");
        for (const auto& s : segments_)
            if (r < s.start)
                return s.start;
        return std::nullopt;
    }

    /// Slope of the segment containing r; the segment starting at r when r
    /// is a start point, and 0 at r = q.
    Rational slope_at(const Rational& r) const
    {
        check_domain(r);
        if (r == budget_)
            return Rational(0);
        return segments_[segment_index(r)].slope();
    }

    /// Index of the segment containing mu / periods (integer test only).
    std::size_t segment_index(std::int64_t mu, std::int64_t periods) const
    {
        // last segment whose start * periods <= mu
        auto it = std::upper_bound(segments_.begin(), segments_.end(), mu,
                                   [periods](std::int64_t m, const Segment& s) {
                                       return m < s.start * periods;
                                   });
        return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
    }

private:
    void check_domain(const Rational& r) const
    {
        if (r < 0 || r > budget_)
            throw std::out_of_range("memory rate " + to_string(r) + " outside [0, " +
                                    std::to_string(budget_) + "]");
    }

    std::size_t segment_index(const Rational& r) const
    {
        std::size_t idx = 0;
        while (idx + 1 < segments_.size() && r >= segments_[idx + 1].start)
            ++idx;
        return idx;
    }

    Core core_{};
    std::int64_t budget_ = 1;
    std::vector<Segment> segments_;
};

inline RawStallPoints build_raw_points(const BudgetVector& budgets, Core core)
{
    if (!budgets.contains(core))
        throw ValidationError("core index " + std::to_string(core.index) + " outside [1, " +
                              std::to_string(budgets.cores()) + "]");
    const std::int64_t q = budgets[core];
    RawStallPoints raw{core, std::vector<std::int64_t>(static_cast<std::size_t>(q) + 1, 0)};
    for (std::int64_t k = 0; k < q; ++k) {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < budgets.cores(); ++j)
            if (j != core.offset())
                sum += std::min(k, budgets.values()[j]);
        raw.stall[static_cast<std::size_t>(k)] = sum;
    }
    raw.stall.back() = budgets.total() - q;
    return raw;
}

inline void validate(const RawStallPoints& raw)
{
    detail::require(raw.stall.size() >= 2, "raw stall points must cover k = 0..q with q >= 1");
    detail::require(raw.stall.front() == 0, "raw stall points must satisfy I(0) = 0");
    for (std::size_t k = 1; k < raw.stall.size(); ++k)
        detail::require(raw.stall[k] >= raw.stall[k - 1], "raw stall points must be non-decreasing");
}

/// Upper concave envelope of the raw points.
inline StallCurve concave_envelope(const RawStallPoints& raw)
{
    validate(raw);
    std::vector<detail::Point> pts;
    pts.reserve(raw.stall.size());
    for (std::size_t k = 0; k < raw.stall.size(); ++k)
        pts.push_back({static_cast<std::int64_t>(k), raw.stall[k]});
    const auto hull = detail::upper_hull(pts);
    return StallCurve(raw.core, raw.budget(), detail::segments_from_hull(hull));
}

/// Same curve as concave_envelope(build_raw_points(budgets, core)), built
/// from the O(m) kinks of the raw curve instead of all q + 1 points.
inline StallCurve make_stall_curve(const BudgetVector& budgets, Core core)
{
    if (!budgets.contains(core))
        throw ValidationError("core index " + std::to_string(core.index) + " outside [1, " +
                              std::to_string(budgets.cores()) + "]");
    const std::int64_t q = budgets[core];
    auto interference = [&](std::int64_t k) {
        std::int64_t sum = 0;
        for (std::size_t j = 0; j < budgets.cores(); ++j)
            if (j != core.offset())
                sum += std::min(k, budgets.values()[j]);
        return sum;
    };

    std::vector<std::int64_t> xs{0, q - 1};
    for (std::size_t j = 0; j < budgets.cores(); ++j)
        if (j != core.offset() && budgets.values()[j] < q - 1)
            xs.push_back(budgets.values()[j]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<detail::Point> pts;
    pts.reserve(xs.size() + 1);
    for (auto x : xs)
        pts.push_back({x, interference(x)});
    pts.push_back({q, budgets.total() - q});
    const auto hull = detail::upper_hull(pts);
    return StallCurve(core, q, detail::segments_from_hull(hull));
}

} // namespace membw
