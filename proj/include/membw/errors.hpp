#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace membw {

/// Input violates a model invariant. what() names the invariant.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A span does not fit in a memory schedule whose intervals are all bounded.
class ScheduleExhausted : public std::runtime_error
{
public:
    explicit ScheduleExhausted(std::int64_t shortfall)
        : std::runtime_error("schedule exhausted: span exceeds schedule by " +
                             std::to_string(shortfall) + " period(s)"),
          shortfall_(shortfall)
    {
    }

    std::int64_t shortfall() const noexcept { return shortfall_; }

private:
    std::int64_t shortfall_;
};

/// A brute-force oracle was asked to enumerate more than it is guarded for.
class InstanceTooLarge : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& invariant)
{
    if (!condition)
        throw ValidationError(invariant);
}

} // namespace detail
} // namespace membw
