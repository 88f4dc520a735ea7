#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace abr {

// Raised when user-supplied configuration is out of range or inconsistent.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised when the simulator detects a broken internal invariant (an engine
// bug, not a user error). A run hitting this must not be trusted.
class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Integer nanoseconds. Used both for instants (since simulation start) and
// for durations; either way the value is never negative, so event timestamps
// stay exactly representable and runs are bitwise reproducible.
class SimTime {
  public:
    constexpr SimTime() = default;

    static SimTime ns(std::int64_t v) {
        if (v < 0)
            throw InvariantViolation("SimTime: negative time " + std::to_string(v) + "ns");
        return SimTime(v);
    }
    static SimTime us(std::int64_t v) { return ns(v * 1000); }
    static SimTime ms(std::int64_t v) { return ns(v * 1000000); }

    constexpr std::int64_t count_ns() const { return ns_; }
    constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    friend SimTime operator+(SimTime a, SimTime b) { return ns(a.ns_ + b.ns_); }
    friend SimTime operator-(SimTime a, SimTime b) { return ns(a.ns_ - b.ns_); }

  private:
    constexpr explicit SimTime(std::int64_t v) : ns_(v) {}
    std::int64_t ns_ = 0;
};

// Cells per second. Finite and non-negative in every code path.
class RateCps {
  public:
    constexpr RateCps() = default;

    explicit RateCps(double v) : cps_(v) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvariantViolation("RateCps: rate must be finite and >= 0, got " +
                                     std::to_string(v));
    }

    constexpr double cps() const { return cps_; }

    friend constexpr auto operator<=>(RateCps, RateCps) = default;

  private:
    double cps_ = 0.0;
};

inline RateCps max(RateCps a, RateCps b) { return a.cps() >= b.cps() ? a : b; }

// Time to serialize one cell onto a link, rounded to the nearest ns.
inline SimTime cell_transmission_time(int cell_size_bits, double link_bw_bps) {
    if (cell_size_bits <= 0)
        throw ConfigError("cell_size_bits must be > 0");
    if (!(link_bw_bps > 0.0) || !std::isfinite(link_bw_bps))
        throw ConfigError("link bandwidth must be > 0");
    return SimTime::ns(std::llround(static_cast<double>(cell_size_bits) * 1e9 / link_bw_bps));
}

// Inter-cell period for a pacing rate, rounded to the nearest ns.
inline SimTime rate_period(RateCps rate) {
    if (rate.cps() <= 0.0)
        throw InvariantViolation("rate_period: rate must be > 0");
    return SimTime::ns(std::llround(1e9 / rate.cps()));
}

}  // namespace abr
