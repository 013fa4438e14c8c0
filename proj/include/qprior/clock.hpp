#pragma once

#include <chrono>

namespace qprior {

// Time source for stage ledgers. Production code uses the monotonic wall
// clock; golden tests inject a virtual clock so recorded durations are
// deterministic and logs byte-stable.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;  // seconds from an arbitrary epoch
};

class MonotonicClock final : public Clock {
public:
    double now() override {
        const auto t = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double>(t).count();
    }
};

// Advances by a fixed tick on every read, so any timed span measured with two
// reads lasts exactly one tick regardless of real elapsed time.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(double tick = 1e-3) : tick_(tick) {}
    double now() override { return t_ += tick_; }

private:
    double tick_;
    double t_ = 0.0;
};

}  // namespace qprior
