#pragma once

#include <cstdint>

namespace sqflab {

// Deterministic 64-bit generator behind every seeded experiment.
//
// The state advances by a fixed odd increment and the output is the state
// passed through an xor-shift-multiply mix:
//
//   s     += 0x9e3779b97f4a7c15
//   z      = s
//   z     ^= z >> 30;  z *= 0xbf58476d1ce4e5b9
//   z     ^= z >> 27;  z *= 0x94d049bb133111eb
//   output = z ^ (z >> 31)
//
// Bounded draws reject raw values >= 2^64 - (2^64 mod n) before reducing
// mod n, so results are exactly uniform and identical on every platform.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0}) % n;
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    // uniform in [lo, hi], inclusive
    int64_t in_range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
    }

private:
    uint64_t state_;
};

} // namespace sqflab
