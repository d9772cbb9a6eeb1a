#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace godgame {

uint64_t splitmix64(uint64_t& state);
uint64_t fnv1a64(std::string_view bytes);

// Seed for a named stream, independent of every other stream name.
uint64_t derive_seed(uint64_t seed, std::string_view stream_name);

// Seeded stream with platform-independent sampling helpers. The standard
// distributions are implementation-defined, so bounded draws are done here.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound); bound must be > 0.
    uint64_t uniform_below(uint64_t bound);

    // Uniform in [lo, hi], inclusive.
    int uniform_int(int lo, int hi);

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool coin() { return (engine_() >> 63) != 0; }

    std::string serialize() const;
    static Rng deserialize(const std::string& text);

    friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace godgame
