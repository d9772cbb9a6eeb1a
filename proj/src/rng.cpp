#include "godgame/rng.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace godgame {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t derive_seed(uint64_t seed, std::string_view stream_name) {
    uint64_t state = seed ^ fnv1a64(stream_name);
    return splitmix64(state);
}

uint64_t Rng::uniform_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    // 2^64 mod bound: draws below it fall in the incomplete bottom bucket.
    const uint64_t threshold = (std::numeric_limits<uint64_t>::max() - bound + 1) % bound;
    for (;;) {
        uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const uint64_t span = static_cast<uint64_t>(static_cast<int64_t>(hi) - lo) + 1;
    return static_cast<int>(lo + static_cast<int64_t>(uniform_below(span)));
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string Rng::serialize() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
}

Rng Rng::deserialize(const std::string& text) {
    Rng rng;
    std::istringstream in(text);
    in >> rng.engine_;
    if (!in) throw std::invalid_argument("Rng::deserialize: malformed engine state");
    return rng;
}

} // namespace godgame
