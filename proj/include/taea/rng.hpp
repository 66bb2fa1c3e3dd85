#pragma once

#include <cmath>
#include <cstdint>

namespace taea {

// Counter-derived random stream. Every consumer gets its own stream keyed by
// (master seed, generation, role, index), so evaluation order and worker
// scheduling cannot change the numbers a given consumer sees.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive range; n is assumed far below 2^53
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(uniform() * span);
        return v > hi ? hi : v;
    }

    // standard normal via Box-Muller (no state caching, deterministic)
    double gaussian() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// Stream roles used by the engine; kept explicit so a new consumer cannot
// silently collide with an existing one.
enum class RngRole : std::uint64_t {
    init = 1,
    group_sampling = 2,
    mutation = 3,
    crossover = 4,
    probe = 5,
    rebuild = 6,
    scenario = 7,
    test = 100,
};

inline std::uint64_t mix_u64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xFF51AFD7ED558CCDull;
    z ^= z >> 33;
    z *= 0xC4CEB9FE1A85EC53ull;
    z ^= z >> 33;
    return z;
}

class RngSeeder {
public:
    explicit RngSeeder(std::uint64_t master) : master_(master) {}

    RngStream stream(std::uint64_t generation, RngRole role, std::uint64_t index = 0) const {
        std::uint64_t h = mix_u64(master_ ^ 0x5851F42D4C957F2Dull);
        h = mix_u64(h ^ generation);
        h = mix_u64(h ^ (static_cast<std::uint64_t>(role) << 32));
        h = mix_u64(h ^ index);
        return RngStream(h);
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

} // namespace taea
