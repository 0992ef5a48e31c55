#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mpox {

// SplitMix64 finalizer, used only to derive well-separated engine seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Every (master seed, path, channel) triple owns an independent stream, so
// paths may be simulated in any order or on any thread layout and still
// reproduce bit-identical draws.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t path, std::uint64_t channel) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ (0xC2B2AE3D27D4EB4Full * (path + 1)));
    h = mix64(h ^ (0x9E3779B97F4A7C15ull * (channel + 1)));
    return h;
}

// mt19937_64 with hand-rolled transforms. The standard pins the engine's
// output sequence but not the distribution adaptors, so the transforms live
// here to keep streams reproducible across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform on (0, 1]; never returns 0, so log() below is always finite
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    double exponential(double mean) { return -mean * std::log(uniform01()); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double a = 2.0 * std::numbers::pi * uniform01();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mpox
