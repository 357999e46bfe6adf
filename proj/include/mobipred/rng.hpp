#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mobipred {

// splitmix64 finalizer, used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a component name
// (FNV-1a over the name, mixed with the base). Adding new named components
// never perturbs the streams of existing ones.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view component) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : component) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return mix64(base ^ mix64(h));
}

// Seeded generator with a fixed uint64 -> [0,1) mapping. The mapping lives
// here rather than in std::uniform_real_distribution, whose output differs
// between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mobipred
