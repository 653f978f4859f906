#pragma once

#include <cmath>
#include <cstdint>

namespace heatctrl {

// Counter-based pseudo-random stream (splitmix64 finalizer over an affine
// counter). Every consumer owns its own stream, so concurrent simulation of
// many environments draws exactly the same numbers as sequential stepping.
// State is two 64-bit words and can be serialized into checkpoints.
class CounterRng {
public:
    CounterRng() : CounterRng(0) {}
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(finalize(seed + 0x9e3779b97f4a7c15ull * (stream + 1))), counter_(0) {}

    std::uint64_t next_u64() {
        counter_ += 1;
        return finalize(key_ + 0x9e3779b97f4a7c15ull * counter_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) via 128-bit multiply.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Box-Muller; consumes two draws per call.
    double normal(double mean = 0.0, double sigma = 1.0) {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }
    void restore(std::uint64_t key, std::uint64_t counter) {
        key_ = key;
        counter_ = counter;
    }

    // Deterministic seed derivation for child streams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
        return finalize(finalize(seed + 0x9e3779b97f4a7c15ull) ^ finalize(salt + 0xbf58476d1ce4e5b9ull));
    }

private:
    static std::uint64_t finalize(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace heatctrl
