#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace umrn {

/// Counter-based PRNG: splitmix64 finalizer applied to key + counter
/// ("splitmix64-ctr"). Pure 64-bit integer arithmetic, so streams are
/// bit-identical across platforms and a stream is a pure function of
/// (seed, index, salt). Every Monte Carlo draw in this library derives its
/// own stream, which is what makes draws reproducible and parallelizable.
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    explicit Rng(std::uint64_t key) : key_(key), ctr_(0) {}

    /// Stream derivation: independent generator per (seed, index, salt).
    static Rng stream(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
        return Rng(mix(seed ^ mix(index ^ mix(salt))));
    }

    std::uint64_t next() { return mix(key_ + kGolden * ++ctr_); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return (next() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::domain_error("Rng::below(0)");
        // rejection from the top of the range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate) {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -std::log(u) / rate;
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(T* data, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            T tmp = data[i - 1];
            data[i - 1] = data[j];
            data[j] = tmp;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

inline const char* rng_name() { return "splitmix64-ctr"; }

}  // namespace umrn
