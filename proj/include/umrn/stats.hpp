#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "umrn/rng.hpp"

namespace umrn {

struct MeanCI {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    std::uint64_t n = 0;
};

inline MeanCI mean_ci(const std::vector<double>& xs) {
    MeanCI r;
    r.n = xs.size();
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    if (r.n > 1) r.se = std::sqrt(ss / (static_cast<double>(r.n) * (r.n - 1.0)));
    return r;
}

/// Paired sign-flip permutation p-value for mean(d) = 0 against |mean| large.
/// Add-one estimate (count+1)/(B+1); all-zero differences give p = 1.
inline double sign_flip_pvalue(const std::vector<double>& d, std::uint32_t permutations,
                               Rng rng) {
    if (d.empty()) return 1.0;
    double observed = 0.0;
    for (double x : d) observed += x;
    observed = std::fabs(observed);
    std::uint64_t extreme = 0;
    for (std::uint32_t b = 0; b < permutations; ++b) {
        double s = 0.0;
        for (double x : d) s += (rng.next() & 1) ? x : -x;
        if (std::fabs(s) >= observed) ++extreme;
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
}

}  // namespace umrn
