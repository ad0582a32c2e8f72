#pragma once

#include <cstdint>
#include <vector>

#include "umrn/rational.hpp"

namespace umrn {

/// A mark is a finite integer sequence (a Baire-space prefix). Real-valued
/// marks (edge weights, coupling labels) embed as the two-element sequence
/// [kScaledRealTag, v] where v is the value scaled by 2^32; equality and
/// ordering stay exact integer operations either way.
using Mark = std::vector<std::int64_t>;

constexpr std::int64_t kScaledRealTag = INT64_MIN + 1;
constexpr std::int64_t kScaledOne = INT64_C(1) << 32;

inline Mark scaled_real_mark(std::int64_t scaled) { return Mark{kScaledRealTag, scaled}; }

inline Mark real_mark(double value) {
    return scaled_real_mark(static_cast<std::int64_t>(value * static_cast<double>(kScaledOne)));
}

inline bool is_scaled_real(const Mark& m) {
    return m.size() == 2 && m[0] == kScaledRealTag;
}

inline double scaled_real_value(const Mark& m) {
    return static_cast<double>(m[1]) / static_cast<double>(kScaledOne);
}

/// Mark metric: 0 if equal; |a-b| for two scaled-real marks; otherwise
/// 1/(1 + length of common prefix).
inline Rational mark_distance(const Mark& a, const Mark& b) {
    if (a == b) return Rational(0);
    if (is_scaled_real(a) && is_scaled_real(b)) {
        const std::int64_t d = a[1] > b[1] ? a[1] - b[1] : b[1] - a[1];
        return Rational(d, kScaledOne);
    }
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    return Rational(1, static_cast<std::int64_t>(common) + 1);
}

}  // namespace umrn
