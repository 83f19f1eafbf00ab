// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>

#include "error.hpp"

namespace agentnet {

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::Shape, "dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += a[i] * b[i];
    return sum;
}

inline double norm(std::span<const double> a) {
    double sum = 0.0;
    for (double x : a)
        sum += x * x;
    return std::sqrt(sum);
}

// Zero-norm inputs have similarity 0.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    const double d = dot(a, b);
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return d / (na * nb);
}

} // namespace agentnet
