#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace mixprior {

// Prior weight sequence: w_1 = 1/2 and w_k = w / (k log2^2 k) for k > 1,
// with w chosen so the whole series sums to 1.
class WeightScheme {
  public:
    // The normalizer w = 1 / (2 sum_{k>=2} 1/(k log2^2 k)). The series is
    // summed backwards from k = 1e7 and closed with the integral bracket
    //   sum_{k>K} 1/(k ln^2 k) in [1/ln(K+1), 1/ln K]
    // taken at its midpoint, which pins the sum well below 1e-10.
    static double normalizer() {
        static const double w = [] {
            constexpr std::uint64_t cut = 10'000'000;
            double series = 0.0;
            for (std::uint64_t k = cut; k >= 2; --k) {
                double lk = std::log2(static_cast<double>(k));
                series += 1.0 / (static_cast<double>(k) * lk * lk);
            }
            const double ln2 = std::log(2.0);
            double tail_hi = ln2 * ln2 / std::log(static_cast<double>(cut));
            double tail_lo = ln2 * ln2 / std::log(static_cast<double>(cut + 1));
            series += 0.5 * (tail_lo + tail_hi);
            return 0.5 / series;
        }();
        return w;
    }

    // w_k
    static double at(std::uint64_t k) {
        if (k == 0)
            throw InputError("weights are indexed from 1");
        if (k == 1)
            return 0.5;
        double lk = std::log2(static_cast<double>(k));
        return normalizer() / (static_cast<double>(k) * lk * lk);
    }

    static std::vector<double> first(std::uint64_t k_max) {
        if (k_max < 1)
            throw InputError("weights need k_max >= 1");
        std::vector<double> out;
        out.reserve(k_max);
        for (std::uint64_t k = 1; k <= k_max; ++k)
            out.push_back(at(k));
        return out;
    }
};

// Number of covering bands per horizon: k(n) = ceil(n / log2 log2 n) for
// n >= 3, pinned to 2 at n = 2 where the formula degenerates.
inline int covering_interval_count(int n) {
    if (n < 2)
        throw InputError("covering bands are defined for n >= 2");
    if (n == 2)
        return 2;
    double denom = std::log2(std::log2(static_cast<double>(n)));
    double v = static_cast<double>(n) / denom;
    double r = std::nearbyint(v);
    if (std::abs(v - r) < 1e-9)
        return static_cast<int>(r);
    return static_cast<int>(std::ceil(v));
}

} // namespace mixprior
