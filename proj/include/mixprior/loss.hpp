#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "enumeration.hpp"
#include "measure.hpp"

namespace mixprior {

// losses and regrets are reals in bits; +inf marks absolute-continuity failures
using Bits = double;
inline constexpr Bits kInfiniteBits = std::numeric_limits<double>::infinity();

// Expected cumulative KL divergence L_n(mu, rho), evaluated exactly as
//   sum over X^n of mu(x) log2( mu(x) / rho(x) )
// with 0 log 0 = 0 and a +inf result when mu charges a rho-null string.
inline Bits cumulative_kl(const ProcessMeasure &mu, const ProcessMeasure &rho, int n) {
    if (n < 1)
        throw InputError("cumulative_kl needs horizon n >= 1");
    if (!(mu.alphabet() == rho.alphabet()))
        throw InputError("cumulative_kl: alphabet mismatch");
    const ProcessMeasure *ms[] = {&mu, &rho};
    return sum_over_strings(mu.alphabet(), n, ms,
                            [](std::uint64_t, const std::vector<double> &lm) -> double {
                                double lmu = lm[0], lrho = lm[1];
                                if (lmu == kLogZero)
                                    return 0.0;
                                if (lrho == kLogZero)
                                    return kInfiniteBits;
                                return std::exp2(lmu) * (lmu - lrho);
                            });
}

// Partial sum of the same series over an explicit subset A of X^n. May be
// negative; restricted_kl(A) + restricted_kl(X^n \ A) = cumulative_kl.
inline Bits restricted_kl(const ProcessMeasure &mu, const ProcessMeasure &rho, int n,
                          const std::vector<SymbolString> &subset) {
    if (n < 1)
        throw InputError("restricted_kl needs horizon n >= 1");
    double total = 0.0;
    for (const SymbolString &x : subset) {
        if (static_cast<int>(x.size()) != n)
            throw InputError("restricted_kl: string of length " +
                             std::to_string(x.size()) + " in a length-" +
                             std::to_string(n) + " subset");
        double lmu = mu.log_marginal(x).log2();
        if (lmu == kLogZero)
            continue;
        double lrho = rho.log_marginal(x).log2();
        if (lrho == kLogZero)
            return kInfiniteBits;
        total += std::exp2(lmu) * (lmu - lrho);
    }
    return total;
}

struct MCEstimate {
    Bits mean = 0.0;
    Bits std_error = 0.0;
    std::size_t sample_count = 0;
    bool infinite = false; // some sample hit a rho-null string
};

// Monte Carlo estimate of L_n(mu, rho): average of log2 mu(x)/rho(x) over
// x ~ mu. Unbiased; deterministic given the seed.
inline MCEstimate mc_loss(const ProcessMeasure &mu, const ProcessMeasure &rho, int n,
                          std::size_t samples, std::uint64_t seed) {
    if (samples < 2)
        throw InputError("mc_loss needs at least 2 samples");
    if (n < 1)
        throw InputError("mc_loss needs horizon n >= 1");
    if (!(mu.alphabet() == rho.alphabet()))
        throw InputError("mc_loss: alphabet mismatch");

    std::mt19937_64 rng(seed);
    const Alphabet &alphabet = mu.alphabet();
    double mean = 0.0, m2 = 0.0;
    bool infinite = false;
    for (std::size_t s = 0; s < samples; ++s) {
        auto wmu = mu.walker();
        auto wrho = rho.walker();
        for (int t = 0; t < n; ++t) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            double acc = 0.0;
            Symbol pick = 0;
            for (Symbol a = 0; a < alphabet.size(); ++a) {
                double step = wmu->log2_step(a);
                if (step == kLogZero)
                    continue;
                acc += std::exp2(step);
                pick = a;
                if (u < acc)
                    break;
            }
            wmu->push(pick);
            wrho->push(pick);
        }
        if (wrho->log2_marginal() == kLogZero) {
            infinite = true;
            continue;
        }
        double ratio = wmu->log2_marginal() - wrho->log2_marginal();
        double delta = ratio - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (ratio - mean);
    }
    if (infinite)
        return MCEstimate{kInfiniteBits, 0.0, samples, true};
    double variance = m2 / static_cast<double>(samples - 1);
    return MCEstimate{mean, std::sqrt(variance / static_cast<double>(samples)), samples,
                      false};
}

// Posterior next-symbol distribution of a predictor given the observed
// prefix; entries sum to 1.
inline std::vector<double> predict_next(const ProcessMeasure &nu,
                                        const SymbolString &prefix) {
    nu.alphabet().check(prefix);
    auto w = nu.walker();
    for (Symbol a : prefix)
        w->push(a);
    if (w->log2_marginal() == kLogZero)
        throw UndefinedConditionalError("predict_next on a zero-probability prefix");
    std::vector<double> dist(nu.alphabet().size());
    for (Symbol a = 0; a < nu.alphabet().size(); ++a)
        dist[a] = std::exp2(w->log2_step(a));
    return dist;
}

} // namespace mixprior
