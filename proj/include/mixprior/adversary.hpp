#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bound.hpp"
#include "loss.hpp"
#include "prior.hpp"

namespace mixprior {

// The lower-bound playground: binary Dirac measures on eventually-zero
// sequences, truncated at support prefix length K, against the per-step
// minimax reference Bernoulli(1/2).

inline ModelClass dirac_class_upto(int k) {
    return build_class(json{{"family", "dirac-upto-k"}, {"k", k}});
}

// The truncated class grouped by support prefix length: bucket j holds the
// measures whose last 1 sits at position j (bucket 0 is the all-zero
// sequence, bucket j has 2^{j-1} members). The nested subclasses C_n are the
// unions of buckets 0..n.
struct DiracClassIndex {
    int k_max = 0;
    ModelClass model_class;
    std::vector<std::vector<std::size_t>> by_support_length;

    std::vector<std::size_t> subclass(int n) const { // C_n as measure indices
        std::vector<std::size_t> out;
        for (int j = 0; j <= n && j <= k_max; ++j)
            out.insert(out.end(), by_support_length[static_cast<std::size_t>(j)].begin(),
                       by_support_length[static_cast<std::size_t>(j)].end());
        return out;
    }
};

inline DiracClassIndex index_dirac_class(int k_max) {
    DiracClassIndex out{k_max, dirac_class_upto(k_max), {}};
    out.by_support_length.assign(static_cast<std::size_t>(k_max) + 1, {});
    for (std::size_t i = 0; i < out.model_class.size(); ++i) {
        const auto *d =
            static_cast<const DiracMeasure *>(out.model_class.measures[i].get());
        out.by_support_length[d->support_prefix_length()].push_back(i);
    }
    return out;
}

// L_n(mu, Bernoulli(1/2)) = n for every Dirac mu: each step costs one bit.
// Spot-checks a few class members exactly and returns n.
inline Bits minimax_loss_check(int n, int spot_checks = 4) {
    if (n < 1)
        throw InputError("minimax_loss_check needs n >= 1");
    auto rho = bernoulli_measure(0.5);
    Alphabet binary(2);
    for (int s = 0; s < spot_checks; ++s) {
        // deterministic scatter of support patterns across X^n
        std::uint64_t pattern = fnv1a64(std::to_string(n) + ":" + std::to_string(s)) &
                                (string_count(binary, n) - 1);
        auto mu = dirac_measure(binary, unrank(binary, n, pattern), 0);
        Bits loss = cumulative_kl(*mu, *rho, n);
        if (loss != static_cast<double>(n))
            throw ConsistencyError("Dirac loss against Bernoulli(1/2) is " +
                                   format_double(loss) + ", expected exactly " +
                                   std::to_string(n));
    }
    return static_cast<double>(n);
}

namespace detail {

// support prefix length of a prior component; throws unless it is a Dirac
// measure of the eventually-zero family with support within K
inline std::size_t dirac_support_length(const PriorComponent &c, int max_support) {
    const auto *d = dynamic_cast<const DiracMeasure *>(c.measure.get());
    if (d == nullptr)
        throw InputError("prior component is not a Dirac measure: " +
                         c.measure->identity());
    if (d->alphabet().size() != 2 || d->tail() != 0)
        throw InputError("prior component outside the eventually-zero class: " +
                         c.measure->identity());
    std::size_t len = d->support_prefix_length();
    if (len > static_cast<std::size_t>(max_support))
        throw InputError("prior component has support prefix length " +
                         std::to_string(len) + " > K = " + std::to_string(max_support));
    return len;
}

} // namespace detail

// W_s = prior mass on measures whose sequence is zero past position s-1,
// for s = 1..K+1, together with the component sets realizing it.
struct PriorMassProfile {
    int k_max = 0;
    std::vector<double> w_below;                       // index s-1 holds W_s
    std::vector<std::vector<std::size_t>> members_below; // component indices, M_s

    double w_at(int s) const { return w_below[static_cast<std::size_t>(s - 1)]; }
};

inline PriorMassProfile mass_profile(const DiscretePrior &prior, int k_max) {
    if (k_max < 1)
        throw InputError("mass_profile needs K >= 1");
    PriorMassProfile out;
    out.k_max = k_max;
    out.w_below.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    out.members_below.assign(static_cast<std::size_t>(k_max) + 1, {});
    const auto &components = prior.components();
    for (int s = 1; s <= k_max + 1; ++s) {
        double mass = 0.0;
        auto &members = out.members_below[static_cast<std::size_t>(s - 1)];
        for (std::size_t i = 0; i < components.size(); ++i) {
            std::size_t len = detail::dirac_support_length(components[i], k_max);
            if (len < static_cast<std::size_t>(s)) {
                mass += components[i].weight;
                members.push_back(i);
            }
        }
        out.w_below[static_cast<std::size_t>(s - 1)] = mass;
    }
    return out;
}

// One adversarial probe at time n: scans U_n (all length-(n+1) strings with a
// final 1, i.e. the sequences that enter the class exactly at support length
// n+1), picks the string the prior charges least, and reports the realized
// regret of the Dirac measure on it at horizon n+1 along with the guaranteed
// floor -log2(1 - W_n) - 1.
struct WitnessResult {
    int n = 0;
    SymbolString witness;        // length n+1, last symbol 1
    double w_n = 0.0;            // W_n of the prior
    double min_mass = 0.0;       // min over U_n of nu(x)
    double pigeonhole_bound = 0.0; // 2^-n (1 - W_n)
    Bits guarantee = 0.0;        // -log2(1 - W_n) - 1, +inf when W_n = 1
    Bits actual_regret = 0.0;    // L_{n+1}(mu*, nu) - (n+1), +inf when nu(x*) = 0
};

inline WitnessResult adversarial_witness(const DiscretePrior &prior, int n, int k_max) {
    if (n < 1)
        throw InputError("adversarial_witness needs n >= 1");
    if (n + 1 > k_max)
        throw InputError("witness needs n + 1 <= K so the witness stays in the class");

    Alphabet binary(2);
    const auto &components = prior.components();
    for (const auto &c : components)
        detail::dirac_support_length(c, k_max); // polices class membership

    // nu-mass per length-(n+1) prefix, via each component's truncated sequence
    std::uint64_t count = string_count(binary, n + 1);
    std::vector<double> mass(count, 0.0);
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto *d = static_cast<const DiracMeasure *>(components[i].measure.get());
        SymbolString head(static_cast<std::size_t>(n + 1), 0);
        for (int t = 1; t <= n + 1; ++t)
            head[static_cast<std::size_t>(t - 1)] = d->symbol_at(static_cast<std::size_t>(t));
        mass[rank_of(binary, head)] += components[i].weight;
    }

    WitnessResult out;
    out.n = n;
    out.w_n = mass_profile(prior, k_max).w_at(n);

    // scan U_n: odd ranks are exactly the strings ending in 1
    double best = kInfiniteBits;
    std::uint64_t best_rank = 1;
    for (std::uint64_t r = 1; r < count; r += 2) {
        if (mass[r] < best) {
            best = mass[r];
            best_rank = r;
        }
    }
    out.witness = unrank(binary, n + 1, best_rank);
    out.min_mass = best;
    out.pigeonhole_bound = std::exp2(-static_cast<double>(n)) * (1.0 - out.w_n);
    out.guarantee =
        out.w_n >= 1.0 ? kInfiniteBits : -std::log2(1.0 - out.w_n) - 1.0;
    out.actual_regret = best <= 0.0 ? kInfiniteBits
                                    : -std::log2(best) - static_cast<double>(n + 1);
    return out;
}

// Witness regrets for every probe time the truncated class supports.
inline std::vector<WitnessResult> theta_curve(const DiscretePrior &prior, int k_max) {
    std::vector<WitnessResult> out;
    out.reserve(static_cast<std::size_t>(k_max > 1 ? k_max - 1 : 0));
    for (int n = 1; n + 1 <= k_max; ++n)
        out.push_back(adversarial_witness(prior, n, k_max));
    return out;
}

// --- reference priors over dirac-upto-K --------------------------------------

// equal weight on each of the 2^K class members
inline DiscretePrior uniform_dirac_prior(int k_max) {
    auto c = dirac_class_upto(k_max);
    std::vector<PriorComponent> components;
    components.reserve(c.size());
    for (const auto &m : c.measures)
        components.push_back(
            PriorComponent{1.0 / static_cast<double>(c.size()), m, "uniform"});
    return DiscretePrior(std::move(components));
}

// support-length class j receives mass proportional to 2^-j, split equally
// within the class; concentrates the prior on short supports
inline DiscretePrior geometric_prefix_prior(int k_max) {
    auto c = dirac_class_upto(k_max);
    double z = 0.0;
    for (int j = 0; j <= k_max; ++j)
        z += std::exp2(-static_cast<double>(j));
    std::vector<PriorComponent> components;
    components.reserve(c.size());
    for (const auto &m : c.measures) {
        const auto *d = static_cast<const DiracMeasure *>(m.get());
        auto j = static_cast<int>(d->support_prefix_length());
        double class_mass = std::exp2(-static_cast<double>(j)) / z;
        double class_count = j == 0 ? 1.0 : std::exp2(static_cast<double>(j - 1));
        components.push_back(PriorComponent{class_mass / class_count, m, "geometric"});
    }
    return DiscretePrior(std::move(components));
}

// all mass on the all-zero sequence
inline DiscretePrior single_delta_prior() {
    std::vector<PriorComponent> components{
        PriorComponent{1.0, dirac_measure(Alphabet(2), {}, 0), "single-delta"}};
    return DiscretePrior(std::move(components));
}

// rows for the lower-bound report; infinities are rendered as "inf"
inline json curve_to_json(const std::vector<WitnessResult> &curve) {
    Alphabet binary(2);
    json rows = json::array();
    for (const auto &w : curve) {
        json row{{"n", w.n},
                 {"witness_prefix", format_symbols(binary, w.witness)},
                 {"W_n", w.w_n}};
        row["guarantee_bits"] =
            std::isinf(w.guarantee) ? json("inf") : json(w.guarantee);
        row["actual_regret_bits"] =
            std::isinf(w.actual_regret) ? json("inf") : json(w.actual_regret);
        rows.push_back(std::move(row));
    }
    return json{{"format", "mixprior-curve-v1"}, {"rows", rows}};
}

} // namespace mixprior
