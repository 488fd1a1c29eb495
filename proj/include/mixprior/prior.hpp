#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cover.hpp"
#include "weights.hpp"

namespace mixprior {

// One weighted component of a discrete prior, tagged with where the
// construction produced it (covering selection or regularizer).
struct PriorComponent {
    double weight = 0.0;
    MeasurePtr measure;
    std::string provenance;
};

// A Bayesian predictor nu = sum_i w_i mu_i with explicit component
// provenance. Weights are positive and sum to 1 (within 1e-10).
class DiscretePrior {
  public:
    explicit DiscretePrior(std::vector<PriorComponent> components)
        : components_(std::move(components)) {
        if (components_.empty())
            throw InputError("prior needs at least one component");
        double sum = 0.0;
        for (const auto &c : components_) {
            if (!(c.weight > 0.0))
                throw InputError("prior weights must be positive");
            sum += c.weight;
        }
        if (std::abs(sum - 1.0) > 1e-10)
            throw InputError("prior weights sum to " + format_double(sum) +
                             ", expected 1 within 1e-10");

        // aggregate by measure identity for evaluation
        std::map<std::string, std::size_t> index;
        std::vector<MixtureMeasure::Component> merged;
        for (const auto &c : components_) {
            auto [it, fresh] = index.emplace(c.measure->identity(), merged.size());
            if (fresh)
                merged.emplace_back(c.weight, c.measure);
            else
                merged[it->second].first += c.weight;
        }
        mixture_ = std::make_shared<MixtureMeasure>(std::move(merged), "prior");
    }

    const std::vector<PriorComponent> &components() const { return components_; }
    double total_weight() const {
        double sum = 0.0;
        for (const auto &c : components_)
            sum += c.weight;
        return sum;
    }

    // the prior as an evaluable process measure (components merged by identity)
    const std::shared_ptr<const MixtureMeasure> &as_measure() const { return mixture_; }

  private:
    std::vector<PriorComponent> components_;
    std::shared_ptr<const MixtureMeasure> mixture_;
};

// nu_{n,k,i}: prior weights w_l down the greedy selection order. Retains
// min(l_i, all positive-gain selections) entries, where
// l_i = ceil(k n 2^{(i M / k) n + 1}) is the tail cutoff that brings the
// uncovered in-band mass below 1/(kn).
struct CellMixture {
    int n = 0;
    int k = 0;
    int band = 0;
    std::vector<std::pair<double, std::size_t>> weighted; // (w_l, class index)
};

inline CellMixture cell_mixture(const GreedyCover &cover) {
    CellMixture out;
    out.n = cover.n;
    out.k = cover.k;
    out.band = cover.band;
    double li = std::ceil(static_cast<double>(cover.k) * cover.n *
                          std::exp2(static_cast<double>(cover.band) * cover.m_bits /
                                        cover.k * cover.n +
                                    1.0));
    std::size_t keep = cover.selections.size();
    if (std::isfinite(li) && li < static_cast<double>(keep))
        keep = static_cast<std::size_t>(li);
    for (std::size_t l = 0; l < keep; ++l)
        out.weighted.emplace_back(WeightScheme::at(l + 1),
                                  cover.selections[l].measure_index);
    return out;
}

// Per-horizon regularizer r'_n: for every string x of length n that some
// class measure charges, pick the class measure maximizing mu(x) (lowest
// index on ties) and mix the picks uniformly over those strings. Guarantees
// r'_n(x) >= mu(x) / |A_n| for every mu in the class.
struct RegularizerPart {
    int n = 0;
    std::uint64_t charged_strings = 0; // |A_n|
    std::vector<std::pair<double, std::size_t>> weighted; // sums to 1
};

inline std::vector<RegularizerPart> regularizer(const ModelClass &model_class,
                                                int max_horizon) {
    if (max_horizon < 1)
        throw InputError("regularizer needs max horizon >= 1");
    std::vector<RegularizerPart> parts;
    parts.reserve(static_cast<std::size_t>(max_horizon));
    for (int n = 1; n <= max_horizon; ++n) {
        auto table = detail::tabulate(model_class.measures,
                                      *uniform_measure(model_class.alphabet), n);
        std::vector<std::uint64_t> picks(model_class.size(), 0);
        std::uint64_t charged = 0;
        for (std::uint64_t r = 0; r < table.count; ++r) {
            double best = kLogZero;
            std::size_t arg = model_class.size();
            for (std::size_t m = 0; m < model_class.size(); ++m) {
                if (table.log2_mu[m][r] > best) {
                    best = table.log2_mu[m][r];
                    arg = m;
                }
            }
            if (arg == model_class.size())
                continue; // no measure charges x
            ++picks[arg];
            ++charged;
        }
        RegularizerPart part;
        part.n = n;
        part.charged_strings = charged;
        for (std::size_t m = 0; m < model_class.size(); ++m)
            if (picks[m] > 0)
                part.weighted.emplace_back(static_cast<double>(picks[m]) /
                                               static_cast<double>(charged),
                                           m);
        parts.push_back(std::move(part));
    }
    return parts;
}

// Builds the full discrete prior for horizons up to N:
//   nu = 1/2 sum_{n=2..N} w_n w_{k(n)} (1/k(n)) sum_i nu_{n,k(n),i}  +  c r,
// where r = sum_{n<=N} w_n r'_n renormalized over n <= N and c collects all
// prior mass the covering terms left unused (so the total is exactly 1).
inline DiscretePrior assemble_prior(const ModelClass &model_class,
                                    const MeasurePtr &rho, int max_horizon) {
    if (max_horizon < 3)
        throw InputError("assemble_prior needs N >= 3");
    if (!(rho->alphabet() == model_class.alphabet))
        throw InputError("assemble_prior: alphabet mismatch");
    for (int n = 2; n <= max_horizon; ++n)
        checked_string_count(model_class.alphabet, n); // reports the first bad n

    auto rho_prime = mix_with_uniform(rho);
    std::vector<PriorComponent> components;
    double cover_total = 0.0;

    for (int n = 2; n <= max_horizon; ++n) {
        int k = covering_interval_count(n);
        auto part = partition_thresholds(n, k, model_class.alphabet.log2_size());
        auto table = detail::tabulate(model_class.measures, *rho_prime, n);
        double w_n = WeightScheme::at(static_cast<std::uint64_t>(n));
        double w_k = WeightScheme::at(static_cast<std::uint64_t>(k));
        for (int band = 1; band <= k; ++band) {
            auto cover = detail::greedy_cover_from_table(table, part, band);
            auto mixture = cell_mixture(cover);
            for (std::size_t l = 0; l < mixture.weighted.size(); ++l) {
                const auto &[w_l, mu_index] = mixture.weighted[l];
                double weight = 0.5 * w_n * w_k * (1.0 / k) * w_l;
                components.push_back(PriorComponent{
                    weight, model_class.measures[mu_index],
                    "cover(n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                        ",i=" + std::to_string(band) + ",l=" + std::to_string(l + 1) +
                        ")"});
                cover_total += weight;
            }
        }
    }

    double reg_coefficient = 1.0 - cover_total;
    auto parts = regularizer(model_class, max_horizon);
    double horizon_mass = 0.0;
    for (const auto &part : parts)
        horizon_mass += WeightScheme::at(static_cast<std::uint64_t>(part.n));
    for (const auto &part : parts) {
        double w_n = WeightScheme::at(static_cast<std::uint64_t>(part.n));
        for (const auto &[wt, mu_index] : part.weighted)
            components.push_back(
                PriorComponent{reg_coefficient * (w_n / horizon_mass) * wt,
                               model_class.measures[mu_index],
                               "regularizer(n=" + std::to_string(part.n) + ")"});
    }

    return DiscretePrior(std::move(components));
}

// --- prior dump -------------------------------------------------------------
//
// JSON array of components under "components"; weights are decimal strings
// that parse back to the identical double, so a reloaded prior evaluates
// bit-identically.

inline json prior_to_json(const DiscretePrior &prior, const std::string &class_digest_hex,
                          int max_horizon) {
    json comps = json::array();
    for (const auto &c : prior.components())
        comps.push_back(json{{"weight", format_double(c.weight)},
                             {"measure", c.measure->spec_json()},
                             {"provenance", c.provenance}});
    return json{{"format", "mixprior-prior-v1"},
                {"class_digest", class_digest_hex},
                {"max_horizon", max_horizon},
                {"components", comps}};
}

struct LoadedPrior {
    DiscretePrior prior;
    std::string class_digest;
    int max_horizon = 0;
};

inline LoadedPrior prior_from_json(const json &doc) {
    if (!doc.is_object() || doc.value("format", "") != "mixprior-prior-v1")
        throw InputError("not a mixprior prior dump");
    std::vector<PriorComponent> components;
    for (const auto &c : doc.at("components")) {
        double w = 0.0;
        std::string text = c.at("weight").get<std::string>();
        auto res = std::from_chars(text.data(), text.data() + text.size(), w);
        if (res.ec != std::errc{})
            throw InputError("bad weight string: " + text);
        components.push_back(
            PriorComponent{w, measure_from_json(c.at("measure")),
                           c.value("provenance", std::string())});
    }
    return LoadedPrior{DiscretePrior(std::move(components)),
                       doc.value("class_digest", std::string()),
                       doc.value("max_horizon", 0)};
}

} // namespace mixprior
