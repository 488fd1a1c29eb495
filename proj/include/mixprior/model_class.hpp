#pragma once

#include <set>
#include <string>
#include <vector>

#include "digest.hpp"
#include "families.hpp"
#include "mixture.hpp"

namespace mixprior {

// Ordered finite list of process measures to predict against.
struct ModelClass {
    Alphabet alphabet;
    std::string description;
    std::vector<MeasurePtr> measures;

    std::size_t size() const { return measures.size(); }
    const ProcessMeasure &at(std::size_t i) const { return *measures[i]; }
};

namespace detail {

inline void check_grid_open_unit(const std::vector<double> &values, const char *what) {
    if (values.empty())
        throw InputError(std::string(what) + ": empty parameter grid");
    for (double v : values)
        if (!(v > 0.0 && v < 1.0))
            throw InputError(std::string(what) + ": grid value " + format_double(v) +
                             " outside (0,1)");
}

inline void check_unique_identities(const ModelClass &c) {
    std::set<std::string> seen;
    for (const auto &m : c.measures)
        if (!seen.insert(m->identity()).second)
            throw InputError("duplicate measure in class: " + m->identity());
}

} // namespace detail

// Builds a model class from a spec document. Supported families:
//   bernoulli-grid   {"values": [p...]}
//   markov-grid      {"p1_given_0": [..], "p1_given_1": [..], "initial_p1": 0.5}
//   change-point     {"change_points": [t...], "params": [p...]}  (all grids of
//                    segment parameters over the fixed change points)
//   dirac-upto-k     {"k": K}  (all eventually-zero binary sequences with
//                    support prefix length <= K, lexicographic order)
//   custom           {"alphabet_size": A, "measures": [measure spec...]}
inline ModelClass build_class(const json &spec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw InputError("class spec must be an object with a \"family\" field");
    std::string family = spec.at("family").get<std::string>();
    ModelClass out{Alphabet(2), family, {}};

    if (family == "bernoulli-grid") {
        auto values = spec.at("values").get<std::vector<double>>();
        detail::check_grid_open_unit(values, "bernoulli-grid");
        for (double p : values)
            out.measures.push_back(bernoulli_measure(p));
        out.description = "bernoulli-grid[" + detail::join_doubles(values) + "]";
    } else if (family == "markov-grid") {
        auto g0 = spec.at("p1_given_0").get<std::vector<double>>();
        auto g1 = spec.at("p1_given_1").get<std::vector<double>>();
        detail::check_grid_open_unit(g0, "markov-grid");
        detail::check_grid_open_unit(g1, "markov-grid");
        double init = spec.value("initial_p1", 0.5);
        for (double a : g0)
            for (double b : g1)
                out.measures.push_back(markov1_measure(a, b, init));
        out.description = "markov-grid[" + detail::join_doubles(g0) + "x" +
                          detail::join_doubles(g1) + "]";
    } else if (family == "change-point") {
        auto change_points = spec.at("change_points").get<std::vector<int>>();
        auto params = spec.at("params").get<std::vector<double>>();
        detail::check_grid_open_unit(params, "change-point");
        std::size_t segments = change_points.size() + 1;
        std::uint64_t total = 1;
        for (std::size_t s = 0; s < segments; ++s) {
            if (total > (1ull << 40) / params.size())
                throw InputError("change-point family too large to enumerate");
            total *= params.size();
        }
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<double> seg(segments);
            std::uint64_t rest = idx;
            for (std::size_t s = segments; s-- > 0;) {
                seg[s] = params[rest % params.size()];
                rest /= params.size();
            }
            out.measures.push_back(
                std::make_shared<ChangePointMeasure>(change_points, std::move(seg)));
        }
        out.description = "change-point";
    } else if (family == "dirac-upto-k") {
        int k = spec.at("k").get<int>();
        if (k < 0 || k > 30)
            throw InputError("dirac-upto-k needs 0 <= k <= 30");
        Alphabet binary(2);
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << k); ++r)
            out.measures.push_back(dirac_measure(binary, unrank(binary, k, r), 0));
        out.description = "dirac-upto-" + std::to_string(k);
    } else if (family == "custom") {
        out.alphabet = Alphabet(spec.value("alphabet_size", 2u));
        for (const auto &mspec : spec.at("measures")) {
            auto m = measure_from_json(mspec);
            if (!(m->alphabet() == out.alphabet))
                throw InputError("custom class: measure alphabet mismatch");
            out.measures.push_back(std::move(m));
        }
        out.description = spec.value("description", std::string("custom"));
    } else {
        throw InputError("unknown class family: " + family);
    }

    if (out.measures.empty())
        throw InputError("model class is empty");
    out.alphabet = out.measures[0]->alphabet();
    detail::check_unique_identities(out);
    return out;
}

// Canonical (fully expanded) class file; build_class accepts it back.
inline json class_to_json(const ModelClass &c) {
    json measures = json::array();
    for (const auto &m : c.measures)
        measures.push_back(m->spec_json());
    return json{{"format", "mixprior-class-v1"},
                {"family", "custom"},
                {"description", c.description},
                {"alphabet_size", c.alphabet.size()},
                {"measures", measures}};
}

inline std::string class_digest(const ModelClass &c) {
    return digest_hex(class_to_json(c).dump());
}

} // namespace mixprior
