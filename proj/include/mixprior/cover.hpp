#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "model_class.hpp"

namespace mixprior {

// Bands for the per-step log-likelihood ratio (1/n) log2 mu(x)/ref(x) over
// [-log2(n)/n, M + 1/n]: interior bands have width M/k, the end bands absorb
// the padding below 0 and above M. Upper edges are closed; a value within
// relative 1e-12 of an edge goes to the lower band.
struct IntervalPartition {
    int n = 0;
    int k = 0;
    double m_bits = 0.0;
    double lower_edge = 0.0; // -log2(n)/n, closed
    std::vector<double> upper_edges; // upper_edges[i-1] closes band i

    double band_upper(int i) const { return upper_edges[static_cast<std::size_t>(i - 1)]; }
    double band_lower(int i) const {
        return i == 1 ? lower_edge : upper_edges[static_cast<std::size_t>(i - 2)];
    }

    // 1..k for values inside the range; 0 below it; -1 above it
    int band_of(double v) const {
        double tol_low = 1e-12 * std::max(1.0, std::abs(lower_edge));
        if (v < lower_edge - tol_low)
            return 0;
        for (int i = 1; i <= k; ++i) {
            double edge = band_upper(i);
            if (v <= edge + 1e-12 * std::max(1.0, std::abs(edge)))
                return i;
        }
        return -1;
    }
};

inline IntervalPartition partition_thresholds(int n, int k, double m_bits) {
    if (n < 2)
        throw InputError("interval partition needs n >= 2");
    if (k < 2)
        throw InputError("interval partition needs k >= 2");
    IntervalPartition part;
    part.n = n;
    part.k = k;
    part.m_bits = m_bits;
    part.lower_edge = -std::log2(static_cast<double>(n)) / n;
    part.upper_edges.resize(static_cast<std::size_t>(k));
    for (int i = 1; i < k; ++i)
        part.upper_edges[static_cast<std::size_t>(i - 1)] =
            static_cast<double>(i) * m_bits / k;
    part.upper_edges[static_cast<std::size_t>(k - 1)] = m_bits + 1.0 / n;
    return part;
}

namespace detail {

// log2 marginals over X^n, indexed by lexicographic rank
struct HorizonTable {
    int n = 0;
    std::uint64_t count = 0;
    std::vector<double> log2_ref;
    std::vector<std::vector<double>> log2_mu;
};

inline HorizonTable tabulate(const std::vector<MeasurePtr> &class_measures,
                             const ProcessMeasure &ref, int n) {
    HorizonTable table;
    table.n = n;
    table.count = checked_string_count(ref.alphabet(), n);
    std::vector<const ProcessMeasure *> all;
    all.reserve(class_measures.size() + 1);
    all.push_back(&ref);
    for (const auto &m : class_measures)
        all.push_back(m.get());

    table.log2_ref.resize(table.count);
    table.log2_mu.assign(class_measures.size(), std::vector<double>(table.count));
    walk_strings(ref.alphabet(), n, all,
                 [&](std::uint64_t rank, const SymbolString &,
                     const std::vector<double> &margs) {
                     table.log2_ref[rank] = margs[0];
                     for (std::size_t i = 0; i + 1 < margs.size(); ++i)
                         table.log2_mu[i][rank] = margs[i + 1];
                 });
    return table;
}

// threshold for membership in the high-ratio set: mu(x)/ref(x) >= 1/n
inline bool in_high_ratio_set(double lmu, double lref, int n) {
    if (lmu == kLogZero)
        return false;
    return lmu - lref >= -std::log2(static_cast<double>(n));
}

// Per-band member ranks of one measure's high-ratio set.
inline std::vector<std::vector<std::uint64_t>>
band_members(const std::vector<double> &lmu_row, const std::vector<double> &lref_row,
             const IntervalPartition &part) {
    std::vector<std::vector<std::uint64_t>> bands(static_cast<std::size_t>(part.k));
    for (std::uint64_t r = 0; r < lmu_row.size(); ++r) {
        if (!in_high_ratio_set(lmu_row[r], lref_row[r], part.n))
            continue;
        double v = (lmu_row[r] - lref_row[r]) / part.n;
        int i = part.band_of(v);
        if (i <= 0)
            throw ConsistencyError(
                "per-step ratio " + format_double(v) +
                " escapes the band range; the reference must satisfy "
                "-log2 ref(x) <= nM + 1 (mix it with the uniform measure)");
        bands[static_cast<std::size_t>(i - 1)].push_back(r);
    }
    return bands;
}

inline double mass_of(const std::vector<std::uint64_t> &ranks,
                      const std::vector<double> &log2_row) {
    double total = 0.0;
    for (std::uint64_t r : ranks)
        total += std::exp2(log2_row[r]);
    return total;
}

} // namespace detail

// T^n_mu = {x : mu(x)/ref(x) >= 1/n}; by Markov's inequality the excluded
// mu-mass is at most 1/n.
struct HighRatioSet {
    int n = 0;
    std::vector<std::uint64_t> members; // lexicographic ranks
    double excluded_mu_mass = 0.0;
};

inline HighRatioSet high_ratio_set(const ProcessMeasure &mu, const ProcessMeasure &ref,
                                   int n) {
    if (n < 1)
        throw InputError("high_ratio_set needs n >= 1");
    auto table = detail::tabulate({}, ref, n);
    std::vector<const ProcessMeasure *> one{&mu};
    std::vector<double> lmu_row(table.count);
    walk_strings(mu.alphabet(), n, one,
                 [&](std::uint64_t rank, const SymbolString &,
                     const std::vector<double> &margs) { lmu_row[rank] = margs[0]; });

    HighRatioSet out;
    out.n = n;
    for (std::uint64_t r = 0; r < table.count; ++r) {
        if (detail::in_high_ratio_set(lmu_row[r], table.log2_ref[r], n))
            out.members.push_back(r);
        else if (lmu_row[r] != kLogZero)
            out.excluded_mu_mass += std::exp2(lmu_row[r]);
    }
    return out;
}

// One band's slice of a measure's high-ratio set.
struct CoverCell {
    std::string mu_identity;
    int n = 0;
    int k = 0;
    int band = 0; // i, 1..k
    std::vector<std::uint64_t> members;
    double ref_mass = 0.0;
};

inline std::vector<CoverCell> cover_cells(const ProcessMeasure &mu,
                                          const ProcessMeasure &ref, int n, int k) {
    auto part = partition_thresholds(n, k, mu.alphabet().log2_size());
    std::vector<MeasurePtr> none;
    auto table = detail::tabulate(none, ref, n);
    std::vector<const ProcessMeasure *> one{&mu};
    std::vector<double> lmu_row(table.count);
    walk_strings(mu.alphabet(), n, one,
                 [&](std::uint64_t rank, const SymbolString &,
                     const std::vector<double> &margs) { lmu_row[rank] = margs[0]; });

    auto bands = detail::band_members(lmu_row, table.log2_ref, part);
    std::vector<CoverCell> cells;
    cells.reserve(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
        CoverCell cell;
        cell.mu_identity = mu.identity();
        cell.n = n;
        cell.k = k;
        cell.band = i;
        cell.members = std::move(bands[static_cast<std::size_t>(i - 1)]);
        cell.ref_mass = detail::mass_of(cell.members, table.log2_ref);
        cells.push_back(std::move(cell));
    }
    return cells;
}

// Greedy cover of one band: repeatedly select the class measure whose cell
// adds the most uncovered reference mass, stopping at zero gain. Ties go to
// the lowest class index, so the construction is deterministic.
struct GreedySelection {
    std::size_t measure_index = 0;
    double gain = 0.0;
    std::vector<std::uint64_t> cell; // that measure's full cell at this band
};

struct GreedyCover {
    int n = 0;
    int k = 0;
    int band = 0;
    double m_bits = 0.0;
    std::vector<GreedySelection> selections;
    std::vector<std::uint64_t> covered; // union of selected cells, ascending
};

namespace detail {

inline GreedyCover greedy_cover_from_table(const HorizonTable &table,
                                           const IntervalPartition &part, int band) {
    GreedyCover out;
    out.n = part.n;
    out.k = part.k;
    out.band = band;
    out.m_bits = part.m_bits;

    std::vector<std::vector<std::uint64_t>> cells(table.log2_mu.size());
    for (std::size_t m = 0; m < table.log2_mu.size(); ++m)
        cells[m] = std::move(
            band_members(table.log2_mu[m], table.log2_ref, part)[static_cast<std::size_t>(
                band - 1)]);

    std::vector<std::uint8_t> taken(table.count, 0);
    std::vector<std::uint8_t> selected(cells.size(), 0);
    for (;;) {
        double best_gain = 0.0;
        std::size_t best = cells.size();
        for (std::size_t m = 0; m < cells.size(); ++m) {
            if (selected[m])
                continue; // a selected cell is fully covered already
            double gain = 0.0;
            for (std::uint64_t r : cells[m])
                if (!taken[r])
                    gain += std::exp2(table.log2_ref[r]);
            if (gain > best_gain) {
                best_gain = gain;
                best = m;
            }
        }
        if (best == cells.size())
            break;
        for (std::uint64_t r : cells[best])
            taken[r] = 1;
        selected[best] = 1;
        out.selections.push_back(GreedySelection{best, best_gain, cells[best]});
    }

    for (std::uint64_t r = 0; r < table.count; ++r)
        if (taken[r])
            out.covered.push_back(r);
    return out;
}

} // namespace detail

inline GreedyCover greedy_cover(const ModelClass &model_class, const ProcessMeasure &ref,
                                int n, int k, int band) {
    if (band < 1 || band > k)
        throw InputError("band index outside 1..k");
    auto part = partition_thresholds(n, k, model_class.alphabet.log2_size());
    auto table = detail::tabulate(model_class.measures, ref, n);
    return detail::greedy_cover_from_table(table, part, band);
}

} // namespace mixprior
