#pragma once

#include <atomic>
#include <cstdlib>
#include <span>
#include <thread>
#include <vector>

#include "measure.hpp"

namespace mixprior {

// Exact enumeration refuses above this many states; callers fall back to
// Monte Carlo estimation.
inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 24;

inline std::uint64_t checked_string_count(const Alphabet &alphabet, int n) {
    std::uint64_t count = string_count(alphabet, n);
    if (count > kEnumerationBudget)
        throw BudgetError("enumeration of |X|^" + std::to_string(n) + " = " +
                              std::to_string(count) + " states exceeds budget " +
                              std::to_string(kEnumerationBudget),
                          n);
    return count;
}

// Worker threads for partitioned enumeration; reads MIXPRIOR_THREADS.
inline unsigned thread_count() {
    if (const char *env = std::getenv("MIXPRIOR_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256)
            return static_cast<unsigned>(v);
    }
    return 1;
}

// Depth-first sweep of X^n in lexicographic order, advancing one walker per
// measure in lock step. visitor(rank, x, log2_marginals) fires once per
// string; log2_marginals[i] is log2 of measure i's marginal of x.
template <class Visitor>
void walk_strings(const Alphabet &alphabet, int n,
                  std::span<const ProcessMeasure *const> measures, Visitor &&visitor) {
    checked_string_count(alphabet, n);
    std::vector<std::unique_ptr<MeasureWalker>> walkers;
    walkers.reserve(measures.size());
    for (const ProcessMeasure *m : measures)
        walkers.push_back(m->walker());

    SymbolString x;
    std::vector<double> margs(measures.size());
    std::uint64_t rank = 0;
    auto recurse = [&](auto &&self, int depth) -> void {
        if (depth == n) {
            for (std::size_t i = 0; i < walkers.size(); ++i)
                margs[i] = walkers[i]->log2_marginal();
            visitor(rank++, static_cast<const SymbolString &>(x), margs);
            return;
        }
        for (Symbol a = 0; a < alphabet.size(); ++a) {
            x.push_back(a);
            for (auto &w : walkers)
                w->push(a);
            self(self, depth + 1);
            x.pop_back();
            for (auto &w : walkers)
                w->pop();
        }
    };
    recurse(recurse, 0);
}

// Sum of term(rank, log2_marginals) over X^n. The string space is split into
// fixed chunks by leading symbols and chunk subtotals are added in
// lexicographic order, so the result does not depend on the thread count.
template <class TermFn>
double sum_over_strings(const Alphabet &alphabet, int n,
                        std::span<const ProcessMeasure *const> measures, TermFn term) {
    std::uint64_t count = checked_string_count(alphabet, n);
    int chunk_depth = 0;
    std::uint64_t chunks = 1;
    while (chunk_depth < n && chunks < 64) {
        chunks *= alphabet.size();
        ++chunk_depth;
    }
    std::uint64_t suffix_count = count / chunks;

    std::vector<double> subtotal(chunks, 0.0);
    auto run_chunk = [&](std::uint64_t c) {
        SymbolString prefix = unrank(alphabet, chunk_depth, c);
        std::vector<std::unique_ptr<MeasureWalker>> walkers;
        walkers.reserve(measures.size());
        for (const ProcessMeasure *m : measures)
            walkers.push_back(m->walker());
        for (Symbol a : prefix)
            for (auto &w : walkers)
                w->push(a);

        std::vector<double> margs(measures.size());
        double acc = 0.0;
        std::uint64_t local = 0;
        auto recurse = [&](auto &&self, int depth) -> void {
            if (depth == n) {
                for (std::size_t i = 0; i < walkers.size(); ++i)
                    margs[i] = walkers[i]->log2_marginal();
                acc += term(c * suffix_count + local++, margs);
                return;
            }
            for (Symbol a = 0; a < alphabet.size(); ++a) {
                for (auto &w : walkers)
                    w->push(a);
                self(self, depth + 1);
                for (auto &w : walkers)
                    w->pop();
            }
        };
        recurse(recurse, chunk_depth);
        subtotal[c] = acc;
    };

    unsigned workers = thread_count();
    if (workers <= 1 || chunks == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c)
            run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto pump = [&] {
            for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
                run_chunk(c);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < workers; ++t)
            pool.emplace_back(pump);
        pump();
        for (auto &t : pool)
            t.join();
    }

    double total = 0.0;
    for (double s : subtotal)
        total += s;
    return total;
}

} // namespace mixprior
