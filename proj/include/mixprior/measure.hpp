#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "alphabet.hpp"
#include "errors.hpp"
#include "log_prob.hpp"

namespace mixprior {

using json = nlohmann::ordered_json;

// Incremental left-to-right evaluator over a growing prefix. A walker tracks
// log2 P(x_{1..t}) as symbols are pushed, so sweeping X^n costs one
// conditional per visited node instead of one marginal per leaf.
// Walkers are cheap to create and not thread-safe; use one per thread.
class MeasureWalker {
  public:
    virtual ~MeasureWalker() = default;

    // log2 P(current prefix)
    double log2_marginal() const { return marginals_.back(); }

    // log2 P(a | current prefix); only meaningful while log2_marginal() > -inf
    double log2_step(Symbol a) const {
        return marginals_.back() == kLogZero ? kLogZero : do_step(a);
    }

    void push(Symbol a) {
        double s = log2_step(a);
        double m = marginals_.back();
        marginals_.push_back((m == kLogZero || s == kLogZero) ? kLogZero : m + s);
        do_push(a);
    }

    void pop() {
        marginals_.pop_back();
        do_pop();
    }

    std::size_t depth() const { return marginals_.size() - 1; }

  protected:
    MeasureWalker() : marginals_{0.0} {}
    virtual double do_step(Symbol a) const = 0;
    virtual void do_push(Symbol) {}
    virtual void do_pop() {}

  private:
    std::vector<double> marginals_;
};

// A probability measure on one-way infinite sequences, exposed through its
// finite-horizon marginals and next-symbol conditionals. Immutable after
// construction; safe to share across threads.
class ProcessMeasure {
  public:
    virtual ~ProcessMeasure() = default;

    const Alphabet &alphabet() const { return alphabet_; }

    virtual std::unique_ptr<MeasureWalker> walker() const = 0;

    // family plus parameters; unique per distinct measure within a class
    virtual std::string identity() const = 0;

    // canonical parameter form, accepted back by measure_from_json
    virtual json spec_json() const = 0;

    LogProb log_marginal(const SymbolString &x) const {
        alphabet_.check(x);
        auto w = walker();
        for (Symbol a : x)
            w->push(a);
        return LogProb::from_log2(w->log2_marginal());
    }

    LogProb log_conditional(const SymbolString &prefix, Symbol a) const {
        alphabet_.check(prefix);
        if (!alphabet_.contains(a))
            throw InputError("conditional symbol outside alphabet");
        auto w = walker();
        for (Symbol s : prefix)
            w->push(s);
        if (w->log2_marginal() == kLogZero)
            throw UndefinedConditionalError(
                "conditional on a zero-probability prefix: " +
                format_symbols(alphabet_, prefix));
        return LogProb::from_log2(w->log2_step(a));
    }

    // Draws x_{1..n} symbol by symbol from the conditionals. Deterministic
    // given the seed (mt19937_64 with a fixed uniform mapping).
    SymbolString sample(std::size_t n, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        auto w = walker();
        SymbolString out;
        out.reserve(n);
        for (std::size_t t = 0; t < n; ++t) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            double acc = 0.0;
            Symbol pick = 0;
            for (Symbol a = 0; a < alphabet_.size(); ++a) {
                double step = w->log2_step(a);
                if (step == kLogZero)
                    continue;
                acc += std::exp2(step);
                pick = a; // falls back to the last symbol of positive mass
                if (u < acc)
                    break;
            }
            out.push_back(pick);
            w->push(pick);
        }
        return out;
    }

  protected:
    explicit ProcessMeasure(Alphabet alphabet) : alphabet_(alphabet) {}

  private:
    Alphabet alphabet_;
};

using MeasurePtr = std::shared_ptr<const ProcessMeasure>;

} // namespace mixprior
