#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "measure.hpp"

namespace mixprior {

namespace detail {

inline void check_probability_vector(const std::vector<double> &p, std::size_t want) {
    if (p.size() != want)
        throw InputError("probability vector has wrong length");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("probability outside [0,1]: " + format_double(v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InputError("probabilities sum to " + format_double(sum) + ", expected 1");
}

inline std::vector<double> to_log2(const std::vector<double> &p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = p[i] > 0.0 ? std::log2(p[i]) : kLogZero;
    return out;
}

inline std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += format_double(v[i]);
    }
    return out;
}

} // namespace detail

// i.i.d. categorical measure; Bernoulli(p) is the binary case with P(1) = p.
class IidMeasure : public ProcessMeasure {
  public:
    IidMeasure(Alphabet alphabet, std::vector<double> probs)
        : ProcessMeasure(alphabet), probs_(std::move(probs)),
          log_probs_(detail::to_log2(probs_)) {
        detail::check_probability_vector(probs_, alphabet.size());
    }

    const std::vector<double> &probs() const { return probs_; }
    bool is_uniform() const {
        for (double p : probs_)
            if (p != probs_[0])
                return false;
        return true;
    }

    std::unique_ptr<MeasureWalker> walker() const override {
        class Walker : public MeasureWalker {
          public:
            explicit Walker(const IidMeasure &m) : m_(m) {}

          protected:
            double do_step(Symbol a) const override { return m_.log_probs_[a]; }

          private:
            const IidMeasure &m_;
        };
        return std::make_unique<Walker>(*this);
    }

    std::string identity() const override {
        if (alphabet().size() == 2)
            return "bernoulli(p=" + format_double(probs_[1]) + ")";
        if (is_uniform())
            return "uniform(q=" + std::to_string(alphabet().size()) + ")";
        return "iid(p=" + detail::join_doubles(probs_) + ")";
    }

    json spec_json() const override {
        if (alphabet().size() == 2)
            return json{{"family", "bernoulli"}, {"p", probs_[1]}};
        if (is_uniform())
            return json{{"family", "uniform"}, {"alphabet_size", alphabet().size()}};
        return json{{"family", "iid"}, {"probs", probs_}};
    }

  private:
    std::vector<double> probs_;
    std::vector<double> log_probs_;
};

inline MeasurePtr bernoulli_measure(double p) {
    return std::make_shared<IidMeasure>(Alphabet(2), std::vector<double>{1.0 - p, p});
}

// The equal-probability i.i.d. measure: delta(x_{1..n}) = |X|^-n.
inline MeasurePtr uniform_measure(const Alphabet &alphabet) {
    std::vector<double> p(alphabet.size(), 1.0 / alphabet.size());
    return std::make_shared<IidMeasure>(alphabet, std::move(p));
}

// Order-m Markov chain. Positions t <= m draw i.i.d. from the initial
// distribution; afterwards the row indexed by the last m symbols applies.
class MarkovMeasure : public ProcessMeasure {
  public:
    MarkovMeasure(Alphabet alphabet, int order, std::vector<double> initial,
                  std::vector<std::vector<double>> transition)
        : ProcessMeasure(alphabet), order_(order), initial_(std::move(initial)),
          transition_(std::move(transition)) {
        if (order < 1)
            throw InputError("markov order must be >= 1");
        detail::check_probability_vector(initial_, alphabet.size());
        std::uint64_t rows = string_count(alphabet, order);
        if (transition_.size() != rows)
            throw InputError("markov transition table needs " + std::to_string(rows) +
                             " rows");
        for (const auto &row : transition_)
            detail::check_probability_vector(row, alphabet.size());
        log_initial_ = detail::to_log2(initial_);
        log_rows_.reserve(transition_.size());
        for (const auto &row : transition_)
            log_rows_.push_back(detail::to_log2(row));
    }

    int order() const { return order_; }

    std::unique_ptr<MeasureWalker> walker() const override {
        class Walker : public MeasureWalker {
          public:
            explicit Walker(const MarkovMeasure &m) : m_(m) {}

          protected:
            double do_step(Symbol a) const override {
                if (prefix_.size() < static_cast<std::size_t>(m_.order_))
                    return m_.log_initial_[a];
                std::uint64_t row = 0;
                for (std::size_t t = prefix_.size() - m_.order_; t < prefix_.size(); ++t)
                    row = row * m_.alphabet().size() + prefix_[t];
                return m_.log_rows_[row][a];
            }
            void do_push(Symbol a) override { prefix_.push_back(a); }
            void do_pop() override { prefix_.pop_back(); }

          private:
            const MarkovMeasure &m_;
            SymbolString prefix_;
        };
        return std::make_unique<Walker>(*this);
    }

    std::string identity() const override {
        std::string rows;
        for (std::size_t r = 0; r < transition_.size(); ++r) {
            if (r)
                rows += '|';
            rows += detail::join_doubles(transition_[r]);
        }
        return "markov(order=" + std::to_string(order_) + ";init=" +
               detail::join_doubles(initial_) + ";rows=" + rows + ")";
    }

    json spec_json() const override {
        return json{{"family", "markov"},
                    {"alphabet_size", alphabet().size()},
                    {"order", order_},
                    {"initial", initial_},
                    {"transition", transition_}};
    }

  private:
    int order_;
    std::vector<double> initial_;
    std::vector<std::vector<double>> transition_;
    std::vector<double> log_initial_;
    std::vector<std::vector<double>> log_rows_;
};

// binary order-1 chain from P(1|0), P(1|1)
inline MeasurePtr markov1_measure(double p1_given_0, double p1_given_1,
                                  double initial_p1 = 0.5) {
    return std::make_shared<MarkovMeasure>(
        Alphabet(2), 1, std::vector<double>{1.0 - initial_p1, initial_p1},
        std::vector<std::vector<double>>{{1.0 - p1_given_0, p1_given_0},
                                         {1.0 - p1_given_1, p1_given_1}});
}

// Concatenation of Bernoulli segments over a binary alphabet: positions
// 1..c_1 use segment 1, c_1+1..c_2 segment 2, and so on.
class ChangePointMeasure : public ProcessMeasure {
  public:
    ChangePointMeasure(std::vector<int> change_points, std::vector<double> segment_p1)
        : ProcessMeasure(Alphabet(2)), change_points_(std::move(change_points)),
          segment_p1_(std::move(segment_p1)) {
        if (segment_p1_.size() != change_points_.size() + 1)
            throw InputError("need one segment parameter per segment");
        int prev = 0;
        for (int c : change_points_) {
            if (c <= prev)
                throw InputError("change points must be strictly increasing and >= 1");
            prev = c;
        }
        for (double p : segment_p1_)
            if (!(p >= 0.0 && p <= 1.0))
                throw InputError("segment parameter outside [0,1]");
    }

    std::unique_ptr<MeasureWalker> walker() const override {
        class Walker : public MeasureWalker {
          public:
            explicit Walker(const ChangePointMeasure &m) : m_(m) {}

          protected:
            double do_step(Symbol a) const override {
                int position = static_cast<int>(depth()) + 1;
                std::size_t seg = static_cast<std::size_t>(
                    std::upper_bound(m_.change_points_.begin(), m_.change_points_.end(),
                                     position - 1) -
                    m_.change_points_.begin());
                double p1 = m_.segment_p1_[seg];
                double p = a == 1 ? p1 : 1.0 - p1;
                return p > 0.0 ? std::log2(p) : kLogZero;
            }

          private:
            const ChangePointMeasure &m_;
        };
        return std::make_unique<Walker>(*this);
    }

    std::string identity() const override {
        std::string cps;
        for (std::size_t i = 0; i < change_points_.size(); ++i) {
            if (i)
                cps += ',';
            cps += std::to_string(change_points_[i]);
        }
        return "changepoint(t=" + cps + ";p=" + detail::join_doubles(segment_p1_) + ")";
    }

    json spec_json() const override {
        return json{{"family", "changepoint"},
                    {"change_points", change_points_},
                    {"segment_p1", segment_p1_}};
    }

  private:
    std::vector<int> change_points_;
    std::vector<double> segment_p1_;
};

// Point mass on a single deterministic sequence: a finite prefix followed by
// one tail symbol repeated forever. The stored prefix is canonical (trailing
// tail symbols stripped), so equal sequences share one identity.
class DiracMeasure : public ProcessMeasure {
  public:
    DiracMeasure(Alphabet alphabet, SymbolString prefix, Symbol tail)
        : ProcessMeasure(alphabet), prefix_(std::move(prefix)), tail_(tail) {
        alphabet.check(prefix_);
        if (!alphabet.contains(tail))
            throw InputError("tail symbol outside alphabet");
        while (!prefix_.empty() && prefix_.back() == tail_)
            prefix_.pop_back();
    }

    Symbol symbol_at(std::size_t position) const { // 1-based
        return position <= prefix_.size() ? prefix_[position - 1] : tail_;
    }
    const SymbolString &prefix() const { return prefix_; }
    Symbol tail() const { return tail_; }

    // Largest position holding a non-tail symbol (0 when the sequence is the
    // constant tail). For tail 0 this is the position of the last 1.
    std::size_t support_prefix_length() const { return prefix_.size(); }

    std::unique_ptr<MeasureWalker> walker() const override {
        class Walker : public MeasureWalker {
          public:
            explicit Walker(const DiracMeasure &m) : m_(m) {}

          protected:
            double do_step(Symbol a) const override {
                return a == m_.symbol_at(depth() + 1) ? 0.0 : kLogZero;
            }

          private:
            const DiracMeasure &m_;
        };
        return std::make_unique<Walker>(*this);
    }

    std::string identity() const override {
        return "dirac(prefix=" + format_symbols(alphabet(), prefix_) +
               ",tail=" + std::to_string(tail_) + ")";
    }

    json spec_json() const override {
        return json{{"family", "dirac"},
                    {"alphabet_size", alphabet().size()},
                    {"prefix", prefix_},
                    {"tail", tail_}};
    }

  private:
    SymbolString prefix_;
    Symbol tail_;
};

inline std::shared_ptr<const DiracMeasure> dirac_measure(Alphabet alphabet,
                                                         SymbolString prefix,
                                                         Symbol tail = 0) {
    return std::make_shared<DiracMeasure>(alphabet, std::move(prefix), tail);
}

// Parses one measure spec object ({"family": ...}).
inline MeasurePtr measure_from_json(const json &spec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw InputError("measure spec must be an object with a \"family\" field");
    std::string family = spec.at("family").get<std::string>();
    if (family == "bernoulli") {
        double p = spec.at("p").get<double>();
        if (!(p >= 0.0 && p <= 1.0))
            throw InputError("bernoulli p outside [0,1]");
        return bernoulli_measure(p);
    }
    if (family == "uniform") {
        Alphabet a(spec.value("alphabet_size", 2u));
        return uniform_measure(a);
    }
    if (family == "iid") {
        auto probs = spec.at("probs").get<std::vector<double>>();
        Alphabet a(static_cast<std::uint32_t>(probs.size()));
        return std::make_shared<IidMeasure>(a, std::move(probs));
    }
    if (family == "markov") {
        Alphabet a(spec.value("alphabet_size", 2u));
        return std::make_shared<MarkovMeasure>(
            a, spec.value("order", 1),
            spec.at("initial").get<std::vector<double>>(),
            spec.at("transition").get<std::vector<std::vector<double>>>());
    }
    if (family == "changepoint") {
        return std::make_shared<ChangePointMeasure>(
            spec.at("change_points").get<std::vector<int>>(),
            spec.at("segment_p1").get<std::vector<double>>());
    }
    if (family == "dirac") {
        Alphabet a(spec.value("alphabet_size", 2u));
        SymbolString prefix;
        if (spec.at("prefix").is_string())
            prefix = parse_symbols(a, spec.at("prefix").get<std::string>());
        else
            prefix = spec.at("prefix").get<SymbolString>();
        return std::make_shared<DiracMeasure>(a, std::move(prefix),
                                              spec.value("tail", Symbol{0}));
    }
    throw InputError("unknown measure family: " + family);
}

} // namespace mixprior
