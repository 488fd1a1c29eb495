#pragma once

#include <cmath>
#include <limits>

namespace mixprior {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log2(2^a + 2^b), safe for -inf arguments
inline double log2_add_exp(double a, double b) {
    if (a == kLogZero)
        return b;
    if (b == kLogZero)
        return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

// A probability held in the log2 domain; -inf encodes probability zero.
class LogProb {
  public:
    LogProb() : v_(kLogZero) {}

    static LogProb from_log2(double v) { return LogProb(v); }
    static LogProb from_prob(double p) {
        return p <= 0.0 ? LogProb() : LogProb(std::log2(p));
    }
    static LogProb one() { return LogProb(0.0); }
    static LogProb zero() { return LogProb(); }

    double log2() const { return v_; }
    double prob() const { return std::exp2(v_); }
    bool is_zero() const { return v_ == kLogZero; }

    // product of probabilities
    LogProb operator*(LogProb o) const {
        if (is_zero() || o.is_zero())
            return zero();
        return LogProb(v_ + o.v_);
    }
    // sum of probabilities (log-sum-exp)
    LogProb operator+(LogProb o) const { return LogProb(log2_add_exp(v_, o.v_)); }

    friend bool operator==(LogProb a, LogProb b) { return a.v_ == b.v_; }
    friend bool operator<(LogProb a, LogProb b) { return a.v_ < b.v_; }

  private:
    explicit LogProb(double v) : v_(v) {}
    double v_;
};

} // namespace mixprior
