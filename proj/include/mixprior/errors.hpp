#pragma once

#include <stdexcept>
#include <string>

namespace mixprior {

// Malformed specs, symbols outside the alphabet, invalid parameters.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An exact enumeration would exceed the configured state budget.
class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string &msg, int horizon)
        : std::runtime_error(msg), horizon_(horizon) {}
    int horizon() const { return horizon_; }

  private:
    int horizon_;
};

// Conditioning on a prefix of probability zero.
class UndefinedConditionalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Artifacts that do not belong together (digest mismatch).
class ConsistencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace mixprior
