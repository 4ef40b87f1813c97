#pragma once

#include <stdexcept>
#include <string>

namespace rotkp {

/// Invalid configuration or arguments (bad grid, unknown profile, failed precondition).
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure during a run (NaN/Inf, cavitation).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Solution left the finite range; carries the step index where it happened.
class BlowupError : public NumericalError {
  public:
    BlowupError(const std::string& msg, long step) : NumericalError(msg), step_(step) {}
    long step() const { return step_; }

  private:
    long step_;
};

}  // namespace rotkp
