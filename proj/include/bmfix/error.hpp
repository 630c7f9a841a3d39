#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmfix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input: bad matrices, schema violations,
// parameters outside their documented domains.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The inputs are well formed but a contraction hypothesis does not hold
// (alpha*q*s >= 1, alpha below the certified ratio, ...).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// The selected image point fails the strict Picard step inequality.
class RatioViolation : public HypothesisViolation {
 public:
  RatioViolation(const std::string& what, std::size_t step)
      : HypothesisViolation(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace bmfix
