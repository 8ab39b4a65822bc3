#ifndef MAGRIGID_ERRORS_HPP_
#define MAGRIGID_ERRORS_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace magrigid {

/// Rejected input: violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The field fails |B(x) - b0| < |b0| (measured on a sample grid).
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// The recovered density s'(y) is not strictly positive, so the map
/// y(s) = s + A1(s)/b0 cannot be inverted from the data.
class MonotonicityError : public std::runtime_error {
 public:
  MonotonicityError(const std::string& what, double min_value)
      : std::runtime_error(what), min_value_(min_value) {}
  double min_value() const { return min_value_; }

 private:
  double min_value_;
};

/// A malformed or inconsistent data file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace magrigid

#endif  // MAGRIGID_ERRORS_HPP_
