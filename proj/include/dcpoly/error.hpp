#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dcpoly {

/// Malformed arguments: dimension mismatches, unknown registry ids, bad configs.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle was evaluated outside the set where it is defined.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::vector<double> point)
      : std::domain_error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// A broken internal invariant (e.g. the vertex engine produced an empty set).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dcpoly
