#pragma once

#include <stdexcept>
#include <string>

namespace primelab {

// Precondition violated by the caller (bad prime, odd even-number, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result does not fit the supported integer width.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// A requested structure exceeds the configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primelab
