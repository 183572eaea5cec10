#pragma once

#include <stdexcept>
#include <string>

namespace nba {

// Malformed or contradictory input data (bad JSON, broken invariants).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A plan references slots, sources, or edges that the instance does not have.
class PlanShapeError : public InputError {
 public:
  explicit PlanShapeError(const std::string& what) : InputError(what) {}
};

// An operation was called on input that violates its stated precondition.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A search or enumeration exceeded its configured budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nba
