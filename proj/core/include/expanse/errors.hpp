#pragma once

#include <stdexcept>
#include <string>

namespace expanse {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ArcTooShort : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Raised when a word search exceeds its evaluation budget.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace expanse
