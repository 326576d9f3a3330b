#pragma once

#include <stdexcept>
#include <string>

namespace mtdbench {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed model or scenario data (bad ids, broken invariants, schema
// violations). Maps to exit code 1 in the CLI.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A computation was asked for inputs it does not support (AND gates,
// cyclic graphs for the DAG oracle, empty catalogs, exceeded bounds).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

// File or serialization failure. Maps to exit code 2 in the CLI.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtdbench
