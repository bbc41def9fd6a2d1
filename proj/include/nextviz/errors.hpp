#pragma once

#include <stdexcept>
#include <string>

namespace nextviz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input bytes: CSV structure, JSON syntax, bad override files.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request that names something the dataset does not have.
class UnknownColumn : public Error {
 public:
  explicit UnknownColumn(const std::string& name)
      : Error("unknown column: " + name), column_(name) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// Attribute combination or filter that cannot be turned into a chart.
class UnsupportedSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace nextviz
