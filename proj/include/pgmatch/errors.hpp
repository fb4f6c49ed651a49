#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pgmatch {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matching or decoded atom refers to an id absent from its graph.
class UnknownId : public Error {
 public:
  explicit UnknownId(std::string id, const std::string& where)
      : Error("unknown id '" + id + "' in " + where), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// An edit operation was applied to a graph that does not satisfy its
// precondition. `index()` is set when the op was part of a script.
class PreconditionViolated : public Error {
 public:
  PreconditionViolated(std::string op, std::string reason,
                       std::optional<std::size_t> index = std::nullopt)
      : Error(format(op, reason, index)),
        op_(std::move(op)),
        reason_(std::move(reason)),
        index_(index) {}

  const std::string& op() const noexcept { return op_; }
  const std::string& reason() const noexcept { return reason_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  static std::string format(const std::string& op, const std::string& reason,
                            std::optional<std::size_t> index) {
    std::string s = "precondition violated";
    if (index) s += " at op " + std::to_string(*index);
    return s + ": " + op + ": " + reason;
  }

  std::string op_;
  std::string reason_;
  std::optional<std::size_t> index_;
};

class InvalidMatching : public Error {
 public:
  explicit InvalidMatching(const std::string& why)
      : Error("invalid matching: " + why) {}
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SearchTimeout : public Error {
 public:
  SearchTimeout() : Error("search budget exceeded") {}
};

class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

class ProcessFailure : public Error {
 public:
  using Error::Error;
};

class SolverParseFailure : public Error {
 public:
  using Error::Error;
};

class DecodeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace pgmatch
