#ifndef SIMLM_ERRORS_HPP
#define SIMLM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simlm {

// Base of everything the library throws on bad input or impossible requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCorpusError : public Error {
 public:
  EmptyCorpusError() : Error("empty corpus") {}
};

// Input bytes that are not valid UTF-8.
class IngestionError : public Error {
 public:
  explicit IngestionError(std::size_t offset)
      : Error("invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotSeenError : public Error {
 public:
  using Error::Error;
};

// The redistribution scheme puts all its mass on seen successors, so the
// leftover mass has nowhere to go.
class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

class NoNeighborsError : public Error {
 public:
  using Error::Error;
};

class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotDagError : public Error {
 public:
  NotDagError() : Error("lattice is not a DAG") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace simlm

#endif  // SIMLM_ERRORS_HPP
