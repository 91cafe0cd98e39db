#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bwslex {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// A value violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A statistic is undefined for the given input (constant vector, zero variance).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// The randomized design search ran out of restarts.
class DesignInfeasible : public Error {
 public:
  DesignInfeasible(std::uint64_t seed, std::size_t n)
      : Error("no valid design found for N=" + std::to_string(n) +
              " with seed " + std::to_string(seed)),
        seed_(seed),
        n_(n) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t n() const noexcept { return n_; }

 private:
  std::uint64_t seed_;
  std::size_t n_;
};

}  // namespace bwslex
