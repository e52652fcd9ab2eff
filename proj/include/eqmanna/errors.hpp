#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eqmanna {

// A solver was asked to run on an instance outside its valuation class.
class NotApplicable : public std::runtime_error {
 public:
  NotApplicable(std::string flag, const std::string& what)
      : std::runtime_error(what), flag_(std::move(flag)) {}
  const std::string& flag() const noexcept { return flag_; }

 private:
  std::string flag_;
};

// Caller-side contract violation (bad partial allocation, wrong shape, ...).
class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Item-level misuse of an Allocation (double assignment, wrong owner).
class AllocationError : public std::logic_error {
 public:
  AllocationError(const std::string& what, int item, int owner)
      : std::logic_error(what), item_(item), owner_(owner) {}
  int item() const noexcept { return item_; }
  int owner() const noexcept { return owner_; }

 private:
  int item_;
  int owner_;
};

// Enumeration or state-space size beyond the configured limit. Never a
// silent truncation.
class CeilingExceeded : public std::runtime_error {
 public:
  CeilingExceeded(const std::string& what, long double required, long double ceiling)
      : std::runtime_error(what), required_(required), ceiling_(ceiling) {}
  long double required() const noexcept { return required_; }
  long double ceiling() const noexcept { return ceiling_; }

 private:
  long double required_;
  long double ceiling_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : std::runtime_error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

// A state the correctness argument says is unreachable was reached.
class InternalDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace eqmanna
