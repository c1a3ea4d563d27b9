#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpz {

/// Raised when an argument leaves the real domain of a map or formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the star-expression parser. Carries the byte offset of the
/// offending token and the set of tokens that would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected = {})
      : std::runtime_error(format(offset, message, expected)),
        offset_(offset),
        reason_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string out = "parse error at offset " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected one of:";
      for (const auto& e : expected) out += " " + e;
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::string reason_;
  std::vector<std::string> expected_;
};

/// Monte Carlo estimator could not produce a result from the sampled data.
class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_domain(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace kpz
