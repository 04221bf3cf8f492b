#pragma once

#include <stdexcept>
#include <string>

namespace kakeya {

// All library failures derive from Error; category() is a short stable token
// used by the CLI for its one-line error output.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};
struct OrderingError : Error {
  explicit OrderingError(const std::string& w) : Error("ordering", w) {}
};
struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error("solver", w) {}
};
struct SizeError : Error {
  explicit SizeError(const std::string& w) : Error("size", w) {}
};
struct DataError : Error {
  explicit DataError(const std::string& w) : Error("data", w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error("io", w) {}
};

}  // namespace kakeya
