#pragma once
#include <stdexcept>
#include <string>
#include <utility>

namespace mockq {

// Error carries a short machine-readable code ("bad_argument", "grid_mismatch",
// "step_too_large", ...) that the CLI maps onto exit codes and stderr lines.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

inline void require(bool condition, const std::string& code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace mockq
