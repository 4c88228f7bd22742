#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tusi {

enum class errc {
  invalid_input,
  domain,
  pole,
  critical_point,
  no_sign_change,
  degenerate_root,
  non_finite,
  uncertified_seed,
};

inline const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_input: return "invalid input";
    case errc::domain: return "domain error";
    case errc::pole: return "pole";
    case errc::critical_point: return "critical point";
    case errc::no_sign_change: return "no sign change";
    case errc::degenerate_root: return "degenerate root";
    case errc::non_finite: return "non-finite value";
    case errc::uncertified_seed: return "uncertified seed";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the errc codes.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Raised by Newton iteration; keeps the orbit computed before the failure.
class iteration_error : public error {
 public:
  iteration_error(errc code, const std::string& what, std::vector<double> trace)
      : error(code, what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace tusi
