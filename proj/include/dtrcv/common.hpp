#pragma once

#include <stdexcept>
#include <string>

namespace dtrcv {

// Failure taxonomy shared across the library. Data problems (bad input) are
// distinguished from numerical problems (estimator cannot proceed) so the CLI
// can map them to distinct exit codes.
enum class ErrorKind {
  empty_arm,              // a dataset arm has no individuals
  non_finite,             // NaN/Inf in features, actions, or responses
  length_mismatch,        // column lengths disagree
  bad_data,               // other malformed input (actions outside {0,1}, CSV shape)
  arm_exhausted,          // a split would leave a validation or training arm empty
  root_too_small,         // tree cannot satisfy the per-arm leaf minimum at the root
  degenerate_dispersion,  // a variance that must be positive is zero
  insufficient_reps,      // too few pairs/replicates to estimate a correlation
  degenerate_interval,    // a probability/threshold parameter outside its open interval
  config,                 // unusable run configuration
  internal,               // broken invariant inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) fail(kind, msg);
}

}  // namespace dtrcv
