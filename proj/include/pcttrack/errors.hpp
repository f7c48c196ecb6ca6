#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcttrack {

enum class Errc {
  singular_sideslip,  // u <= 0 where the sideslip angle must be defined
  gain_singular,      // reduced surge gain b_ul fell below its guard
  out_of_range,       // reference queried outside its time span
  parse,
  validation,
  grid_mismatch,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Aggregates every violated invariant found while validating a config.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct SimTrace;

/// A singularity guard tripped inside the closed loop. Carries the step index
/// and the partial trace recorded up to and including the failing step.
class GuardTrip : public Error {
 public:
  GuardTrip(Errc code, std::size_t step, double t, const std::string& detail,
            std::shared_ptr<const SimTrace> partial);
  std::size_t step() const noexcept { return step_; }
  double time() const noexcept { return t_; }
  const std::shared_ptr<const SimTrace>& partial_trace() const noexcept { return partial_; }

 private:
  std::size_t step_;
  double t_;
  std::shared_ptr<const SimTrace> partial_;
};

}  // namespace pcttrack
