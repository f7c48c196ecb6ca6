#include "pcttrack/errors.hpp"

#include <sstream>

namespace pcttrack {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::singular_sideslip: return "SingularSideslip";
    case Errc::gain_singular: return "GainSingular";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::parse: return "ParseError";
    case Errc::validation: return "ValidationError";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::io: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid configuration (" << issues.size() << " issue" << (issues.size() == 1 ? "" : "s")
     << ")";
  for (const auto& i : issues) os << "\n  - " << i;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error(Errc::validation, join_issues(issues)), issues_(std::move(issues)) {}

GuardTrip::GuardTrip(Errc code, std::size_t step, double t, const std::string& detail,
                     std::shared_ptr<const SimTrace> partial)
    : Error(code, std::string(to_string(code)) + " at step " + std::to_string(step) + " (t = " +
                      std::to_string(t) + " s): " + detail),
      step_(step),
      t_(t),
      partial_(std::move(partial)) {}

}  // namespace pcttrack
