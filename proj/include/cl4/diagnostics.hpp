#ifndef CL4_DIAGNOSTICS_HPP
#define CL4_DIAGNOSTICS_HPP

#include <string>
#include <vector>

namespace cl4 {

/// Outcome of a verifier: `ok` plus one line per violated condition.
struct CheckResult {
  bool ok = true;
  std::vector<std::string> diagnostics;

  explicit operator bool() const { return ok; }

  void fail(std::string what) {
    ok = false;
    diagnostics.push_back(std::move(what));
  }
};

}  // namespace cl4

#endif  // CL4_DIAGNOSTICS_HPP
