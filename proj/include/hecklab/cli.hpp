#pragma once

#include <map>
#include <string>
#include <vector>

namespace hecklab::cli {

/// Flat `key = value` configuration with optional `[subcommand]` sections.
/// Section "" holds global keys.  Command-line flags override anything
/// found here.
struct RunConfig {
  std::map<std::string, std::map<std::string, std::string>> sections;

  /// Global keys with the subcommand's section merged on top.
  std::map<std::string, std::string> effective(const std::string& subcommand) const;

  /// Sorted, normalized text; parsing it back yields an equal config.
  std::string canonical_text() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Dispatch `coeffs | eval | eval-theta | verify | scan | decay`.
/// `args` excludes the program name.  Exit codes: 0 success, 1 when any
/// verification FAILs, 2 on usage errors, 3 on numeric errors or
/// INCONCLUSIVE reports.
int run(const std::vector<std::string>& args);

}  // namespace hecklab::cli
