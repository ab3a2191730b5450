#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypercalc::cli {

enum class Status { Pass, Fail, Info };

/// One subcommand result. `payload` keys are emitted in insertion order
/// between schema_version and the subcommand/status trailer.
struct Report {
  std::string subcommand;
  Status status = Status::Info;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  std::string text;  // human-readable rendering
};

/// JSON with every real printed as %.17g; non-finite reals become null.
std::string dump_json(const nlohmann::ordered_json& j);

std::string format_report(const Report& r, bool json);

/// Entry point behind the hypercalc binary. args excludes the program name.
/// Returns 0 on success or pass, 1 when an embedded check fails, 2 on usage
/// errors (diagnostics go to err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypercalc::cli
