#pragma once

#include <iosfwd>

#include "dbc/suites.hpp"

namespace dbc {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitDomain = 3 };

// factor | bracket | mul | twist | leaf.  Points are given as {"g": matrix} or
// sampled from {"u": [...], "v": [...]} with cfg.seed.  Throws SchemaError on a
// malformed payload and other dbc::Error subclasses on mathematical failures.
nlohmann::json cmd_compute(const std::string& verb, const nlohmann::json& payload, const RunConfig& cfg);

// {"error": {"kind", "message"}, "exit_code"}
nlohmann::json error_json(const std::string& kind, const std::string& message, int code);

// Full command line; JSON goes to `out` unless --out names a file.
int run_cli(int argc, const char* const* argv, std::ostream& out);

}  // namespace dbc
