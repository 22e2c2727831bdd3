#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace pairank {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

// Entry point of the `pairank` tool; `args` excludes the program name.
// Standard input is used when no -i/--input is given.
int run_cli(std::span<const std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace pairank
