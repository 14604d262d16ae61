// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_CLI_H
#define LNME_CLI_H

#include <ostream>
#include <string>
#include <vector>

namespace lnme::cli {

inline constexpr const char* VERSION = "0.1.0";

inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_USAGE = 2;
inline constexpr int EXIT_DATA = 3;
/// Horizon or budget ran out; whatever was computed has been written.
inline constexpr int EXIT_EXHAUSTED = 4;

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lnme::cli

#endif // LNME_CLI_H
