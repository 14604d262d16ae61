// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_CLI_MANIFEST_H
#define LNME_CLI_MANIFEST_H

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lnme::cli {

/// Reads a whole file; a missing or unreadable file is a DataError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct FileDigest {
    std::string path;
    std::string sha256;
};

/**
 * Everything needed to repeat a run: the command line (without the output
 * directory), the resolved parameters, digests of every input and output,
 * and the seeds. Deliberately carries no wall-clock data so that a rerun
 * reproduces the manifest byte for byte.
 */
struct RunManifest {
    std::string tool_version;
    std::string command;
    std::vector<std::string> args;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::vector<FileDigest> inputs;
    std::vector<std::uint64_t> seeds;
    std::vector<FileDigest> outputs;
};

inline constexpr std::string_view MANIFEST_FILE = "manifest.json";

std::string write_manifest_json(const RunManifest& manifest);
RunManifest parse_manifest_json(std::string_view document);

} // namespace lnme::cli

#endif // LNME_CLI_MANIFEST_H
