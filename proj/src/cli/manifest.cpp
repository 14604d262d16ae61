// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "manifest.h"

#include <lnme/error.h>

#include <fmt/format.h>
#include <openssl/sha.h>

#include <fstream>
#include <sstream>

namespace lnme::cli {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write to '" + path + "' failed");
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    std::string hex;
    hex.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char byte : digest) hex += fmt::format("{:02x}", byte);
    return hex;
}

namespace {

nlohmann::ordered_json digests_json(const std::vector<FileDigest>& files)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& f : files) out.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return out;
}

std::vector<FileDigest> digests_from(const nlohmann::ordered_json& array)
{
    std::vector<FileDigest> out;
    for (const auto& f : array) out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    return out;
}

} // namespace

std::string write_manifest_json(const RunManifest& manifest)
{
    nlohmann::ordered_json doc;
    doc["tool"] = "lnme";
    doc["version"] = manifest.tool_version;
    doc["command"] = manifest.command;
    doc["args"] = manifest.args;
    doc["parameters"] = manifest.parameters;
    doc["inputs"] = digests_json(manifest.inputs);
    doc["seeds"] = manifest.seeds;
    doc["outputs"] = digests_json(manifest.outputs);
    return doc.dump(2) + "\n";
}

RunManifest parse_manifest_json(std::string_view document)
{
    try {
        const auto doc = nlohmann::ordered_json::parse(document);
        if (doc.value("tool", "") != "lnme") throw DataError("not an lnme run manifest");
        RunManifest m;
        m.tool_version = doc.at("version").get<std::string>();
        m.command = doc.at("command").get<std::string>();
        m.args = doc.at("args").get<std::vector<std::string>>();
        m.parameters = doc.at("parameters");
        m.inputs = digests_from(doc.at("inputs"));
        m.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        m.outputs = digests_from(doc.at("outputs"));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed run manifest: ") + e.what());
    }
}

} // namespace lnme::cli
