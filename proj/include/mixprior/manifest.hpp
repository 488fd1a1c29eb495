#pragma once

#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "digest.hpp"
#include "errors.hpp"

namespace mixprior {

inline constexpr const char *kToolVersion = "0.1.0";

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string file_digest(const std::filesystem::path &path) {
    return digest_hex(read_file(path));
}

// temp file + rename, so readers never observe a half-written artifact
inline void atomic_write(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// Run record written next to generated artifacts. Identical inputs and tool
// version yield identical output digests; the timestamp is informational.
inline nlohmann::ordered_json make_manifest(
    const std::vector<std::pair<std::string, std::string>> &inputs,
    const std::vector<std::pair<std::string, std::string>> &outputs) {
    nlohmann::ordered_json in_digests = nlohmann::ordered_json::object();
    for (const auto &[name, digest] : inputs)
        in_digests[name] = digest;
    nlohmann::ordered_json out_digests = nlohmann::ordered_json::object();
    for (const auto &[name, digest] : outputs)
        out_digests[name] = digest;

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return nlohmann::ordered_json{{"tool_version", kToolVersion},
                                  {"inputs", in_digests},
                                  {"outputs", out_digests},
                                  {"created_utc", stamp}};
}

} // namespace mixprior
