#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace honeytrap::cli {

/// Hex SHA-256 of a file's bytes. IoError when unreadable.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// What a command consumed and produced. Deliberately free of timestamps
/// and host details, so re-running a command rewrites it byte for byte.
struct Manifest {
    std::string command;
    std::vector<std::string> args;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
    std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256

    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static Manifest from_json(const nlohmann::json& doc);
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
[[nodiscard]] Manifest read_manifest(const std::filesystem::path& path);

}  // namespace honeytrap::cli
