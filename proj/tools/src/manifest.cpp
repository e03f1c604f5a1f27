#include "manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "honeytrap/errors.hpp"

namespace honeytrap::cli {

namespace {

constexpr int kManifestVersion = 1;

nlohmann::json hashes_json(const std::vector<std::pair<std::string, std::string>>& entries) {
    auto arr = nlohmann::json::array();
    for (const auto& [path, hash] : entries) {
        arr.push_back({{"path", path}, {"sha256", hash}});
    }
    return arr;
}

std::vector<std::pair<std::string, std::string>> hashes_from(const nlohmann::json& arr) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : arr) {
        out.emplace_back(e.at("path").get<std::string>(), e.at("sha256").get<std::string>());
    }
    return out;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read '{}'", path.string()));
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256: digest initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

void Manifest::add_input(const std::filesystem::path& path) { inputs.emplace_back(path.generic_string(), sha256_file(path)); }

void Manifest::add_output(const std::filesystem::path& path) {
    outputs.emplace_back(path.generic_string(), sha256_file(path));
}

nlohmann::json Manifest::to_json() const {
    return {{"manifest_version", kManifestVersion},
            {"tool", "honeytrap"},
            {"tool_version", HONEYTRAP_VERSION},
            {"command", command},
            {"args", args},
            {"seed", seed},
            {"config", config},
            {"inputs", hashes_json(inputs)},
            {"outputs", hashes_json(outputs)}};
}

Manifest Manifest::from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("manifest_version").get<int>() != kManifestVersion) {
            throw ParseError("manifest: unsupported manifest_version", 0);
        }
        Manifest m;
        m.command = doc.at("command").get<std::string>();
        m.args = doc.at("args").get<std::vector<std::string>>();
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.config = doc.at("config");
        m.inputs = hashes_from(doc.at("inputs"));
        m.outputs = hashes_from(doc.at("outputs"));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("manifest: {}", e.what()), 0);
    }
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    out << manifest.to_json().dump(2) << '\n';
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read manifest '{}'", path.string()));
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(fmt::format("manifest '{}': {}", path.string(), e.what()), 0);
    }
    return Manifest::from_json(doc);
}

}  // namespace honeytrap::cli
