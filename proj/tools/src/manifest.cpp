#include "gbmsum_cli/manifest.hpp"

#include "gbmsum/version.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace gbmsum::cli {

std::string sha256_hex(const std::string& data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest::RunManifest(std::string command, nlohmann::ordered_json parameters,
                         std::filesystem::path out_dir)
    : command_(std::move(command)),
      parameters_(std::move(parameters)),
      out_dir_(std::move(out_dir)),
      started_(utc_timestamp()) {}

std::filesystem::path RunManifest::write_output(const std::string& name,
                                                const std::string& content) {
    std::filesystem::create_directories(out_dir_);
    auto path = out_dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
    os.close();
    if (!os) throw std::runtime_error("write failed for " + path.string());
    outputs_.push_back({name, sha256_hex(content), content.size()});
    return path;
}

nlohmann::ordered_json RunManifest::to_json(int exit_code) const {
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& o : outputs_) {
        files.push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    }
    return {{"command", command_},
            {"parameters", parameters_},
            {"version", GBMSUM_VERSION},
            {"seeds", seeds_},
            {"started", started_},
            {"finished", utc_timestamp()},
            {"exit_code", exit_code},
            {"outputs", files}};
}

std::filesystem::path RunManifest::finish(int exit_code) {
    std::filesystem::create_directories(out_dir_);
    auto path = out_dir_ / (command_ + ".manifest.json");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << to_json(exit_code).dump(2) << '\n';
    return path;
}

}  // namespace gbmsum::cli
