#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gbmsum::cli {

std::string sha256_hex(const std::string& data);

// Written next to the outputs of one command invocation.
class RunManifest {
public:
    RunManifest(std::string command, nlohmann::ordered_json parameters,
                std::filesystem::path out_dir);

    void add_seed(std::uint64_t seed) { seeds_.push_back(seed); }

    // Writes `content` to out_dir/name and records its digest.
    std::filesystem::path write_output(const std::string& name, const std::string& content);

    // Writes <command>.manifest.json and returns its path.
    std::filesystem::path finish(int exit_code);

    nlohmann::ordered_json to_json(int exit_code) const;
    const std::filesystem::path& out_dir() const { return out_dir_; }

private:
    struct Output {
        std::string file;
        std::string sha256;
        std::size_t bytes;
    };
    std::string command_;
    nlohmann::ordered_json parameters_;
    std::filesystem::path out_dir_;
    std::vector<std::uint64_t> seeds_;
    std::vector<Output> outputs_;
    std::string started_;
};

std::string utc_timestamp();

}  // namespace gbmsum::cli
