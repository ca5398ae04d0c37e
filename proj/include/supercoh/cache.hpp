#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace supercoh {

inline constexpr std::string_view tool_version = "1.0.0";

// Fingerprint of every convention that changes the coordinates of stored
// representatives. Part of every cache key.
inline constexpr std::string_view convention_fingerprint =
    "weight_shift=-2;derivative_side=left;swap=-(-1)^{p(x)p(y)};canonical=even-first;normalize=first-nonzero";

inline std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Cell records keyed by content. Implementations must tolerate
/// concurrent stores of the same key (records for a key are identical).
class CellCache {
public:
    virtual ~CellCache() = default;
    virtual std::optional<nlohmann::json> load(const std::string& key_material) const = 0;
    virtual void store(const std::string& key_material, const nlohmann::json& record) const = 0;
};

/// One JSON file per cell under a directory. Writes go to a unique
/// temporary file which is then renamed into place, so readers never see
/// a partial record and concurrent writers are safe.
class DiskCache : public CellCache {
public:
    explicit DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    const std::filesystem::path& directory() const { return dir_; }

    static std::string key_hash(const std::string& key_material)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key_material)));
        return buf;
    }

    std::filesystem::path path_for(const std::string& key_material) const
    {
        return dir_ / (key_hash(key_material) + ".json");
    }

    std::optional<nlohmann::json> load(const std::string& key_material) const override
    {
        std::ifstream in(path_for(key_material));
        if (!in) {
            return std::nullopt;
        }
        nlohmann::json entry = nlohmann::json::parse(in, nullptr, false);
        if (entry.is_discarded() || !entry.contains("key") || entry["key"] != key_material ||
            entry.value("version", "") != tool_version || !entry.contains("record")) {
            return std::nullopt;
        }
        return entry["record"];
    }

    void store(const std::string& key_material, const nlohmann::json& record) const override
    {
        const nlohmann::json entry{{"key", key_material}, {"version", tool_version}, {"record", record}};
        const auto final_path = path_for(key_material);
        std::random_device rd;
        std::ostringstream tmp_name;
        tmp_name << final_path.filename().string() << ".tmp." << std::hex << rd() << rd();
        const auto tmp_path = dir_ / tmp_name.str();
        {
            std::ofstream out(tmp_path, std::ios::trunc);
            if (!out) {
                return;
            }
            out << entry.dump();
        }
        std::error_code ec;
        std::filesystem::rename(tmp_path, final_path, ec);
        if (ec) {
            std::filesystem::remove(tmp_path, ec);
        }
    }

private:
    std::filesystem::path dir_;
};

} // namespace supercoh
