#pragma once
// Record/replay fixture files: JSON object mapping request hash -> response.
// The request hash is the 64-bit FNV-1a of the canonical (key-sorted,
// compact) JSON request body, in hex.

#include <json.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace lmlp {

std::string request_hash(const nlohmann::json& canonical_body);

class FixtureStore {
public:
    FixtureStore() = default;
    FixtureStore(const FixtureStore& other);
    FixtureStore& operator=(const FixtureStore& other);

    std::optional<nlohmann::json> lookup(const std::string& key) const;
    void put(const std::string& key, nlohmann::json response);
    std::size_t size() const;

    std::string to_json_text() const;
    static FixtureStore from_json_text(const std::string& text);
    static FixtureStore load(const std::string& path);
    void save(const std::string& path, bool overwrite) const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, nlohmann::json> entries_;
};

}  // namespace lmlp
