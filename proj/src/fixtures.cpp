#include "lmlp/fixtures.hpp"

#include "lmlp/error.hpp"
#include "lmlp/hashing.hpp"
#include "lmlp/kb_io.hpp"

namespace lmlp {

std::string request_hash(const nlohmann::json& canonical_body) {
    return to_hex(fnv1a64(canonical_body.dump()));
}

FixtureStore::FixtureStore(const FixtureStore& other) {
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
}

FixtureStore& FixtureStore::operator=(const FixtureStore& other) {
    if (this == &other) return *this;
    std::map<std::string, nlohmann::json> copy;
    {
        std::shared_lock lock(other.mutex_);
        copy = other.entries_;
    }
    std::unique_lock lock(mutex_);
    entries_ = std::move(copy);
    return *this;
}

std::optional<nlohmann::json> FixtureStore::lookup(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void FixtureStore::put(const std::string& key, nlohmann::json response) {
    std::unique_lock lock(mutex_);
    entries_[key] = std::move(response);
}

std::size_t FixtureStore::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::string FixtureStore::to_json_text() const {
    std::shared_lock lock(mutex_);
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j.dump(1) + "\n";
}

FixtureStore FixtureStore::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("fixture JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "fixture file must be a JSON object");
    FixtureStore store;
    for (auto& [k, v] : j.items()) store.entries_.emplace(k, v);
    return store;
}

FixtureStore FixtureStore::load(const std::string& path) { return from_json_text(read_text_file(path)); }

void FixtureStore::save(const std::string& path, bool overwrite) const {
    write_text_file(path, to_json_text(), overwrite);
}

}  // namespace lmlp
