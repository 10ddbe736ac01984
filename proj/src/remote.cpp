#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "lmlp/remote.hpp"

#include "lmlp/error.hpp"
#include "lmlp/log.hpp"
#include "lmlp/symbols.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace lmlp {

RemoteConfig RemoteConfig::from_env(const std::string& prefix) {
    auto get = [&](const char* suffix) {
        const char* v = std::getenv((prefix + suffix).c_str());
        return v == nullptr ? std::string() : std::string(v);
    };
    RemoteConfig cfg;
    cfg.url = get("_URL");
    cfg.token = get("_TOKEN");
    cfg.model = get("_MODEL");
    if (cfg.url.empty()) throw Error(ErrorKind::InvalidArgument, prefix + "_URL is not set");
    return cfg;
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw Error(ErrorKind::InvalidArgument, "bad endpoint URL: " + url);
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

nlohmann::json post_json(const RemoteConfig& cfg, const nlohmann::json& body) {
    const SplitUrl target = split_url(cfg.url);
    httplib::Client client(target.origin);
    client.set_connection_timeout(cfg.timeout);
    client.set_read_timeout(cfg.timeout);
    client.set_write_timeout(cfg.timeout);
    httplib::Headers headers;
    if (!cfg.token.empty()) headers.emplace("Authorization", "Bearer " + cfg.token);
    const std::string payload = body.dump();

    std::string last_error;
    const int attempts = std::max(1, cfg.attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            auto delay = cfg.backoff_base * (1LL << (attempt - 1));
            std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(delay, cfg.backoff_cap));
        }
        auto res = client.Post(target.path, headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
        } else if (retryable(res->status)) {
            last_error = "HTTP " + std::to_string(res->status);
        } else if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorKind::Protocol, "HTTP " + std::to_string(res->status) + " from " + cfg.url);
        } else {
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::Protocol, std::string("unparsable response: ") + e.what());
            }
        }
        log_warn("request to " + cfg.url + " failed (" + last_error + "), attempt " +
                 std::to_string(attempt + 1) + "/" + std::to_string(attempts));
    }
    throw Error(ErrorKind::Transport, cfg.url + ": " + last_error);
}

std::vector<std::string> RemotePlanner::propose(const PlannerRequest& r) const {
    nlohmann::json body = canonical_request(r);
    if (!cfg_.model.empty()) body["model"] = cfg_.model;
    const nlohmann::json res = post_json(cfg_, body);
    if (!res.contains("choices") || !res["choices"].is_array() || res["choices"].empty()) {
        throw Error(ErrorKind::Protocol, "completion response has no choices");
    }
    std::vector<std::string> out;
    for (const auto& c : res["choices"]) {
        if (!c.contains("text") || !c["text"].is_string()) {
            throw Error(ErrorKind::Protocol, "completion choice without text");
        }
        std::string text = c["text"].get<std::string>();
        // Keep the first non-empty line; the stop sequence may not be honoured.
        std::string_view view = trim(text);
        if (auto nl = view.find('\n'); nl != std::string_view::npos) view = trim(view.substr(0, nl));
        out.emplace_back(view);
    }
    if (out.size() > r.n) out.resize(r.n);
    for (std::size_t i = 0; out.size() < r.n; ++i) out.push_back(out[i]);
    return out;
}

EmbeddingVector RemoteTranslator::embed(std::string_view text) const {
    const std::string owned(text);
    return embed_batch(std::span<const std::string>(&owned, 1)).front();
}

std::vector<EmbeddingVector> RemoteTranslator::embed_batch(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
        const auto chunk = texts.subspan(start, std::min(batch_size_, texts.size() - start));
        nlohmann::json body{{"input", std::vector<std::string>(chunk.begin(), chunk.end())}};
        if (!cfg_.model.empty()) body["model"] = cfg_.model;
        const nlohmann::json res = post_json(cfg_, body);
        if (!res.contains("data") || !res["data"].is_array() || res["data"].size() != chunk.size()) {
            throw Error(ErrorKind::Protocol, "embedding response size does not match request");
        }
        std::size_t dim = 0;
        for (const auto& d : res["data"]) {
            if (!d.contains("embedding") || !d["embedding"].is_array()) {
                throw Error(ErrorKind::Protocol, "embedding record without vector");
            }
            std::vector<double> values;
            for (const auto& x : d["embedding"]) {
                if (!x.is_number()) throw Error(ErrorKind::Protocol, "non-numeric embedding value");
                values.push_back(x.get<double>());
            }
            if (dim == 0) dim = values.size();
            if (values.empty() || values.size() != dim) {
                throw Error(ErrorKind::Protocol, "inconsistent embedding dimension");
            }
            try {
                out.push_back(EmbeddingVector::from_dense(values));
                if (out.back().entries().empty()) throw Error(ErrorKind::ZeroVector, "all-zero embedding");
            } catch (const Error& e) {
                throw Error(ErrorKind::Protocol, e.what());
            }
        }
    }
    return out;
}

}  // namespace lmlp
