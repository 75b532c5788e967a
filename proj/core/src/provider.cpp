#include "contextcov/provider.hpp"

#include "contextcov/error.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace contextcov {

namespace {

std::string env_or(const char* name, std::string fallback = {}) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

class HttpChatClient final : public ChatClient {
public:
    explicit HttpChatClient(const ProviderConfig& cfg)
        : model_(cfg.model), api_key_(cfg.api_key), timeout_(cfg.timeout_seconds),
          retries_(std::max(0, cfg.max_retries)) {
        const auto scheme_end = cfg.endpoint.find("://");
        const auto path_start =
            cfg.endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = cfg.endpoint;
            path_ = "/v1/chat/completions";
        } else {
            base_ = cfg.endpoint.substr(0, path_start);
            path_ = cfg.endpoint.substr(path_start);
        }
    }

    std::string complete(std::string_view system_prompt, std::string_view user_payload) const override {
        nlohmann::json body = {
            {"model", model_},
            {"temperature", 0},
            {"response_format", {{"type", "json_object"}}},
            {"messages",
             nlohmann::json::array({{{"role", "system"}, {"content", std::string(system_prompt)}},
                                    {{"role", "user"}, {"content", std::string(user_payload)}}})},
        };
        const std::string payload = body.dump();
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        std::string last_error;
        for (int attempt = 0; attempt <= retries_; ++attempt) {
            httplib::Client client(base_);
            client.set_connection_timeout(timeout_, 0);
            client.set_read_timeout(timeout_, 0);
            client.set_write_timeout(timeout_, 0);
            auto res = client.Post(path_, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) throw ProviderError("provider returned HTTP " + std::to_string(res->status));
            try {
                auto reply = nlohmann::json::parse(res->body);
                return reply.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                throw ProviderError(std::string("unexpected provider response: ") + e.what());
            }
        }
        throw ProviderError("provider unreachable after " + std::to_string(retries_ + 1) + " attempts (" +
                            last_error + ")");
    }

private:
    std::string model_;
    std::string api_key_;
    std::string base_;
    std::string path_;
    int timeout_;
    int retries_;
};

} // namespace

ProviderConfig provider_from_env() {
    ProviderConfig cfg;
    cfg.endpoint = env_or("CONTEXTCOV_PROVIDER_URL");
    cfg.model = env_or("CONTEXTCOV_MODEL", "default");
    cfg.api_key = env_or("CONTEXTCOV_API_KEY");
    if (!cfg.endpoint.empty()) cfg.mode = ProviderMode::remote;
    return cfg;
}

std::shared_ptr<const ChatClient> make_http_client(const ProviderConfig& cfg) {
    if (cfg.endpoint.empty()) throw ProviderError("remote provider requires an endpoint URL");
    return std::make_shared<HttpChatClient>(cfg);
}

std::shared_ptr<const ChatClient> client_for(const ProviderConfig& cfg) {
    if (!cfg.remote()) return nullptr;
    if (cfg.client) return cfg.client;
    return make_http_client(cfg);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace contextcov
