#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

enum class ProviderMode { deterministic, remote };

/// One chat-completions round trip: returns the assistant message content.
/// Implementations must tolerate concurrent calls. Throws ProviderError on
/// transport failure.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(std::string_view system_prompt, std::string_view user_payload) const = 0;
};

struct ProviderConfig {
    ProviderMode mode = ProviderMode::deterministic;
    std::string endpoint; // full URL of the chat-completions endpoint
    std::string model;
    std::string api_key;
    int timeout_seconds = 60;
    int max_retries = 2;
    int concurrency = 8;
    std::shared_ptr<const ChatClient> client; // overrides the HTTP client when set

    bool remote() const { return mode == ProviderMode::remote; }
};

/// Remote when CONTEXTCOV_PROVIDER_URL is set; CONTEXTCOV_MODEL and
/// CONTEXTCOV_API_KEY fill the rest.
ProviderConfig provider_from_env();

/// HTTP client posting {"model","messages","temperature":0,"response_format"}
/// with a bearer token; retries transport errors and 429/5xx responses.
std::shared_ptr<const ChatClient> make_http_client(const ProviderConfig& cfg);

/// The configured client, or a lazily built HTTP client. Null in deterministic mode.
std::shared_ptr<const ChatClient> client_for(const ProviderConfig& cfg);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

} // namespace contextcov
