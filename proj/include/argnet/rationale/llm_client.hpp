#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

namespace argnet::rationale {

/// One completion call. Implementations throw TransportError (retryable or
/// not) or AuthError on failure.
class LLMEndpoint {
public:
    virtual ~LLMEndpoint() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    /// Identifies model + decoding settings; part of the cache fingerprint.
    virtual std::string identifier() const = 0;
};

struct LLMResponse {
    std::string request_id;
    std::string prompt_hash;
    std::string text;
    std::int64_t latency_ms = 0;
    int attempt = 1;
};

struct RetryPolicy {
    int max_attempts = 5;
    double base_delay_s = 1.0;
    double factor = 2.0;

    void validate() const;
    /// Delay before attempt `next_attempt` (2, 3, ...).
    double delay_before(int next_attempt) const noexcept;
};

/// Clock and sleep hooks so tests can run retry/rate logic without waiting.
struct Timing {
    std::function<double()> now_s;
    std::function<void(double)> sleep_s;

    static Timing real();
};

/// Token bucket admitting `requests_per_minute` calls with a burst of one
/// second's worth (at least one call). Thread-safe.
class TokenBucket {
public:
    TokenBucket(double requests_per_minute, Timing timing);
    void acquire();

private:
    double rate_per_s_;
    double capacity_;
    double tokens_;
    double last_;
    Timing timing_;
    std::mutex mu_;
};

struct ClientConfig {
    RetryPolicy retry;
    double requests_per_minute = 60.0;
};

/// Rate-limited, retrying wrapper around an endpoint.
class LLMClient {
public:
    LLMClient(LLMEndpoint& endpoint, ClientConfig cfg, Timing timing = Timing::real());

    /// Retries retryable transport errors with exponential backoff; rethrows the
    /// last error when attempts run out, and non-retryable errors at once.
    LLMResponse query(const std::string& prompt);

    /// Completion calls issued to the endpoint, including failed attempts.
    std::size_t endpoint_calls() const noexcept { return calls_.load(); }
    std::size_t queries() const noexcept { return queries_.load(); }
    const LLMEndpoint& endpoint() const noexcept { return endpoint_; }

private:
    LLMEndpoint& endpoint_;
    ClientConfig cfg_;
    Timing timing_;
    TokenBucket bucket_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> queries_{0};
};

nlohmann::json to_json(const LLMResponse& r);

}  // namespace argnet::rationale
