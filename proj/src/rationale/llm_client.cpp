#include "argnet/rationale/llm_client.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "argnet/util/error.hpp"
#include "argnet/util/hash.hpp"

namespace argnet::rationale {

void RetryPolicy::validate() const {
    if (max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
    if (base_delay_s < 0 || factor < 1) throw ValidationError("backoff needs base >= 0 and factor >= 1");
}

double RetryPolicy::delay_before(int next_attempt) const noexcept {
    return base_delay_s * std::pow(factor, next_attempt - 2);
}

Timing Timing::real() {
    return {[] {
                using namespace std::chrono;
                return duration<double>(steady_clock::now().time_since_epoch()).count();
            },
            [](double s) {
                if (s > 0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
            }};
}

TokenBucket::TokenBucket(double requests_per_minute, Timing timing)
    : rate_per_s_(requests_per_minute / 60.0),
      capacity_(std::max(1.0, requests_per_minute / 60.0)),
      tokens_(capacity_),
      last_(timing.now_s()),
      timing_(std::move(timing)) {
    if (!(requests_per_minute > 0)) throw ValidationError("requests_per_minute must be > 0");
}

void TokenBucket::acquire() {
    std::unique_lock lock(mu_);
    for (;;) {
        const double now = timing_.now_s();
        tokens_ = std::min(capacity_, tokens_ + (now - last_) * rate_per_s_);
        last_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const double wait = (1.0 - tokens_) / rate_per_s_;
        lock.unlock();
        timing_.sleep_s(wait);
        lock.lock();
    }
}

LLMClient::LLMClient(LLMEndpoint& endpoint, ClientConfig cfg, Timing timing)
    : endpoint_(endpoint), cfg_(cfg), timing_(timing), bucket_(cfg.requests_per_minute, timing) {
    cfg_.retry.validate();
}

LLMResponse LLMClient::query(const std::string& prompt) {
    LLMResponse r;
    r.prompt_hash = util::sha256_hex(prompt);
    r.request_id = fmt::format("req-{}-{}", queries_.fetch_add(1), r.prompt_hash.substr(0, 12));
    for (int attempt = 1;; ++attempt) {
        bucket_.acquire();
        const double start = timing_.now_s();
        try {
            calls_.fetch_add(1);
            r.text = endpoint_.complete(prompt);
            r.latency_ms = static_cast<std::int64_t>(std::llround((timing_.now_s() - start) * 1000.0));
            r.attempt = attempt;
            return r;
        } catch (const AuthError&) {
            throw;
        } catch (const TransportError& e) {
            if (!e.retryable()) throw;
            if (attempt >= cfg_.retry.max_attempts) {
                throw TransportError(fmt::format("giving up after {} attempts: {}", attempt, e.what()), e.status(),
                                     true);
            }
            timing_.sleep_s(cfg_.retry.delay_before(attempt + 1));
        }
    }
}

nlohmann::json to_json(const LLMResponse& r) {
    return {{"request_id", r.request_id},
            {"prompt_hash", r.prompt_hash},
            {"text", r.text},
            {"latency_ms", r.latency_ms},
            {"attempt", r.attempt}};
}

}  // namespace argnet::rationale
