#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "argnet/data/types.hpp"
#include "argnet/rationale/llm_client.hpp"

namespace argnet::rationale {

struct MockConfig {
    /// Probability the verdict matches the answer key, per eliciting style.
    double accuracy_td = 0.9;
    double accuracy_cs = 0.6;
    double accuracy_general = 0.7;
    double refusal_rate = 0.0;
    /// Appended to the rationale whenever the verdict is fake.
    std::string fake_cue = "fabricated";
    int rationale_words = 10;
    std::uint64_t seed = 0;
};

MockConfig mock_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MockConfig& c);

/// Offline endpoint. Replies are a pure function of (prompt, config): a hash
/// of the prompt decides refusal and verdict correctness, and the verdict is
/// scored against an optional answer key of news text -> gold label.
class MockEndpoint final : public LLMEndpoint {
public:
    explicit MockEndpoint(MockConfig cfg = {}, std::unordered_map<std::string, data::Label> answer_key = {});
    /// Always answers `reply`.
    static std::unique_ptr<MockEndpoint> echo(std::string reply);

    std::string complete(const std::string& prompt) override;
    std::string identifier() const override;

    /// The next `n` calls fail with `status` (401/403 give AuthError).
    void fail_next(int n, int status);
    std::size_t calls() const;

private:
    std::optional<data::Label> lookup(const std::string& prompt) const;

    MockConfig cfg_;
    std::unordered_map<std::string, data::Label> key_;
    std::optional<std::string> echo_;
    mutable std::mutex mu_;
    int failures_left_ = 0;
    int failure_status_ = 503;
    std::size_t calls_ = 0;
};

}  // namespace argnet::rationale
