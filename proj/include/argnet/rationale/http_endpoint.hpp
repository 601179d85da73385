#pragma once

#include <optional>
#include <string>

#include "argnet/rationale/llm_client.hpp"

namespace argnet::rationale {

/// OpenAI-compatible chat-completions endpoint. Decoding settings left unset
/// are omitted from the request so the server defaults apply.
struct HttpEndpointConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-3.5-turbo";
    /// Name of the environment variable holding the API key.
    std::string api_key_env = "OPENAI_API_KEY";
    std::optional<double> temperature;
    std::optional<double> top_p;
    std::optional<int> max_tokens;
    int timeout_s = 60;
};

HttpEndpointConfig http_endpoint_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HttpEndpointConfig& c);

class HttpEndpoint final : public LLMEndpoint {
public:
    /// Reads the key from the environment; AuthError when it is unset.
    explicit HttpEndpoint(HttpEndpointConfig cfg);

    /// 401/403 -> AuthError; 429, 5xx and connection failures -> retryable
    /// TransportError; other statuses -> non-retryable TransportError.
    std::string complete(const std::string& prompt) override;
    std::string identifier() const override;

private:
    HttpEndpointConfig cfg_;
    std::string key_;
};

}  // namespace argnet::rationale
