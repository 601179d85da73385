#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "argnet/rationale/http_endpoint.hpp"

#include <cstdlib>

#include <fmt/format.h>

#include "argnet/util/error.hpp"
#include "httplib.h"

namespace argnet::rationale {

HttpEndpointConfig http_endpoint_config_from_json(const nlohmann::json& j) {
    HttpEndpointConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.path = j.value("path", c.path);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    if (j.contains("temperature") && !j["temperature"].is_null()) c.temperature = j["temperature"].get<double>();
    if (j.contains("top_p") && !j["top_p"].is_null()) c.top_p = j["top_p"].get<double>();
    if (j.contains("max_tokens") && !j["max_tokens"].is_null()) c.max_tokens = j["max_tokens"].get<int>();
    c.timeout_s = j.value("timeout_s", c.timeout_s);
    return c;
}

nlohmann::json to_json(const HttpEndpointConfig& c) {
    nlohmann::json j{{"base_url", c.base_url},
                     {"path", c.path},
                     {"model", c.model},
                     {"api_key_env", c.api_key_env},
                     {"timeout_s", c.timeout_s}};
    j["temperature"] = c.temperature ? nlohmann::json(*c.temperature) : nlohmann::json(nullptr);
    j["top_p"] = c.top_p ? nlohmann::json(*c.top_p) : nlohmann::json(nullptr);
    j["max_tokens"] = c.max_tokens ? nlohmann::json(*c.max_tokens) : nlohmann::json(nullptr);
    return j;
}

HttpEndpoint::HttpEndpoint(HttpEndpointConfig cfg) : cfg_(std::move(cfg)) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (!key || !*key) throw AuthError("environment variable " + cfg_.api_key_env + " is not set", 0);
    key_ = key;
}

std::string HttpEndpoint::identifier() const {
    return fmt::format("http:{}{}:{}:t={}:p={}:n={}", cfg_.base_url, cfg_.path, cfg_.model,
                       cfg_.temperature ? fmt::format("{}", *cfg_.temperature) : "default",
                       cfg_.top_p ? fmt::format("{}", *cfg_.top_p) : "default",
                       cfg_.max_tokens ? fmt::format("{}", *cfg_.max_tokens) : "default");
}

std::string HttpEndpoint::complete(const std::string& prompt) {
    httplib::Client cli(cfg_.base_url);
    cli.set_connection_timeout(cfg_.timeout_s);
    cli.set_read_timeout(cfg_.timeout_s);
    cli.set_bearer_token_auth(key_);

    nlohmann::json body{{"model", cfg_.model},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    if (cfg_.temperature) body["temperature"] = *cfg_.temperature;
    if (cfg_.top_p) body["top_p"] = *cfg_.top_p;
    if (cfg_.max_tokens) body["max_tokens"] = *cfg_.max_tokens;

    auto res = cli.Post(cfg_.path, body.dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()), 0, true);
    const int status = res->status;
    if (status == 401 || status == 403) throw AuthError(fmt::format("endpoint rejected credentials ({})", status), status);
    if (status == 429 || status >= 500) throw TransportError(fmt::format("endpoint returned {}", status), status, true);
    if (status != 200) throw TransportError(fmt::format("endpoint returned {}", status), status, false);
    try {
        auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion body: ") + e.what(), status, false);
    }
}

}  // namespace argnet::rationale
