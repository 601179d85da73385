#include "argnet/rationale/cache.hpp"

#include <fstream>

#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::rationale {

RationaleCache::RationaleCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = nlohmann::json::parse(line);
            auto rec = data::rationale_from_json(j.at("record"));
            entries_.emplace(std::make_pair(j.at("news_id").get<std::string>(), j.at("fingerprint").get<std::string>()),
                             std::move(rec));
        } catch (const std::exception& e) {
            // A torn final line from an interrupted append is dropped.
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw IngestionError(path_.string() + ": " + e.what(), line_no);
        }
    }
}

std::optional<data::RationaleRecord> RationaleCache::find(const std::string& news_id,
                                                          const std::string& fingerprint) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find({news_id, fingerprint});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool RationaleCache::insert(const std::string& news_id, const std::string& fingerprint,
                            const data::RationaleRecord& record, const LLMResponse* response) {
    std::lock_guard lock(mu_);
    if (!entries_.emplace(std::make_pair(news_id, fingerprint), record).second) return false;
    if (path_.empty()) return true;
    nlohmann::json j{{"news_id", news_id}, {"fingerprint", fingerprint}, {"record", data::to_json(record)}};
    if (response) j["response"] = to_json(*response);
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error("cannot append to rationale cache " + path_.string());
    return true;
}

std::size_t RationaleCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

}  // namespace argnet::rationale
