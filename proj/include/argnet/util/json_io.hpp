#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace argnet::util {

using Json = nlohmann::json;

/// Calls `fn(line_number, object)` for every non-blank line. Parse failures
/// raise IngestionError naming the 1-based line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn);

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

/// Writes via a temporary sibling and renames, so readers never see a torn file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

void write_json(const std::filesystem::path& path, const Json& value);
Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

}  // namespace argnet::util
