#include "argnet/util/json_io.hpp"

#include <fstream>
#include <sstream>

#include "argnet/util/error.hpp"

namespace argnet::util {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json obj;
        try {
            obj = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw IngestionError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        fn(line_no, obj);
    }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows) {
    std::string text;
    for (const auto& row : rows) {
        text += row.dump();
        text += '\n';
    }
    write_text_atomic(path, text);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const Json& value) {
    write_text_atomic(path, value.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw IngestionError(path.string() + ": " + e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace argnet::util
