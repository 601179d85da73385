#include "argnet/distill/teacher_cache.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "argnet/util/error.hpp"
#include "argnet/util/json_io.hpp"

namespace argnet::distill {

namespace {

constexpr char kMagic[8] = {'A', 'R', 'G', 'N', 'E', 'T', 'F', 'C'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <class T>
bool get(std::istream& in, T& v) {
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

TeacherFeatures compute_teacher_features(const model::ArgModel& teacher, std::span<const data::EnrichedSample> samples,
                                         std::size_t* forwards) {
    std::vector<std::string> missing;
    for (const auto& s : samples) {
        if (!s.has_both_rationales()) missing.push_back(s.item.id);
    }
    if (!missing.empty()) throw MissingFieldError("teacher pass needs both rationales", missing);
    TeacherFeatures out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out[s.item.id] = teacher.forward(data::SampleView(s)).first.f_cls;
        if (forwards) ++*forwards;
    }
    return out;
}

void save_teacher_features(const std::filesystem::path& path, const std::string& teacher_digest,
                           const TeacherFeatures& features) {
    if (teacher_digest.size() != 64) throw ValidationError("teacher digest must be 64 hex characters");
    std::uint32_t d = features.empty() ? 0 : static_cast<std::uint32_t>(features.begin()->second.size());
    std::vector<const std::string*> ids;
    for (const auto& [id, v] : features) {
        if (static_cast<std::uint32_t>(v.size()) != d) throw ValidationError("teacher features differ in size");
        ids.push_back(&id);
    }
    std::sort(ids.begin(), ids.end(), [](auto* a, auto* b) { return *a < *b; });
    std::string out(kMagic, sizeof(kMagic));
    put(out, kVersion);
    out += teacher_digest;
    put(out, d);
    put<std::uint64_t>(out, ids.size());
    for (const std::string* id : ids) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(id->size()));
        out += *id;
        const RowVector& v = features.at(*id);
        out.append(reinterpret_cast<const char*>(v.data()), d * sizeof(double));
    }
    util::write_text_atomic(path, out);
}

std::optional<TeacherFeatures> load_teacher_features(const std::filesystem::path& path,
                                                     const std::string& teacher_digest) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[sizeof(kMagic)];
    std::uint32_t version = 0;
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || !get(in, version) ||
        version != kVersion) {
        return std::nullopt;
    }
    std::string digest(64, '\0');
    if (!in.read(digest.data(), 64) || digest != teacher_digest) return std::nullopt;
    std::uint32_t d = 0;
    std::uint64_t count = 0;
    if (!get(in, d) || !get(in, count)) return std::nullopt;
    TeacherFeatures out;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint32_t len = 0;
        if (!get(in, len)) return std::nullopt;
        std::string id(len, '\0');
        RowVector v(d);
        if (!in.read(id.data(), len) || !in.read(reinterpret_cast<char*>(v.data()), d * sizeof(double))) {
            return std::nullopt;
        }
        out.emplace(std::move(id), std::move(v));
    }
    return out;
}

TeacherFeatures cached_teacher_features(const std::filesystem::path& path, const std::string& teacher_digest,
                                        const model::ArgModel& teacher,
                                        std::span<const data::EnrichedSample> samples, std::size_t* forwards) {
    if (auto cached = load_teacher_features(path, teacher_digest)) {
        bool complete = true;
        for (const auto& s : samples) complete = complete && cached->count(s.item.id);
        if (complete) return std::move(*cached);
    }
    TeacherFeatures fresh = compute_teacher_features(teacher, samples, forwards);
    save_teacher_features(path, teacher_digest, fresh);
    return fresh;
}

}  // namespace argnet::distill
