#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "argnet/distill/argd_model.hpp"

namespace argnet::distill {

/// Eval-mode teacher pass over `samples`. Every sample needs both rationales;
/// otherwise MissingFieldError lists the offending ids before any compute.
/// `forwards` (if given) is incremented once per teacher pass.
TeacherFeatures compute_teacher_features(const model::ArgModel& teacher, std::span<const data::EnrichedSample> samples,
                                         std::size_t* forwards = nullptr);

/// Binary cache file: magic "ARGNETFC", u32 version, 64-char hex digest of the
/// teacher checkpoint, u32 d, u64 count, then per record u32 + id and d doubles.
void save_teacher_features(const std::filesystem::path& path, const std::string& teacher_digest,
                           const TeacherFeatures& features);
/// Returns nothing when the file is absent or was built from another teacher.
std::optional<TeacherFeatures> load_teacher_features(const std::filesystem::path& path,
                                                     const std::string& teacher_digest);

/// Loads the cache when it matches the digest and covers every sample id;
/// otherwise runs the teacher and rewrites the cache.
TeacherFeatures cached_teacher_features(const std::filesystem::path& path, const std::string& teacher_digest,
                                        const model::ArgModel& teacher,
                                        std::span<const data::EnrichedSample> samples,
                                        std::size_t* forwards = nullptr);

}  // namespace argnet::distill
