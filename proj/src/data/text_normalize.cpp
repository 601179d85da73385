#include "argnet/data/text_normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>

#include "argnet/util/error.hpp"

namespace argnet::data {

std::string normalize_for_dedup(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

    const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::UnicodeString normalized = nfc->normalize(src, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");

    icu::UnicodeString out;
    bool pending_space = false;
    for (int32_t i = 0; i < normalized.length();) {
        const UChar32 c = normalized.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = !out.isEmpty();
            continue;
        }
        if (pending_space) {
            out.append(static_cast<UChar>(' '));
            pending_space = false;
        }
        UErrorCode script_status = U_ZERO_ERROR;
        if (uscript_getScript(c, &script_status) == USCRIPT_LATIN && U_SUCCESS(script_status)) {
            out.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
        } else {
            out.append(c);
        }
    }
    std::string result;
    out.toUTF8String(result);
    return result;
}

}  // namespace argnet::data
