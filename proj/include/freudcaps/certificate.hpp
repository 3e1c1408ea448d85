#pragma once

#include "freudcaps/ivl.hpp"

#include "json.hpp"

#include <string>

namespace fc {

using Json = nlohmann::json;

inline constexpr const char* kCertificateVersion = "1";

// {"lo": ..., "hi": ...} with lo rounded down and hi rounded up.
Json ivl_to_json(const Ivl& x, int digits = 40);
Ivl ivl_from_json(const Json& j);

struct VerifyResult {
    bool ok = true;
    std::string culprit;  // the first failing check
    int checks = 0;
};

// Rechecks the closed-form identities and the stored inequalities at the recorded precision.
// Sections that are absent are skipped. Throws std::invalid_argument on malformed content.
VerifyResult verify_certificate(const Json& cert);
VerifyResult verify_certificate_file(const std::string& path);

// Top-level keys of update replace those of into; nested objects are updated key by key.
void merge_json(Json& into, const Json& update);

// Merges the top-level keys of update into the JSON object stored at path (created if absent).
Json merge_into_file(const std::string& path, const Json& update);

}  // namespace fc
