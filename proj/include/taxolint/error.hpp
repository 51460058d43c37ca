// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <stdexcept>
#include <string>

namespace taxolint {

// Root of every error raised by the library. `code()` is the stable,
// machine-readable name used in HTTP error envelopes and CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define TAXOLINT_DEFINE_ERROR(Name)                                                              \
    class Name : public Error {                                                                  \
    public:                                                                                      \
        explicit Name(const std::string& message) : Error(#Name, message) {}                     \
    }

TAXOLINT_DEFINE_ERROR(MalformedId);
TAXOLINT_DEFINE_ERROR(UnknownEntity);
TAXOLINT_DEFINE_ERROR(MalformedLine);
TAXOLINT_DEFINE_ERROR(RootMissing);
TAXOLINT_DEFINE_ERROR(NetworkError);
TAXOLINT_DEFINE_ERROR(UnknownQid);
TAXOLINT_DEFINE_ERROR(RateLimited);
TAXOLINT_DEFINE_ERROR(ProviderUnavailable);
TAXOLINT_DEFINE_ERROR(EmptyText);
TAXOLINT_DEFINE_ERROR(TooFewParents);
TAXOLINT_DEFINE_ERROR(InvalidConfig);
TAXOLINT_DEFINE_ERROR(InputUnreadable);
TAXOLINT_DEFINE_ERROR(MissingArtifact);
TAXOLINT_DEFINE_ERROR(CacheCorrupt);

#undef TAXOLINT_DEFINE_ERROR

}  // namespace taxolint
