/**
 * @file error.hpp
 * @brief Error codes and the exception type shared by every otc module
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace otc {

enum class Errc {
    invalid_argument,
    io_failure,
    crypto_failure,
    unsupported_suite,
    key_destroyed,
    digest_suite_mismatch,
    malformed_key,
    malformed_signature,
    malformed_encoding,
    kind_mismatch,
    invalid_policy,
    parent_retired,
    role_violation,
    pop_failure,
    missing_otc_extension,
    duplicate_otc_extension,
    issuer_retired,
    issuer_expired,
    enrollment_rejected,
    enrollment_unreachable,
    zero_signature_time,
    precondition_failed,
};

/// Stable kebab-case name, used on the wire and in CLI output.
std::string_view to_string(Errc code) noexcept;
std::optional<Errc> errc_from_string(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<std::size_t> offset = std::nullopt);

    Errc code() const noexcept { return code_; }

    /// Byte offset into the input, for decoding failures.
    std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
    Errc code_;
    std::optional<std::size_t> offset_;
};

/// Enrollment refused by the CA. `ca_code()` is the CA-side reason.
class EnrollmentRejected : public Error {
public:
    EnrollmentRejected(Errc ca_code, int http_status, const std::string& message);

    Errc ca_code() const noexcept { return ca_code_; }
    int http_status() const noexcept { return http_status_; }

private:
    Errc ca_code_;
    int http_status_;
};

} // namespace otc
