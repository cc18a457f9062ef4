/**
 * @file error.cpp
 * @brief Error code names
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/error.hpp"

#include <array>
#include <utility>

namespace otc {

namespace {

constexpr std::array<std::pair<Errc, std::string_view>, 22> kNames{{
    {Errc::invalid_argument, "invalid-argument"},
    {Errc::io_failure, "io-failure"},
    {Errc::crypto_failure, "crypto-failure"},
    {Errc::unsupported_suite, "unsupported-suite"},
    {Errc::key_destroyed, "key-destroyed"},
    {Errc::digest_suite_mismatch, "digest-suite-mismatch"},
    {Errc::malformed_key, "malformed-key"},
    {Errc::malformed_signature, "malformed-signature"},
    {Errc::malformed_encoding, "malformed-encoding"},
    {Errc::kind_mismatch, "kind-mismatch"},
    {Errc::invalid_policy, "invalid-policy"},
    {Errc::parent_retired, "parent-retired"},
    {Errc::role_violation, "role-violation"},
    {Errc::pop_failure, "pop-failure"},
    {Errc::missing_otc_extension, "missing-otc-extension"},
    {Errc::duplicate_otc_extension, "duplicate-otc-extension"},
    {Errc::issuer_retired, "issuer-retired"},
    {Errc::issuer_expired, "issuer-expired"},
    {Errc::enrollment_rejected, "enrollment-rejected"},
    {Errc::enrollment_unreachable, "enrollment-unreachable"},
    {Errc::zero_signature_time, "zero-signature-time"},
    {Errc::precondition_failed, "precondition-failed"},
}};

std::string with_offset(const std::string& message, std::optional<std::size_t> offset)
{
    if (!offset) {
        return message;
    }
    return message + " (at byte " + std::to_string(*offset) + ")";
}

} // namespace

std::string_view to_string(Errc code) noexcept
{
    for (const auto& [c, name] : kNames) {
        if (c == code) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Errc> errc_from_string(std::string_view name) noexcept
{
    for (const auto& [c, n] : kNames) {
        if (n == name) {
            return c;
        }
    }
    return std::nullopt;
}

Error::Error(Errc code, const std::string& message, std::optional<std::size_t> offset)
    : std::runtime_error(std::string(to_string(code)) + ": " + with_offset(message, offset)),
      code_(code),
      offset_(offset)
{
}

EnrollmentRejected::EnrollmentRejected(Errc ca_code, int http_status, const std::string& message)
    : Error(Errc::enrollment_rejected,
            "CA refused enrollment (" + std::string(to_string(ca_code)) + ", HTTP " +
                std::to_string(http_status) + "): " + message),
      ca_code_(ca_code),
      http_status_(http_status)
{
}

} // namespace otc
