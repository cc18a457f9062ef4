/**
 * @file time.hpp
 * @brief Second-precision UTC timestamps, ISO-8601 text form and short durations
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace otc {

using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Injectable time source. CAs and the signer read "now" through this.
using Clock = std::function<Timestamp()>;

Timestamp now_utc();
Clock system_clock();

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_iso8601(Timestamp t);

/// Accepts `YYYY-MM-DDTHH:MM:SSZ`, `YYYY-MM-DDTHH:MM:SS` and `YYYY-MM-DD` (all UTC).
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Accepts `<n>s`, `<n>m`, `<n>h`, `<n>d` with a non-negative integer n.
std::optional<Duration> parse_duration(std::string_view text);

std::string format_duration(Duration d);

} // namespace otc
