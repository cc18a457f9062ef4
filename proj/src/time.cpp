/**
 * @file time.cpp
 * @brief Timestamp formatting and parsing
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/time.hpp"

#include <charconv>
#include <cstdio>

namespace otc {

namespace {

std::optional<int> parse_fixed(std::string_view text, std::size_t pos, std::size_t len)
{
    if (pos + len > text.size()) {
        return std::nullopt;
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return std::nullopt;
        }
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

} // namespace

Timestamp now_utc()
{
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

Clock system_clock()
{
    return [] { return now_utc(); };
}

std::string format_iso8601(Timestamp t)
{
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view text)
{
    using namespace std::chrono;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    const auto y = parse_fixed(text, 0, 4);
    const auto mo = parse_fixed(text, 5, 2);
    const auto d = parse_fixed(text, 8, 2);
    if (!y || !mo || !d) {
        return std::nullopt;
    }
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    int hh = 0, mm = 0, ss = 0;
    if (text.size() > 10) {
        if (text[10] != 'T' || text.size() < 19 || text[13] != ':' || text[16] != ':') {
            return std::nullopt;
        }
        const auto h = parse_fixed(text, 11, 2);
        const auto m = parse_fixed(text, 14, 2);
        const auto s = parse_fixed(text, 17, 2);
        if (!h || !m || !s || *h > 23 || *m > 59 || *s > 59) {
            return std::nullopt;
        }
        hh = *h;
        mm = *m;
        ss = *s;
        const auto rest = text.substr(19);
        if (!rest.empty() && rest != "Z") {
            return std::nullopt;
        }
    }
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::optional<Duration> parse_duration(std::string_view text)
{
    if (text.size() < 2) {
        return std::nullopt;
    }
    long long n = 0;
    const auto digits = text.substr(0, text.size() - 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || n < 0) {
        return std::nullopt;
    }
    switch (text.back()) {
    case 's':
        return Duration{n};
    case 'm':
        return Duration{n * 60};
    case 'h':
        return Duration{n * 3600};
    case 'd':
        return Duration{n * 86400};
    default:
        return std::nullopt;
    }
}

std::string format_duration(Duration d)
{
    const auto s = d.count();
    if (s != 0 && s % 86400 == 0) {
        return std::to_string(s / 86400) + "d";
    }
    if (s != 0 && s % 3600 == 0) {
        return std::to_string(s / 3600) + "h";
    }
    if (s != 0 && s % 60 == 0) {
        return std::to_string(s / 60) + "m";
    }
    return std::to_string(s) + "s";
}

} // namespace otc
