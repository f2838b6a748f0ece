#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace factdeck {

/// Shortest text that parses back to the same double ("2009", "0.5", "1e+20").
inline std::string format_number(double v) {
    if (v == 0.0) return "0"; // folds -0
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) return std::to_string(v);
    return std::string(buf.data(), end);
}

/// Strict full-string parse of a finite double. Leading/trailing blanks are not accepted.
inline std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// Percent with one decimal, e.g. 0.6 -> "60.0%".
inline std::string format_percent(double fraction) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
    return buf;
}

/// 64-bit FNV-1a, used for content-derived ids and config digests.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline int to_int(std::string_view s) {
    int v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

} // namespace detail

/// Accepts YYYY, YYYY-MM, YYYY-MM-DD and YYYY-MM-DDTHH:MM[:SS][Z].
inline bool is_iso_date(std::string_view s) {
    using detail::all_digits;
    using detail::to_int;
    if (s.size() < 4 || !all_digits(s.substr(0, 4))) return false;
    if (s.size() == 4) return true;
    if (s.size() < 7 || s[4] != '-' || !all_digits(s.substr(5, 2))) return false;
    int month = to_int(s.substr(5, 2));
    if (month < 1 || month > 12) return false;
    if (s.size() == 7) return true;
    if (s.size() < 10 || s[7] != '-' || !all_digits(s.substr(8, 2))) return false;
    int day = to_int(s.substr(8, 2));
    if (day < 1 || day > 31) return false;
    if (s.size() == 10) return true;
    if (s[10] != 'T' && s[10] != ' ') return false;
    auto rest = s.substr(11);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    if (rest.size() != 5 && rest.size() != 8) return false;
    if (!all_digits(rest.substr(0, 2)) || rest[2] != ':' || !all_digits(rest.substr(3, 2))) return false;
    if (rest.size() == 8 && (rest[5] != ':' || !all_digits(rest.substr(6, 2)))) return false;
    return to_int(rest.substr(0, 2)) < 24 && to_int(rest.substr(3, 2)) < 60;
}

} // namespace factdeck
