#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pseudoscore {

/// Calendar date stored as days since 1970-01-01 (can be negative).
struct Date {
    std::int32_t days = 0;

    friend auto operator<=>(const Date&, const Date&) = default;
    Date operator+(int d) const { return Date{days + d}; }
    int operator-(Date other) const { return days - other.days; }
};

/// Civil timestamp stored as seconds since 1970-01-01T00:00:00.
struct Timestamp {
    std::int64_t secs = 0;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
    Date date() const {
        // floor division for dates before the epoch
        std::int64_t d = secs >= 0 ? secs / 86400 : (secs - 86399) / 86400;
        return Date{static_cast<std::int32_t>(d)};
    }
    int seconds_of_day() const {
        std::int64_t r = secs % 86400;
        if (r < 0) r += 86400;
        return static_cast<int>(r);
    }
};

Date make_date(int year, int month, int day);
void civil_from_days(Date d, int& year, int& month, int& day);

/// 0 = Sunday ... 6 = Saturday.
inline int day_of_week(Date d) {
    int w = (d.days + 4) % 7;
    return w < 0 ? w + 7 : w;
}
inline bool is_weekend(Date d) {
    const int w = day_of_week(d);
    return w == 0 || w == 6;
}

/// Parses "YYYY-MM-DD". Returns nullopt on any malformation.
std::optional<Date> parse_date(std::string_view s);
/// Parses "YYYY-MM-DDTHH:MM:SS" (also accepts ' ' as the separator).
std::optional<Timestamp> parse_timestamp(std::string_view s);

std::string to_string(Date d);
std::string to_string(Timestamp t);

}  // namespace pseudoscore
