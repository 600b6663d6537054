#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mineroi {

// Calendar date stored as a day count since 1970-01-01 (proleptic Gregorian).
// Arithmetic on whole days is exact; that is all the pipeline needs.
class Date {
public:
    Date() : days_(0) {}
    explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, int month, int day);
    // Parses strict ISO-8601 "YYYY-MM-DD". Throws InputError otherwise.
    static Date parse(std::string_view iso);

    std::int32_t days() const { return days_; }
    std::string to_string() const;

    Date operator+(int n) const { return Date(days_ + n); }
    Date operator-(int n) const { return Date(days_ - n); }
    int operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    std::int32_t days_;
};

// Half-open interval [start, end) on calendar days.
struct DateRange {
    Date start;
    Date end;

    bool contains(Date d) const { return start <= d && d < end; }
    int length_days() const { return end - start; }
    bool overlaps(const DateRange& o) const { return start < o.end && o.start < end; }
    std::string to_string() const { return start.to_string() + ":" + end.to_string(); }
    bool operator==(const DateRange&) const = default;
};

}  // namespace mineroi
