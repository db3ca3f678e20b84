#pragma once

#include <cstdint>

namespace herigraph {

struct IsoWeek {
    int year = 0;
    int week = 0;  // 1..53
    bool operator==(const IsoWeek&) const = default;
};

// Flattens an ISO-8601 (year, week) pair into a week ordinal where
// consecutive calendar weeks differ by exactly one, across year boundaries.
// Ordinal 0 is the ISO week containing 1970-01-05.
std::int64_t iso_week_ordinal(IsoWeek w);
IsoWeek iso_week_from_ordinal(std::int64_t ordinal);

// ISO week of a proleptic Gregorian date.
IsoWeek iso_week_of(int year, unsigned month, unsigned day);

// Number of ISO weeks (52 or 53) in `iso_year`.
int iso_weeks_in_year(int iso_year);

}  // namespace herigraph
