#include "herigraph/week.hpp"

#include <chrono>
#include <string>

#include "herigraph/error.hpp"

namespace herigraph {

namespace {

using std::chrono::days;
using std::chrono::sys_days;

sys_days monday_of(sys_days d) {
    const unsigned iso = std::chrono::weekday{d}.iso_encoding();  // Mon=1..Sun=7
    return d - days{iso - 1};
}

IsoWeek week_of_day(sys_days d) {
    const sys_days thursday = monday_of(d) + days{3};
    const std::chrono::year_month_day ymd{thursday};
    const sys_days jan1 = ymd.year() / std::chrono::January / 1;
    const auto doy = (thursday - jan1).count();
    return {static_cast<int>(ymd.year()), static_cast<int>(doy / 7 + 1)};
}

}  // namespace

int iso_weeks_in_year(int iso_year) {
    // 28 December always falls in the last ISO week of its year.
    const sys_days dec28 = std::chrono::year{iso_year} / std::chrono::December / 28;
    return week_of_day(dec28).week;
}

std::int64_t iso_week_ordinal(IsoWeek w) {
    if (w.week < 1 || w.week > iso_weeks_in_year(w.year)) {
        throw DataError("schema", "invalid ISO week " + std::to_string(w.year) + "-W" +
                                      std::to_string(w.week));
    }
    const sys_days jan4 = std::chrono::year{w.year} / std::chrono::January / 4;
    const sys_days monday = monday_of(jan4) + days{7 * (w.week - 1)};
    // Day 4 of the Unix epoch is Monday 1970-01-05; Mondays are 4 mod 7.
    return (monday.time_since_epoch().count() - 4) / 7;
}

IsoWeek iso_week_from_ordinal(std::int64_t ordinal) {
    const sys_days monday{days{ordinal * 7 + 4}};
    return week_of_day(monday);
}

IsoWeek iso_week_of(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw DataError("schema", "invalid calendar date");
    }
    return week_of_day(sys_days{ymd});
}

}  // namespace herigraph
