#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace valproj {

/// Calendar date parsed from ISO-8601 (YYYY-MM-DD).
struct Date {
    int year = 0;
    unsigned month = 1;
    unsigned day = 1;

    auto operator<=>(const Date&) const = default;

    std::string iso() const;
};

/// Returns nullopt for anything that is not a valid YYYY-MM-DD calendar date.
std::optional<Date> parse_iso_date(std::string_view text);

}  // namespace valproj
