#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "valproj/date.hpp"
#include "valproj/error.hpp"

namespace valproj {

enum class SubjectCategory : std::uint8_t {
    sea_fisheries,
    species_ecosystems,
    waste_hazardous,
    natural_resources,
    air_atmosphere,
    energy,
};

inline constexpr std::array<SubjectCategory, 6> kAllCategories = {
    SubjectCategory::sea_fisheries,  SubjectCategory::species_ecosystems,
    SubjectCategory::waste_hazardous, SubjectCategory::natural_resources,
    SubjectCategory::air_atmosphere, SubjectCategory::energy,
};

std::string_view to_string(SubjectCategory c);
std::optional<SubjectCategory> parse_category(std::string_view name);

struct TreatyRecord {
    std::string id;
    std::string title;
    std::vector<std::string> subjects;  // raw tags, sorted and unique
    bool sponsored = false;             // UN-sponsored
    Date date_signed;
    std::optional<Date> date_in_force;

    bool operator==(const TreatyRecord&) const = default;
};

enum class EventKind : std::uint8_t { signature, ratification, acceptance, approval, withdrawal };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct MembershipEvent {
    std::string treaty_id;
    std::string country_id;
    EventKind kind = EventKind::signature;
    Date date;

    auto operator<=>(const MembershipEvent&) const = default;
};

/// A row that did not make it into the accepted data, with the reason.
struct Reject {
    std::string source;  // "treaties", "events", "derive"
    std::size_t row = 0;
    std::string raw;
    std::string reason;
};

struct ParsedRecords {
    std::vector<TreatyRecord> catalog;      // sorted by id
    std::vector<MembershipEvent> events;    // sorted, deduplicated
    std::vector<Reject> rejects;
    std::size_t input_rows = 0;
    std::size_t accepted_rows = 0;          // includes exact duplicates folded into one event
    std::size_t duplicate_rows = 0;
};

/// Thrown when a row has a malformed field (bad date, bad boolean, missing
/// column). Carries everything parsed so the caller can still write the
/// rejects report.
class MalformedInput : public ParseError {
public:
    MalformedInput(const Reject& first, const std::string& column, ParsedRecords partial)
        : ParseError(first.source, first.row, column, first.reason), partial_(std::move(partial)) {}

    const ParsedRecords& partial() const noexcept { return partial_; }

private:
    ParsedRecords partial_;
};

/// treaties: treaty_id,title,subjects,sponsor_flag,date_signed,date_in_force
/// events:   treaty_id,country_id,event_kind,date
ParsedRecords parse_csv(std::istream& treaties, std::istream& events);

/// One document with "treaties" and "events" arrays using the CSV column names as keys.
ParsedRecords parse_json(std::istream& document);

enum class MembershipPolicy : std::uint8_t { ratification_based, signature_based };

std::string_view to_string(MembershipPolicy p);
std::optional<MembershipPolicy> parse_policy(std::string_view name);

struct MembershipInterval {
    std::string treaty_id;
    std::string country_id;
    int start_year = 0;
    std::optional<int> end_year;  // exclusive

    bool contains(int year) const noexcept {
        return year >= start_year && (!end_year || year < *end_year);
    }
    auto operator<=>(const MembershipInterval&) const = default;
};

struct DerivedIntervals {
    std::vector<MembershipInterval> intervals;  // sorted by (treaty, country)
    std::vector<Reject> diagnostics;
};

/// Membership per (country, treaty). Ratification-based joins at the earliest
/// ratification/acceptance/approval; signature-based joins at the earliest
/// joining event of any kind. Withdrawal closes the interval at its year.
DerivedIntervals derive_membership_intervals(std::span<const TreatyRecord> catalog,
                                             std::span<const MembershipEvent> events,
                                             MembershipPolicy policy);

struct YearRange {
    int first = 0;
    int last = 0;  // inclusive

    bool contains(int y) const noexcept { return y >= first && y <= last; }
    std::size_t size() const noexcept { return last < first ? 0 : static_cast<std::size_t>(last - first + 1); }
    bool operator==(const YearRange&) const = default;
};

/// Parses "A:B" (or a single year "A").
std::optional<YearRange> parse_year_range(std::string_view text);

/// Raw subject tag -> categories. A tag may map to several categories.
class SubjectMap {
public:
    using Mask = std::uint8_t;

    SubjectMap() = default;
    explicit SubjectMap(std::map<std::string, std::vector<SubjectCategory>> entries);

    /// The mapping shipped in config/subjects.json.
    static SubjectMap defaults();
    static SubjectMap from_json_text(std::string_view text);
    std::string to_json_text() const;

    bool contains(const std::string& tag) const { return entries_.count(tag) != 0; }
    Mask mask_of(const std::string& tag) const;
    const std::map<std::string, std::vector<SubjectCategory>>& entries() const { return entries_; }

    bool operator==(const SubjectMap&) const = default;

private:
    std::map<std::string, std::vector<SubjectCategory>> entries_;
};

constexpr SubjectMap::Mask category_bit(SubjectCategory c) {
    return static_cast<SubjectMap::Mask>(1u << static_cast<unsigned>(c));
}

/// Immutable country-treaty-year panel.
class Panel {
public:
    Panel(std::vector<TreatyRecord> catalog, std::vector<MembershipInterval> intervals,
          YearRange years, SubjectMap subject_map);

    const YearRange& years() const noexcept { return years_; }
    const std::vector<TreatyRecord>& catalog() const noexcept { return catalog_; }
    const std::vector<MembershipInterval>& intervals() const noexcept { return intervals_; }
    const SubjectMap& subject_map() const noexcept { return subject_map_; }
    const std::vector<std::string>& countries() const noexcept { return countries_; }

    std::optional<std::size_t> treaty_index(std::string_view id) const;
    std::optional<std::size_t> country_index(std::string_view id) const;
    SubjectMap::Mask treaty_categories(std::size_t treaty) const { return treaty_masks_[treaty]; }
    std::size_t interval_treaty(std::size_t interval) const { return interval_treaty_[interval]; }
    std::size_t interval_country(std::size_t interval) const { return interval_country_[interval]; }

    bool is_member(std::string_view country, std::string_view treaty, int year) const;

    /// Number of (country, treaty) memberships active at the end of `year`.
    std::size_t member_count(int year) const;

private:
    std::vector<TreatyRecord> catalog_;
    std::vector<MembershipInterval> intervals_;
    YearRange years_;
    SubjectMap subject_map_;
    std::vector<std::string> countries_;
    std::vector<SubjectMap::Mask> treaty_masks_;
    std::vector<std::size_t> interval_treaty_;
    std::vector<std::size_t> interval_country_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_pair_;
};

/// Validates and builds the panel. Throws DataError when an interval names an
/// unknown treaty or when catalog subjects are missing from the map (all
/// offending tags listed).
Panel build_panel(std::vector<TreatyRecord> catalog, std::vector<MembershipInterval> intervals,
                  YearRange years, SubjectMap subject_map);

}  // namespace valproj
