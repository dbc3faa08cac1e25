#include "valproj/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "valproj/csv.hpp"

namespace valproj {

namespace {

constexpr std::array<std::string_view, 6> kCategoryNames = {
    "sea_fisheries", "species_ecosystems", "waste_hazardous",
    "natural_resources", "air_atmosphere", "energy",
};

constexpr std::array<std::string_view, 5> kEventNames = {
    "signature", "ratification", "acceptance", "approval", "withdrawal",
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<bool> parse_flag(std::string_view s) {
    std::string v = trim(s);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "y") return true;
    if (v == "false" || v == "0" || v == "no" || v == "n") return false;
    return std::nullopt;
}

std::vector<std::string> split_subjects(std::string_view s) {
    std::set<std::string> tags;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto next = s.find(';', pos);
        const auto piece = trim(s.substr(pos, next == std::string_view::npos ? s.size() - pos : next - pos));
        if (!piece.empty()) tags.insert(piece);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return {tags.begin(), tags.end()};
}

// Raw field values for one treaty or event row, whatever the source format.
struct TreatyFields {
    std::string id, title, sponsor, signed_on, in_force;
    std::vector<std::string> subjects;
};

struct EventFields {
    std::string treaty_id, country_id, kind, date;
};

// Accumulates rows, distinguishing fatal field errors from row-level rejects.
class Collector {
public:
    void add_treaty(const TreatyFields& f, std::size_t row, const std::string& raw) {
        ++out_.input_rows;
        auto fatal = [&](const char* column, std::string reason) {
            reject("treaties", row, raw, std::move(reason), column);
        };
        if (f.id.empty()) return fatal("treaty_id", "empty treaty_id");
        const auto flag = parse_flag(f.sponsor);
        if (!flag) return fatal("sponsor_flag", fmt::format("invalid boolean '{}'", f.sponsor));
        const auto signed_on = parse_iso_date(f.signed_on);
        if (!signed_on) return fatal("date_signed", fmt::format("invalid date '{}'", f.signed_on));
        std::optional<Date> in_force;
        if (!f.in_force.empty()) {
            in_force = parse_iso_date(f.in_force);
            if (!in_force) return fatal("date_in_force", fmt::format("invalid date '{}'", f.in_force));
        }
        if (in_force && *in_force < *signed_on) {
            out_.rejects.push_back({"treaties", row, raw, "date_in_force precedes date_signed"});
            return;
        }
        TreatyRecord rec{f.id, f.title, f.subjects, *flag, *signed_on, in_force};
        auto [it, inserted] = treaties_.emplace(rec.id, rec);
        if (!inserted) {
            if (it->second == rec) {
                ++out_.duplicate_rows;
                ++out_.accepted_rows;
            } else {
                out_.rejects.push_back({"treaties", row, raw, "conflicting duplicate treaty_id " + rec.id});
            }
            return;
        }
        ++out_.accepted_rows;
    }

    void add_event(const EventFields& f, std::size_t row, const std::string& raw) {
        ++out_.input_rows;
        auto fatal = [&](const char* column, std::string reason) {
            reject("events", row, raw, std::move(reason), column);
        };
        if (f.treaty_id.empty()) return fatal("treaty_id", "empty treaty_id");
        if (f.country_id.empty()) return fatal("country_id", "empty country_id");
        const auto date = parse_iso_date(f.date);
        if (!date) return fatal("date", fmt::format("invalid date '{}'", f.date));
        const auto kind = parse_event_kind(f.kind);
        if (!kind) {
            out_.rejects.push_back({"events", row, raw, fmt::format("unknown event_kind '{}'", f.kind)});
            return;
        }
        pending_events_.push_back({MembershipEvent{f.treaty_id, f.country_id, *kind, *date}, row, raw});
    }

    ParsedRecords finish() && {
        for (auto& [id, rec] : treaties_) out_.catalog.push_back(std::move(rec));
        std::set<MembershipEvent> seen;
        for (auto& p : pending_events_) {
            if (!treaties_.count(p.event.treaty_id)) {
                out_.rejects.push_back({"events", p.row, p.raw, "unknown treaty_id " + p.event.treaty_id});
                continue;
            }
            ++out_.accepted_rows;
            if (!seen.insert(p.event).second) ++out_.duplicate_rows;
        }
        out_.events.assign(seen.begin(), seen.end());
        std::stable_sort(out_.rejects.begin(), out_.rejects.end(), [](const Reject& a, const Reject& b) {
            return std::tie(a.source, a.row) < std::tie(b.source, b.row);
        });
        if (first_fatal_) throw MalformedInput(*first_fatal_, fatal_column_, std::move(out_));
        return std::move(out_);
    }

    void fatal_header(const std::string& source, const std::string& column, const std::string& reason) {
        throw ParseError(source, 1, column, reason);
    }

private:
    struct PendingEvent {
        MembershipEvent event;
        std::size_t row;
        std::string raw;
    };

    void reject(const char* source, std::size_t row, const std::string& raw, std::string reason,
                const char* column) {
        out_.rejects.push_back({source, row, raw, reason});
        if (!first_fatal_) {
            first_fatal_ = out_.rejects.back();
            fatal_column_ = column;
        }
    }

    ParsedRecords out_;
    std::map<std::string, TreatyRecord> treaties_;
    std::vector<PendingEvent> pending_events_;
    std::optional<Reject> first_fatal_;
    std::string fatal_column_;
};

// Maps required column names to positions in a CSV header.
std::vector<std::size_t> locate_columns(const std::string& source, const std::vector<std::string>& header,
                                        std::initializer_list<std::string_view> required) {
    std::vector<std::size_t> pos;
    for (auto name : required) {
        const auto it = std::find_if(header.begin(), header.end(),
                                     [&](const std::string& h) { return trim(h) == name; });
        if (it == header.end())
            throw ParseError(source, 1, std::string(name), "required column missing from header");
        pos.push_back(static_cast<std::size_t>(it - header.begin()));
    }
    return pos;
}

bool blank(const csv::Record& r) { return r.fields.size() == 1 && trim(r.fields[0]).empty(); }

}  // namespace

std::string_view to_string(SubjectCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<SubjectCategory> parse_category(std::string_view name) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
        if (kCategoryNames[i] == name) return static_cast<SubjectCategory>(i);
    return std::nullopt;
}

std::string_view to_string(EventKind k) { return kEventNames[static_cast<std::size_t>(k)]; }

std::optional<EventKind> parse_event_kind(std::string_view name) {
    const std::string v = trim(name);
    for (std::size_t i = 0; i < kEventNames.size(); ++i)
        if (kEventNames[i] == v) return static_cast<EventKind>(i);
    return std::nullopt;
}

std::string_view to_string(MembershipPolicy p) {
    return p == MembershipPolicy::ratification_based ? "ratification" : "signature";
}

std::optional<MembershipPolicy> parse_policy(std::string_view name) {
    if (name == "ratification" || name == "ratification_based") return MembershipPolicy::ratification_based;
    if (name == "signature" || name == "signature_based") return MembershipPolicy::signature_based;
    return std::nullopt;
}

ParsedRecords parse_csv(std::istream& treaties, std::istream& events) {
    Collector col;

    csv::Reader tr(treaties);
    if (auto header = tr.next()) {
        const auto pos = locate_columns("treaties", header->fields,
                                        {"treaty_id", "title", "subjects", "sponsor_flag", "date_signed",
                                         "date_in_force"});
        while (auto rec = tr.next()) {
            if (blank(*rec)) continue;
            if (rec->fields.size() != header->fields.size())
                throw ParseError("treaties", rec->line, "*",
                                 fmt::format("expected {} fields, found {}", header->fields.size(),
                                             rec->fields.size()));
            const auto& v = rec->fields;
            col.add_treaty({trim(v[pos[0]]), v[pos[1]], trim(v[pos[3]]), trim(v[pos[4]]), trim(v[pos[5]]),
                            split_subjects(v[pos[2]])},
                           rec->line, rec->raw);
        }
    } else {
        throw ParseError("treaties", 1, "*", "missing header");
    }

    csv::Reader er(events);
    if (auto header = er.next()) {
        const auto pos = locate_columns("events", header->fields, {"treaty_id", "country_id", "event_kind", "date"});
        while (auto rec = er.next()) {
            if (blank(*rec)) continue;
            if (rec->fields.size() != header->fields.size())
                throw ParseError("events", rec->line, "*",
                                 fmt::format("expected {} fields, found {}", header->fields.size(),
                                             rec->fields.size()));
            const auto& v = rec->fields;
            col.add_event({trim(v[pos[0]]), trim(v[pos[1]]), trim(v[pos[2]]), trim(v[pos[3]])}, rec->line,
                          rec->raw);
        }
    } else {
        throw ParseError("events", 1, "*", "missing header");
    }
    return std::move(col).finish();
}

ParsedRecords parse_json(std::istream& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("json", e.byte, "*", e.what());
    }
    if (!doc.is_object() || !doc.contains("treaties") || !doc["treaties"].is_array())
        throw ParseError("json", 0, "treaties", "document must contain a 'treaties' array");
    if (!doc.contains("events") || !doc["events"].is_array())
        throw ParseError("json", 0, "events", "document must contain an 'events' array");

    auto text_field = [](const nlohmann::json& obj, const char* source, std::size_t row, const char* key,
                         bool optional) -> std::string {
        if (!obj.contains(key) || obj[key].is_null()) {
            if (optional) return {};
            throw ParseError(source, row, key, "required field missing");
        }
        if (obj[key].is_string()) return obj[key].get<std::string>();
        if (obj[key].is_boolean()) return obj[key].get<bool>() ? "true" : "false";
        throw ParseError(source, row, key, "expected a string");
    };

    Collector col;
    std::size_t row = 0;
    for (const auto& t : doc["treaties"]) {
        ++row;
        if (!t.is_object()) throw ParseError("treaties", row, "*", "expected an object");
        std::vector<std::string> subjects;
        if (t.contains("subjects")) {
            if (t["subjects"].is_array()) {
                std::set<std::string> tags;
                for (const auto& s : t["subjects"]) {
                    if (!s.is_string()) throw ParseError("treaties", row, "subjects", "expected strings");
                    tags.insert(trim(s.get<std::string>()));
                }
                tags.erase("");
                subjects.assign(tags.begin(), tags.end());
            } else if (t["subjects"].is_string()) {
                subjects = split_subjects(t["subjects"].get<std::string>());
            } else if (!t["subjects"].is_null()) {
                throw ParseError("treaties", row, "subjects", "expected array or string");
            }
        }
        auto sponsor = trim(text_field(t, "treaties", row, "sponsor_flag", true));
        if (sponsor.empty()) sponsor = "false";
        col.add_treaty({trim(text_field(t, "treaties", row, "treaty_id", false)),
                        text_field(t, "treaties", row, "title", true), sponsor,
                        trim(text_field(t, "treaties", row, "date_signed", false)),
                        trim(text_field(t, "treaties", row, "date_in_force", true)), std::move(subjects)},
                       row, t.dump());
    }
    row = 0;
    for (const auto& e : doc["events"]) {
        ++row;
        if (!e.is_object()) throw ParseError("events", row, "*", "expected an object");
        col.add_event({trim(text_field(e, "events", row, "treaty_id", false)),
                       trim(text_field(e, "events", row, "country_id", false)),
                       trim(text_field(e, "events", row, "event_kind", false)),
                       trim(text_field(e, "events", row, "date", false))},
                      row, e.dump());
    }
    return std::move(col).finish();
}

DerivedIntervals derive_membership_intervals(std::span<const TreatyRecord> catalog,
                                             std::span<const MembershipEvent> events,
                                             MembershipPolicy policy) {
    std::set<std::string_view> known;
    for (const auto& t : catalog) known.insert(t.id);

    struct PairEvents {
        std::vector<const MembershipEvent*> joins;
        std::vector<const MembershipEvent*> withdrawals;
    };
    std::map<std::pair<std::string_view, std::string_view>, PairEvents> grouped;

    DerivedIntervals out;
    std::size_t index = 0;
    auto diag = [&](const MembershipEvent& e, std::string reason) {
        out.diagnostics.push_back({"derive", index,
                                   fmt::format("{},{},{},{}", e.treaty_id, e.country_id, to_string(e.kind),
                                               e.date.iso()),
                                   std::move(reason)});
    };

    for (const auto& e : events) {
        ++index;
        if (!known.count(e.treaty_id)) {
            diag(e, "unknown treaty_id " + e.treaty_id);
            continue;
        }
        auto& g = grouped[{e.treaty_id, e.country_id}];
        const bool counts_as_join =
            e.kind == EventKind::ratification || e.kind == EventKind::acceptance ||
            e.kind == EventKind::approval ||
            (e.kind == EventKind::signature && policy == MembershipPolicy::signature_based);
        if (e.kind == EventKind::withdrawal)
            g.withdrawals.push_back(&e);
        else if (counts_as_join)
            g.joins.push_back(&e);
    }

    for (auto& [key, g] : grouped) {
        std::sort(g.withdrawals.begin(), g.withdrawals.end(),
                  [](auto* a, auto* b) { return a->date < b->date; });
        if (g.joins.empty()) {
            for (const auto* w : g.withdrawals) diag(*w, "withdrawal without a prior joining event");
            continue;
        }
        const auto* join =
            *std::min_element(g.joins.begin(), g.joins.end(), [](auto* a, auto* b) { return a->date < b->date; });

        const MembershipEvent* withdrawal = nullptr;
        for (const auto* w : g.withdrawals) {
            if (!(join->date < w->date)) {
                diag(*w, "withdrawal without a prior joining event");
            } else if (withdrawal) {
                diag(*w, "more than one withdrawal for this country and treaty");
            } else {
                withdrawal = w;
            }
        }

        MembershipInterval iv{std::string(key.first), std::string(key.second), join->date.year, std::nullopt};
        if (withdrawal) {
            // joined and left within the same calendar year: never a member at year end
            if (withdrawal->date.year <= join->date.year) continue;
            iv.end_year = withdrawal->date.year;
        }
        out.intervals.push_back(std::move(iv));
    }
    return out;
}

std::optional<YearRange> parse_year_range(std::string_view text) {
    auto parse_int = [](std::string_view s, int& v) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    YearRange r;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        if (!parse_int(text, r.first)) return std::nullopt;
        r.last = r.first;
    } else if (!parse_int(text.substr(0, colon), r.first) || !parse_int(text.substr(colon + 1), r.last)) {
        return std::nullopt;
    }
    if (r.last < r.first) return std::nullopt;
    return r;
}

SubjectMap::SubjectMap(std::map<std::string, std::vector<SubjectCategory>> entries) : entries_(std::move(entries)) {
    for (auto& [tag, cats] : entries_) {
        std::sort(cats.begin(), cats.end());
        cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    }
}

SubjectMap SubjectMap::defaults() {
    using C = SubjectCategory;
    std::map<std::string, std::vector<C>> m = {
        {"Sea", {C::sea_fisheries}},
        {"Fisheries", {C::sea_fisheries}},
        {"Marine & coastal", {C::sea_fisheries}},
        {"Wild species & ecosystems", {C::species_ecosystems}},
        {"Waste & hazardous substances", {C::waste_hazardous}},
        {"Natural resources", {C::natural_resources}},
        {"Land & soil", {C::natural_resources}},
        {"Water", {C::natural_resources}},
        {"Mineral resources", {C::natural_resources}},
        {"Cultivated plants", {C::natural_resources}},
        {"Forestry", {C::natural_resources}},
        {"Livestock", {C::natural_resources}},
        {"Air & atmosphere", {C::air_atmosphere}},
        {"Energy", {C::energy}},
        {"Environment gen.", {}},
        {"Legal questions", {}},
    };
    for (auto c : kAllCategories) m[std::string(to_string(c))] = {c};
    return SubjectMap(std::move(m));
}

SubjectMap SubjectMap::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("subject map: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("subject map: expected an object of tag -> [categories]");
    std::map<std::string, std::vector<SubjectCategory>> m;
    for (auto& [tag, cats] : doc.items()) {
        auto& out = m[tag];
        auto add = [&](const nlohmann::json& v) {
            if (!v.is_string()) throw DataError("subject map: tag '" + tag + "' has a non-string category");
            const auto c = parse_category(v.get<std::string>());
            if (!c) throw DataError("subject map: unknown category '" + v.get<std::string>() + "' for tag '" + tag + "'");
            out.push_back(*c);
        };
        if (cats.is_array())
            for (const auto& v : cats) add(v);
        else
            add(cats);
    }
    return SubjectMap(std::move(m));
}

std::string SubjectMap::to_json_text() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [tag, cats] : entries_) {
        auto arr = nlohmann::ordered_json::array();
        for (auto c : cats) arr.push_back(std::string(to_string(c)));
        doc[tag] = std::move(arr);
    }
    return doc.dump(2) + "\n";
}

SubjectMap::Mask SubjectMap::mask_of(const std::string& tag) const {
    Mask m = 0;
    if (auto it = entries_.find(tag); it != entries_.end())
        for (auto c : it->second) m |= category_bit(c);
    return m;
}

namespace {

std::uint64_t pair_key(std::size_t country, std::size_t treaty) {
    return (static_cast<std::uint64_t>(country) << 32) | static_cast<std::uint64_t>(treaty);
}

}  // namespace

Panel::Panel(std::vector<TreatyRecord> catalog, std::vector<MembershipInterval> intervals, YearRange years,
             SubjectMap subject_map)
    : catalog_(std::move(catalog)),
      intervals_(std::move(intervals)),
      years_(years),
      subject_map_(std::move(subject_map)) {
    std::sort(catalog_.begin(), catalog_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(intervals_.begin(), intervals_.end());

    std::set<std::string> countries;
    for (const auto& iv : intervals_) countries.insert(iv.country_id);
    countries_.assign(countries.begin(), countries.end());

    treaty_masks_.reserve(catalog_.size());
    for (const auto& t : catalog_) {
        SubjectMap::Mask m = 0;
        for (const auto& s : t.subjects) m |= subject_map_.mask_of(s);
        treaty_masks_.push_back(m);
    }

    interval_treaty_.reserve(intervals_.size());
    interval_country_.reserve(intervals_.size());
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto t = treaty_index(intervals_[i].treaty_id);
        if (!t) throw DataError("interval references unknown treaty_id " + intervals_[i].treaty_id);
        const auto c = *country_index(intervals_[i].country_id);
        interval_treaty_.push_back(*t);
        interval_country_.push_back(c);
        by_pair_[pair_key(c, *t)].push_back(i);
    }
}

std::optional<std::size_t> Panel::treaty_index(std::string_view id) const {
    auto it = std::lower_bound(catalog_.begin(), catalog_.end(), id,
                               [](const TreatyRecord& t, std::string_view v) { return t.id < v; });
    if (it == catalog_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - catalog_.begin());
}

std::optional<std::size_t> Panel::country_index(std::string_view id) const {
    auto it = std::lower_bound(countries_.begin(), countries_.end(), id);
    if (it == countries_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - countries_.begin());
}

bool Panel::is_member(std::string_view country, std::string_view treaty, int year) const {
    const auto c = country_index(country);
    const auto t = treaty_index(treaty);
    if (!c || !t) return false;
    const auto it = by_pair_.find(pair_key(*c, *t));
    if (it == by_pair_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](std::size_t i) { return intervals_[i].contains(year); });
}

std::size_t Panel::member_count(int year) const {
    std::size_t n = 0;
    for (const auto& [key, ivs] : by_pair_)
        if (std::any_of(ivs.begin(), ivs.end(), [&](std::size_t i) { return intervals_[i].contains(year); })) ++n;
    return n;
}

Panel build_panel(std::vector<TreatyRecord> catalog, std::vector<MembershipInterval> intervals, YearRange years,
                  SubjectMap subject_map) {
    if (years.size() == 0) throw DataError("year range is empty");
    std::set<std::string> ids;
    for (const auto& t : catalog)
        if (!ids.insert(t.id).second) throw DataError("duplicate treaty_id in catalog: " + t.id);
    std::set<std::string> unmapped;
    for (const auto& t : catalog)
        for (const auto& s : t.subjects)
            if (!subject_map.contains(s)) unmapped.insert(s);
    if (!unmapped.empty()) {
        std::string list;
        for (const auto& s : unmapped) list += (list.empty() ? "" : ", ") + ("'" + s + "'");
        throw DataError("unmapped subject tags: " + list);
    }
    for (const auto& iv : intervals) {
        if (iv.end_year && *iv.end_year <= iv.start_year)
            throw DataError(fmt::format("interval {}/{} has end_year {} not after start_year {}", iv.treaty_id,
                                        iv.country_id, *iv.end_year, iv.start_year));
        if (!ids.count(iv.treaty_id)) throw DataError("interval references unknown treaty_id " + iv.treaty_id);
    }
    return Panel(std::move(catalog), std::move(intervals), years, std::move(subject_map));
}

}  // namespace valproj
