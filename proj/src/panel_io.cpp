#include "valproj/panel_io.hpp"

namespace valproj {

namespace {

constexpr const char* kFormat = "valproj-panel";
constexpr int kVersion = 1;

}  // namespace

nlohmann::ordered_json panel_to_json(const Panel& panel, MembershipPolicy policy) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["policy"] = std::string(to_string(policy));
    doc["years"] = {panel.years().first, panel.years().last};

    json treaties = json::array();
    for (const auto& t : panel.catalog()) {
        json j;
        j["treaty_id"] = t.id;
        j["title"] = t.title;
        j["subjects"] = t.subjects;
        j["sponsor_flag"] = t.sponsored;
        j["date_signed"] = t.date_signed.iso();
        j["date_in_force"] = t.date_in_force ? json(t.date_in_force->iso()) : json(nullptr);
        treaties.push_back(std::move(j));
    }
    doc["treaties"] = std::move(treaties);

    json intervals = json::array();
    for (const auto& iv : panel.intervals()) {
        intervals.push_back(json::array(
            {iv.treaty_id, iv.country_id, iv.start_year, iv.end_year ? json(*iv.end_year) : json(nullptr)}));
    }
    doc["intervals"] = std::move(intervals);
    doc["subject_map"] = json::parse(panel.subject_map().to_json_text());
    return doc;
}

PanelArchive panel_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kFormat) throw DataError("panel archive: unexpected format tag");
        if (doc.at("version").get<int>() != kVersion) throw DataError("panel archive: unsupported version");
        const auto policy = parse_policy(doc.at("policy").get<std::string>());
        if (!policy) throw DataError("panel archive: unknown policy");
        const YearRange years{doc.at("years").at(0).get<int>(), doc.at("years").at(1).get<int>()};

        std::vector<TreatyRecord> catalog;
        for (const auto& j : doc.at("treaties")) {
            TreatyRecord t;
            t.id = j.at("treaty_id").get<std::string>();
            t.title = j.at("title").get<std::string>();
            t.subjects = j.at("subjects").get<std::vector<std::string>>();
            t.sponsored = j.at("sponsor_flag").get<bool>();
            const auto signed_on = parse_iso_date(j.at("date_signed").get<std::string>());
            if (!signed_on) throw DataError("panel archive: bad date_signed for " + t.id);
            t.date_signed = *signed_on;
            if (!j.at("date_in_force").is_null()) {
                t.date_in_force = parse_iso_date(j.at("date_in_force").get<std::string>());
                if (!t.date_in_force) throw DataError("panel archive: bad date_in_force for " + t.id);
            }
            catalog.push_back(std::move(t));
        }

        std::vector<MembershipInterval> intervals;
        for (const auto& j : doc.at("intervals")) {
            MembershipInterval iv{j.at(0).get<std::string>(), j.at(1).get<std::string>(), j.at(2).get<int>(),
                                  std::nullopt};
            if (!j.at(3).is_null()) iv.end_year = j.at(3).get<int>();
            intervals.push_back(std::move(iv));
        }
        auto subjects = SubjectMap::from_json_text(doc.at("subject_map").dump());
        return {build_panel(std::move(catalog), std::move(intervals), years, std::move(subjects)), *policy};
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("panel archive: ") + e.what());
    }
}

}  // namespace valproj
