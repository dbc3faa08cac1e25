#include "valproj/config.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "valproj/temporal.hpp"

namespace valproj {

std::optional<SubjectCategory> parse_subject_option(const std::string& name, const std::string& field) {
    if (name == "all") return std::nullopt;
    const auto c = parse_category(name);
    if (!c) throw ConfigError(field, "unknown subject category '" + name + "'");
    return c;
}

std::vector<SnapshotFilter> RunConfig::filters() const {
    std::vector<SnapshotFilter> out;
    if (subjects.empty()) return {SnapshotFilter{std::nullopt, exclude_sponsored}};
    for (const auto& s : subjects) out.push_back({s, exclude_sponsored});
    return out;
}

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", fmt::format("{} must lie in (0, 1)", alpha));
    if (years && years->size() == 0) throw ConfigError("years", "empty year range");
    const bool raw_csv = treaties_csv || events_csv;
    if (raw_csv && !(treaties_csv && events_csv))
        throw ConfigError("inputs", "both 'treaties' and 'events' CSV paths are required");
    const int sources = (panel ? 1 : 0) + (raw_csv ? 1 : 0) + (records_json ? 1 : 0);
    if (sources == 0) throw ConfigError("panel", "no input: give a panel archive or raw records");
    if (sources > 1) throw ConfigError("inputs", "give exactly one of panel, CSV records or JSON records");
    if (threads == 0) throw ConfigError("threads", "must be at least 1");
    for (const auto& f : formats)
        if (f != "csv" && f != "json" && f != "graphml") throw ConfigError("formats", "unknown format '" + f + "'");
    if (out.empty()) throw ConfigError("out", "output directory is required");
    for (const auto& m : metrics)
        if (std::find(available_metrics().begin(), available_metrics().end(), m) == available_metrics().end())
            throw ConfigError("metrics", "unknown metric '" + m + "'");
    std::set<std::string> labels;
    for (const auto& f : filters())
        if (!labels.insert(f.label()).second) throw ConfigError("subjects", "duplicate subject '" + f.label() + "'");
}

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
    static const std::set<std::string> known = {"panel",   "inputs",  "policy",  "years",   "alpha",
                                                "subjects", "exclude_sponsored", "metrics", "out",
                                                "formats", "threads", "exports"};
    for (auto& [key, value] : doc.items())
        if (!known.count(key)) throw ConfigError(key, "unknown field");

    auto path_of = [&](const nlohmann::json& v, const std::string& field) {
        if (!v.is_string()) throw ConfigError(field, "expected a path string");
        std::filesystem::path p = v.get<std::string>();
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    auto get = [&](const nlohmann::json& v, const std::string& field, auto fallback) {
        try {
            return v.get<decltype(fallback)>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(field, "has the wrong type");
        }
    };

    RunConfig c;
    if (doc.contains("panel")) c.panel = path_of(doc["panel"], "panel");
    if (doc.contains("inputs")) {
        const auto& in = doc["inputs"];
        if (!in.is_object()) throw ConfigError("inputs", "expected an object");
        for (auto& [key, value] : in.items()) {
            if (key == "treaties") c.treaties_csv = path_of(value, "inputs.treaties");
            else if (key == "events") c.events_csv = path_of(value, "inputs.events");
            else if (key == "json") c.records_json = path_of(value, "inputs.json");
            else if (key == "subject_map") c.subject_map = path_of(value, "inputs.subject_map");
            else throw ConfigError("inputs." + key, "unknown field");
        }
    }
    if (doc.contains("policy")) {
        const auto p = parse_policy(get(doc["policy"], "policy", std::string{}));
        if (!p) throw ConfigError("policy", "expected 'ratification' or 'signature'");
        c.policy = *p;
    }
    if (doc.contains("years")) {
        const auto& y = doc["years"];
        if (y.is_string()) {
            c.years = parse_year_range(y.get<std::string>());
            if (!c.years) throw ConfigError("years", "expected A:B with A <= B");
        } else if (y.is_array() && y.size() == 2) {
            c.years = YearRange{get(y[0], "years", 0), get(y[1], "years", 0)};
        } else {
            throw ConfigError("years", "expected \"A:B\" or [A, B]");
        }
    }
    if (doc.contains("alpha")) c.alpha = get(doc["alpha"], "alpha", 0.0);
    if (doc.contains("subjects")) {
        for (const auto& s : get(doc["subjects"], "subjects", std::vector<std::string>{}))
            c.subjects.push_back(parse_subject_option(s, "subjects"));
    }
    if (doc.contains("exclude_sponsored")) c.exclude_sponsored = get(doc["exclude_sponsored"], "exclude_sponsored", false);
    if (doc.contains("metrics")) c.metrics = get(doc["metrics"], "metrics", std::vector<std::string>{});
    if (doc.contains("out")) c.out = path_of(doc["out"], "out");
    if (doc.contains("formats")) {
        const auto f = get(doc["formats"], "formats", std::vector<std::string>{});
        c.formats = {f.begin(), f.end()};
    }
    if (doc.contains("threads")) {
        const int t = get(doc["threads"], "threads", 0);
        if (t < 1) throw ConfigError("threads", "must be at least 1");
        c.threads = static_cast<unsigned>(t);
    }
    if (doc.contains("exports")) {
        const auto& e = doc["exports"];
        if (!e.is_object()) throw ConfigError("exports", "expected an object");
        for (auto& [key, value] : e.items()) {
            const auto field = "exports." + key;
            if (key == "edge_lists") c.export_edge_lists = get(value, field, false);
            else if (key == "node_metrics") c.export_node_metrics = get(value, field, false);
            else if (key == "pair_tests") c.export_pair_tests = get(value, field, false);
            else if (key == "biadjacency_years") c.biadjacency_years = get(value, field, std::vector<int>{});
            else throw ConfigError(field, "unknown field");
        }
    }
    c.validate();
    return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    if (panel) j["panel"] = panel->generic_string();
    if (treaties_csv || records_json) {
        nlohmann::ordered_json in;
        if (treaties_csv) in["treaties"] = treaties_csv->generic_string();
        if (events_csv) in["events"] = events_csv->generic_string();
        if (records_json) in["json"] = records_json->generic_string();
        if (subject_map) in["subject_map"] = subject_map->generic_string();
        j["inputs"] = in;
    }
    j["policy"] = std::string(to_string(policy));
    if (years) j["years"] = fmt::format("{}:{}", years->first, years->last);
    j["alpha"] = alpha;
    auto subj = nlohmann::ordered_json::array();
    for (const auto& f : filters()) subj.push_back(f.subject ? std::string(to_string(*f.subject)) : "all");
    j["subjects"] = subj;
    j["exclude_sponsored"] = exclude_sponsored;
    j["metrics"] = metrics;
    j["out"] = out.generic_string();
    j["formats"] = std::vector<std::string>(formats.begin(), formats.end());
    j["exports"] = {{"edge_lists", export_edge_lists},
                    {"node_metrics", export_node_metrics},
                    {"pair_tests", export_pair_tests},
                    {"biadjacency_years", biadjacency_years}};
    return j;
}

}  // namespace valproj
