#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "valproj/bipartite.hpp"
#include "valproj/ingest.hpp"

namespace valproj {

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public DataError {
public:
    ConfigError(std::string field, const std::string& why)
        : DataError("config field '" + field + "': " + why), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Declarative description of an analysis run.
struct RunConfig {
    // input: either a panel archive or raw records ingested on the fly
    std::optional<std::filesystem::path> panel;
    std::optional<std::filesystem::path> treaties_csv;
    std::optional<std::filesystem::path> events_csv;
    std::optional<std::filesystem::path> records_json;
    std::optional<std::filesystem::path> subject_map;

    MembershipPolicy policy = MembershipPolicy::ratification_based;
    std::optional<YearRange> years;  // default: the panel's range
    double alpha = 0.01;
    std::vector<std::optional<SubjectCategory>> subjects;  // nullopt = all treaties; empty list = {all}
    bool exclude_sponsored = false;
    std::vector<std::string> metrics;  // empty = all
    std::filesystem::path out = "out";
    std::set<std::string> formats = {"csv", "json"};
    unsigned threads = 1;

    bool export_edge_lists = true;
    bool export_node_metrics = true;
    bool export_pair_tests = false;
    std::vector<int> biadjacency_years;  // empty = last year

    /// One filter per requested subject, all sharing exclude_sponsored.
    std::vector<SnapshotFilter> filters() const;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    nlohmann::ordered_json to_json() const;
};

/// Parses a JSON config document; relative paths resolve against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// "all" -> nullopt, otherwise a category name.
std::optional<SubjectCategory> parse_subject_option(const std::string& name, const std::string& field);

}  // namespace valproj
