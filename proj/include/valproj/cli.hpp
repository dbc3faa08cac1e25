#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "valproj/config.hpp"
#include "valproj/ingest.hpp"
#include "valproj/panel_io.hpp"

namespace valproj::cli {

/// Exit codes of the command line tool.
enum ExitCode : int { kOk = 0, kDataError = 1, kIoError = 2 };

/// Runs `valproj <subcommand> ...`; args exclude the program name.
/// Diagnostics go to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct IngestResult {
    PanelArchive archive;
    ParsedRecords records;
    DerivedIntervals derived;
};

/// Reads raw records, derives intervals and builds the panel. When `years`
/// is absent the range spans the earliest signing year to the latest event
/// year. Throws IoError for unreadable files, DataError otherwise.
IngestResult ingest_files(const std::optional<std::filesystem::path>& treaties_csv,
                          const std::optional<std::filesystem::path>& events_csv,
                          const std::optional<std::filesystem::path>& records_json,
                          const std::optional<std::filesystem::path>& subject_map, MembershipPolicy policy,
                          std::optional<YearRange> years);

PanelArchive load_panel(const std::filesystem::path& path);

/// Writes all configured outputs of an analysis run below config.out.
void analyze(const RunConfig& config, std::ostream& log);

}  // namespace valproj::cli
