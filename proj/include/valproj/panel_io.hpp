#pragma once

#include <string>

#include <json.hpp>

#include "valproj/ingest.hpp"

namespace valproj {

/// Canonical panel archive: catalog, intervals, year range and subject map.
/// Keys and arrays are emitted in a fixed order so equal panels serialize to
/// equal bytes.
nlohmann::ordered_json panel_to_json(const Panel& panel, MembershipPolicy policy);

struct PanelArchive {
    Panel panel;
    MembershipPolicy policy;
};

/// Throws DataError on a malformed archive.
PanelArchive panel_from_json(const nlohmann::json& doc);

}  // namespace valproj
