#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "valproj/ingest.hpp"

namespace valproj {

/// Parameters of the synthetic affiliation generator.
struct SynthSpec {
    std::uint64_t seed = 42;
    std::size_t n_countries = 200;
    std::size_t n_treaties = 546;
    int first_year = 1948;
    int last_year = 2015;
    /// Countries and treaties are split into this many blocks; a country
    /// draws `in_block_share` of its treaties from its own block. 0 or 1
    /// means no planted structure.
    std::size_t blocks = 2;
    double in_block_share = 0.97;
    std::size_t min_country_degree = 100;
    std::size_t max_country_degree = 240;
    /// Treaty popularity weight 1 / (r + 1)^skew for treaty r within its
    /// block; 0 draws treaties uniformly.
    double treaty_size_skew = 0.0;
    double sponsored_share = 0.3;
    /// Memberships that stop at signature and are never ratified.
    double signature_only_share = 0.05;
    double withdrawal_share = 0.0;
    int max_ratification_lag = 3;

    nlohmann::ordered_json to_json() const;
    /// Missing keys keep their defaults; unknown keys and invalid values throw DataError.
    static SynthSpec from_json(const nlohmann::json& j);
    void validate() const;
};

struct SynthData {
    std::vector<TreatyRecord> treaties;
    std::vector<MembershipEvent> events;
    std::vector<std::string> countries;
    std::vector<std::size_t> country_block;
    std::vector<std::size_t> treaty_block;
};

/// Deterministic given spec (including seed).
SynthData generate_synthetic(const SynthSpec& spec);

/// Writes treaties.csv, events.csv and manifest.json into `dir`.
void write_synthetic(const SynthData& data, const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace valproj
