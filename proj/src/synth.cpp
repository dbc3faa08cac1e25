#include "valproj/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "valproj/csv.hpp"
#include "valproj/error.hpp"

namespace valproj {

nlohmann::ordered_json SynthSpec::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["n_countries"] = n_countries;
    j["n_treaties"] = n_treaties;
    j["first_year"] = first_year;
    j["last_year"] = last_year;
    j["blocks"] = blocks;
    j["in_block_share"] = in_block_share;
    j["min_country_degree"] = min_country_degree;
    j["max_country_degree"] = max_country_degree;
    j["treaty_size_skew"] = treaty_size_skew;
    j["sponsored_share"] = sponsored_share;
    j["signature_only_share"] = signature_only_share;
    j["withdrawal_share"] = withdrawal_share;
    j["max_ratification_lag"] = max_ratification_lag;
    return j;
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DataError("synth spec: expected a JSON object");
    SynthSpec s;
    const auto defaults = s.to_json();
    for (auto& [key, value] : j.items())
        if (!defaults.contains(key)) throw DataError("synth spec: unknown field '" + key + "'");
    auto read = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        try {
            field = j.at(key).get<std::decay_t<decltype(field)>>();
        } catch (const nlohmann::json::exception&) {
            throw DataError(std::string("synth spec: field '") + key + "' has the wrong type");
        }
    };
    read("seed", s.seed);
    read("n_countries", s.n_countries);
    read("n_treaties", s.n_treaties);
    read("first_year", s.first_year);
    read("last_year", s.last_year);
    read("blocks", s.blocks);
    read("in_block_share", s.in_block_share);
    read("min_country_degree", s.min_country_degree);
    read("max_country_degree", s.max_country_degree);
    read("treaty_size_skew", s.treaty_size_skew);
    read("sponsored_share", s.sponsored_share);
    read("signature_only_share", s.signature_only_share);
    read("withdrawal_share", s.withdrawal_share);
    read("max_ratification_lag", s.max_ratification_lag);
    s.validate();
    return s;
}

void SynthSpec::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw DataError("synth spec: field '" + field + "' " + why);
    };
    auto unit = [&](const char* field, double v) {
        if (!(v >= 0.0 && v <= 1.0)) fail(field, "must lie in [0, 1]");
    };
    if (n_countries < 2) fail("n_countries", "must be at least 2");
    if (n_treaties < 1) fail("n_treaties", "must be at least 1");
    if (last_year < first_year) fail("last_year", "must not precede first_year");
    if (blocks > n_countries || blocks > n_treaties) fail("blocks", "exceeds the number of countries or treaties");
    unit("in_block_share", in_block_share);
    unit("sponsored_share", sponsored_share);
    unit("signature_only_share", signature_only_share);
    unit("withdrawal_share", withdrawal_share);
    if (min_country_degree < 1) fail("min_country_degree", "must be at least 1");
    if (max_country_degree < min_country_degree) fail("max_country_degree", "must not be below min_country_degree");
    if (max_country_degree > n_treaties) fail("max_country_degree", "exceeds n_treaties");
    if (treaty_size_skew < 0.0) fail("treaty_size_skew", "must be non-negative");
    if (max_ratification_lag < 0) fail("max_ratification_lag", "must be non-negative");
}

namespace {

// Weighted sample of `k` distinct items (Efraimidis-Spirakis keys).
std::vector<std::size_t> sample_without_replacement(const std::vector<std::size_t>& items,
                                                    const std::vector<double>& weights, std::size_t k,
                                                    std::mt19937_64& rng) {
    k = std::min(k, items.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double u = std::max(unif(rng), 1e-300);
        keyed.emplace_back(std::log(u) / weights[i], items[i]);
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(keyed[i].second);
    return out;
}

Date random_date_in(int year, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> month(1, 12), day(1, 28);
    return Date{year, month(rng), day(rng)};
}

}  // namespace

SynthData generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    SynthData data;
    const std::size_t nb = std::max<std::size_t>(spec.blocks, 1);
    const int span = spec.last_year - spec.first_year;

    for (std::size_t c = 0; c < spec.n_countries; ++c) {
        data.countries.push_back(fmt::format("C{:03d}", c + 1));
        data.country_block.push_back(c * nb / spec.n_countries);
    }

    std::vector<std::size_t> sponsored_order(spec.n_treaties);
    std::iota(sponsored_order.begin(), sponsored_order.end(), std::size_t{0});
    std::shuffle(sponsored_order.begin(), sponsored_order.end(), rng);
    const auto n_sponsored =
        static_cast<std::size_t>(std::llround(spec.sponsored_share * static_cast<double>(spec.n_treaties)));
    std::vector<bool> sponsored(spec.n_treaties, false);
    for (std::size_t i = 0; i < n_sponsored; ++i) sponsored[sponsored_order[i]] = true;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_category(0, kAllCategories.size() - 1);
    std::vector<int> treaty_year(spec.n_treaties);
    std::vector<std::vector<std::size_t>> block_treaties(nb);
    for (std::size_t t = 0; t < spec.n_treaties; ++t) {
        // more treaties in later years
        treaty_year[t] = spec.first_year + static_cast<int>(std::floor(std::sqrt(unif(rng)) * (span + 1)));
        treaty_year[t] = std::min(treaty_year[t], spec.last_year);
        const std::size_t block = t * nb / spec.n_treaties;
        data.treaty_block.push_back(block);
        block_treaties[block].push_back(t);

        std::set<std::string> subjects{std::string(to_string(kAllCategories[pick_category(rng)]))};
        if (unif(rng) < 0.2) subjects.insert(std::string(to_string(kAllCategories[pick_category(rng)])));
        TreatyRecord rec;
        rec.id = fmt::format("T{:04d}", t + 1);
        rec.title = fmt::format("Synthetic agreement {}", t + 1);
        rec.subjects.assign(subjects.begin(), subjects.end());
        rec.sponsored = sponsored[t];
        rec.date_signed = random_date_in(treaty_year[t], rng);
        data.treaties.push_back(std::move(rec));
    }

    std::vector<double> weight(spec.n_treaties, 1.0);
    for (const auto& members : block_treaties)
        for (std::size_t r = 0; r < members.size(); ++r)
            weight[members[r]] = 1.0 / std::pow(static_cast<double>(r + 1), spec.treaty_size_skew);

    std::uniform_int_distribution<std::size_t> degree(spec.min_country_degree, spec.max_country_degree);
    std::uniform_int_distribution<int> lag(0, spec.max_ratification_lag);
    std::geometric_distribution<int> join_delay(0.25);

    for (std::size_t c = 0; c < spec.n_countries; ++c) {
        const std::size_t k = degree(rng);
        std::vector<std::size_t> chosen;
        auto draw = [&](const std::vector<std::size_t>& pool, std::size_t count) {
            std::vector<double> w;
            for (auto t : pool) w.push_back(weight[t]);
            for (auto t : sample_without_replacement(pool, w, count, rng)) chosen.push_back(t);
        };
        if (nb == 1) {
            std::vector<std::size_t> all(spec.n_treaties);
            std::iota(all.begin(), all.end(), std::size_t{0});
            draw(all, k);
        } else {
            const auto own = data.country_block[c];
            std::vector<std::size_t> others;
            for (std::size_t b = 0; b < nb; ++b)
                if (b != own) others.insert(others.end(), block_treaties[b].begin(), block_treaties[b].end());
            auto in = static_cast<std::size_t>(std::llround(spec.in_block_share * static_cast<double>(k)));
            in = std::min(in, block_treaties[own].size());
            draw(block_treaties[own], in);
            draw(others, k - in);
        }
        std::sort(chosen.begin(), chosen.end());

        for (auto t : chosen) {
            const auto& treaty = data.treaties[t];
            const int join = std::min(spec.last_year, treaty_year[t] + join_delay(rng));
            const Date signed_on = join == treaty.date_signed.year ? treaty.date_signed : random_date_in(join, rng);
            data.events.push_back({treaty.id, data.countries[c], EventKind::signature, signed_on});
            if (unif(rng) < spec.signature_only_share) continue;
            const int ratify_year = join + lag(rng);
            if (ratify_year > spec.last_year) continue;
            Date ratified = random_date_in(ratify_year, rng);
            if (ratified < signed_on) ratified = signed_on;
            data.events.push_back({treaty.id, data.countries[c], EventKind::ratification, ratified});
            if (unif(rng) < spec.withdrawal_share && ratify_year < spec.last_year) {
                std::uniform_int_distribution<int> leave(ratify_year + 1, spec.last_year);
                data.events.push_back(
                    {treaty.id, data.countries[c], EventKind::withdrawal, random_date_in(leave(rng), rng)});
            }
        }
    }
    return data;
}

void write_synthetic(const SynthData& data, const SynthSpec& spec, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write " + p.string());
        return out;
    };

    {
        auto out = open(dir / "treaties.csv");
        csv::write_row(out, {"treaty_id", "title", "subjects", "sponsor_flag", "date_signed", "date_in_force"});
        for (const auto& t : data.treaties) {
            std::string subjects;
            for (const auto& s : t.subjects) subjects += (subjects.empty() ? "" : ";") + s;
            csv::write_row(out, {t.id, t.title, subjects, t.sponsored ? "true" : "false", t.date_signed.iso(),
                                 t.date_in_force ? t.date_in_force->iso() : ""});
        }
    }
    {
        auto out = open(dir / "events.csv");
        csv::write_row(out, {"treaty_id", "country_id", "event_kind", "date"});
        for (const auto& e : data.events)
            csv::write_row(out, {e.treaty_id, e.country_id, std::string(to_string(e.kind)), e.date.iso()});
    }
    {
        nlohmann::ordered_json manifest;
        manifest["spec"] = spec.to_json();
        manifest["n_treaties"] = data.treaties.size();
        manifest["n_countries"] = data.countries.size();
        manifest["n_events"] = data.events.size();
        manifest["n_sponsored"] = std::count_if(data.treaties.begin(), data.treaties.end(),
                                                [](const TreatyRecord& t) { return t.sponsored; });
        manifest["country_block"] = data.country_block;
        manifest["treaty_block"] = data.treaty_block;
        auto out = open(dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
}

}  // namespace valproj
