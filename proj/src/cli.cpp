#include "valproj/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "valproj/export.hpp"
#include "valproj/synth.hpp"
#include "valproj/temporal.hpp"

namespace valproj::cli {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& p) {
    if (!fs::exists(p)) throw IoError("no such file: " + p.string());
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

std::string read_text(const fs::path& p) {
    auto in = open_input(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes through a temporary buffer so partially written files never appear.
template <typename F>
void write_file(const fs::path& p, F&& body) {
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    std::ostringstream buf;
    body(buf);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    out << buf.str();
    if (!out) throw IoError("write failed for " + p.string());
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

IngestResult ingest_files(const std::optional<fs::path>& treaties_csv, const std::optional<fs::path>& events_csv,
                          const std::optional<fs::path>& records_json, const std::optional<fs::path>& subject_map,
                          MembershipPolicy policy, std::optional<YearRange> years) {
    ParsedRecords records;
    if (records_json) {
        auto in = open_input(*records_json);
        records = parse_json(in);
    } else {
        if (!treaties_csv || !events_csv) throw DataError("ingest needs both a treaties and an events file");
        auto t = open_input(*treaties_csv);
        auto e = open_input(*events_csv);
        records = parse_csv(t, e);
    }
    const auto map = subject_map ? SubjectMap::from_json_text(read_text(*subject_map)) : SubjectMap::defaults();
    auto derived = derive_membership_intervals(records.catalog, records.events, policy);

    if (!years) {
        if (records.catalog.empty()) throw DataError("no treaties: give an explicit year range");
        YearRange r{records.catalog.front().date_signed.year, records.catalog.front().date_signed.year};
        for (const auto& t : records.catalog) {
            r.first = std::min(r.first, t.date_signed.year);
            r.last = std::max(r.last, t.date_signed.year);
        }
        for (const auto& e : records.events) r.last = std::max(r.last, e.date.year);
        years = r;
    }
    auto panel = build_panel(records.catalog, derived.intervals, *years, map);
    return {PanelArchive{std::move(panel), policy}, std::move(records), std::move(derived)};
}

PanelArchive load_panel(const fs::path& path) {
    const auto text = read_text(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("panel archive " + path.string() + ": " + e.what());
    }
    return panel_from_json(doc);
}

namespace {

void write_series_outputs(const RunConfig& config, const Panel& panel, const SeriesResult& res,
                          const fs::path& dir) {
    const bool csv = config.formats.count("csv") != 0;
    const bool json = config.formats.count("json") != 0;
    const bool graphml = config.formats.count("graphml") != 0;

    write_file(dir / "series.csv", [&](std::ostream& o) { write_series_csv(o, res.series); });
    write_file(dir / "rankings.csv", [&](std::ostream& o) { write_rankings_csv(o, res.years); });
    write_file(dir / "tau.csv", [&](std::ostream& o) { write_tau_csv(o, res.tau); });

    std::map<int, std::vector<std::size_t>> degrees;
    std::map<int, std::vector<double>> strengths;
    for (const auto& y : res.years) {
        if (y.network.nodes.empty()) continue;
        degrees[y.year] = y.metrics.nodes.degree;
        strengths[y.year] = y.metrics.nodes.strength;
    }
    write_file(dir / "distributions.csv", [&](std::ostream& o) {
        write_distributions_csv(o, "degree", distributions(degrees));
        write_distributions_csv(o, "strength", distributions(strengths), false);
    });

    if (json) {
        nlohmann::ordered_json gm = nlohmann::ordered_json::object();
        for (const auto& y : res.years) {
            auto j = graph_metrics_json(y.metrics.graph);
            j["significant"] = y.significant;
            gm[std::to_string(y.year)] = std::move(j);
        }
        write_file(dir / "graph_metrics.json", [&](std::ostream& o) { o << gm.dump(2) << '\n'; });
    }

    for (const auto& y : res.years) {
        const auto year = std::to_string(y.year);
        if (config.export_edge_lists) {
            if (csv) write_file(dir / "edges" / (year + ".csv"), [&](std::ostream& o) { write_edge_list_csv(o, y.network); });
            if (graphml)
                write_file(dir / "edges" / (year + ".graphml"), [&](std::ostream& o) { write_graphml(o, y.network); });
        }
        if (config.export_node_metrics && csv)
            write_file(dir / "nodes" / (year + ".csv"),
                       [&](std::ostream& o) { write_node_metrics_csv(o, y.network, y.metrics.nodes); });
        if (config.export_pair_tests && !y.validated.countries.empty())
            write_file(dir / "pair_tests" / (year + ".csv"),
                       [&](std::ostream& o) { write_pair_tests_csv(o, y.validated); });
    }

    auto biadj_years = config.biadjacency_years;
    if (biadj_years.empty()) biadj_years.push_back(res.years.back().year);
    for (int year : biadj_years) {
        const auto snap = snapshot(panel, year, res.filter);
        if (snap.empty()) continue;
        const auto sorted = biadjacency_sorted(snap);
        write_file(dir / "biadjacency" / (std::to_string(year) + ".csv"),
                   [&](std::ostream& o) { write_biadjacency_csv(o, snap, sorted); });
        write_file(dir / "biadjacency" / (std::to_string(year) + ".json"),
                   [&](std::ostream& o) { o << biadjacency_permutations(snap, sorted).dump(2) << '\n'; });
    }
}

}  // namespace

void analyze(const RunConfig& config, std::ostream& log) {
    config.validate();
    PanelArchive archive = config.panel ? load_panel(*config.panel)
                                        : ingest_files(config.treaties_csv, config.events_csv, config.records_json,
                                                       config.subject_map, config.policy, config.years)
                                              .archive;
    const auto& panel = archive.panel;
    const YearRange years = config.years.value_or(panel.years());
    if (!panel.years().contains(years.first) || !panel.years().contains(years.last))
        throw ConfigError("years", fmt::format("{}:{} outside the panel range {}:{}", years.first, years.last,
                                               panel.years().first, panel.years().last));
    for (int year : config.biadjacency_years)
        if (!panel.years().contains(year))
            throw ConfigError("exports.biadjacency_years", fmt::format("year {} outside the panel", year));

    for (const auto& filter : config.filters()) {
        SeriesRequest req;
        req.years = years;
        req.filter = filter;
        req.alpha = config.alpha;
        req.metrics = config.metrics;
        req.threads = config.threads;
        const auto res = run_series(panel, req);
        const auto dir = config.out / filter.label();
        write_series_outputs(config, panel, res, dir);
        std::size_t significant = 0;
        for (const auto& y : res.years) significant += y.significant;
        log << fmt::format("{}: {} years, {} significant -> {}\n", filter.label(), res.years.size(), significant,
                           dir.generic_string());
    }
    write_file(config.out / "run.json", [&](std::ostream& o) { o << config.to_json().dump(2) << '\n'; });
}

namespace {

struct CommonFlags {
    std::string years;
    double alpha = 0.01;
    std::vector<std::string> subjects;
    bool exclude_sponsored = false;
    std::string policy;
    std::string out;
    std::vector<std::string> formats;
    unsigned threads = 0;
};

int cmd_ingest(const std::string& treaties, const std::string& events, const std::string& json,
               const std::string& subjects, const std::string& policy_name, const std::string& years_text,
               const std::string& out_path, std::string rejects_path, std::ostream& out) {
    const auto policy = parse_policy(policy_name);
    if (!policy) throw ConfigError("policy", "expected 'ratification' or 'signature'");
    std::optional<YearRange> years;
    if (!years_text.empty()) {
        years = parse_year_range(years_text);
        if (!years) throw ConfigError("years", "expected A:B with A <= B");
    }
    if (json.empty() && (treaties.empty() || events.empty()))
        throw ConfigError("inputs", "give --treaties and --events, or --json");
    if (rejects_path.empty()) rejects_path = out_path + ".rejects.csv";

    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };
    std::optional<IngestResult> loaded;
    try {
        loaded = ingest_files(opt(treaties), opt(events), opt(json), opt(subjects), *policy, years);
    } catch (const MalformedInput& e) {
        write_file(rejects_path, [&](std::ostream& o) { write_rejects_csv(o, e.partial().rejects); });
        throw;
    }
    auto& result = *loaded;

    std::vector<Reject> rejects = result.records.rejects;
    rejects.insert(rejects.end(), result.derived.diagnostics.begin(), result.derived.diagnostics.end());
    write_file(rejects_path, [&](std::ostream& o) { write_rejects_csv(o, rejects); });
    write_file(out_path, [&](std::ostream& o) {
        o << panel_to_json(result.archive.panel, result.archive.policy).dump() << '\n';
    });

    const auto& p = result.archive.panel;
    out << fmt::format("treaties: {}\ncountries: {}\nevents: {}\nintervals: {}\nrejects: {}\nyears: {}:{}\n",
                       p.catalog().size(), p.countries().size(), result.records.events.size(), p.intervals().size(),
                       rejects.size(), p.years().first, p.years().last);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Statistically validated cooperation networks from affiliation records", "valproj"};
    app.require_subcommand(1);

    // ingest
    std::string treaties, events, json_in, subject_map, policy = "ratification", ingest_years, panel_out = "panel.json",
                                                        rejects_out;
    auto* ingest = app.add_subcommand("ingest", "Parse records and write a panel archive");
    ingest->add_option("--treaties", treaties, "Treaties CSV");
    ingest->add_option("--events", events, "Membership events CSV");
    ingest->add_option("--json", json_in, "Records as one JSON document");
    ingest->add_option("--subject-map", subject_map, "Subject tag -> category JSON");
    ingest->add_option("--policy", policy, "ratification | signature");
    ingest->add_option("--years", ingest_years, "Panel year range A:B");
    ingest->add_option("--out", panel_out, "Panel archive to write");
    ingest->add_option("--rejects", rejects_out, "Rejects report (default <out>.rejects.csv)");

    // analyze
    std::string config_path, panel_in;
    CommonFlags flags;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run the yearly pipeline and write series");
    analyze_cmd->add_option("--config", config_path, "JSON run configuration");
    analyze_cmd->add_option("--panel", panel_in, "Panel archive (overrides the config)");
    analyze_cmd->add_option("--years", flags.years, "Year range A:B");
    auto* alpha_opt = analyze_cmd->add_option("--alpha", flags.alpha, "FDR level");
    analyze_cmd->add_option("--subject", flags.subjects, "Subject category or 'all' (repeatable)");
    analyze_cmd->add_flag("--exclude-sponsored", flags.exclude_sponsored, "Drop UN-sponsored treaties");
    analyze_cmd->add_option("--policy", flags.policy, "Membership policy when ingesting raw inputs");
    analyze_cmd->add_option("--out", flags.out, "Output directory");
    analyze_cmd->add_option("--format", flags.formats, "csv | json | graphml (repeatable)");
    analyze_cmd->add_option("--threads", flags.threads, "Worker threads");

    // synth
    std::string spec_path, synth_out = "synth";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> blocks, n_countries, n_treaties;
    std::optional<double> sponsored_share;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic affiliation dataset");
    synth->add_option("--spec", spec_path, "JSON generator spec");
    synth->add_option("--seed", seed, "Random seed");
    synth->add_option("--blocks", blocks, "Planted blocks (0 = none)");
    synth->add_option("--countries", n_countries, "Number of countries");
    synth->add_option("--treaties", n_treaties, "Number of treaties");
    synth->add_option("--sponsored-share", sponsored_share, "Share of UN-sponsored treaties");
    synth->add_option("--out", synth_out, "Output directory");

    // export
    std::string export_panel, export_out = "export", export_subject = "all";
    int export_year = 0;
    double export_alpha = 0.01;
    bool export_nosponsor = false;
    std::vector<std::string> export_formats;
    auto* exp = app.add_subcommand("export", "Write one year's bi-adjacency, pair tests and network");
    exp->add_option("--panel", export_panel, "Panel archive")->required();
    exp->add_option("--year", export_year, "Year")->required();
    exp->add_option("--subject", export_subject, "Subject category or 'all'");
    exp->add_flag("--exclude-sponsored", export_nosponsor, "Drop UN-sponsored treaties");
    exp->add_option("--alpha", export_alpha, "FDR level");
    exp->add_option("--out", export_out, "Output directory");
    exp->add_option("--format", export_formats, "csv | graphml (repeatable)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(treaties, events, json_in, subject_map, policy, ingest_years, panel_out, rejects_out,
                              out);

        if (analyze_cmd->parsed()) {
            RunConfig config;
            if (!config_path.empty()) {
                const fs::path cp(config_path);
                const auto text = read_text(cp);
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(text);
                } catch (const nlohmann::json::parse_error& e) {
                    throw ConfigError("<root>", e.what());
                }
                config = parse_run_config(doc, cp.parent_path());
            }
            if (!panel_in.empty()) {
                config.panel = panel_in;
                config.treaties_csv.reset();
                config.events_csv.reset();
                config.records_json.reset();
            }
            if (!flags.years.empty()) {
                config.years = parse_year_range(flags.years);
                if (!config.years) throw ConfigError("years", "expected A:B with A <= B");
            }
            if (alpha_opt->count()) config.alpha = flags.alpha;
            if (!flags.subjects.empty()) {
                config.subjects.clear();
                for (const auto& s : flags.subjects) config.subjects.push_back(parse_subject_option(s, "subjects"));
            }
            if (flags.exclude_sponsored) config.exclude_sponsored = true;
            if (!flags.policy.empty()) {
                const auto p = parse_policy(flags.policy);
                if (!p) throw ConfigError("policy", "expected 'ratification' or 'signature'");
                config.policy = *p;
            }
            if (!flags.out.empty()) config.out = flags.out;
            if (!flags.formats.empty()) config.formats = {flags.formats.begin(), flags.formats.end()};
            config.threads = flags.threads ? flags.threads : (config_path.empty() ? default_threads() : config.threads);
            analyze(config, out);
            return kOk;
        }

        if (synth->parsed()) {
            SynthSpec spec;
            if (!spec_path.empty()) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(read_text(spec_path));
                } catch (const nlohmann::json::parse_error& e) {
                    throw DataError(std::string("synth spec: ") + e.what());
                }
                spec = SynthSpec::from_json(doc);
            }
            if (seed) spec.seed = *seed;
            if (blocks) spec.blocks = *blocks;
            if (n_countries) spec.n_countries = *n_countries;
            if (n_treaties) spec.n_treaties = *n_treaties;
            if (sponsored_share) spec.sponsored_share = *sponsored_share;
            spec.max_country_degree = std::min(spec.max_country_degree, spec.n_treaties);
            spec.min_country_degree = std::min(spec.min_country_degree, spec.max_country_degree);
            const auto data = generate_synthetic(spec);
            write_synthetic(data, spec, synth_out);
            out << fmt::format("treaties: {}\ncountries: {}\nevents: {}\n", data.treaties.size(),
                               data.countries.size(), data.events.size());
            return kOk;
        }

        if (exp->parsed()) {
            if (!(export_alpha > 0.0 && export_alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
            const auto archive = load_panel(export_panel);
            const SnapshotFilter filter{parse_subject_option(export_subject, "subject"), export_nosponsor};
            if (!archive.panel.years().contains(export_year)) throw ConfigError("year", "outside the panel range");
            const auto snap = snapshot(archive.panel, export_year, filter);
            if (snap.empty()) {
                out << "empty snapshot: nothing to export\n";
                return kOk;
            }
            const fs::path dir(export_out);
            const auto y = std::to_string(export_year);
            const auto sorted = biadjacency_sorted(snap);
            write_file(dir / ("biadjacency_" + y + ".csv"), [&](std::ostream& o) { write_biadjacency_csv(o, snap, sorted); });
            write_file(dir / ("biadjacency_" + y + ".json"),
                       [&](std::ostream& o) { o << biadjacency_permutations(snap, sorted).dump(2) << '\n'; });
            const auto validated = validate(snap, {export_alpha, ConstrainedLayer::countries, 1});
            write_file(dir / ("pair_tests_" + y + ".csv"), [&](std::ostream& o) { write_pair_tests_csv(o, validated); });
            const auto net = project(snap, validated);
            std::set<std::string> formats(export_formats.begin(), export_formats.end());
            if (formats.empty()) formats = {"csv"};
            for (const auto& f : formats)
                if (f != "csv" && f != "graphml") throw ConfigError("format", "unknown format '" + f + "'");
            if (formats.count("csv"))
                write_file(dir / ("edges_" + y + ".csv"), [&](std::ostream& o) { write_edge_list_csv(o, net); });
            if (formats.count("graphml"))
                write_file(dir / ("edges_" + y + ".graphml"), [&](std::ostream& o) { write_graphml(o, net); });
            const auto metrics = compute_node_metrics(net.graph(), 1);
            write_file(dir / ("nodes_" + y + ".csv"), [&](std::ostream& o) { write_node_metrics_csv(o, net, metrics); });
            out << fmt::format("{} countries, {} treaties, {} validated edges -> {}\n", snap.n_countries(),
                               snap.n_treaties(), net.edges.size(), dir.generic_string());
            return kOk;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kDataError;
}

}  // namespace valproj::cli
