#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "valproj/cli.hpp"
#include "valproj/synth.hpp"

namespace fs = std::filesystem;
using valproj::cli::run;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("valproj_test_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& s) const { return path / s; }
};

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t lines(const fs::path& p) {
    const auto s = read(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// every regular file below `root`, relative path -> bytes
std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read(e.path());
    return out;
}

// Two air treaties, both UN-sponsored, and two sea treaties.
void air_fixture(const fs::path& dir) {
    std::string t = "treaty_id,title,subjects,sponsor_flag,date_signed,date_in_force\n";
    t += "A1,air one,Air & atmosphere,true,1980-01-01,\nA2,air two,Air & atmosphere,true,1981-01-01,\n";
    t += "S1,sea one,Sea,false,1980-01-01,\nS2,sea two,Sea,false,1980-01-01,\n";
    std::string e = "treaty_id,country_id,event_kind,date\n";
    for (const char* c : {"AAA", "BBB", "CCC", "DDD"})
        for (const char* tr : {"A1", "A2", "S1", "S2"}) e += std::string(tr) + "," + c + ",ratification,1982-05-01\n";
    write(dir / "treaties.csv", t);
    write(dir / "events.csv", e);
}

}  // namespace

TEST_CASE("cli: usage errors exit 1, help exits 0") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"analyze", "--threads", "many"}).code == 1);
}

TEST_CASE("cli: ingest the full-scale synthetic fixture") {
    TempDir dir("ingest");
    const auto synth = cli({"synth", "--out", (dir / "syn").string()});
    REQUIRE(synth.code == 0);
    const auto manifest = nlohmann::json::parse(read(dir / "syn/manifest.json"));
    const auto r = cli({"ingest", "--treaties", (dir / "syn/treaties.csv").string(), "--events",
                        (dir / "syn/events.csv").string(), "--years", "1948:2015", "--out",
                        (dir / "panel.json").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("treaties: " + std::to_string(manifest["n_treaties"].get<int>())) != std::string::npos);
    CHECK(r.out.find("treaties: 546") != std::string::npos);
    CHECK(r.out.find("countries: 200") != std::string::npos);
    CHECK(fs::exists(dir / "panel.json"));
    CHECK(lines(dir / "panel.json.rejects.csv") == 1);
}

TEST_CASE("cli: missing input file exits 2 naming the path") {
    TempDir dir("missing");
    const auto missing = (dir / "nope.csv").string();
    const auto r = cli({"ingest", "--treaties", missing, "--events", missing, "--out", (dir / "p.json").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(missing) != std::string::npos);
    CHECK(cli({"analyze", "--panel", (dir / "absent.json").string(), "--out", (dir / "o").string()}).code == 2);
}

TEST_CASE("cli: malformed date exits 1 with a rejects report") {
    TempDir dir("malformed");
    write(dir / "t.csv", "treaty_id,title,subjects,sponsor_flag,date_signed,date_in_force\nT1,x,Sea,false,1970-02-30,\n");
    write(dir / "e.csv", "treaty_id,country_id,event_kind,date\nT1,A,ratification,1971-01-01\n");
    const auto r = cli({"ingest", "--treaties", (dir / "t.csv").string(), "--events", (dir / "e.csv").string(),
                        "--out", (dir / "p.json").string(), "--rejects", (dir / "rejects.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("date_signed") != std::string::npos);
    CHECK(lines(dir / "rejects.csv") > 1);
    CHECK_FALSE(fs::exists(dir / "p.json"));
}

TEST_CASE("cli: invalid config fields exit 1 naming the field") {
    TempDir dir("config");
    air_fixture(dir.path);
    auto run_config = [&](const std::string& body) {
        write(dir / "run.json", body);
        return cli({"analyze", "--config", (dir / "run.json").string()});
    };
    const std::string inputs = R"("inputs": {"treaties": "treaties.csv", "events": "events.csv"}, "out": "o")";
    auto r = run_config("{" + inputs + R"(, "alpha": 1.5})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'alpha'") != std::string::npos);
    r = run_config("{" + inputs + R"(, "subjects": ["space"]})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'subjects'") != std::string::npos);
    r = run_config("{" + inputs + R"(, "colour": "blue"})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'colour'") != std::string::npos);
    r = run_config("{" + inputs + R"(, "metrics": ["n_edges", "charisma"]})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'metrics'") != std::string::npos);
    r = run_config("{" + inputs + R"(, "years": "1990:1980"})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'years'") != std::string::npos);
    r = run_config("{" + inputs + R"(, "formats": ["xlsx"]})");
    CHECK(r.code == 1);
    CHECK(r.err.find("'formats'") != std::string::npos);
    r = run_config("{ not json");
    CHECK(r.code == 1);
    CHECK(cli({"analyze", "--config", (dir / "run.json").string(), "--alpha", "0"}).code == 1);
}

TEST_CASE("cli: no non-sponsored air treaties means no significant year") {
    TempDir dir("air");
    air_fixture(dir.path);
    write(dir / "run.json", R"({"inputs": {"treaties": "treaties.csv", "events": "events.csv"},
        "years": "1980:1985", "subjects": ["air_atmosphere"], "exclude_sponsored": true, "out": "o"})");
    const auto r = cli({"analyze", "--config", (dir / "run.json").string()});
    REQUIRE(r.code == 0);
    const auto series = read(dir / "o/air_atmosphere+nosponsored/series.csv");
    CHECK(series.find(",1\n") == std::string::npos);
    CHECK(series.find(",0\n") != std::string::npos);
}

TEST_CASE("cli: analyze is idempotent, fans out over subjects and ignores the thread count") {
    TempDir dir("analyze");
    REQUIRE(cli({"synth", "--out", (dir / "syn").string(), "--countries", "60", "--treaties", "150", "--seed", "5"}).code ==
            0);
    REQUIRE(cli({"ingest", "--treaties", (dir / "syn/treaties.csv").string(), "--events",
                 (dir / "syn/events.csv").string(), "--out", (dir / "panel.json").string()})
                .code == 0);
    const std::vector<std::string> base{"analyze", "--panel", (dir / "panel.json").string(), "--years", "1990:2015",
                                        "--format", "csv", "--format", "json", "--format", "graphml"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return cli(args);
    };
    const auto outside = cli({"analyze", "--panel", (dir / "panel.json").string(), "--years", "1800:1900", "--out",
                              (dir / "never").string()});
    CHECK(outside.code == 1);
    CHECK(outside.err.find("'years'") != std::string::npos);

    REQUIRE(with({"--out", (dir / "a").string(), "--threads", "1"}).code == 0);
    const auto a = tree(dir / "a");
    REQUIRE(with({"--out", (dir / "a").string(), "--threads", "1"}).code == 0);
    CHECK(tree(dir / "a") == a);
    REQUIRE(with({"--out", (dir / "b").string(), "--threads", "4"}).code == 0);
    auto b = tree(dir / "b");
    auto a_data = a;
    // run.json records the output directory
    b.erase("run.json");
    a_data.erase("run.json");
    CHECK(b == a_data);
    CHECK(a.size() > 10);
    CHECK(a.count("all/series.csv"));
    CHECK(a.count("all/rankings.csv"));
    CHECK(a.count("all/tau.csv"));
    CHECK(a.count("all/graph_metrics.json"));
    CHECK(a.count("all/edges/2015.graphml"));
    CHECK(a.count("all/nodes/2015.csv"));
    CHECK(a.count("all/biadjacency/2015.csv"));
    CHECK(a.count("run.json"));

    std::vector<std::string> six;
    for (auto c : valproj::kAllCategories) {
        six.push_back("--subject");
        six.emplace_back(valproj::to_string(c));
    }
    six.push_back("--out");
    six.push_back((dir / "six").string());
    REQUIRE(with(six).code == 0);
    std::size_t dirs = 0;
    for (const auto& e : fs::directory_iterator(dir / "six"))
        if (e.is_directory()) {
            ++dirs;
            CHECK(fs::exists(e.path() / "series.csv"));
        }
    CHECK(dirs == 6);
}

TEST_CASE("cli: synth is seeded and validates its spec") {
    TempDir dir("synth");
    REQUIRE(cli({"synth", "--seed", "42", "--blocks", "2", "--out", (dir / "a").string()}).code == 0);
    REQUIRE(cli({"synth", "--seed", "42", "--blocks", "2", "--out", (dir / "b").string()}).code == 0);
    CHECK(tree(dir / "a") == tree(dir / "b"));
    REQUIRE(cli({"synth", "--seed", "43", "--out", (dir / "c").string()}).code == 0);
    CHECK(read(dir / "c/events.csv") != read(dir / "a/events.csv"));

    write(dir / "bad.json", R"({"seed": 1, "in_block_share": 2.0})");
    CHECK(cli({"synth", "--spec", (dir / "bad.json").string(), "--out", (dir / "d").string()}).code == 1);
    write(dir / "unknown.json", R"({"seed": 1, "blocs": 2})");
    CHECK(cli({"synth", "--spec", (dir / "unknown.json").string(), "--out", (dir / "d").string()}).code == 1);
    CHECK(cli({"synth", "--sponsored-share", "-0.5", "--out", (dir / "d").string()}).code == 1);
}

TEST_CASE("cli: everything sponsored leaves nothing after exclusion") {
    TempDir dir("sponsored");
    REQUIRE(cli({"synth", "--sponsored-share", "1", "--countries", "40", "--treaties", "80", "--out",
                 (dir / "syn").string()})
                .code == 0);
    REQUIRE(cli({"ingest", "--treaties", (dir / "syn/treaties.csv").string(), "--events",
                 (dir / "syn/events.csv").string(), "--out", (dir / "panel.json").string()})
                .code == 0);
    REQUIRE(cli({"analyze", "--panel", (dir / "panel.json").string(), "--exclude-sponsored", "--out",
                 (dir / "o").string()})
                .code == 0);
    const auto series = read(dir / "o/all+nosponsored/series.csv");
    std::istringstream in(series);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find(",n_countries_bipartite,") != std::string::npos || line.find(",n_treaties,") != std::string::npos)
            CHECK(line.find(",0,0") != std::string::npos);
    }
    CHECK(rows > 0);
}

TEST_CASE("cli: export writes one year's artefacts") {
    TempDir dir("export");
    REQUIRE(cli({"synth", "--countries", "40", "--treaties", "120", "--out", (dir / "syn").string()}).code == 0);
    REQUIRE(cli({"ingest", "--treaties", (dir / "syn/treaties.csv").string(), "--events",
                 (dir / "syn/events.csv").string(), "--out", (dir / "panel.json").string()})
                .code == 0);
    const auto r = cli({"export", "--panel", (dir / "panel.json").string(), "--year", "2015", "--format", "csv",
                        "--format", "graphml", "--out", (dir / "x").string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"biadjacency_2015.csv", "biadjacency_2015.json", "pair_tests_2015.csv", "edges_2015.csv",
                          "edges_2015.graphml", "nodes_2015.csv"})
        CHECK(fs::exists(dir / "x" / f));
    CHECK(lines(dir / "x/pair_tests_2015.csv") == 1 + 40 * 39 / 2);
    CHECK(cli({"export", "--panel", (dir / "panel.json").string(), "--year", "1800", "--out", (dir / "y").string()})
              .code == 1);
}
