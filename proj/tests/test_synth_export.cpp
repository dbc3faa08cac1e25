#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "valproj/export.hpp"
#include "valproj/projection.hpp"
#include "valproj/synth.hpp"
#include "valproj/validation.hpp"

using namespace valproj;

TEST_CASE("synthetic data is deterministic and honours the spec") {
    SynthSpec spec;
    spec.n_countries = 50;
    spec.n_treaties = 120;
    spec.min_country_degree = 20;
    spec.max_country_degree = 60;
    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    CHECK(a.events == b.events);
    CHECK(a.treaties == b.treaties);
    CHECK(a.treaties.size() == 120);
    CHECK(a.countries.size() == 50);

    std::size_t sponsored = 0;
    for (const auto& t : a.treaties) {
        sponsored += t.sponsored;
        CHECK(t.date_signed.year >= spec.first_year);
        CHECK(t.date_signed.year <= spec.last_year);
    }
    CHECK(sponsored == 36);

    std::map<std::string, std::set<std::string>> joined;
    for (const auto& e : a.events) joined[e.country_id].insert(e.treaty_id);
    for (const auto& [c, ts] : joined) {
        CHECK(ts.size() >= spec.min_country_degree);
        CHECK(ts.size() <= spec.max_country_degree);
    }

    spec.seed = 43;
    CHECK(generate_synthetic(spec).events != a.events);
}

TEST_CASE("synth spec JSON round-trips and rejects bad values") {
    SynthSpec spec;
    spec.seed = 7;
    spec.blocks = 3;
    const auto back = SynthSpec::from_json(nlohmann::json::parse(spec.to_json().dump()));
    CHECK(back.seed == 7);
    CHECK(back.blocks == 3);
    CHECK_THROWS(SynthSpec::from_json(nlohmann::json::parse(R"({"seed": 1, "sponsored_share": 1.5})")));
    CHECK_THROWS(SynthSpec::from_json(nlohmann::json::parse(R"({"seeds": 1})")));
}

TEST_CASE("numbers print as shortest round-trip text") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(2.0) == "2");
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(i % 40) - 20);
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("exports of a small snapshot") {
    // two blocks of four countries with a few solitary treaties
    std::vector<std::vector<int>> rows(8, std::vector<int>(44, 0));
    for (std::size_t c = 0; c < 8; ++c) {
        for (std::size_t t = 0; t < 14; ++t) rows[c][(c / 4) * 14 + t] = 1;
        rows[c][28 + 2 * c] = rows[c][29 + 2 * c] = 1;
    }
    const auto snap = fixture::dense(rows);
    const auto validated = validate(snap);
    const auto net = project(snap, validated);
    REQUIRE(net.edges.size() == 12);

    std::ostringstream pairs;
    write_pair_tests_csv(pairs, validated);
    const auto p = pairs.str();
    CHECK(p.rfind("country_i,country_j,n_obs,p_value,validated_flag\n", 0) == 0);
    CHECK(std::count(p.begin(), p.end(), '\n') == 1 + 28);

    std::ostringstream edges;
    write_edge_list_csv(edges, net);
    const auto e = edges.str();
    CHECK(e.rfind("country_i,country_j,weight,p_value\n", 0) == 0);
        // fourteen terms of 1/3, summed
    double w = 0;
    for (int i = 0; i < 14; ++i) w += 1.0 / 3.0;
    CHECK(e.find("c0,c1," + format_number(w) + ",") != std::string::npos);
    CHECK(format_number(w) == "4.666666666666666");

    std::ostringstream gml;
    write_graphml(gml, net);
    const auto g = gml.str();
    CHECK(g.find("<graphml") != std::string::npos);
    CHECK(std::count(g.begin(), g.end(), '\n') > 12);
    std::size_t edge_tags = 0;
    for (auto pos = g.find("<edge "); pos != std::string::npos; pos = g.find("<edge ", pos + 1)) ++edge_tags;
    CHECK(edge_tags == 12);

    const auto sorted = biadjacency_sorted(snap);
    std::ostringstream bi;
    write_biadjacency_csv(bi, snap, sorted);
    std::istringstream in(bi.str());
    std::string header;
    std::getline(in, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 8);
    std::size_t body = 0;
    for (std::string line; std::getline(in, line);) ++body;
    CHECK(body == snap.n_treaties());
    const auto perm = biadjacency_permutations(snap, sorted);
    CHECK(perm["country_order"].size() == 8);
    CHECK(perm["treaty_order"].size() == snap.n_treaties());
}
