#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

// Drives the installed binary end to end.  COVERFORGE_BIN and FIXTURE_DIR
// are injected by the build.

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(COVERFORGE_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return RunResult{code, out};
}

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("exists: P2 with orders (2,3,5) exits 2 with per-divisor diagnosis") {
    auto r = run("exists --fan " + fixture("p2.json") + " --orders 2,3,5");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "Z/5 -> G_max not injective at divisor 2"));
    CHECK(contains(r.out, "exists: no"));
}

TEST_CASE("exists: P2 with orders (2,2,2) exits 0") {
    auto r = run("exists --fan " + fixture("p2.json") + " --orders 2,2,2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "exists: yes"));
    CHECK(contains(r.out, "G_max: Z/2 + Z/2"));
}

TEST_CASE("maxcover: P2 with orders (2,2,2)") {
    auto r = run("maxcover --fan " + fixture("p2.json") + " --orders 2,2,2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "galois group: Z/2 + Z/2"));
    CHECK(contains(r.out, "sublattice index: 4"));
}

TEST_CASE("maxcover structured output has the invariant factors") {
    auto r = run("maxcover --fan " + fixture("p2.json")
                 + " --orders 2,2,2 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["galois_group"]["invariant_factors"]
          == nlohmann::json::array({"2", "2"}));
    CHECK(j["galois_group"]["free_rank"] == 0);
    CHECK(j["index"] == "4");
}

TEST_CASE("clgroup on the square fan reports torsion and the torsion cover") {
    auto r = run("clgroup --fan " + fixture("square_torsion.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "class group: Z^2 + Z/2"));
    CHECK(contains(r.out, "torsion: Z/2"));
}

TEST_CASE("trivial group renders canonically in structured output") {
    auto r = run("maxcover --fan " + fixture("p2.json")
                 + " --orders 1,1,1 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["galois_group"]["invariant_factors"] == nlohmann::json::array());
    CHECK(j["galois_group"]["free_rank"] == 0);
}

TEST_CASE("covers on P1 with orders (2,2) emits two records in canonical order") {
    auto r = run("covers --fan " + fixture("p1.json") + " --orders 2,2 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["count"] == 2);
    CHECK(j["covers"][0]["index"] == "1");
    CHECK(j["covers"][1]["index"] == "2");
}

TEST_CASE("round trip: maxcover output re-verifies") {
    auto r = run("maxcover --fan " + fixture("p2.json")
                 + " --orders 2,3,6 --format json");
    REQUIRE(r.exit_code == 0);
    std::string path = std::string("/tmp/coverforge_roundtrip_tmp.json");
    {
        std::ofstream f(path);
        f << r.out;
    }
    auto v = run("verify --fan " + fixture("p2.json") + " --cover " + path
                 + " --orders 2,3,6 --format json");
    CHECK(v.exit_code == 0);
    auto j = nlohmann::json::parse(v.out);
    CHECK(j["verified"] == true);
    CHECK(j["galois_group"]["invariant_factors"] == nlohmann::json::array({"6"}));
    CHECK(j["ram_orders"] == nlohmann::json::array({"2", "3", "6"}));
    std::remove(path.c_str());
}

TEST_CASE("verify detects a tampered document") {
    auto r = run("maxcover --fan " + fixture("p2.json")
                 + " --orders 2,2,2 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    doc["galois_group"]["invariant_factors"] = nlohmann::json::array({"4"});
    std::string path = std::string("/tmp/coverforge_tampered_tmp.json");
    {
        std::ofstream f(path);
        f << doc.dump();
    }
    auto v = run("verify --fan " + fixture("p2.json") + " --cover " + path);
    CHECK(v.exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("maxcover on a torsion fan builds the lattice cover with a note") {
    auto r = run("maxcover --fan " + fixture("square_torsion.json")
                 + " --orders 2,2,2,2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "galois group: Z/2 + Z/4"));
    CHECK(contains(r.out, "torsion-cover"));
}

TEST_CASE("covers of the square fan with trivial orders are identity and torsion") {
    auto r = run("covers --fan " + fixture("square_torsion.json")
                 + " --orders 1,1,1,1 --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["count"] == 2);
    CHECK(j["covers"][0]["index"] == "1");
    CHECK(j["covers"][1]["index"] == "2");
}

TEST_CASE("torsion-cover command") {
    auto r = run("torsion-cover --fan " + fixture("square_torsion.json"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "galois group: Z/2"));
    CHECK(contains(r.out, "sublattice index: 2"));
}

TEST_CASE("crosscheck command") {
    auto r = run("crosscheck --fan " + fixture("p1xp1.json") + " --orders 2,2,2,2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "crosscheck: ok"));
}

TEST_CASE("abstract mode drives gmax") {
    std::string path = std::string("/tmp/coverforge_abstract_tmp.json");
    {
        std::ofstream f(path);
        f << R"({"cl": {"invariant_factors": [], "free_rank": 1},
                 "divisor_classes": [[1],[1],[1]]})";
    }
    auto r = run("exists --abstract " + path + " --orders 2,2,2");
    CHECK(r.exit_code == 0);
    auto r2 = run("exists --abstract " + path + " --orders 2,3,5");
    CHECK(r2.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("operational errors exit 1 with a named field") {
    std::string bad = std::string("/tmp/coverforge_bad_tmp.json");
    {
        std::ofstream f(bad);
        f << "{ this is not json";
    }
    auto r = run("clgroup --fan " + bad);
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "malformed JSON"));
    std::remove(bad.c_str());

    auto missing = run("clgroup --fan /nonexistent/nope.json");
    CHECK(missing.exit_code == 1);

    std::string schema = std::string("/tmp/coverforge_schema_tmp.json");
    {
        std::ofstream f(schema);
        f << R"({"rank": 2, "rays": [[1,0],[0,1],[-1,-1]], "complete": true})";
    }
    auto r3 = run("clgroup --fan " + schema);
    CHECK(r3.exit_code == 1);
    CHECK(contains(r3.out, "cones"));
    std::remove(schema.c_str());

    auto r4 = run("exists --fan " + fixture("p2.json") + " --orders 2,2");
    CHECK(r4.exit_code == 1);
    CHECK(contains(r4.out, "3 divisors"));

    auto r5 = run("covers --fan " + fixture("p2.json") + " --orders 2,2,2 --bound 2");
    CHECK(r5.exit_code == 1);
    CHECK(contains(r5.out, "capacity"));
}

TEST_CASE("commands that need a lattice reject abstract mode") {
    std::string path = std::string("/tmp/coverforge_abs2_tmp.json");
    {
        std::ofstream f(path);
        f << R"({"cl": {"invariant_factors": [], "free_rank": 1},
                 "divisor_classes": [[1],[1]]})";
    }
    auto r = run("covers --abstract " + path + " --orders 2,2");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "fan"));
    std::remove(path.c_str());

    auto v = run("verify --fan " + fixture("p2.json"));
    CHECK(v.exit_code == 1);
    CHECK(contains(v.out, "--cover"));
}

TEST_CASE("COVERFORGE_BOUND environment variable sets the default capacity") {
    auto r = run("covers --fan " + fixture("p2.json") + " --orders 2,2,2");
    CHECK(r.exit_code == 0);
    setenv("COVERFORGE_BOUND", "2", 1);
    auto limited = run("covers --fan " + fixture("p2.json") + " --orders 2,2,2");
    CHECK(limited.exit_code == 1);
    // explicit flag wins over the environment
    auto flagged = run("covers --fan " + fixture("p2.json")
                       + " --orders 2,2,2 --bound 100");
    CHECK(flagged.exit_code == 0);
    unsetenv("COVERFORGE_BOUND");
}

TEST_CASE("output bytes are deterministic") {
    std::string cmd = "covers --fan " + fixture("p1xp1.json")
                      + " --orders 2,2,2,2 --format json";
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("orders can come from a JSON file") {
    std::string path = std::string("/tmp/coverforge_orders_tmp.json");
    {
        std::ofstream f(path);
        f << "[2, 2, 2]";
    }
    auto r = run("exists --fan " + fixture("p2.json") + " --orders " + path);
    CHECK(r.exit_code == 0);
    std::remove(path.c_str());
}
