#include "doctest.h"

#include "hyperlab/cli.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using hyperlab::report::Json;
namespace cli = hyperlab::cli;

namespace {

const fs::path config_dir = HYPERLAB_CONFIG_DIR;

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("hyperlab_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + HYPERLAB_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

int run_config(const fs::path& cfg, const fs::path& out, const std::string& extra = "") {
    return run_cli("--config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --quiet " + extra);
}

Json load(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return Json::parse(in);
}

void save(const fs::path& p, const Json& j) {
    std::ofstream out(p);
    out << j.dump(2);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("every committed config runs clean") {
    const auto out = scratch("all");
    int n = 0;
    for (const auto& e : fs::directory_iterator(config_dir)) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().filename().string());
        CHECK(run_config(e.path(), out) == 0);
        const Json cfg = load(e.path());
        const Json rep = load(out / (cfg["command"].get<std::string>() + ".json"));
        CHECK(rep["status"] == "ok");
        CHECK(rep["exit_code"] == 0);
        CHECK(rep["version"] == cli::version());
        CHECK(rep.contains("wall_time_s"));
        ++n;
    }
    CHECK(n >= 15);
}

TEST_CASE("lattice csv and parameters") {
    const auto out = scratch("lattice");
    REQUIRE(run_config(config_dir / "lattice.json", out) == 0);
    const Json rep = load(out / "lattice.json");
    const auto& r = rep["results"];
    CHECK(r["m"] == 2);
    CHECK(r["h"] == 89);
    CHECK(r["R"] == 178);
    CHECK(r["k"] == 7);
    const std::string csv = slurp(out / "lattice.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1247);
}

TEST_CASE("admissible set clusters at 1 and 2") {
    const auto out = scratch("admissible");
    REQUIRE(run_config(config_dir / "admissible_c.json", out) == 0);
    const Json r = load(out / "admissible-c.json")["results"];
    REQUIRE(r["clusters"].size() == 2);
    const auto& c0 = r["clusters"][0];
    const auto& c1 = r["clusters"][1];
    CHECK(c0[0].get<double>() <= 1.0);
    CHECK(c0[1].get<double>() >= 1.0);
    CHECK(c1[0].get<double>() <= 2.0);
    CHECK(c1[1].get<double>() >= 2.0);
}

TEST_CASE("bound violation exits 3") {
    const auto out = scratch("violation");
    Json cfg = load(config_dir / "mscan_family_a.json");
    cfg["params"]["expect"] = Json::array({"numerically-hypercyclic", "numerically-hypercyclic",
                                           "numerically-hypercyclic", "numerically-hypercyclic",
                                           "numerically-not"});
    save(out / "cfg.json", cfg);
    CHECK(run_config(out / "cfg.json", out) == 3);
    const Json rep = load(out / "mscan.json");
    CHECK(rep["status"] == "bound_violation");
    CHECK(rep["results"]["matches_expected"] == false);

    Json rc = load(config_dir / "runge_two_disks.json");
    rc["params"]["degree_cap"] = 8;
    save(out / "runge.json.in", rc);
    CHECK(run_config(out / "runge.json.in", out) == 3);
}

TEST_CASE("config errors exit 2") {
    const auto out = scratch("config");
    Json cfg = load(config_dir / "threshold.json");

    Json unknown = cfg;
    unknown["params"]["n_maxx"] = 10;
    save(out / "a.json", unknown);
    CHECK(run_config(out / "a.json", out) == 2);

    Json top = cfg;
    top["extra"] = 1;
    save(out / "b.json", top);
    CHECK(run_config(out / "b.json", out) == 2);

    Json wrong_type = cfg;
    wrong_type["params"]["n_max"] = "many";
    save(out / "c.json", wrong_type);
    CHECK(run_config(out / "c.json", out) == 2);

    Json no_seed = load(config_dir / "mf_area_single.json");
    no_seed.erase("seed");
    save(out / "d.json", no_seed);
    CHECK(run_config(out / "d.json", out) == 2);
    CHECK(run_config(out / "d.json", out, "--seed 5") == 0);

    Json cmd = cfg;
    cmd["command"] = "nonsense";
    save(out / "e.json", cmd);
    CHECK(run_config(out / "e.json", out) == 2);

    CHECK(run_config(out / "missing.json", out) == 2);
    CHECK(run_cli("--bogus") == 2);

    Json cover = load(config_dir / "cn_volume_nilpotent.json");
    cover["params"]["box"] = Json::array({-4, 4, -4, 4});
    save(out / "f.json", cover);
    CHECK(run_config(out / "f.json", out) == 2);
}

TEST_CASE("embedded config reproduces results") {
    for (const char* name : {"cn_volume_two_eigenvalues.json", "mf_area_ring.json", "sm2.json", "family_b.json"}) {
        CAPTURE(name);
        const auto a = scratch("rerun_a");
        const auto b = scratch("rerun_b");
        const Json cfg = load(config_dir / name);
        const std::string cmd = cfg["command"];
        REQUIRE(run_config(config_dir / name, a) == 0);
        const Json first = load(a / (cmd + ".json"));
        save(b / "embedded.json", first["config"]);
        REQUIRE(run_config(b / "embedded.json", b) == 0);
        const Json second = load(b / (cmd + ".json"));
        CHECK(first["config"] == second["config"]);
        CHECK(hyperlab::report::dump(first["results"]) == hyperlab::report::dump(second["results"]));
        for (const auto& e : fs::directory_iterator(a))
            if (e.path().extension() == ".csv") CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
}

TEST_CASE("seed override changes Monte-Carlo draws only") {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    REQUIRE(run_config(config_dir / "mf_area_ring.json", a) == 0);
    REQUIRE(run_config(config_dir / "mf_area_ring.json", b, "--seed 99") == 0);
    const Json ra = load(a / "mf-area.json");
    const Json rb = load(b / "mf-area.json");
    CHECK(rb["config"]["seed"] == 99);
    CHECK(ra["config"]["params"] == rb["config"]["params"]);
    CHECK(ra["results"]["estimate"]["hits"] != rb["results"]["estimate"]["hits"]);
}

TEST_CASE("in-process run matches defaults echo") {
    cli::RunConfig cfg;
    cfg.command = "sm2";
    const auto r = cli::run(cfg);
    CHECK(r.exit_code == 0);
    const auto& p = r.report["config"]["params"];
    for (const auto& k : cli::param_keys("sm2")) CHECK(p.contains(k));
    CHECK(p["alpha"] == 0.3);
    CHECK(p["dim"] == 200);
}

TEST_CASE("schema document lists every command and key") {
    const Json doc = load(fs::path(HYPERLAB_CONFIG_DIR).parent_path() / "docs" / "config_schema.json");
    const auto& cmds = doc["commands"];
    CHECK(cmds.size() == cli::commands().size());
    for (const auto& c : cli::commands()) {
        CAPTURE(c);
        REQUIRE(cmds.contains(c));
        std::set<std::string> documented;
        for (const auto& [k, v] : cmds[c]["params"].items()) documented.insert(k);
        const auto& keys = cli::param_keys(c);
        CHECK(documented == std::set<std::string>(keys.begin(), keys.end()));
        CHECK((cmds[c]["seed"] == true) == cli::needs_seed(c));
    }
}
