#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <ncmf/cli.hpp>

using namespace ncmf;

namespace {

const std::string root = NCMF_SOURCE_DIR;

std::string fixture(const std::string& name) { return root + "/fixtures/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string golden(const std::string& name) {
    return read_file(root + "/tests/golden/" + name);
}

} // namespace

TEST_CASE("golden: rescale the alpha-family") {
    std::vector<std::string> args = {"rescale", fixture("rescale_family_q.json"),
                                     "--window", "8"};
    CliResult r1 = run_cli(args);
    CHECK(r1.code == 0);
    CHECK(r1.output == golden("rescale_family_q.json"));
    CliResult r2 = run_cli(args);
    CHECK(r2.output == r1.output); // byte-identical across runs
}

TEST_CASE("golden: twist over F17") {
    std::vector<std::string> args = {"twist",   fixture("nmf_f17_alpha1.json"),
                                     "--twist", fixture("twist_f17.json"),
                                     "--normalize", "--window", "8"};
    CliResult r1 = run_cli(args);
    CHECK(r1.code == 0);
    CHECK(r1.output == golden("twist_f17.json"));
    CHECK(run_cli(args).output == r1.output);
}

TEST_CASE("golden: period over F13") {
    std::vector<std::string> args = {"period", fixture("nmf_f13_alpha5.json"), "--max",
                                     "8",      "--window", "8", "--seed", "1"};
    CliResult r1 = run_cli(args);
    CHECK(r1.code == 0);
    CHECK(r1.output == golden("period_f13.json"));
    CHECK(run_cli(args).output == r1.output);
}

TEST_CASE("golden: factorization from a point") {
    std::vector<std::string> args = {"from-point", fixture("context_exterior3.json"),
                                     "--point",    fixture("point_111.json"),
                                     "--steps",    "6",
                                     "--window",   "8"};
    CliResult r1 = run_cli(args);
    CHECK(r1.code == 0);
    CHECK(r1.output == golden("from_point_exterior3.json"));
    CHECK(run_cli(args).output == r1.output);
}

TEST_CASE("verify exit codes") {
    CliResult ok = run_cli({"verify", fixture("nmf_q_alpha2.json")});
    CHECK(ok.code == 0);
    Json report = Json::parse(ok.output);
    CHECK(report.at("ok") == true);

    // malformed JSON: exit 2
    std::string bad_path = root + "/build/bad_input.json";
    {
        std::ofstream out(bad_path);
        out << "{not json";
    }
    CliResult bad = run_cli({"verify", bad_path});
    CHECK(bad.code == 2);

    // a pair that fails verification: exit 1
    std::string broken_path = root + "/build/broken_nmf.json";
    {
        Json j = read_json_file(fixture("nmf_q_alpha2.json"));
        j["phi1"][0][0] = "x1";
        std::ofstream out(broken_path);
        out << j.dump(2);
    }
    CliResult fail = run_cli({"verify", broken_path});
    CHECK(fail.code == 1);
    Json fr = Json::parse(fail.output);
    CHECK(fr.at("ok") == false);
    CHECK(!fr.at("failures").empty());
}

TEST_CASE("domain failures exit 1, missing files exit 2") {
    CliResult missing = run_cli({"verify", root + "/no/such/file.json"});
    CHECK(missing.code == 2);

    // from-point on V(x_n): PointOnXn is a domain failure
    std::string pt_path = root + "/build/point_on_xn.json";
    {
        std::ofstream out(pt_path);
        out << "{\"coords\": [\"1\", \"0\", \"0\"]}";
    }
    CliResult onxn = run_cli({"from-point", fixture("context_exterior3.json"), "--point",
                              pt_path});
    CHECK(onxn.code == 1);
    Json jr = Json::parse(onxn.output);
    CHECK(jr.at("ok") == false);
}

TEST_CASE("NCMF_SEED environment variable overrides --seed") {
    setenv("NCMF_SEED", "1", 1);
    CliResult a = run_cli({"period", fixture("nmf_f13_alpha5.json"), "--seed", "999"});
    unsetenv("NCMF_SEED");
    Json ja = Json::parse(a.output);
    CHECK(ja.at("seed") == 1);
}

TEST_CASE("text mode renders flat lines") {
    CliResult r = run_cli({"verify", fixture("nmf_q_alpha2.json"), "--text"});
    CHECK(r.code == 0);
    CHECK(r.output.find("ok: true") != std::string::npos);
}

TEST_CASE("complete and resolve round out the surface") {
    CliResult c = run_cli({"complete", fixture("nmf_q_alpha2.json")});
    CHECK(c.code == 0);
    Json cj = Json::parse(c.output);
    CHECK(cj.at("nmf").at("phi1")[0][0] == "1/5*x1 + 2/3*x2");

    std::string module_path = root + "/build/copoint_module.json";
    {
        Json j;
        j["algebra"] = Json::parse(R"({"field": {"type": "Q"}, "n": 2,
                                       "commutation": "free", "square_zero": [1, 2]})");
        j["f"] = "2*x1*x2 + x2*x1";
        j["matrix"] = {{"target_shifts", Json::array({0})},
                       {"source_shifts", Json::array({1})},
                       {"entries", Json::array({Json::array({"3*x1 + 5*x2"})})}};
        std::ofstream out(module_path);
        out << j.dump(2);
    }
    CliResult res = run_cli({"resolve", module_path, "--steps", "4", "--window", "8"});
    CHECK(res.code == 0);
    Json rj = Json::parse(res.output);
    CHECK(rj.at("betti")[0] == Json::array({0}));
    CHECK(rj.at("betti")[1] == Json::array({1}));

    CliResult fm = run_cli({"from-module", module_path});
    CHECK(fm.code == 0);
    Json fj = Json::parse(fm.output);
    CHECK(fj.at("nmf").at("phi1")[0][0] == "1/5*x1 + 2/3*x2");
}
