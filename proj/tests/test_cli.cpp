#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "sqp/certify.hpp"
#include "sqp/diagram.hpp"

using nlohmann::json;

namespace {

std::string cli() {
    const char* b = std::getenv("SQP_CLI");
    return b ? b : "";
}

struct RunResult {
    int rc = -1;
    std::string out;
};

// runs a shell command, capturing stdout and the exit code
RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
    int st = pclose(p);
    r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

const char* kTrefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
const char* kFigureEight = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

}  // namespace

TEST_CASE("cli reports the trefoil as positive and quasipositive") {
    auto r = run(cli() + " check --pd '" + kTrefoil + "'");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["kind"] == "positive");
    CHECK(j["canonical-qp"] == true);
    CHECK(j["sqp"] == "yes");
    CHECK(j["min-cycle-weight"] == 2);
    CHECK(j["invariants"]["euler"] == -1);
    CHECK(j["invariants"]["boundary"] == 1);
}

TEST_CASE("cli pipes a generated pretzel into check") {
    auto r = run(cli() + " gen pretzel -- -3 -3 1 | " + cli() + " check");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["kind"] == "almost-positive-type-I");
    CHECK(j["canonical-qp"] == true);
    CHECK(j["sqp"] == "yes");
}

TEST_CASE("cli leaves the figure eight undecided") {
    auto r = run(cli() + " check --pd '" + std::string(kFigureEight) + "'");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["kind"] == "other");
    CHECK(j["canonical-qp"] == false);
    CHECK(j["sqp"] == "undecided");
    CHECK(j["min-cycle-weight"] == -2);
}

TEST_CASE("cli exits 2 when no input is given") {
    auto r = run(cli() + " check </dev/null 2>/dev/null");
    CHECK(r.rc == 2);
}

TEST_CASE("cli exits 2 on usage errors") {
    CHECK(run(cli() + " 2>/dev/null").rc == 2);
    CHECK(run(cli() + " bogus 2>/dev/null").rc == 2);
    CHECK(run(cli() + " gen 2>/dev/null").rc == 2);
    CHECK(run(cli() + " gen torus 2 2>/dev/null").rc == 2);
    CHECK(run(cli() + " gen random 6 --profile odd 2>/dev/null").rc == 2);
    CHECK(run(cli() + " --help >/dev/null").rc == 0);
}

TEST_CASE("cli exits 1 on malformed diagrams and exhausted budgets") {
    CHECK(run(cli() + " check --pd 'X(1,2,3)' 2>/dev/null").rc == 1);
    CHECK(run(cli() + " validate --pd 'X(1,2,3,4)' 2>/dev/null").rc == 1);
    CHECK(run(cli() + " check --pd '" + std::string(kFigureEight) +
              "' --work-cap 1 2>/dev/null")
              .rc == 1);
    CHECK(run(cli() + " check --in /no/such/file 2>/dev/null").rc == 1);
}

TEST_CASE("cli validate reports diagram shape") {
    auto r = run(cli() + " gen random 6 --profile mixed --seed 9 | " + cli() +
                 " validate");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["ok"] == true);
    CHECK(j["crossings"] == 6);
    CHECK(j["positive"].get<int>() + j["negative"].get<int>() == 6);
    CHECK(j["link-components"].get<int>() >= 1);
}

TEST_CASE("cli graph emits a plane rotation system") {
    auto r = run(cli() + " graph --pd '" + kTrefoil + "'");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["vertices"] == 2);
    CHECK(j["edges"] == 3);
    CHECK(j["plane"] == true);
    auto text = j["graph"].get<std::string>();
    CHECK(text.substr(0, 4) == "v 2\n");
    CHECK(text.find("rot 0") != std::string::npos);
}

TEST_CASE("cli generators are deterministic in the seed") {
    std::string cmd = cli() + " gen random 10 --profile almost-positive --seed 7";
    auto a = run(cmd), b = run(cmd);
    REQUIRE(a.rc == 0);
    CHECK(a.out == b.out);
    auto c = run(cli() + " gen random 10 --profile almost-positive --seed 8");
    CHECK(a.out != c.out);
}

TEST_CASE("cli certify emits a verifiable certificate") {
    auto r = run(cli() + " gen torus 2 3 | " + cli() + " certify");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["status"] == "verified");
    auto c = sqp::parse_certificate(j["certificate"].get<std::string>());
    CHECK(sqp::verify(c));
}

TEST_CASE("cli certify declines diagrams that fail the criterion") {
    auto r = run(cli() + " certify --pd '" + std::string(kFigureEight) + "'");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    auto status = j["status"].get<std::string>();
    CHECK(status.substr(0, 14) == "not-applicable");
    CHECK(!j.contains("certificate"));
}

TEST_CASE("cli type2 prints a replayable trace") {
    auto r = run(cli() + " gen random 8 --profile almost-positive --seed 1 | " +
                 cli() + " type2");
    REQUIRE(r.rc == 0);
    json j = json::parse(r.out);
    CHECK(j["kind"] == "almost-positive-type-II");
    CHECK(j["sigma"]["boundary"].get<int>() >= 1);
    const json& tr = j["trace"];
    CHECK(tr.contains("terminal"));
    CHECK(tr["prime"]["euler"].get<int>() == j["sigma"]["euler"].get<int>() + 2);
    for (const auto& mv : tr["moves"])
        CHECK(mv["pre"].get<std::string>().size() == 16);
}

TEST_CASE("cli type2 rejects diagrams of the wrong kind") {
    CHECK(run(cli() + " type2 --pd '" + std::string(kTrefoil) +
              "' 2>/dev/null")
              .rc == 1);
}

TEST_CASE("cli scan turns a table into one record per line") {
    std::string csv = "/tmp/sqp_cli_scan.csv";
    write_file(csv, std::string("name,pd\n") + "trefoil,\"" + kTrefoil +
                        "\"\n" + "fig8,\"" + kFigureEight + "\"\n");
    auto r = run(cli() + " scan --in " + csv + " --work-cap 5000");
    REQUIRE(r.rc == 0);
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        json j = json::parse(line);
        CHECK(j["ok"] == true);
        CHECK(j["work-cap"] == 5000);
        CHECK(j.contains("elapsed-ms"));
        if (j["name"] == "trefoil") CHECK(j["sqp"] == "yes");
        if (j["name"] == "fig8") CHECK(j["sqp"] == "undecided");
        count++;
    }
    CHECK(count == 2);
}

TEST_CASE("cli scan skips bad rows unless strict") {
    std::string csv = "/tmp/sqp_cli_scan_bad.csv";
    write_file(csv, std::string("name,pd\n") + "trefoil,\"" + kTrefoil +
                        "\"\n" + "broken,\"X(1,2)\"\n");
    auto lenient = run(cli() + " scan --in " + csv + " 2>/dev/null");
    CHECK(lenient.rc == 0);
    CHECK(json::parse(lenient.out)["name"] == "trefoil");
    auto strict =
        run(cli() + " scan --in " + csv + " --strict >/dev/null 2>/dev/null");
    CHECK(strict.rc == 1);
}

TEST_CASE("cli scan output is stable apart from timing") {
    std::string csv = "/tmp/sqp_cli_scan_det.csv";
    write_file(csv, std::string("name,pd\n") + "trefoil,\"" + kTrefoil +
                        "\"\n" + "fig8,\"" + kFigureEight + "\"\n");
    auto strip = [](const std::string& out) {
        std::istringstream lines(out);
        std::string line, acc;
        while (std::getline(lines, line)) {
            json j = json::parse(line);
            j.erase("elapsed-ms");
            acc += j.dump() + "\n";
        }
        return acc;
    };
    auto a = run(cli() + " scan --in " + csv + " --certify");
    auto b = run(cli() + " scan --in " + csv + " --certify --jobs 2");
    REQUIRE(a.rc == 0);
    REQUIRE(b.rc == 0);
    CHECK(strip(a.out) == strip(b.out));
}

TEST_CASE("cli writes to a file when asked") {
    std::string out = "/tmp/sqp_cli_out.json";
    std::remove(out.c_str());
    auto r = run(cli() + " check --pd '" + kTrefoil + "' --out " + out);
    REQUIRE(r.rc == 0);
    CHECK(r.out.empty());
    json j = json::parse(read_file(out));
    CHECK(j["canonical-qp"] == true);
}

TEST_CASE("cli gen output feeds back through the parser") {
    for (const char* cmd :
         {" gen torus 2 7", " gen pretzel 3 5 7",
          " gen random 9 --profile positive --seed 4"}) {
        auto r = run(cli() + cmd);
        REQUIRE(r.rc == 0);
        auto d = sqp::parse_pd(r.out);
        CHECK(d.n() >= 1);
        CHECK_NOTHROW(sqp::validate(d));
    }
}
