#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

int run(const std::string& args, const std::string& out = "/tmp/gadget_cli_out") {
    std::string cmd = "./gadget " + args + " >" + out + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_config(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    f << body;
}

const char* toric22 =
    R"({"variant":"toric","lattice":{"Lx":2,"Ly":2},"couplings":{"U":1.0,"t":0.375,"J":0.09}})";

} // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("verify --config /nonexistent.json --suite shield") == 2);
    CHECK(run("verify --config /tmp/gadget_t22.json --suite nosuchsuite") == 2);
    write_config("/tmp/gadget_bad.json", "{not json");
    CHECK(run("build --config /tmp/gadget_bad.json") == 2);
}

TEST_CASE("build is deterministic and carries a fingerprint") {
    write_config("/tmp/gadget_t22.json", toric22);
    CHECK(run("build --config /tmp/gadget_t22.json --out /tmp/gadget_m1.json") == 0);
    CHECK(run("build --config /tmp/gadget_t22.json --out /tmp/gadget_m2.json") == 0);
    auto j1 = nlohmann::json::parse(slurp("/tmp/gadget_m1.json"));
    auto j2 = nlohmann::json::parse(slurp("/tmp/gadget_m2.json"));
    CHECK(j1 == j2);
    CHECK(j1.at("version") == 1);
    CHECK(j1.contains("fingerprint"));
    CHECK(j1.at("stars").size() == 4);
}

TEST_CASE("verify suites on the default 2x2 toric model") {
    write_config("/tmp/gadget_t22.json", toric22);
    for (const char* suite : {"algebra", "shield", "invariance", "unitary",
                              "excitation"}) {
        INFO(suite);
        CHECK(run(std::string("verify --config /tmp/gadget_t22.json --suite ") +
                  suite + " --report /tmp/gadget_rep.json") == 0);
        auto j = nlohmann::json::parse(slurp("/tmp/gadget_rep.json"));
        CHECK(j.at("schema_version") == 1);
        CHECK(j.at("all_pass") == true);
    }
}

TEST_CASE("quantum double verify: abelian passes, S3 shield fails honestly") {
    write_config("/tmp/gadget_qd2.json",
                 R"({"variant":"qd","group":"Z2","lattice":{"Lx":2,"Ly":2}})");
    CHECK(run("verify --config /tmp/gadget_qd2.json --suite shield") == 0);
    CHECK(run("verify --config /tmp/gadget_qd2.json --suite unitary") == 0);
    write_config("/tmp/gadget_qds3.json",
                 R"({"variant":"qd","group":"S3","lattice":{"Lx":2,"Ly":2}})");
    CHECK(run("verify --config /tmp/gadget_qds3.json --suite algebra") == 0);
    CHECK(run("verify --config /tmp/gadget_qds3.json --suite shield",
              "/tmp/gadget_s3out") == 1);
    auto out = slurp("/tmp/gadget_s3out");
    CHECK(out.find("FAIL") != std::string::npos);
    CHECK(out.find("126") != std::string::npos);
}

TEST_CASE("spectrum exports Matrix Market and reports degeneracy") {
    write_config("/tmp/gadget_t22.json", toric22);
    CHECK(run("spectrum --config /tmp/gadget_t22.json --sector all --k 2 "
              "--export-mtx /tmp/gadget_h.mtx --report /tmp/gadget_sp.json") ==
          0);
    auto mtx = slurp("/tmp/gadget_h.mtx");
    CHECK(mtx.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
    auto j = nlohmann::json::parse(slurp("/tmp/gadget_sp.json"));
    CHECK(j.at("all_pass") == true);
    CHECK(run("spectrum --config /tmp/gadget_t22.json --sector 7") == 2);
}

TEST_CASE("certify: honest failure at the reference point, pass nearby") {
    CHECK(run("certify --params 1,0.375,0.09,0.25,0 "
              "--report /tmp/gadget_c1.json") == 1);
    auto j = nlohmann::json::parse(slurp("/tmp/gadget_c1.json"));
    CHECK(j.at("all_pass") == false);
    CHECK(run("certify --params 1,0.375,0.085,0.25,-0.05") == 0);
    CHECK(run("certify --params 1,0.375") == 2);
}

TEST_CASE("optimize writes a landscape CSV") {
    CHECK(run("optimize --grid \"0.085:0.085:0.005;0.375:0.375:0.025;"
              "-0.05:-0.05:0.05\" --landscape /tmp/gadget_l.csv") == 0);
    auto csv = slurp("/tmp/gadget_l.csv");
    CHECK(csv.rfind("J,t,beta_lr,beta_du,certified_gap", 0) == 0);
    CHECK(csv.find("0.085") != std::string::npos);
    CHECK(run("optimize --grid \"bad\"") == 2);
}

TEST_CASE("GADGET_BUDGET is honored") {
    write_config("/tmp/gadget_t22.json", toric22);
    int rc = std::system("GADGET_BUDGET=100 ./gadget verify "
                         "--config /tmp/gadget_t22.json --suite invariance "
                         ">/tmp/gadget_budget_out 2>&1");
    CHECK(WEXITSTATUS(rc) == 2);
    CHECK(slurp("/tmp/gadget_budget_out").find("budget") != std::string::npos);
}
