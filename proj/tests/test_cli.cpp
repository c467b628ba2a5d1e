#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include <doctest.h>

#include "support.hpp"

using testing::kPi;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout only; stderr goes to the test log
Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(SIGMA_CLI_PATH) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("sigma_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors") {
    const auto h = run("--help");
    CHECK(h.code == 0);
    CHECK(h.out.find("eval") != std::string::npos);
    CHECK(h.out.find("catalog") != std::string::npos);

    CHECK(run("2>/dev/null").code == 1);
    CHECK(run("frobnicate 2>/dev/null").code == 1);
    CHECK(run("eval --no-such-flag 2>/dev/null").code == 1);
    CHECK(run("eval --n 2 2>/dev/null").code == 1);
    CHECK(run("eval --preset helix 2>/dev/null").code == 1);
    CHECK(run("eval --x 1,0 2>/dev/null").code == 1);
    CHECK(run("phase --n 3 --C 3 2>/dev/null").code == 1);
    CHECK(run("mesh --preset standard_circle 2>/dev/null").code == 1);
}

TEST_CASE("eval on the standard circle") {
    const auto r = run("eval --preset standard_circle --n 3 --s 0 --x 1,0,0");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["beta"].get<double>() == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(j["a"].get<double>() == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(j["l_re"][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["variant"] == "geometric");
    CHECK(j["a_j"].size() == 2);

    const auto alt = run("eval --preset standard_circle --s 0 --variant alternate");
    REQUIRE(alt.code == 0);
    CHECK(nlohmann::json::parse(alt.out)["variant"] == "alternate");
    CHECK(run("eval --variant other 2>/dev/null").code == 1);
}

TEST_CASE("exit codes for bad points") {
    // outside the domain is bad input, r = 0 is a singularity
    CHECK(run("eval --preset catenoid3 --s 100 2>/dev/null").code == 1);
    CHECK(run("eval --preset line --s 0 2>/dev/null").code == 2);
}

TEST_CASE("verify writes a passing report") {
    const auto r = run("verify --preset catenoid3 --param C_geo=1 --samples 8");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() >= 5);
    CHECK(run("verify --preset catenoid3 --param C_geo 2>/dev/null").code == 1);
}

TEST_CASE("hs solve writes a trajectory table") {
    const auto r = run("hs solve --n 3 --C 3 --alpha 1.5707963267948966 --r 1.3 --s-end 2");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("s,alpha,r,E,k\n", 0) == 0);
    // a negative flux is reversed rather than rejected
    CHECK(run("hs solve --n 3 --C -3 --r 1.3 --s-end 1 2>/dev/null").code == 0);
    const auto neg = run("phase --n 3 --C -3 --E 3 2>/dev/null");
    const auto pos = run("phase --n 3 --C 3 --E -3");
    REQUIRE(neg.code == 0);
    CHECK(neg.out == pos.out);
}

TEST_CASE("phase table on the command line") {
    const auto r = run("phase --n 3 --C 3 --E -3 --E -1");
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string header, row1, row2;
    std::getline(is, header);
    std::getline(is, row1);
    std::getline(is, row2);
    CHECK(header == "E,class,phi_total,phi_plus,phi_minus,divergent_flag,self_intersections");
    CHECK(row1.rfind("-3,", 0) == 0);
    CHECK(row2.find(",inf,") != std::string::npos);
    const auto t = run("phase --n 3 --C 3 --table -0.9:-0.1:3 --bounded");
    CHECK(t.code == 0);
    CHECK(std::count(t.out.begin(), t.out.end(), '\n') == 4);
    CHECK(run("phase --table 1:2 2>/dev/null").code == 1);
}

TEST_CASE("catalog rows") {
    const auto r = run("catalog --n 3 --C 3");
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
    for (const char* fam :
         {"StandardEmbedding", "BoundedSpiraloid", "UnboundedSpiraloid", "CatenoidType", "ClosedNonStandard"})
        CHECK(r.out.find(fam) != std::string::npos);
}

TEST_CASE("mesh and portrait files") {
    const auto ply = temp_path("mesh.ply");
    CHECK(run("mesh --preset standard_circle --s-steps 2 --sphere-steps 4 --out " + ply.string()).code == 0);
    CHECK(slurp(ply).find("element vertex 28\n") != std::string::npos);
    std::filesystem::remove(ply);

    const auto csv = temp_path("slice.csv");
    CHECK(run("mesh --preset standard_circle --n 4 --s-steps 2 --sphere-steps 4 --out " + csv.string() +
              " 2>/dev/null")
              .code == 1);
    CHECK(run("mesh --preset standard_circle --n 4 --slice --format csv --s-steps 2 --sphere-steps 4 --out " +
              csv.string())
              .code == 0);
    CHECK(slurp(csv).rfind("x1,x2,x3,x4,x5,x6,x7,x8,s,beta\n", 0) == 0);
    std::filesystem::remove(csv);

    const auto p = run("portrait --n 3 --C 3 --E -2");
    CHECK(p.code == 0);
    CHECK(p.out.rfind("kind,E,polyline,alpha,r\n", 0) == 0);
}

TEST_CASE("config file supplies options") {
    const auto cfg = temp_path("run.ini");
    {
        std::ofstream os(cfg);
        os << "seed=7\n[verify]\npreset=catenoid3\nsamples=6\n";
    }
    const auto a = run("--config " + cfg.string() + " verify");
    const auto b = run("--seed 7 verify --preset catenoid3 --samples 6");
    std::filesystem::remove(cfg);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out)["spec"] == "catenoid3");
}

TEST_CASE("output is byte-identical across runs") {
    for (const char* args : {"verify --preset epicycloid --seed 3 --samples 6", "catalog --n 3 --C 3",
                             "phase --n 4 --C 2 --table -3:1:5"}) {
        CAPTURE(args);
        const auto a = run(args), b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
    // different seeds sample different points
    CHECK(run("verify --preset epicycloid --seed 3 --samples 6").out !=
          run("verify --preset epicycloid --seed 4 --samples 6").out);
}
