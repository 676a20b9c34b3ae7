#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int code;
    std::string out;
};

Run ssp(const std::string& args) {
    const std::string cmd = std::string(SSP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* f = ::popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
    const int st = ::pclose(f);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const std::string& stem) { return "/tmp/ssp_cli_" + stem + "_" + std::to_string(::getpid()); }

}  // namespace

TEST_CASE("genus-2 report") {
    Run r = ssp("census --family genus2 -p 11 --format json --quiet");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["classes"].size() == 2);
    CHECK(j["referee"]["formula"] == 2);
    CHECK(j["field_degree"] == 2);
}

TEST_CASE("Howe table entry") {
    Run r = ssp("census --family howe-b -p 23 --quiet");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["count"] == 33);
}

TEST_CASE("empty genus-4 hyperelliptic census") {
    Run r = ssp("census --family hyper4 -p 11 --quiet --jobs 2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 0);
    CHECK(j["classes"].empty());
    CHECK(j["bookkeeping"]["balanced"] == true);
    CHECK(j["bookkeeping"]["box"] == 1286153286ull);
}

TEST_CASE("formula suite") {
    Run r = ssp("verify --suite formulas --pmax 199");
    CHECK(r.code == 0);
    CHECK(r.out.find("p=199 h=17") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(ssp("census --family nonsense -p 11").code == 1);
    CHECK(ssp("census --family genus2").code == 1);
    CHECK(ssp("census --family genus2 -p 59").code == 1);
    CHECK(ssp("census --family genus2 -p 15").code == 1);
    CHECK(ssp("census --family howe-b -p 11 --format xml").code == 1);
    CHECK(ssp("census --family howe-b -p 11 --jobs 0").code == 1);
    CHECK(ssp("").code == 1);
    CHECK(ssp("census --family genus2 -p 11 --output /nonexistent-dir/r.json --quiet").code == 1);
}

TEST_CASE("stretch lifts the contract range") {
    Run r = ssp("census --family genus2 -p 59 --stretch --quiet");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["count"] == 104);
}

TEST_CASE("reports do not depend on jobs, chunking or checkpoints") {
    const std::string a = tmp("a.json"), b = tmp("b.json"), c = tmp("c.json"), ck = tmp("ck.txt");
    std::remove(ck.c_str());
    REQUIRE(ssp("census --family howe-a -p 13 --quiet --jobs 1 --output " + a).code == 0);
    REQUIRE(ssp("census --family howe-a -p 13 --quiet --jobs 3 --output " + b).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());

    REQUIRE(ssp("census --family howe-a -p 13 --quiet --checkpoint " + ck + " --output " + c).code == 0);
    CHECK(slurp(c) == slurp(a));
    // cut the checkpoint to a prefix with a torn final line and resume
    std::string text = slurp(ck);
    size_t cut = 0;
    for (int i = 0; i < 200; ++i) cut = text.find('\n', cut) + 1;
    {
        std::ofstream out(ck, std::ios::trunc | std::ios::binary);
        out << text.substr(0, cut + 7);
    }
    REQUIRE(ssp("census --family howe-a -p 13 --quiet --checkpoint " + ck + " --output " + c).code == 0);
    CHECK(slurp(c) == slurp(a));
    CHECK(slurp(ck).size() == text.size());
    // the other family's checkpoint is refused
    CHECK(ssp("census --family howe-a -p 11 --quiet --checkpoint " + ck).code == 1);
    for (const auto& f : {a, b, c, ck}) std::remove(f.c_str());
}

TEST_CASE("csv output") {
    Run r = ssp("census --family elliptic -p 11 --format csv --rng-seed 5 --quiet");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "family,p,field_degree,count,class_id,model,invariants,raw_hits,referee,runtime_ms,seed");
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        CHECK(row.rfind("elliptic,11,2,2,", 0) == 0);
        CHECK(row.substr(row.size() - 2) == ",5");
    }
    CHECK(rows == 2);
}

TEST_CASE("verification families") {
    Run t = ssp("census --family trigonal5 -p 11 --quiet");
    REQUIRE(t.code == 0);
    auto j = nlohmann::json::parse(t.out);
    CHECK(j["ok"] == true);
    CHECK(j["families"][0]["members"] == 100);
    CHECK(j["families"][1]["members"] == 120);
    CHECK(ssp("census --family trigonal5 -p 7 --quiet").code == 1);
}
