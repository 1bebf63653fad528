#include "cli.hpp"

#include "cotype/zeta_engine.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cotype::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("cotype_cli_test_" + name)).string();
}

long sigma(long n) {
    long s = 0;
    for (long a = 1; a <= n; ++a)
        if (n % a == 0) s += a;
    return s;
}

}  // namespace

TEST_CASE("zeta subcommand") {
    auto r = run({"zeta", "-d", "2", "print-local", "--format", "text"});
    CHECK(r.code == 0);
    CHECK(r.out == "(1 + q·t1) / ((1−t1)(1−t2))\n");
    CHECK(run({"zeta", "-d", "1", "print-local", "--format", "text"}).out == "1 / (1−t1)\n");
    r = run({"zeta", "-d", "2", "coeff", "-p", "3", "--nu", "1,0"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["coefficient"] == "4");
    CHECK(run({"zeta", "-d", "2", "coeff", "-p", "3", "--nu", "1,0", "--format", "text"}).out == "4\n");
    CHECK(run({"zeta", "-d", "2", "coeff", "-p", "3", "--nu", "0,1"}).code == cotype::cli::kUsage);
    CHECK(run({"zeta", "-d", "13", "print-local"}).code == cotype::cli::kResourceLimit);
}

TEST_CASE("tally subcommand") {
    auto r = run({"tally", "-d", "1", "-X", "10"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["N"] == 9);

    long expected = 0;
    for (long n = 1; n < 100; ++n) expected += sigma(n);
    r = run({"tally", "-d", "2", "-X", "100"});
    const auto j = json::parse(r.out);
    CHECK(j["N"] == expected);
    CHECK(j["N_corank_at_most"]["2"] == expected);
    CHECK(j["convention"] == "index < X");

    r = run({"tally", "-d", "3", "-X", "20", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream rows(r.out);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "cotype,index,corank,count");
    long total = 0;
    while (std::getline(rows, line)) total += std::stol(line.substr(line.rfind(',') + 1));
    mpz_class dirichlet = 0;
    for (std::uint64_t n = 1; n < 20; ++n) dirichlet += cotype::dirichlet_coefficient(3, n);
    CHECK(dirichlet == total);

    const auto path = temp_path("tally.csv");
    r = run({"tally", "-d", "2", "-X", "50", "--format", "csv", "--out", path});
    CHECK(json::parse(r.out)["export"] == path);
    std::ifstream f(path);
    std::getline(f, line);
    CHECK(line == "cotype,index,corank,count");
    std::filesystem::remove(path);

    CHECK(run({"tally", "--help"}).out.find("index < X") != std::string::npos);
    CHECK(run({"tally", "-d", "3", "-X", "1000", "--max-matrices", "10"}).code == cotype::cli::kResourceLimit);
    CHECK(run({"tally", "-X", "10"}).code == cotype::cli::kUsage);
    CHECK(run({"frobnicate"}).code == cotype::cli::kUsage);
}

TEST_CASE("density subcommand") {
    auto r = run({"density", "-d", "2", "-m", "2", "--cutoff", "1000"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["corank_density"]["value"] == 1.0);
    CHECK(j["corank_density"]["exact_rational"] == "1");
    CHECK(j["local_factors"][0]["Z_d(p,m)"] == "1");
    r = run({"density", "-d", "3", "-m", "1", "--cutoff", "1000"});
    CHECK(json::parse(r.out).contains("theta_d"));
    CHECK(run({"density", "-d", "3", "-m", "4"}).code == cotype::cli::kUsage);
}

TEST_CASE("verify subcommand") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"verify", "qident", "--n", "8", "--e", "4"},
             {"verify", "descent", "--d", "6"},
             {"verify", "oracle", "--d", "3", "--p", "2", "--emax", "4"},
             {"verify", "autorder", "--p", "3", "--max-exp", "3"},
             {"verify", "zidentity", "--d", "4"}}) {
        const auto r = run(args);
        CHECK_MESSAGE(r.code == 0, args[1]);
        CHECK(json::parse(r.out)["verdict"] == "pass");
    }
    const auto bad = run({"verify", "--inject-failure", "zidentity", "--d", "2"});
    CHECK(bad.code == cotype::cli::kVerificationFailure);
    CHECK(bad.err.find("counterexample") != std::string::npos);
    const auto j = json::parse(bad.out);
    CHECK(j["verdict"] == "fail");
    CHECK(j.contains("counterexample"));
    CHECK(run({"verify", "descent", "--d", "10"}).code == cotype::cli::kResourceLimit);
}

TEST_CASE("simulate subcommand") {
    auto r = run({"simulate", "matrix", "-d", "1", "-k", "1", "--exhaustive", "--stat", "type"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["empirical"]["trials"] == 3);
    bool found = false;
    for (const auto& row : j["empirical"]["counts"])
        if (row["label"] == "()") {
            CHECK(row["count"] == 2);
            found = true;
        }
    CHECK(found);

    const std::vector<std::string> args{"simulate", "sublattice", "-d", "2", "-X", "200", "-p", "2",
                                        "-n", "4000", "--seed", "7"};
    auto a = args, b = args;
    a.insert(a.end(), {"--workers", "1"});
    b.insert(b.end(), {"--workers", "3"});
    const auto ra = run(a), rb = run(b);
    CHECK(ra.code == 0);
    CHECK(ra.out == rb.out);
    CHECK(run({"simulate", "matrix", "-d", "2", "-k", "0"}).code == cotype::cli::kUsage);
}

TEST_CASE("manifest and replay") {
    const auto manifest = temp_path("manifest.json");
    const auto first = run({"--manifest", manifest, "simulate", "matrix", "-d", "2", "-k", "100", "-n", "3000", "--seed", "5"});
    CHECK(first.code == 0);
    CHECK(first.err.empty());
    json m;
    {
        std::ifstream f(manifest);
        m = json::parse(f);
    }
    CHECK(m["seed"] == 5);
    CHECK(m["subcommand"] == "simulate matrix");
    CHECK(m["parameters"]["simulate"]["matrix"]["k"] == "100");
    CHECK(m.contains("wall_time_seconds"));
    const std::string sha = m["output_sha256"];

    const auto again = run({"replay", manifest});
    CHECK(again.code == 0);
    CHECK(again.out == first.out);
    std::ifstream f(manifest);
    CHECK(json::parse(f)["output_sha256"] == sha);
    std::filesystem::remove(manifest);

    // Without --manifest the manifest goes to stderr as one JSON line.
    const auto r = run({"zeta", "-d", "3", "print-local"});
    CHECK(json::parse(r.err)["exit_code"] == 0);
}
