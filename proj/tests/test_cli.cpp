#include "doctest.h"
#include "wavesel/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace wavesel;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "wavesel");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("parse_wavelengths") {
    const auto a = cli::parse_wavelengths("2,3,5");
    CHECK(a.lcm() == Rational(30));
    CHECK(cli::parse_wavelengths("5").lcm() == Rational(5));
    const auto d = cli::parse_wavelengths(
        "1528,3868970284693/2500000000,156953786407767/100000000000,17572/11");
    CHECK(d.size() == 4);
    for (const auto& l : d.lambdas()) CHECK((d.lcm() / l).is_integer());
    CHECK(cli::parse_wavelengths(" 2.5 , 1/3").lambdas()[0] == Rational(5, 2));
    CHECK_THROWS(cli::parse_wavelengths("2,,3"));
    CHECK_THROWS(cli::parse_wavelengths("2,abc"));
    CHECK_THROWS(cli::parse_wavelengths("2,-3"));
    CHECK_THROWS(cli::parse_wavelengths("0"));
}

TEST_CASE("parse_range") {
    CHECK(cli::parse_range("6pi") == 6.0 * std::numbers::pi);
    CHECK(cli::parse_range("6*pi") == 6.0 * std::numbers::pi);
    CHECK(cli::parse_range("pi") == std::numbers::pi);
    CHECK(cli::parse_range("7.5") == 7.5);
    CHECK_THROWS(cli::parse_range("six"));
}

TEST_CASE("optimize prints the selected set") {
    const auto r = invoke({"optimize", "--n", "3", "--lambda-min", "2", "--lambda-max", "5", "--rmax", "30"});
    CHECK(r.code == 0);
    CHECK(r.out.find("wavelengths: 5, 15/4, 30/13") != std::string::npos);
    CHECK(r.out.find("objective: 540.00") != std::string::npos);
    CHECK(r.out.find("gamma: 81") != std::string::npos);
    CHECK(r.out.find("complete: true") != std::string::npos);
}

TEST_CASE("optimize json keeps rationals as strings") {
    const auto r = invoke({"--format", "json", "optimize", "--n", "3", "--lambda-min", "2", "--lambda-max", "5",
                           "--rmax", "30"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["wavelengths"] == nlohmann::json({"5", "15/4", "30/13"}));
    CHECK(j["p"] == nlohmann::json({3, 6}));
    CHECK(j["q"] == nlohmann::json({4, 13}));
    CHECK(j["objective"].get<double>() == doctest::Approx(540.0037));
    CHECK(j["gamma"].get<double>() == 81.0);
    CHECK(j["complete"].get<bool>());
    CHECK(j["nodes_visited"].get<std::uint64_t>() > 0);
}

TEST_CASE("optimize reports infeasible and time-limited runs with exit code 2") {
    const auto none = invoke({"optimize", "--n", "2", "--lambda-min", "4", "--lambda-max", "5", "--rmax", "100",
                              "--kappa", "3"});
    CHECK(none.code == cli::no_solution);
    CHECK(none.out.find("no feasible solution") != std::string::npos);

    const auto limited = invoke({"optimize", "--n", "5", "--lambda-min", "2", "--lambda-max", "11", "--rmax", "2310",
                                 "--time-limit-s", "0.1"});
    CHECK(limited.code == cli::no_solution);
    CHECK(limited.out.find("complete: false") != std::string::npos);
    CHECK(limited.out.find("wavelengths: 11,") != std::string::npos);
}

TEST_CASE("estimate recovers a noise-free range") {
    const auto r = invoke({"--format", "json", "estimate", "--wavelengths", "2,3,5", "--phases",
                           "-0.5,0.33333333333333326,0.39999999999999991"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["r_hat"].get<double>() == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(j["period"] == "30");
    CHECK(invoke({"estimate", "--wavelengths", "2,3,5", "--phases", "0.1,0.2"}).code == cli::usage_error);
}

TEST_CASE("simulate writes a stable csv") {
    const std::vector<std::string> args{"simulate", "--wavelengths", "30/13,15/4,5", "--r0",      "6pi",
                                        "--sigma2", "1e-5:1e-2:log,4", "--trials", "500", "--seed", "7"};
    const auto r = invoke(args);
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "sigma_sq,sample_mse,predicted_mse,correct_rate,p_upper,trials");
    // every field reads back to the value printed
    for (std::size_t i = 1; i < ls.size(); ++i) {
        std::istringstream row(ls[i]);
        std::string cell;
        int cells = 0;
        while (std::getline(row, cell, ',')) {
            const double x = std::strtod(cell.c_str(), nullptr);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            CHECK(cell == (cells == 5 ? std::string("500") : std::string(buf)));
            ++cells;
        }
        CHECK(cells == 6);
    }
    CHECK(invoke(args).out == r.out);

    const auto dir = std::filesystem::temp_directory_path();
    const auto f1 = dir / "wavesel_cli_test_1.csv";
    const auto f2 = dir / "wavesel_cli_test_2.csv";
    auto with_file = args;
    with_file.insert(with_file.end(), {"--out", f1.string()});
    REQUIRE(invoke(with_file).code == 0);
    ::setenv("WAVESEL_THREADS", "4", 1);
    with_file.back() = f2.string();
    with_file.push_back("--parallel");
    REQUIRE(invoke(with_file).code == 0);
    ::unsetenv("WAVESEL_THREADS");
    CHECK(slurp(f1) == r.out);
    CHECK(slurp(f2) == r.out);
    std::filesystem::remove(f1);
    std::filesystem::remove(f2);
}

TEST_CASE("bounds") {
    const auto r = invoke({"bounds", "--wavelengths", "2,3,5", "--sigma2", "1e-4,1e-3"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "sigma_sq,predicted_mse,p_upper,p_lower");
    CHECK(std::strtod(ls[1].c_str() + ls[1].find(',') + 1, nullptr) == doctest::Approx(900.0 / 361.0 * 1e-4));
    const auto printed = invoke({"bounds", "--wavelengths", "2,3,5", "--sigma2", "1e-3", "--inradius-form", "printed"});
    CHECK(printed.code == 0);
    CHECK(lines(printed.out)[1] != ls[2]);
    CHECK(invoke({"bounds", "--wavelengths", "2,3,5", "--sigma2", "1e-3", "--inradius-form", "cubed"}).code ==
          cli::usage_error);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == cli::usage_error);
    CHECK(invoke({"frobnicate"}).code == cli::usage_error);
    CHECK(invoke({"optimize", "--n", "3"}).code == cli::usage_error);
    CHECK(invoke({"optimize", "--n", "3", "--lambda-min", "5", "--lambda-max", "2", "--rmax", "30"}).code ==
          cli::usage_error);
    CHECK(invoke({"bounds", "--wavelengths", "2,3", "--sigma2", "1e-3", "--bogus", "1"}).code == cli::usage_error);
    CHECK(invoke({"--format", "xml", "bounds", "--wavelengths", "2", "--sigma2", "1"}).code == cli::usage_error);
    const auto bad = invoke({"bounds", "--wavelengths", "2,x", "--sigma2", "1e-4"});
    CHECK(bad.code == cli::usage_error);
    CHECK(bad.err.find("malformed") != std::string::npos);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("selftest") {
    const auto r = invoke({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(lines(r.out).size() == 6);
}
