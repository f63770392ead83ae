#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = twonorm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("twonorm_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("norm2 gunawan anchor") {
  auto r = run({"norm2", "--norm", "gunawan", "--p", "2", "--f1", "const:1", "--f2", "poly:0,1",
                "--grid", "256", "--rule", "midpoint"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.2886751345948129) < 1e-5);
}

TEST_CASE("norm2 volume of a dependent pair") {
  auto r = run({"norm2", "--norm", "volume", "--p", "2", "--f1", "const:1", "--f2", "const:2"});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == 0.0);
}

TEST_CASE("norm2 gahler writes json") {
  const auto path = temp("n2.json");
  auto r = run({"norm2", "--norm", "gahler", "--p", "1.5", "--f1", "fourier:1,3", "--f2", "fourier:2,3",
                "--json", path});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("is_lower_bound") == true);
  CHECK(j.at("value").get<double>() == doctest::Approx(std::stod(r.out)).epsilon(1e-11));
  std::filesystem::remove(path);
}

TEST_CASE("usage errors exit 1") {
  auto r = run({"norm2", "--norm", "gunawan", "--p", "2", "--f1", "const:1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--f2") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"norm2", "--norm", "l7", "--p", "2", "--f1", "const:1", "--f2", "const:1"}).code == 1);
}

TEST_CASE("input errors exit 2") {
  CHECK(run({"norm2", "--norm", "gunawan", "--p", "2", "--f1", "cosh:1", "--f2", "const:1"}).code == 2);
  CHECK(run({"norm2", "--norm", "gunawan", "--p", "0.5", "--f1", "const:1", "--f2", "const:1"}).code == 2);
  CHECK(run({"norm2", "--norm", "gunawan", "--p", "2", "--f1", "csv:/nonexistent/x.csv", "--f2", "const:1"})
            .code == 2);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
}

TEST_CASE("fnorm values") {
  auto r = run({"fnorm", "--kind", "21", "--p", "2", "--kernel", "wedge:const:1|poly:0,1", "--grid", "64"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.2886751345948129) < 1e-4);

  const auto csv = temp("theta.csv");
  CHECK(run({"gen", "--what", "kernel", "--spec", "randsmooth:5,3", "--grid", "16", "--out", csv}).code == 0);
  auto y = run({"fnorm", "--kind", "y", "--p", "1", "--kernel", "csv:" + csv, "--grid", "16"});
  CHECK(y.code == 0);
  double max_abs = 0.0;
  std::ifstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) max_abs = std::max(max_abs, std::abs(std::stod(cell)));
  }
  CHECK(std::stod(y.out) == doctest::Approx(max_abs).epsilon(1e-11));
  std::filesystem::remove(csv);
}

TEST_CASE("g22 rejects a kernel with a symmetric part") {
  auto r = run({"fnorm", "--kind", "g22", "--kernel", "randsmooth:3,4"});
  CHECK(r.code == 2);
  CHECK(r.err.find("antisymmetric") != std::string::npos);
}

TEST_CASE("gen function and kernel files") {
  const auto f = temp("one.csv");
  CHECK(run({"gen", "--what", "function", "--spec", "const:1", "--grid", "4", "--out", f}).code == 0);
  CHECK(slurp(f) == "1.0\n1.0\n1.0\n1.0\n");

  const auto k1 = temp("k1.csv"), k2 = temp("k2.csv");
  const std::vector<std::string> base{"gen", "--what", "kernel", "--spec", "wedge:fourier:3,2|poly:0,1", "--grid", "8",
                                      "--out"};
  auto a1 = base, a2 = base;
  a1.push_back(k1);
  a2.push_back(k2);
  CHECK(run(a1).code == 0);
  CHECK(run(a2).code == 0);
  CHECK(slurp(k1) == slurp(k2));
  std::vector<std::vector<double>> m;
  std::ifstream in(k1);
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    m.emplace_back();
    while (std::getline(ss, cell, ',')) m.back().push_back(std::stod(cell));
  }
  REQUIRE(m.size() == 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(m[i][j] == -m[j][i]);
  for (const auto& p : {f, k1, k2}) std::filesystem::remove(p);
}

TEST_CASE("verify roundtrip suite") {
  const auto path = temp("r.json");
  auto r = run({"verify", "--suite", "roundtrip", "--p-list", "2", "--trials", "10", "--seed", "42", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("suite=roundtrip pass=10 fail=0") == 0);
  auto j = nlohmann::json::parse(slurp(path));
  CHECK(j.at("trials").size() == 10);
  CHECK(j.at("seed") == 42);
  std::filesystem::remove(path);
}

TEST_CASE("verify reports failure with exit 3") {
  // a negative tolerance cannot be met by an exact identity
  auto r = run({"verify", "--suite", "roundtrip", "--p-list", "2", "--trials", "2", "--grid", "8",
                "--tolerance", "kernel_recovered=-1"});
  CHECK(r.code == 3);
}
