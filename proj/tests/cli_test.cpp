#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int exit = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" SCHREIER_CLI "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  Run r;
  std::array<char, 4096> buf{};
  while (std::size_t k = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), k);
  int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("schreier_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("worked examples") {
  Run cb = run(R"(family cb --spec '{"type":"adm","n":4}')");
  CHECK(cb.exit == 0);
  CHECK(cb.out == "5\n");

  Run m = run("ravg measure --xi 1 --set arith:3:2 --n 1");
  CHECK(m.exit == 0);
  auto j = nlohmann::json::parse(m.out);
  CHECK(j == nlohmann::json::parse(R"({"weights":[[3,"1/3"],[5,"1/3"],[7,"1/3"]]})"));

  Run z = run(R"(norm eval --engine '{"kind":"ell1"}' --vector '{"coords":[]}')");
  CHECK(z.exit == 0);
  CHECK(z.out.rfind("0\n", 0) == 0);
}

TEST_CASE("artifact shape and determinism") {
  const std::string args = R"(--format json norm eval --engine '{"kind":"schreier","gamma":"1"}' --vector '{"coords":[[1,"1"],[2,"-1"],[3,"1"]]}')";
  Run a = run(args), b = run(args);
  CHECK(a.exit == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["command"] == "norm eval");
  CHECK(j["version"] == "0.1.0");
  CHECK(j["config"]["engine"]["kind"] == "schreier");
  CHECK(j["result"]["value"] == "2");
  CHECK(j["result"]["exact"] == true);

  auto path = scratch("artifact.json");
  Run o = run("--out '" + path.string() + "' " + args.substr(std::string("--format json ").size()));
  CHECK(o.exit == 0);
  CHECK(o.out.rfind("2\n", 0) == 0);
  CHECK(nlohmann::json::parse(slurp(path)) == j);

  Run zn = run(R"(--format json norm eval --engine '{"kind":"z","xi":"1","base":{"kind":"sup"}}' --vector '{"coords":[[4,"1"]]}')");
  auto zj = nlohmann::json::parse(zn.out);
  CHECK(zj["result"]["exact"] == false);
  CHECK(std::abs(std::stold(zj["result"]["value"].get<std::string>()) - 1) < 1e-12L);
  CHECK(zj["result"].contains("error_bound"));
}

TEST_CASE("csv tables") {
  Run c = run("ravg measure --xi 2 --set naturals --n 2 --format csv");
  CHECK(c.exit == 0);
  CHECK(c.out.rfind("# ravg measure", 0) == 0);
  CHECK(c.out.find("index,weight\n2,1/4\n3,1/4\n4,1/8\n") != std::string::npos);

  Run s = run(R"(certify --mode spreading --engine '{"kind":"sup"}' --vectors basis:8 --xi 1 --eps 1/4 --n 5 --format csv)");
  CHECK(s.exit == 0);
  CHECK(s.out.find("set,signs,margin\n{1},+,3/4\n") != std::string::npos);
}

TEST_CASE("certify modes") {
  Run x1 = run(R"(certify spreading --engine '{"kind":"schreier","gamma":"1"}' --vectors basis:12 --xi 1 --eps 1 --n 12)");
  CHECK(x1.exit == 0);
  CHECK(x1.out.rfind("pass", 0) == 0);

  Run sup = run(R"(certify spreading --engine '{"kind":"sup"}' --vectors basis:12 --xi 1 --eps 1 --n 12)");
  CHECK(sup.exit == 2);
  CHECK(sup.out.find("first failing set") != std::string::npos);

  Run nul = run(R"(certify ravg --engine '{"kind":"sup"}' --vectors basis:40 --xi 1 --set arith:2:1)");
  CHECK(nul.exit == 0);
  Run nul1 = run(R"(certify ravg --engine '{"kind":"schreier","gamma":"1"}' --vectors basis:40 --xi 1 --set arith:2:1)");
  CHECK(nul1.exit == 2);

  Run d = run(R"(--format json certify dichotomy --engine '{"kind":"sup"}' --vectors basis:40 --xi 1 --eps 1/2)");
  CHECK(d.exit == 0);
  CHECK(nlohmann::json::parse(d.out)["result"]["outcome"] == "certificate_ii");
}

TEST_CASE("exit codes") {
  CHECK(run(R"(family check --spec '{"type":"schreier","xi":"2"}' --n 6)").exit == 0);
  CHECK(run(R"(family check --spec '{"type":"explicit","sets":[[1,2]]}' --n 3)").exit == 2);
  CHECK(run("ravg fastgrow --xi 1 --eps 1").exit == 0);
  CHECK(run(R"(family enum --spec '{' --n 3)").exit == 1);
  CHECK(run(R"(norm eval --engine '{"kind":"bogus"}' --vector '{}')").exit == 1);
  CHECK(run("ravg measure --xi 'w^' --set naturals --n 1").exit == 1);
  CHECK(run("bogus").exit == 1);
  CHECK(run("--help").exit == 0);
  CHECK(run(R"(family enum --spec '{"type":"adm","n":2}' --n 40)").exit == 3);
  CHECK(run(R"(certify spreading --engine '{"kind":"sup"}' --vectors basis:40 --xi 1 --eps 1 --n 30)").exit == 3);
}

TEST_CASE("cache directory") {
  auto dir = scratch("cache");
  std::filesystem::remove_all(dir);
  const std::string env = "SCHREIER_CACHE_DIR='" + dir.string() + "'";
  const std::string args = "--format json ravg measure --xi 2 --set naturals --n 3";
  Run a = run(args, env);
  CHECK(a.exit == 0);
  CHECK(std::distance(std::filesystem::directory_iterator(dir), {}) == 1);
  Run b = run(args, env);
  CHECK(b.out == a.out);
  CHECK(b.out == run(args).out);
  std::filesystem::remove_all(dir.parent_path());
}
