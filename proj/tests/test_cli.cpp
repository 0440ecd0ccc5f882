#include "rsobolev/cli.hpp"
#include "rsobolev/sobolev.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rsobolev;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rsobolev");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("xi curve CSV starts at zero") {
  const Run r = run({"xi", "--binary", "--q", "2", "--grid", "64", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "alpha,value,kind,q,p,n");
  CHECK(first.rfind("0,0,xi_q,", 0) == 0);
}

TEST_CASE("xi curve for q = 0.8 is increasing") {
  const Run r = run({"xi", "--binary", "--q", "0.8", "--grid", "16"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["metadata"]["seed"] == 0);
  const auto& pts = j["curves"][0]["points"];
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i][1].get<double>() >= pts[i - 1][1].get<double>());
}

TEST_CASE("generator file round trip") {
  const std::string path = "cli_test_generator.mat";
  {
    std::ofstream f(path);
    f << "# three-state chain\n-1.5 1.0 0.5\n1.0 -1.2 0.2\n0.5 0.2 -0.7\n";
  }
  const Run r = run({"xi", "--generator", path, "--q", "2", "--alpha", "0.2"});
  REQUIRE(r.code == kExitOk);
  Eigen::MatrixXd l(3, 3);
  l << -1.5, 1.0, 0.5, 1.0, -1.2, 0.2, 0.5, 0.2, -0.7;
  const double lib = xi_q(validate_semigroup(l), 2.0, 0.2);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["curves"][0]["points"][0][1].get<double>() == lib);
  std::remove(path.c_str());
}

TEST_CASE("graph subcommands") {
  const Run fk = run({"faber-krahn", "--graph", "hypercube", "1", "--n", "3", "--q", "2", "--m", "4"});
  REQUIRE(fk.code == kExitOk);
  const auto j = nlohmann::json::parse(fk.out);
  CHECK(j["value"].get<double>() == doctest::Approx(2.0));
  CHECK(j["witness"].size() == 4);

  const Run qr = run({"qradius", "--graph", "complete", "4", "--q", "2"});
  REQUIRE(qr.code == kExitOk);
  CHECK(nlohmann::json::parse(qr.out)["value"].get<double>() == doctest::Approx(3.0));

  const Run inf = run({"qradius", "--graph", "cycle", "5", "--q", "inf", "--format", "csv"});
  CHECK(inf.code == kExitOk);
  CHECK(inf.out.find("inf,2,5,2") != std::string::npos);
}

TEST_CASE("concentration subcommand") {
  const Run g = run({"concentration", "--family", "gaussian", "--p", "0", "--r", "1.5"});
  REQUIRE(g.code == kExitOk);
  CHECK(nlohmann::json::parse(g.out)["report"]["bound"].get<double>() == doctest::Approx(std::exp(-1.125)));
  const Run h = run({"concentration", "--family", "hypercube", "--n", "5", "10", "--r", "1", "2", "--format", "csv"});
  REQUIRE(h.code == kExitOk);
  CHECK(h.out.rfind("n,p,r,bound,baseline,q_star,quadrature_error\n", 0) == 0);
  CHECK(std::count(h.out.begin(), h.out.end(), '\n') == 5);
}

TEST_CASE("extremal subcommand") {
  const Run r = run({"extremal", "--binary", "--variant", "conditional-typical", "--first", "0.75,0.25", "--epsilon",
                     "0.5", "--n", "8", "--p", "0", "--q", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ent_rate"].get<double>() > 0.0);
}

TEST_CASE("exit codes") {
  CHECK(run({"verify"}).code == kExitOk);
  CHECK(run({"xi", "--binary", "--q", "banana"}).code == kExitValidation);
  CHECK(run({"xi", "--binary", "--q", "2", "--alpha", "0.9"}).code == kExitValidation);
  CHECK(run({"nonsense"}).code == kExitValidation);
  CHECK(run({"faber-krahn", "--graph", "hypercube", "1", "--n", "6", "--m", "3", "--q", "3"}).code == kExitValidation);
  CHECK(run({"xi", "--binary", "--generator", "x.mat"}).code == kExitValidation);
  CHECK(run({"xi", "--generator", "/nonexistent/file.mat"}).code == kExitValidation);
}

TEST_CASE("identical runs give identical bytes") {
  const std::vector<std::string> args{"xi", "--graph", "cycle", "3", "--q", "1.5", "--grid", "6", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  CHECK(nlohmann::json::parse(run(args).out)["metadata"]["seed"] == 7);
}

TEST_CASE("non-finite values are written as strings in JSON") {
  const Run r = run({"qradius", "--graph", "cycle", "4", "--q", "0"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["value"] == "inf");
}
