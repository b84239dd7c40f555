// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "pam/harness.hpp"
#include "pam/io.hpp"

using namespace pam;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pam");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pam_cli_" + name)).string();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sample", "--n", "0"}).code == 2);
  CHECK(run({"sample", "--n", "8", "--kappa", "-1"}).code == 2);
  CHECK(run({"sample", "--unknown-flag"}).code == 2);
  CHECK(run({"sample", "--config", temp_path("missing.json")}).code == 2);
  CHECK(run({"evolve", "--n", "6", "--times", "2,1"}).code == 2);
  CHECK(run({"evolve", "--n", "6", "--method", "euler"}).code == 2);
  CHECK(run({"fk", "--n", "6", "--samples", "5"}).code == 2);
  CHECK(run({"eig", "--n", "6", "--i", "3", "--l", "2"}).code == 2);
  CHECK(run({"sample", "--help"}).code == 0);
}

TEST_CASE("sample writes a field document") {
  const auto r = run({"sample", "--n", "6", "--seed", "9", "--kind", "coupled-exponential"});
  REQUIRE(r.code == 0);
  const auto f = field_from_json(Json::parse(r.out));
  CHECK(f.n() == 6);
  CHECK(f.seed() == 9);
  CHECK(f.sigma().has_value());
  CHECK(r.err.rfind("sample:", 0) == 0);
}

TEST_CASE("PAM_SEED sits between the config file and flags") {
  const auto cfg = temp_path("seed.json");
  write_text_file(cfg, R"({"n": 5, "seeds": [3]})");
  auto seed_of = [](const Run& r) { return field_from_json(Json::parse(r.out)).seed(); };
  ::unsetenv("PAM_SEED");
  CHECK(seed_of(run({"sample", "--config", cfg})) == 3);
  ::setenv("PAM_SEED", "11", 1);
  CHECK(seed_of(run({"sample", "--config", cfg})) == 11);
  CHECK(seed_of(run({"sample", "--config", cfg, "--seed", "4"})) == 4);
  ::setenv("PAM_SEED", "eleven", 1);
  CHECK(run({"sample", "--config", cfg}).code == 2);
  ::unsetenv("PAM_SEED");
  std::filesystem::remove(cfg);
}

TEST_CASE("eig round trip through a field file") {
  const auto field = temp_path("field.json");
  const auto out = temp_path("eig.json");
  REQUIRE(run({"sample", "--n", "7", "--seed", "2", "--output", field}).code == 0);
  const auto r = run({"eig", "--field", field, "--i", "1", "--l", "2", "--gap", "--vector", "--output", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("-> " + out) != std::string::npos);
  const auto res = spectral_from_json(read_json_file(out));
  CHECK(res.gap.has_value());
  CHECK(res.nu.size() == 128);
  const auto direct = principal_eig(1.0, field_from_json(read_json_file(field)), 1, 2);
  CHECK(res.lambda == direct.lambda);
  std::filesystem::remove(field);
  std::filesystem::remove(out);
}

TEST_CASE("evolve emits a growth CSV") {
  const auto r = run({"evolve", "--n", "6", "--seed", "1", "--times", "0.5,1,2", "--initial", "flat"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,alpha,rank,log_v,log_total_mass,u,mean_fitness");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  CHECK(rows == 15);
}

TEST_CASE("fk estimates") {
  for (const char* target : {"total_mass", "endpoint", "eigenfunction"}) {
    CAPTURE(target);
    const auto r = run({"fk", "--n", "5", "--seed", "3", "--target", target, "--samples", "10000",
                        "--x-rank", "2", "--y-rank", "1", "--l", "1"});
    REQUIRE(r.code == 0);
    const auto e = estimate_from_json(Json::parse(r.out));
    CHECK(e.n_samples == 10000);
    CHECK(e.mean >= 0.0);
  }
}

TEST_CASE("sweeps and lemma checks") {
  const auto g = run({"sweep-growth", "--n", "6", "--seeds", "1,2", "--ranks", "2",
                      "--alpha_grid", "0.5,1,2", "--kind", "coupled-rem", "--no-timestamp"});
  CHECK(g.code == 0);
  CHECK(g.out.rfind("# hypercube-pam sweep-growth schema v1\n# finite-n", 0) == 0);
  CHECK(g.out.find("\nseed,n,k,") != std::string::npos);
  const auto l = run({"sweep-localization", "--n", "6", "--seeds", "1", "--alpha_grid", "1,2",
                      "--no-timestamp"});
  CHECK(l.code == 0);
  // Tied fields produce error rows and a nonzero exit.
  const auto bad = run({"sweep-growth", "--n", "6", "--seeds", "1", "--kind", "constant"});
  CHECK(bad.code == 1);
  const auto c = run({"check-lemmas", "--n", "6", "--seeds", "1,2,3,4,5", "--lemma_n", "6",
                      "--small_n", "5", "--lemma_times", "1", "--geometry_n", "8",
                      "--geometry_seeds", "5", "--kind", "constant"});
  CHECK(c.code == 0);
  CHECK(Json::parse(c.out).at("passed").get<bool>());
}
