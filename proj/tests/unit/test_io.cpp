// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "pam/errors.hpp"
#include "pam/io.hpp"

using namespace pam;

TEST_CASE("hex floats") {
  CHECK(to_hex_float(3.0) == "0x1.8p+1");
  CHECK(from_hex_float("0x1.8p+1") == 3.0);
  for (double v : {0.1, -2.5e-300, std::numeric_limits<double>::denorm_min(), 1e308, -0.0}) {
    const double back = from_hex_float(to_hex_float(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
  CHECK_THROWS_AS((void)from_hex_float("0x1.8p+1junk"), InvalidArgument);
  CHECK_THROWS_AS((void)from_hex_float(""), InvalidArgument);
}

TEST_CASE("base64 vectors") {
  // 1.0 as little-endian binary64 is 00 00 00 00 00 00 f0 3f.
  CHECK(encode_base64({1.0}) == "AAAAAAAA8D8=");
  CHECK(decode_base64("AAAAAAAA8D8=") == std::vector<double>{1.0});
  CHECK(encode_base64({}).empty());
  const std::vector<double> v{0.0, -1.5, 1e-320, 123456.789, INFINITY};
  CHECK(decode_base64(encode_base64(v)) == v);
  CHECK_THROWS_AS((void)decode_base64("AAAA"), InvalidArgument);
  CHECK_THROWS_AS((void)decode_base64("!!!"), InvalidArgument);
}

TEST_CASE("non-finite numbers") {
  CHECK(number_json(NAN) == "nan");
  CHECK(number_json(-INFINITY) == "-inf");
  CHECK(number_json(2.5) == 2.5);
  CHECK(std::isnan(number_from_json(Json("nan"))));
  CHECK(number_from_json(Json("inf")) == INFINITY);
  CHECK(number_from_json(Json(-3)) == -3.0);
}

TEST_CASE("field round trip is bit exact") {
  const auto f = sample_coupled(8, 3, rem_tail());
  const auto j = field_to_json(f);
  CHECK(j.at("values").at(0).is_string());
  const auto g = field_from_json(Json::parse(j.dump()));
  CHECK(g.n() == 8);
  CHECK(g.seed() == 3);
  CHECK(g.kind() == f.kind());
  REQUIRE(g.size() == f.size());
  for (std::size_t x = 0; x < f.size(); ++x) CHECK(std::memcmp(&f.values()[x], &g.values()[x], 8) == 0);
  CHECK(*g.sigma() == *f.sigma());
  CHECK(std::equal(f.order().begin(), f.order().end(), g.order().begin()));

  const auto c = field_from_json(field_to_json(PotentialField::constant(3, 1.0)));
  CHECK(c.has_ties());

  auto bad = j;
  bad["order"][0] = j["order"][1];
  CHECK_THROWS_AS((void)field_from_json(bad), InvalidArgument);
  CHECK_THROWS_AS((void)field_from_json(Json{{"values", Json::array()}}), InvalidArgument);
}

TEST_CASE("spectral result round trip") {
  const auto f = sample_rem(6, 2);
  SpectralOptions o;
  o.compute_gap = true;
  const auto r = principal_eig(1.0, f, 1, 2, o);
  const auto j = spectral_to_json(r, true);
  CHECK(j.contains("eigenvalue"));
  const auto back = spectral_from_json(Json::parse(j.dump()));
  CHECK(back.lambda == r.lambda);
  CHECK(back.nu == r.nu);
  CHECK(*back.gap == *r.gap);
  CHECK(back.boundary == r.boundary);
  CHECK(back.peak == r.peak);
  CHECK_FALSE(spectral_to_json(r).contains("vector"));
}

TEST_CASE("estimate round trip") {
  MCEstimate e;
  e.target = "total_mass";
  e.mean = INFINITY;
  e.log_mean = 812.5;
  e.std_error = INFINITY;
  e.n_samples = 4096;
  e.censored_fraction = 0.25;
  e.unreliable = true;
  const auto j = estimate_to_json(e);
  CHECK(j.at("mean") == "inf");
  const auto b = estimate_from_json(Json::parse(j.dump()));
  CHECK(b.log_mean == 812.5);
  CHECK(std::isinf(b.mean));
  CHECK(b.censored_fraction == 0.25);
  CHECK(b.unreliable);
  CHECK_FALSE(b.no_hits);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "pam_io_test.json";
  write_text_file(path.string(), R"({"a": 1})");
  CHECK(read_json_file(path.string()).at("a") == 1);
  write_text_file(path.string(), "{not json");
  CHECK_THROWS_AS((void)read_json_file(path.string()), InvalidArgument);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)read_json_file(path.string()), InvalidArgument);
}
