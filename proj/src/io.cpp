// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/io.hpp"

#include <sodium.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pam {

std::string to_hex_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double from_hex_float(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InvalidArgument("malformed hex-float '" + s + "'");
  return v;
}

std::string encode_base64(const std::vector<double>& values) {
  static_assert(std::endian::native == std::endian::little, "binary64 layout assumes little endian");
  const std::size_t bytes = values.size() * sizeof(double);
  std::string out(sodium_base64_ENCODED_LEN(bytes, sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(values.data()),
                    bytes, sodium_base64_VARIANT_ORIGINAL);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::vector<double> decode_base64(const std::string& text) {
  std::vector<unsigned char> bytes(text.size());
  std::size_t len = 0;
  if (sodium_base642bin(bytes.data(), bytes.size(), text.data(), text.size(), nullptr, &len,
                        nullptr, sodium_base64_VARIANT_ORIGINAL) != 0)
    throw InvalidArgument("malformed base64 vector");
  if (len % sizeof(double) != 0) throw InvalidArgument("base64 payload is not a binary64 array");
  std::vector<double> values(len / sizeof(double));
  std::memcpy(values.data(), bytes.data(), len);
  return values;
}

Json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return from_hex_float(s);
  }
  throw InvalidArgument("expected a number");
}

Json field_to_json(const PotentialField& field) {
  Json j;
  j["n"] = field.n();
  j["seed"] = field.seed();
  j["kind"] = field.kind();
  Json values = Json::array();
  for (double v : field.values()) values.push_back(to_hex_float(v));
  j["values"] = std::move(values);
  j["order"] = std::vector<Index>(field.order().begin(), field.order().end());
  if (field.sigma()) {
    Json sigma = Json::array();
    for (double v : *field.sigma()) sigma.push_back(to_hex_float(v));
    j["sigma"] = std::move(sigma);
  }
  return j;
}

PotentialField field_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(number_from_json(v));
    std::optional<std::vector<double>> sigma;
    if (j.contains("sigma")) {
      sigma.emplace();
      for (const auto& v : j.at("sigma")) sigma->push_back(number_from_json(v));
    }
    const std::string kind = j.value("kind", "custom");
    auto field = PotentialField::from_values(n, std::move(values), kind,
                                             j.value("seed", std::uint64_t{0}),
                                             kind == "constant", std::move(sigma));
    if (j.contains("order")) {
      const auto order = j.at("order").get<std::vector<Index>>();
      if (!std::equal(order.begin(), order.end(), field.order().begin(), field.order().end()))
        throw InvalidArgument("stored order does not match the values");
    }
    return field;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed field document: ") + e.what());
  }
}

Json spectral_to_json(const SpectralResult& r, bool include_vector) {
  Json j;
  j["n"] = r.n;
  j["kappa"] = r.kappa;
  j["i"] = r.i;
  j["l"] = r.l;
  j["eigenvalue"] = number_json(r.lambda);
  j["residual"] = number_json(r.residual);
  j["gap"] = r.gap ? number_json(*r.gap) : Json(nullptr);
  j["peak"] = r.peak;
  j["boundary"] = r.boundary;
  j["matvecs"] = r.matvecs;
  j["polished"] = r.polished;
  if (include_vector) j["vector"] = encode_base64(r.nu);
  return j;
}

SpectralResult spectral_from_json(const Json& j) {
  try {
    SpectralResult r;
    r.n = j.at("n").get<int>();
    r.kappa = j.at("kappa").get<double>();
    r.i = j.value("i", 0);
    r.l = j.value("l", 0);
    r.lambda = number_from_json(j.at("eigenvalue"));
    r.residual = number_from_json(j.at("residual"));
    if (j.contains("gap") && !j.at("gap").is_null()) r.gap = number_from_json(j.at("gap"));
    r.peak = j.at("peak").get<Index>();
    r.boundary = j.at("boundary").get<std::vector<Index>>();
    r.matvecs = j.value("matvecs", 0);
    r.polished = j.value("polished", false);
    if (j.contains("vector")) r.nu = decode_base64(j.at("vector").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed spectral document: ") + e.what());
  }
}

Json estimate_to_json(const MCEstimate& e) {
  Json j;
  j["target"] = e.target;
  j["mean"] = number_json(e.mean);
  j["log_mean"] = number_json(e.log_mean);
  j["std_error"] = number_json(e.std_error);
  j["n_samples"] = e.n_samples;
  if (e.censored_fraction) j["censored_fraction"] = *e.censored_fraction;
  if (e.no_hits) j["no_endpoint_hits"] = true;
  if (e.unreliable) j["unreliable"] = true;
  return j;
}

MCEstimate estimate_from_json(const Json& j) {
  try {
    MCEstimate e;
    e.target = j.at("target").get<std::string>();
    e.mean = number_from_json(j.at("mean"));
    e.log_mean = j.contains("log_mean") ? number_from_json(j.at("log_mean")) : std::log(e.mean);
    e.std_error = number_from_json(j.at("std_error"));
    e.n_samples = j.at("n_samples").get<std::int64_t>();
    if (j.contains("censored_fraction")) e.censored_fraction = j.at("censored_fraction").get<double>();
    e.no_hits = j.value("no_endpoint_hits", false);
    e.unreliable = j.value("unreliable", false);
    return e;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed estimate document: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace pam
