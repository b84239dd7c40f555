// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief JSON documents for fields, spectral results and Monte Carlo estimates.
 *
 * Potential values are stored as hex-float strings so a field round-trips
 * bit-exactly; eigenvectors are stored as base64 of little-endian binary64.
 */

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pam/fkmc.hpp"
#include "pam/potential.hpp"
#include "pam/spectral.hpp"

namespace pam {

using Json = nlohmann::json;

/// "%a" formatting, e.g. 0x1.8p+1 for 3.
[[nodiscard]] std::string to_hex_float(double v);
[[nodiscard]] double from_hex_float(const std::string& s);

[[nodiscard]] std::string encode_base64(const std::vector<double>& values);
[[nodiscard]] std::vector<double> decode_base64(const std::string& text);

/// Non-finite doubles become the strings "inf", "-inf", "nan".
[[nodiscard]] Json number_json(double v);
[[nodiscard]] double number_from_json(const Json& j);

[[nodiscard]] Json field_to_json(const PotentialField& field);
[[nodiscard]] PotentialField field_from_json(const Json& j);

[[nodiscard]] Json spectral_to_json(const SpectralResult& result, bool include_vector = false);
[[nodiscard]] SpectralResult spectral_from_json(const Json& j);

[[nodiscard]] Json estimate_to_json(const MCEstimate& estimate);
[[nodiscard]] MCEstimate estimate_from_json(const Json& j);

[[nodiscard]] Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pam
