// Copyright 2026 The cvxadp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV encodings of the library types. Doubles are written with 17
// significant digits, so every value survives a round trip exactly.
// Malformed input raises InputError.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cvxadp/amap.hpp"
#include "cvxadp/benchmarks.hpp"
#include "cvxadp/fadp.hpp"
#include "cvxadp/lp.hpp"

namespace cvxadp {

using Json = nlohmann::json;

void to_json(Json& j, const Hyperplane& h);
void to_json(Json& j, const MaxAffineModel& m);
void from_json(const Json& j, MaxAffineModel& m);
void to_json(Json& j, const AffineMap& a);
void from_json(const Json& j, AffineMap& a);
void to_json(Json& j, const TrainedEstimate& e);
void from_json(const Json& j, TrainedEstimate& e);
void to_json(Json& j, const CostToGoStack& s);
void from_json(const Json& j, CostToGoStack& s);
void to_json(Json& j, const Polytope& p);
void from_json(const Json& j, Polytope& p);
void to_json(Json& j, const AmapParams& p);
void to_json(Json& j, const TruncatedNormalSpec& s);
void from_json(const Json& j, TruncatedNormalSpec& s);
void to_json(Json& j, const EnergyConfig& c);
void to_json(Json& j, const BreweryConfig& c);

/// Configs read from JSON start from the defaults for the given horizon;
/// present keys override them and unknown keys are rejected.
EnergyConfig energy_config_from_json(const Json& j);
BreweryConfig brewery_config_from_json(const Json& j);
AmapParams amap_params_from_json(const Json& j);

/// Feature columns followed by one target column.
Dataset read_csv_dataset(const std::filesystem::path& path, bool header);
Dataset parse_csv_dataset(const std::string& text, bool header);
std::string format_csv(const Matrix& rows, const std::string& header = "");

Json read_json_file(const std::filesystem::path& path);
std::string dump_json(const Json& j);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

}  // namespace cvxadp
