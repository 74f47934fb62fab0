// Copyright 2026 The prs-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRSLAB_REPORT_H
#define PRSLAB_REPORT_H

#include <string>
#include <vector>

#include "json.hpp"
#include "prslab/moments.h"

namespace prslab {

inline constexpr int kCsvSchemaVersion = 1;

/// Scientific notation for 0 < |x| < 1e-3, fixed otherwise; '.' decimal point.
std::string format_number(double x);

/// "# schema=1".
std::string csv_schema_line();
/// source, kind, n, i, t, method, seed, haar_distance, runtime_ms
std::vector<std::string> moment_csv_columns();
/// Fields for moment_csv_columns(). With `canonical` the runtime is written as 0.
std::vector<std::string> moment_csv_fields(const MomentReport &report, bool canonical);
/// Comma-joined line without a trailing newline.
std::string csv_line(const std::vector<std::string> &fields);

nlohmann::ordered_json to_json(const MomentSpec &spec);
/// Report with the spec, method, distance and metadata. The full moment
/// matrix is included (as real and imaginary row arrays) when requested.
nlohmann::ordered_json to_json(const MomentReport &report, bool canonical, bool include_moment = false);

}  // namespace prslab

#endif
