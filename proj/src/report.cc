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

#include "prslab/report.h"

#include <cmath>
#include <cstdio>

namespace prslab {

std::string format_number(double x) {
    char buf[64];
    double a = std::abs(x);
    if (a > 0 && a < 1e-3) {
        std::snprintf(buf, sizeof(buf), "%.15e", x);
    } else {
        std::snprintf(buf, sizeof(buf), "%.15f", x);
    }
    return buf;
}

std::string csv_schema_line() {
    return "# schema=" + std::to_string(kCsvSchemaVersion);
}

std::vector<std::string> moment_csv_columns() {
    return {"source", "kind", "n", "i", "t", "method", "seed", "haar_distance", "runtime_ms"};
}

std::vector<std::string> moment_csv_fields(const MomentReport &report, bool canonical) {
    const MomentSpec &s = report.spec;
    return {
        to_string(s.source),
        to_string(s.kind),
        std::to_string(s.n),
        std::to_string(s.i),
        std::to_string(s.t),
        to_string(report.method),
        std::to_string(report.seed),
        format_number(report.haar_distance),
        std::to_string(canonical ? 0 : report.runtime_ms),
    };
}

std::string csv_line(const std::vector<std::string> &fields) {
    std::string out;
    for (size_t k = 0; k < fields.size(); k++) {
        if (k) {
            out.push_back(',');
        }
        out += fields[k];
    }
    return out;
}

nlohmann::ordered_json to_json(const MomentSpec &spec) {
    nlohmann::ordered_json j;
    j["source"] = to_string(spec.source);
    j["kind"] = to_string(spec.kind);
    j["n"] = spec.n;
    j["i"] = spec.i;
    j["t"] = spec.t;
    j["final_layer"] = spec.final_layer;
    nlohmann::ordered_json space;
    space["type"] = space_name(spec.space);
    std::visit(
        [&](const auto &s) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, ExhaustiveSpace>) {
                space["count"] = s.count;
                space["seed"] = s.seed;
            }
        },
        spec.space);
    j["function_space"] = space;
    return j;
}

nlohmann::ordered_json to_json(const MomentReport &report, bool canonical, bool include_moment) {
    nlohmann::ordered_json j;
    j["spec"] = to_json(report.spec);
    j["method"] = to_string(report.method);
    j["seed"] = report.seed;
    j["haar_distance"] = report.haar_distance;
    if (report.standard_error) {
        j["standard_error"] = *report.standard_error;
    }
    j["runtime_ms"] = canonical ? 0 : report.runtime_ms;
    j["dim"] = report.moment.dim();
    if (include_moment) {
        const ComplexMatrix &m = report.moment.matrix();
        nlohmann::ordered_json re = nlohmann::ordered_json::array();
        nlohmann::ordered_json im = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            nlohmann::ordered_json rr = nlohmann::ordered_json::array();
            nlohmann::ordered_json ri = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < m.cols(); c++) {
                rr.push_back(m(r, c).real());
                ri.push_back(m(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ri);
        }
        j["moment_real"] = re;
        j["moment_imag"] = im;
    }
    return j;
}

}  // namespace prslab
