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

#include "prslab/condcheck.h"

#include <cmath>
#include <stdexcept>

namespace prslab {

namespace {

ConditionWitness diagonal_witness(PrsKind kind, size_t n, bool identity_shifts) {
    if (n == 0 || n > 10) {
        throw DimensionError("witness needs 1 <= n <= 10, got " + std::to_string(n), n);
    }
    ConditionWitness w;
    w.name = to_string(kind) + (identity_shifts ? "-identity" : "");
    w.n = n;
    uint64_t dim = uint64_t{1} << n;
    for (uint64_t x = 0; x < dim; x++) {
        w.u_family.emplace(x, phase_shift_unitary(kind, n, identity_shifts ? 0 : x));
    }
    w.v = fourier_layer(kind, qubit_range(0, n));
    w.w = UnitaryLayer::permutation(qubit_range(0, n), qubit_range(0, n));
    w.scale = std::sqrt(static_cast<double>(dim));
    return w;
}

void record(ConditionReport &report, const ConditionFailure &failure, size_t max_failures) {
    report.failure_count++;
    if (report.failures.size() < max_failures) {
        report.failures.push_back(failure);
    }
}

}  // namespace

void ConditionWitness::validate() const {
    uint64_t dim = uint64_t{1} << n;
    for (uint64_t x = 0; x < dim; x++) {
        const UnitaryLayer &layer = u(x);
        if (layer.width() != n) {
            throw DimensionError("U_" + std::to_string(x) + " acts on " + std::to_string(layer.width()) + " qubits", x);
        }
        layer.materialize();
    }
    v.materialize();
    w.materialize();
    if (!(scale > 0)) {
        throw std::invalid_argument("witness scale must be positive");
    }
}

const UnitaryLayer &ConditionWitness::u(uint64_t x) const {
    auto it = u_family.find(x);
    if (it == u_family.end()) {
        throw std::out_of_range("witness '" + name + "' has no U_x for x=" + std::to_string(x));
    }
    return it->second;
}

ConditionWitness binary_witness(size_t n) {
    return diagonal_witness(PrsKind::kBinaryPhase, n, false);
}

ConditionWitness general_witness(size_t n) {
    return diagonal_witness(PrsKind::kGeneralPhase, n, false);
}

ConditionWitness identity_shift_witness(PrsKind kind, size_t n) {
    return diagonal_witness(kind, n, true);
}

GeneratorFactory phase_prs_factory(PrsKind kind) {
    return [kind](const BooleanFunction &f) { return PrsGenerator(kind, f); };
}

ConditionReport check_cond1(
    const GeneratorFactory &factory,
    const ConditionWitness &witness,
    size_t n,
    const FunctionSource &functions,
    double tolerance,
    size_t max_failures) {
    if (witness.n != n) {
        throw DimensionError("witness is for n=" + std::to_string(witness.n) + ", check requested n=" + std::to_string(n), n);
    }
    witness.validate();
    ConditionReport report;
    report.condition = 1;
    report.n = n;
    report.scale = witness.scale;
    report.witness = witness.name;
    uint64_t dim = uint64_t{1} << n;
    for (uint64_t k = 0; k < functions.count(); k++) {
        PrsGenerator gen = factory(functions.at(k));
        PureState zero_image = prepare(gen);
        for (uint64_t x = 0; x < dim; x++) {
            PureState lhs = apply_to_state(gen, PureState::basis(n, x));
            PureState rhs = apply_layer(zero_image, witness.u(x));
            double dev = max_amplitude_deviation(lhs, rhs);
            report.checked++;
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > tolerance) {
                record(report, {x, k, dev}, max_failures);
            }
        }
    }
    return report;
}

ConditionReport check_cond2(const ConditionWitness &witness, size_t n, double tolerance, size_t max_failures) {
    if (witness.n != n) {
        throw DimensionError("witness is for n=" + std::to_string(witness.n) + ", check requested n=" + std::to_string(n), n);
    }
    witness.validate();
    ConditionReport report;
    report.condition = 2;
    report.n = n;
    report.scale = witness.scale;
    report.witness = witness.name;
    uint64_t dim = uint64_t{1} << n;
    std::vector<ComplexMatrix> u(dim);
    for (uint64_t x = 0; x < dim; x++) {
        u[x] = witness.u(x).materialize();
    }
    for (uint64_t y = 0; y < dim; y++) {
        PureState basis = PureState::basis(n, y);
        PureState vy = apply_layer(basis, witness.v);
        PureState wy = apply_layer(basis, witness.w);
        double dev = 0;
        for (uint64_t x = 0; x < dim; x++) {
            for (uint64_t z = 0; z < dim; z++) {
                Complex lhs = u[x](y, z);
                Complex rhs = witness.scale * vy[x] * wy[z];
                dev = std::max(dev, std::abs(lhs - rhs));
            }
        }
        report.checked++;
        report.max_deviation = std::max(report.max_deviation, dev);
        if (dev > tolerance) {
            record(report, {y, 0, dev}, max_failures);
        }
    }
    return report;
}

nlohmann::ordered_json to_json(const ConditionReport &report) {
    nlohmann::ordered_json j;
    j["condition"] = report.condition;
    j["n"] = report.n;
    j["witness"] = report.witness;
    j["passed"] = report.passed();
    j["checked"] = report.checked;
    j["failure_count"] = report.failure_count;
    j["max_deviation"] = report.max_deviation;
    j["failures"] = nlohmann::ordered_json::array();
    for (const ConditionFailure &f : report.failures) {
        nlohmann::ordered_json jf;
        if (report.condition == 1) {
            jf["x"] = f.label;
            jf["function_index"] = f.function_index;
        } else {
            jf["y"] = f.label;
        }
        jf["max_deviation"] = f.max_deviation;
        j["failures"].push_back(jf);
    }
    j["scale"] = report.scale;
    return j;
}

}  // namespace prslab
