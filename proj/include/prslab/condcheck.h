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

#ifndef PRSLAB_CONDCHECK_H
#define PRSLAB_CONDCHECK_H

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "prslab/boolfn.h"
#include "prslab/corelin.h"
#include "prslab/prsgen.h"

namespace prslab {

inline constexpr double kConditionTolerance = 1e-10;

/// A candidate family U_x with the pair (V, W) and the constant relating both
/// sides of the transpose identity. All layers act on qubits 0..n-1.
struct ConditionWitness {
    std::string name;
    size_t n = 0;
    std::map<uint64_t, UnitaryLayer> u_family;
    UnitaryLayer v = UnitaryLayer::hadamard_all({});
    UnitaryLayer w = UnitaryLayer::hadamard_all({});
    double scale = 1.0;

    /// Throws if some U_x is missing or any layer is not unitary.
    void validate() const;
    const UnitaryLayer &u(uint64_t x) const;
};

/// U_x = diag((-1)^{x.y}), V = H, W = I, scale sqrt(2^n).
ConditionWitness binary_witness(size_t n);
/// U_x = diag(w_N^{x*y}), V = QFT, W = I, scale sqrt(2^n).
ConditionWitness general_witness(size_t n);
/// The kind's witness with every U_x replaced by the identity.
ConditionWitness identity_shift_witness(PrsKind kind, size_t n);

using GeneratorFactory = std::function<PrsGenerator(const BooleanFunction &)>;
GeneratorFactory phase_prs_factory(PrsKind kind);

struct ConditionFailure {
    /// x for the first condition, y for the second.
    uint64_t label;
    /// Index of the function in the source (first condition only).
    uint64_t function_index;
    double max_deviation;
};

struct ConditionReport {
    int condition = 0;
    size_t n = 0;
    double scale = 1.0;
    std::string witness;
    uint64_t checked = 0;
    uint64_t failure_count = 0;
    double max_deviation = 0;
    /// The first failures in scan order.
    std::vector<ConditionFailure> failures;

    bool passed() const {
        return failure_count == 0;
    }
};

/// For every function of `functions` and every basis x, compares
/// gen|x> with U_x gen|0> amplitude by amplitude.
ConditionReport check_cond1(
    const GeneratorFactory &factory,
    const ConditionWitness &witness,
    size_t n,
    const FunctionSource &functions,
    double tolerance = kConditionTolerance,
    size_t max_failures = 64);

/// For every basis y, compares sum_x |x> (x) U_x^T |y> with scale * (V|y> (x) W|y>).
ConditionReport check_cond2(
    const ConditionWitness &witness, size_t n, double tolerance = kConditionTolerance, size_t max_failures = 64);

nlohmann::ordered_json to_json(const ConditionReport &report);

}  // namespace prslab

#endif
