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

#ifndef PRSLAB_EXPAND_H
#define PRSLAB_EXPAND_H

#include <string>
#include <vector>

#include "json.hpp"
#include "prslab/prsgen.h"

namespace prslab {

enum class FinalLayer {
    kNone,
    kHadamardAll,
    kQft,
};

std::string to_string(FinalLayer layer);
FinalLayer parse_final_layer(std::string_view text);

/// One PRS block: functions[function_ref] applied to qubits offset..offset+width-1.
struct BlockSpec {
    size_t function_ref;
    PrsKind kind;
    size_t offset;
    size_t width;

    bool operator==(const BlockSpec &) const = default;
};

/// Declarative circuit: blocks applied in order to |0...0>, then an optional
/// transform over all qubits.
struct ConstructionSpec {
    size_t total_qubits = 0;
    std::vector<BlockSpec> blocks;
    FinalLayer final_layer = FinalLayer::kNone;
    std::vector<BooleanFunction> functions;

    /// Throws if a block does not fit, widths differ, a function reference is
    /// dangling, or a function does not match its block.
    void validate() const;

    /// Copy with a different function table (same wiring).
    ConstructionSpec rebind(std::vector<BooleanFunction> replacement) const;

    bool operator==(const ConstructionSpec &) const = default;
};

/// Two blocks keyed by the same f at offsets 0 and i on n+i qubits.
ConstructionSpec construction1(
    const BooleanFunction &f, size_t n, size_t i, PrsKind kind, bool include_final_layer = true);

/// f1 at 0 and f2 at n, then f3 at n/2, on 2n qubits.
ConstructionSpec construction2(
    const BooleanFunction &f1,
    const BooleanFunction &f2,
    const BooleanFunction &f3,
    size_t n,
    PrsKind kind,
    bool include_final_layer = true);

/// Construction 2 wiring with one function reused by all three blocks.
ConstructionSpec construction2_shared_key(
    const BooleanFunction &f, size_t n, PrsKind kind, bool include_final_layer = true);

/// Staircase of l = fs.size() blocks with stride n/2 on (n/2)(l+1) qubits.
ConstructionSpec construction3(
    const std::vector<BooleanFunction> &fs,
    size_t n,
    PrsKind kind,
    bool include_final_layer = true,
    const MemoryBudget &budget = MemoryBudget());

PureState evaluate(const ConstructionSpec &spec, const MemoryBudget &budget = MemoryBudget());

/// Construction 1 (binary) summed directly from its amplitude formula, then
/// the optional Hadamard layer applied as an explicit sum over basis states.
PureState closed_form_construction1(const BooleanFunction &f, size_t n, size_t i, bool include_final_layer = true);

nlohmann::ordered_json to_json(const ConstructionSpec &spec);
ConstructionSpec construction_from_json(const nlohmann::json &j);

}  // namespace prslab

#endif
