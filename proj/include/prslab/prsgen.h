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

#ifndef PRSLAB_PRSGEN_H
#define PRSLAB_PRSGEN_H

#include <string>
#include <string_view>

#include "prslab/boolfn.h"
#include "prslab/corelin.h"

namespace prslab {

enum class PrsKind {
    kBinaryPhase,
    kGeneralPhase,
};

/// "binary" or "general".
std::string to_string(PrsKind kind);
PrsKind parse_prs_kind(std::string_view text);

/// Range modulus of the phase function: 2 for binary, 2^n for general.
uint64_t phase_modulus(PrsKind kind, size_t n);

/// Phase PRS on n qubits: the Fourier layer followed by the phase oracle of f.
class PrsGenerator {
   public:
    PrsGenerator(PrsKind kind, BooleanFunction f);
    static PrsGenerator from_key(PrsKind kind, const PrfKey &key, size_t n);

    PrsKind kind() const {
        return kind_;
    }
    size_t n() const {
        return f_.input_bits();
    }
    const BooleanFunction &function() const {
        return f_;
    }

   private:
    PrsKind kind_;
    BooleanFunction f_;
};

/// H on every target (binary) or the integer-kernel QFT (general).
UnitaryLayer fourier_layer(PrsKind kind, std::vector<size_t> targets);
/// diag(w^{f(z)}) on the target register, w the primitive m-th root of unity.
UnitaryLayer oracle_layer(const PrsGenerator &gen, std::vector<size_t> targets);

/// The state sum_x w^{f(x)} |x> / sqrt(N), evaluated directly from the table.
PureState prepare(const PrsGenerator &gen, const MemoryBudget &budget = MemoryBudget());

/// Fourier layer then phase oracle on an n-qubit input.
PureState apply_to_state(const PrsGenerator &gen, const PureState &input);

/// Same as apply_to_state but on qubits offset..offset+n-1 of a larger state.
PureState apply_to_register(const PrsGenerator &gen, const PureState &state, size_t offset);

/// U_x = diag((-1)^{x.y}) for binary (bitwise inner product) or
/// diag(w_N^{x*y}) for general (integer product).
UnitaryLayer phase_shift_unitary(PrsKind kind, size_t n, uint64_t x);

}  // namespace prslab

#endif
