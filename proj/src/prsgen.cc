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

#include "prslab/prsgen.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace prslab {

std::string to_string(PrsKind kind) {
    return kind == PrsKind::kBinaryPhase ? "binary" : "general";
}

PrsKind parse_prs_kind(std::string_view text) {
    if (text == "binary") {
        return PrsKind::kBinaryPhase;
    }
    if (text == "general") {
        return PrsKind::kGeneralPhase;
    }
    throw std::invalid_argument("unknown PRS kind '" + std::string(text) + "' (expected binary or general)");
}

uint64_t phase_modulus(PrsKind kind, size_t n) {
    if (kind == PrsKind::kBinaryPhase) {
        return 2;
    }
    if (n == 0 || n >= 63) {
        throw DimensionError("general phase needs 1 <= n < 63, got " + std::to_string(n), n);
    }
    return uint64_t{1} << n;
}

PrsGenerator::PrsGenerator(PrsKind kind, BooleanFunction f) : kind_(kind), f_(std::move(f)) {
    uint64_t want = phase_modulus(kind, f_.input_bits());
    if (f_.modulus() != want) {
        throw std::invalid_argument(
            to_string(kind) + " phase on " + std::to_string(f_.input_bits()) + " qubits needs modulus " +
            std::to_string(want) + ", function has " + std::to_string(f_.modulus()));
    }
}

PrsGenerator PrsGenerator::from_key(PrsKind kind, const PrfKey &key, size_t n) {
    return PrsGenerator(kind, prf_truth_table(key, n, phase_modulus(kind, n)));
}

UnitaryLayer fourier_layer(PrsKind kind, std::vector<size_t> targets) {
    if (kind == PrsKind::kBinaryPhase) {
        return UnitaryLayer::hadamard_all(std::move(targets));
    }
    return UnitaryLayer::qft(std::move(targets));
}

UnitaryLayer oracle_layer(const PrsGenerator &gen, std::vector<size_t> targets) {
    if (targets.size() != gen.n()) {
        throw DimensionError(
            "oracle register has " + std::to_string(targets.size()) + " qubits, generator acts on " +
                std::to_string(gen.n()),
            targets.size());
    }
    return UnitaryLayer::phase_diagonal(std::move(targets), gen.function().table(), gen.function().modulus());
}

PureState prepare(const PrsGenerator &gen, const MemoryBudget &budget) {
    uint64_t dim = gen.function().domain_size();
    budget.require(complex_vector_bytes(dim), "PRS state");
    double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<Complex> amps(dim);
    for (uint64_t x = 0; x < dim; x++) {
        amps[x] = amp * root_of_unity(gen.function()(x), gen.function().modulus());
    }
    return PureState::from_amplitudes(std::move(amps));
}

PureState apply_to_register(const PrsGenerator &gen, const PureState &state, size_t offset) {
    if (offset + gen.n() > state.num_qubits()) {
        throw DimensionError(
            "PRS block on qubits " + std::to_string(offset) + ".." + std::to_string(offset + gen.n() - 1) +
                " does not fit a " + std::to_string(state.num_qubits()) + "-qubit state",
            offset + gen.n() - 1);
    }
    std::vector<size_t> targets = qubit_range(offset, gen.n());
    PureState out = apply_layer(state, fourier_layer(gen.kind(), targets));
    return apply_layer(out, oracle_layer(gen, targets));
}

PureState apply_to_state(const PrsGenerator &gen, const PureState &input) {
    if (input.num_qubits() != gen.n()) {
        throw DimensionError(
            "generator acts on " + std::to_string(gen.n()) + " qubits, input has " +
                std::to_string(input.num_qubits()),
            input.num_qubits());
    }
    return apply_to_register(gen, input, 0);
}

UnitaryLayer phase_shift_unitary(PrsKind kind, size_t n, uint64_t x) {
    uint64_t dim = uint64_t{1} << n;
    if (x >= dim) {
        throw std::invalid_argument("shift label " + std::to_string(x) + " has more than " + std::to_string(n) + " bits");
    }
    uint64_t m = phase_modulus(kind, n);
    std::vector<uint64_t> exponents(dim);
    for (uint64_t y = 0; y < dim; y++) {
        exponents[y] = kind == PrsKind::kBinaryPhase ? std::popcount(x & y) & 1 : (x * y) & (dim - 1);
    }
    return UnitaryLayer::phase_diagonal(qubit_range(0, n), std::move(exponents), m);
}

}  // namespace prslab
