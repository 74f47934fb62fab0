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

#include "prslab/expand.h"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace prslab {

namespace {

FinalLayer default_final(PrsKind kind, bool include) {
    if (!include) {
        return FinalLayer::kNone;
    }
    return kind == PrsKind::kBinaryPhase ? FinalLayer::kHadamardAll : FinalLayer::kQft;
}

void require_even(size_t n, const char *what) {
    if (n == 0 || n % 2 != 0) {
        throw std::invalid_argument(std::string(what) + " needs a positive even block width, got " + std::to_string(n));
    }
}

}  // namespace

std::string to_string(FinalLayer layer) {
    switch (layer) {
        case FinalLayer::kNone:
            return "none";
        case FinalLayer::kHadamardAll:
            return "hadamard_all";
        default:
            return "qft";
    }
}

FinalLayer parse_final_layer(std::string_view text) {
    if (text == "none") {
        return FinalLayer::kNone;
    }
    if (text == "hadamard_all") {
        return FinalLayer::kHadamardAll;
    }
    if (text == "qft") {
        return FinalLayer::kQft;
    }
    throw std::invalid_argument("unknown final layer '" + std::string(text) + "'");
}

void ConstructionSpec::validate() const {
    if (blocks.empty()) {
        return;
    }
    size_t width = blocks.front().width;
    for (size_t b = 0; b < blocks.size(); b++) {
        const BlockSpec &block = blocks[b];
        if (block.width != width) {
            throw std::invalid_argument(
                "block " + std::to_string(b) + " has width " + std::to_string(block.width) + ", expected " +
                std::to_string(width));
        }
        if (block.offset + block.width > total_qubits) {
            throw DimensionError(
                "block " + std::to_string(b) + " at offset " + std::to_string(block.offset) + " with width " +
                    std::to_string(block.width) + " does not fit " + std::to_string(total_qubits) + " qubits",
                block.offset + block.width - 1);
        }
        if (block.function_ref >= functions.size()) {
            throw std::invalid_argument(
                "block " + std::to_string(b) + " references function " + std::to_string(block.function_ref) +
                " but only " + std::to_string(functions.size()) + " are bound");
        }
        const BooleanFunction &f = functions[block.function_ref];
        if (f.input_bits() != block.width || f.modulus() != phase_modulus(block.kind, block.width)) {
            throw std::invalid_argument("function bound to block " + std::to_string(b) + " does not match its kind and width");
        }
    }
}

ConstructionSpec ConstructionSpec::rebind(std::vector<BooleanFunction> replacement) const {
    ConstructionSpec out = *this;
    out.functions = std::move(replacement);
    out.validate();
    return out;
}

ConstructionSpec construction1(const BooleanFunction &f, size_t n, size_t i, PrsKind kind, bool include_final_layer) {
    if (i < 1 || i >= n) {
        throw std::invalid_argument(
            "construction 1 needs 1 <= i < n, got n=" + std::to_string(n) + ", i=" + std::to_string(i));
    }
    ConstructionSpec spec;
    spec.total_qubits = n + i;
    spec.blocks = {{0, kind, 0, n}, {0, kind, i, n}};
    spec.final_layer = default_final(kind, include_final_layer);
    spec.functions = {f};
    spec.validate();
    return spec;
}

ConstructionSpec construction2(
    const BooleanFunction &f1,
    const BooleanFunction &f2,
    const BooleanFunction &f3,
    size_t n,
    PrsKind kind,
    bool include_final_layer) {
    require_even(n, "construction 2");
    ConstructionSpec spec;
    spec.total_qubits = 2 * n;
    spec.blocks = {{0, kind, 0, n}, {1, kind, n, n}, {2, kind, n / 2, n}};
    spec.final_layer = default_final(kind, include_final_layer);
    spec.functions = {f1, f2, f3};
    spec.validate();
    return spec;
}

ConstructionSpec construction2_shared_key(const BooleanFunction &f, size_t n, PrsKind kind, bool include_final_layer) {
    require_even(n, "construction 2");
    ConstructionSpec spec;
    spec.total_qubits = 2 * n;
    spec.blocks = {{0, kind, 0, n}, {0, kind, n, n}, {0, kind, n / 2, n}};
    spec.final_layer = default_final(kind, include_final_layer);
    spec.functions = {f};
    spec.validate();
    return spec;
}

ConstructionSpec construction3(
    const std::vector<BooleanFunction> &fs,
    size_t n,
    PrsKind kind,
    bool include_final_layer,
    const MemoryBudget &budget) {
    require_even(n, "construction 3");
    if (fs.empty()) {
        throw std::invalid_argument("construction 3 needs at least one block");
    }
    size_t q = (n / 2) * (fs.size() + 1);
    if (q >= 60) {
        throw BudgetError("construction 3 state", UINT64_MAX, budget.bytes());
    }
    budget.require(complex_vector_bytes(uint64_t{1} << q), "construction 3 state");
    ConstructionSpec spec;
    spec.total_qubits = q;
    for (size_t j = 0; j < fs.size(); j++) {
        spec.blocks.push_back({j, kind, j * (n / 2), n});
    }
    spec.final_layer = default_final(kind, include_final_layer);
    spec.functions = fs;
    spec.validate();
    return spec;
}

PureState evaluate(const ConstructionSpec &spec, const MemoryBudget &budget) {
    spec.validate();
    if (spec.total_qubits >= 60) {
        throw BudgetError("construction state", UINT64_MAX, budget.bytes());
    }
    budget.require(complex_vector_bytes(uint64_t{1} << spec.total_qubits), "construction state");
    PureState state = PureState::zero(spec.total_qubits);
    for (const BlockSpec &block : spec.blocks) {
        PrsGenerator gen(block.kind, spec.functions[block.function_ref]);
        state = apply_to_register(gen, state, block.offset);
    }
    switch (spec.final_layer) {
        case FinalLayer::kHadamardAll:
            state = apply_layer(state, UnitaryLayer::hadamard_all(qubit_range(0, spec.total_qubits)));
            break;
        case FinalLayer::kQft:
            state = apply_layer(state, UnitaryLayer::qft(qubit_range(0, spec.total_qubits)));
            break;
        case FinalLayer::kNone:
            break;
    }
    return state;
}

PureState closed_form_construction1(const BooleanFunction &f, size_t n, size_t i, bool include_final_layer) {
    if (f.modulus() != 2 || f.input_bits() != n) {
        throw std::invalid_argument("closed form needs a binary function on n bits");
    }
    if (i < 1 || i >= n) {
        throw std::invalid_argument("closed form needs 1 <= i < n");
    }
    size_t q = n + i;
    uint64_t dim = uint64_t{1} << q;
    uint64_t big_n = uint64_t{1} << n;
    uint64_t tail = uint64_t{1} << (n - i);
    std::vector<Complex> amps(dim);
    for (uint64_t xp = 0; xp < (uint64_t{1} << i); xp++) {
        for (uint64_t y = 0; y < big_n; y++) {
            int64_t acc = 0;
            for (uint64_t xpp = 0; xpp < tail; xpp++) {
                uint64_t parity = f((xp << (n - i)) | xpp) + std::popcount(y & (xpp << i)) + f(y);
                acc += (parity & 1) ? -1 : 1;
            }
            amps[(xp << n) | y] = static_cast<double>(acc) / static_cast<double>(big_n);
        }
    }
    if (!include_final_layer) {
        return PureState::from_amplitudes(std::move(amps));
    }
    std::vector<Complex> out(dim);
    double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (uint64_t z = 0; z < dim; z++) {
        Complex acc = 0;
        for (uint64_t w = 0; w < dim; w++) {
            acc += (std::popcount(z & w) & 1) ? -amps[w] : amps[w];
        }
        out[z] = scale * acc;
    }
    return PureState::from_amplitudes(std::move(out));
}

nlohmann::ordered_json to_json(const ConstructionSpec &spec) {
    nlohmann::ordered_json j;
    j["total_qubits"] = spec.total_qubits;
    j["blocks"] = nlohmann::ordered_json::array();
    for (const BlockSpec &b : spec.blocks) {
        nlohmann::ordered_json jb;
        jb["function"] = b.function_ref;
        jb["kind"] = to_string(b.kind);
        jb["offset"] = b.offset;
        jb["width"] = b.width;
        j["blocks"].push_back(jb);
    }
    j["final_layer"] = to_string(spec.final_layer);
    j["functions"] = nlohmann::ordered_json::array();
    for (const BooleanFunction &f : spec.functions) {
        nlohmann::ordered_json jf;
        jf["input_bits"] = f.input_bits();
        jf["modulus"] = f.modulus();
        jf["table"] = f.to_hex();
        j["functions"].push_back(jf);
    }
    return j;
}

ConstructionSpec construction_from_json(const nlohmann::json &j) {
    ConstructionSpec spec;
    spec.total_qubits = j.at("total_qubits").get<size_t>();
    for (const auto &jb : j.at("blocks")) {
        spec.blocks.push_back(
            {jb.at("function").get<size_t>(), parse_prs_kind(jb.at("kind").get<std::string>()),
             jb.at("offset").get<size_t>(), jb.at("width").get<size_t>()});
    }
    spec.final_layer = parse_final_layer(j.value("final_layer", std::string("none")));
    for (const auto &jf : j.at("functions")) {
        spec.functions.push_back(BooleanFunction::from_hex(
            jf.at("input_bits").get<size_t>(), jf.at("modulus").get<uint64_t>(), jf.at("table").get<std::string>()));
    }
    spec.validate();
    return spec;
}

}  // namespace prslab
