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

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"

using namespace prslab;
using namespace prslab::testing;

namespace {

constexpr double kTight = 1e-12;

PureState state_of(std::vector<Complex> amps) {
    return PureState::from_amplitudes(std::move(amps));
}

}  // namespace

TEST(PrsKind, names) {
    ASSERT_EQ(parse_prs_kind("binary"), PrsKind::kBinaryPhase);
    ASSERT_EQ(to_string(PrsKind::kGeneralPhase), "general");
    ASSERT_THROW(parse_prs_kind("subset"), std::invalid_argument);
    ASSERT_EQ(phase_modulus(PrsKind::kBinaryPhase, 5), 2u);
    ASSERT_EQ(phase_modulus(PrsKind::kGeneralPhase, 3), 8u);
}

TEST(PrsGenerator, modulus_must_match_kind) {
    ASSERT_THROW(PrsGenerator(PrsKind::kGeneralPhase, BooleanFunction::constant(2, 2)), std::invalid_argument);
    ASSERT_THROW(PrsGenerator(PrsKind::kBinaryPhase, BooleanFunction::constant(2, 4)), std::invalid_argument);
    PrsGenerator g = PrsGenerator::from_key(PrsKind::kGeneralPhase, PrfKey::derive(0, 1), 3);
    ASSERT_EQ(g.function().modulus(), 8u);
}

TEST(Prepare, examples) {
    double s = 1 / std::sqrt(2.0);
    PureState a = prepare(PrsGenerator(PrsKind::kBinaryPhase, BooleanFunction::constant(1, 2)));
    ASSERT_LE(max_amplitude_deviation(a, state_of({s, s})), kTight);

    PureState b = prepare(PrsGenerator(PrsKind::kBinaryPhase, BooleanFunction(2, 2, {0, 1, 1, 0})));
    ASSERT_LE(max_amplitude_deviation(b, state_of({0.5, -0.5, -0.5, 0.5})), kTight);

    PureState c = prepare(PrsGenerator(PrsKind::kGeneralPhase, BooleanFunction(1, 2, {0, 1})));
    ASSERT_LE(max_amplitude_deviation(c, state_of({s, -s})), kTight);
}

TEST(Prepare, flat_magnitudes_and_unit_norm) {
    Rng rng(2);
    for (size_t n = 1; n <= 6; n++) {
        for (PrsKind kind : {PrsKind::kBinaryPhase, PrsKind::kGeneralPhase}) {
            PureState s = prepare(PrsGenerator(kind, random_function(n, phase_modulus(kind, n), rng)));
            ASSERT_NEAR(s.norm_squared(), 1.0, kTight);
            for (uint64_t x = 0; x < s.dim(); x++) {
                ASSERT_NEAR(std::abs(s[x]), 1 / std::sqrt(static_cast<double>(s.dim())), kTight);
            }
        }
    }
}

TEST(ApplyToState, on_zero_equals_prepare) {
    Rng rng(3);
    for (size_t n = 1; n <= 4; n++) {
        for (PrsKind kind : {PrsKind::kBinaryPhase, PrsKind::kGeneralPhase}) {
            PrsGenerator g(kind, random_function(n, phase_modulus(kind, n), rng));
            ASSERT_LE(max_amplitude_deviation(apply_to_state(g, PureState::zero(n)), prepare(g)), kTight);
        }
    }
}

TEST(ApplyToState, basis_input_example) {
    PrsGenerator g(PrsKind::kBinaryPhase, BooleanFunction::constant(2, 2));
    PureState out = apply_to_state(g, PureState::basis(2, 0b10));
    ASSERT_LE(max_amplitude_deviation(out, state_of({0.5, 0.5, -0.5, -0.5})), kTight);
}

TEST(ApplyToState, matches_dense_oracle) {
    Rng rng(4);
    for (size_t n = 1; n <= 4; n++) {
        for (PrsKind kind : {PrsKind::kBinaryPhase, PrsKind::kGeneralPhase}) {
            BooleanFunction f = random_function(n, phase_modulus(kind, n), rng);
            ComplexMatrix fourier = kind == PrsKind::kBinaryPhase ? hadamard_matrix(n) : qft_matrix(n);
            ComplexMatrix u = phase_matrix(f) * fourier;
            PrsGenerator g(kind, f);
            for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
                Eigen::VectorXcd got = as_vector(apply_to_state(g, PureState::basis(n, x)));
                ASSERT_LE((got - u.col(x)).cwiseAbs().maxCoeff(), kTight);
            }
        }
    }
}

TEST(ApplyToState, binary_formula_on_basis_states) {
    // PRS|x> = 2^{-n/2} sum_y (-1)^{f(y) + x.y} |y>.
    Rng rng(5);
    size_t n = 3;
    BooleanFunction f = random_function(n, 2, rng);
    PrsGenerator g(PrsKind::kBinaryPhase, f);
    for (uint64_t x = 0; x < 8; x++) {
        PureState out = apply_to_state(g, PureState::basis(n, x));
        for (uint64_t y = 0; y < 8; y++) {
            int parity = (f(y) + __builtin_popcountll(x & y)) & 1;
            ASSERT_NEAR(std::abs(out[y] - Complex((parity ? -1 : 1) / std::sqrt(8.0))), 0, kTight);
        }
    }
}

TEST(ApplyToState, preserves_inner_products) {
    Rng rng(6);
    for (int trial = 0; trial < 100; trial++) {
        PrsKind kind = trial % 2 ? PrsKind::kBinaryPhase : PrsKind::kGeneralPhase;
        PrsGenerator g(kind, random_function(3, phase_modulus(kind, 3), rng));
        PureState u = random_state(3, rng);
        PureState v = random_state(3, rng);
        Complex before = inner_product(u, v);
        Complex after = inner_product(apply_to_state(g, u), apply_to_state(g, v));
        ASSERT_LE(std::abs(before - after), kTight);
    }
}

TEST(ApplyToState, qubit_mismatch_throws) {
    PrsGenerator g(PrsKind::kBinaryPhase, BooleanFunction::constant(2, 2));
    ASSERT_THROW(apply_to_state(g, PureState::zero(3)), DimensionError);
    ASSERT_THROW(apply_to_register(g, PureState::zero(3), 2), DimensionError);
}

TEST(PhaseShiftUnitary, examples) {
    ASSERT_LE(max_abs_diff(phase_shift_unitary(PrsKind::kBinaryPhase, 3, 0).materialize(), ComplexMatrix::Identity(8, 8)),
              kTight);
    ComplexMatrix z = ComplexMatrix::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    ASSERT_LE(max_abs_diff(phase_shift_unitary(PrsKind::kBinaryPhase, 1, 1).materialize(), z), kTight);
    ComplexMatrix g = phase_shift_unitary(PrsKind::kGeneralPhase, 2, 0b01).materialize();
    ASSERT_EQ(g(0, 0), Complex(1, 0));
    ASSERT_EQ(g(1, 1), Complex(0, 1));
    ASSERT_EQ(g(2, 2), Complex(-1, 0));
    ASSERT_EQ(g(3, 3), Complex(0, -1));
}

TEST(PhaseShiftUnitary, realizes_shifted_preparation) {
    // gen|x> == U_x gen|0> for every f of the exhaustive binary space and 64 general samples.
    for (size_t n = 1; n <= 3; n++) {
        for (const BooleanFunction &f : enumerate_all(n, 2)) {
            PrsGenerator g(PrsKind::kBinaryPhase, f);
            PureState zero_image = prepare(g);
            for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
                PureState lhs = apply_to_state(g, PureState::basis(n, x));
                PureState rhs = apply_layer(zero_image, phase_shift_unitary(PrsKind::kBinaryPhase, n, x));
                ASSERT_LE(max_amplitude_deviation(lhs, rhs), kTight);
            }
        }
        FunctionSource samples(UniformSampleSpace{64, 17}, n, phase_modulus(PrsKind::kGeneralPhase, n));
        for (uint64_t k = 0; k < samples.count(); k++) {
            PrsGenerator g(PrsKind::kGeneralPhase, samples.at(k));
            PureState zero_image = prepare(g);
            for (uint64_t x = 0; x < (uint64_t{1} << n); x++) {
                PureState lhs = apply_to_state(g, PureState::basis(n, x));
                PureState rhs = apply_layer(zero_image, phase_shift_unitary(PrsKind::kGeneralPhase, n, x));
                ASSERT_LE(max_amplitude_deviation(lhs, rhs), kTight);
            }
        }
    }
}
