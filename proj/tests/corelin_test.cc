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

#include "prslab/corelin.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.h"

using namespace prslab;
using namespace prslab::testing;

namespace {

constexpr double kTight = 1e-12;

PureState state_of(std::vector<Complex> amps) {
    return PureState::from_amplitudes(std::move(amps));
}

std::vector<UnitaryLayer> random_layers(size_t q, Rng &rng) {
    std::vector<size_t> some = {q - 1, 0};
    std::vector<uint64_t> exps(4);
    for (uint64_t &e : exps) {
        e = rng() % 8;
    }
    std::vector<size_t> order(q);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    return {
        UnitaryLayer::hadamard_all(qubit_range(0, q)),
        UnitaryLayer::qft(some),
        UnitaryLayer::phase_diagonal(some, exps, 8),
        UnitaryLayer::permutation(qubit_range(0, q), order),
        UnitaryLayer::custom({1}, random_unitary(2, rng)),
    };
}

}  // namespace

TEST(PureState, basis_and_validation) {
    PureState s = PureState::basis(2, 3);
    ASSERT_EQ(s.dim(), 4u);
    ASSERT_EQ(s[3], Complex(1));
    ASSERT_THROW(PureState::basis(2, 4), std::out_of_range);
    ASSERT_THROW(PureState::from_amplitudes({1, 0, 0}), std::invalid_argument);
    ASSERT_THROW(PureState::from_amplitudes({1, 1}), std::invalid_argument);
    PureState raw = PureState::from_amplitudes({1, 1}, Normalization::kUnnormalized);
    ASSERT_FALSE(raw.is_normalized());
    ASSERT_NEAR(raw.norm_squared(), 2.0, kTight);
}

TEST(RootOfUnity, exact_quarter_turns) {
    ASSERT_EQ(root_of_unity(0, 4), Complex(1, 0));
    ASSERT_EQ(root_of_unity(1, 4), Complex(0, 1));
    ASSERT_EQ(root_of_unity(2, 4), Complex(-1, 0));
    ASSERT_EQ(root_of_unity(3, 4), Complex(0, -1));
    ASSERT_EQ(root_of_unity(1, 2), Complex(-1, 0));
    ASSERT_NEAR(std::abs(root_of_unity(1, 8) - std::polar(1.0, M_PI / 4)), 0, kTight);
}

TEST(ApplyLayer, hadamard_on_zero) {
    PureState out = apply_layer(PureState::zero(1), UnitaryLayer::hadamard_all({0}));
    double s = 1 / std::sqrt(2.0);
    ASSERT_LE(max_amplitude_deviation(out, state_of({s, s})), kTight);
}

TEST(ApplyLayer, identity_permutation_is_noop) {
    Rng rng(11);
    PureState s = random_state(3, rng);
    PureState out = apply_layer(s, UnitaryLayer::permutation({0, 1, 2}, {0, 1, 2}));
    ASSERT_LE(max_amplitude_deviation(out, s), kTight);
}

TEST(ApplyLayer, phase_and_product) {
    // exponents x0*x1 with modulus 2 on the uniform two-qubit state.
    PureState uniform = state_of({0.5, 0.5, 0.5, 0.5});
    PureState out = apply_layer(uniform, UnitaryLayer::phase_diagonal({0, 1}, {0, 0, 0, 1}, 2));
    ASSERT_LE(max_amplitude_deviation(out, state_of({0.5, 0.5, 0.5, -0.5})), kTight);
}

TEST(ApplyLayer, matches_dense_embedding) {
    Rng rng(5);
    size_t q = 4;
    for (int trial = 0; trial < 20; trial++) {
        PureState s = random_state(q, rng);
        Eigen::VectorXcd v = as_vector(s);

        ASSERT_LE((as_vector(apply_layer(s, UnitaryLayer::hadamard_all(qubit_range(0, q)))) - hadamard_matrix(q) * v)
                      .cwiseAbs()
                      .maxCoeff(),
                  kTight);
        ASSERT_LE((as_vector(apply_layer(s, UnitaryLayer::qft(qubit_range(1, 2)))) - embed(qft_matrix(2), 1, q) * v)
                      .cwiseAbs()
                      .maxCoeff(),
                  kTight);
        ComplexMatrix u = random_unitary(4, rng);
        ASSERT_LE((as_vector(apply_layer(s, UnitaryLayer::custom({2, 3}, u))) - embed(u, 2, q) * v).cwiseAbs().maxCoeff(),
                  kTight);
        BooleanFunction f = random_function(2, 4, rng);
        ASSERT_LE((as_vector(apply_layer(s, UnitaryLayer::phase_diagonal({0, 1}, f.table(), 4))) -
                   embed(phase_matrix(f), 0, q) * v)
                      .cwiseAbs()
                      .maxCoeff(),
                  kTight);
    }
}

TEST(ApplyLayer, non_contiguous_targets_read_first_target_as_msb) {
    // Targets {2, 0}: local value = 2*q2 + q0. Phase only on local value 1 = (q2=0, q0=1).
    std::vector<Complex> amps(8, 0);
    amps[0b100] = 1;
    PureState s = state_of(amps);
    PureState out = apply_layer(s, UnitaryLayer::phase_diagonal({2, 0}, {0, 1, 0, 0}, 2));
    ASSERT_EQ(out[0b100], Complex(-1));
    PureState other = apply_layer(PureState::basis(3, 0b001), UnitaryLayer::phase_diagonal({2, 0}, {0, 1, 0, 0}, 2));
    ASSERT_EQ(other[0b001], Complex(1));
}

TEST(ApplyLayer, permutation_moves_wires) {
    // Output wire j carries input wire order[j]: |a0 a1 a2> -> |a2 a0 a1>.
    PureState out = apply_layer(PureState::basis(3, 0b001), UnitaryLayer::permutation({0, 1, 2}, {2, 0, 1}));
    ASSERT_EQ(out[0b100], Complex(1));
}

TEST(ApplyLayer, register_permutation_swaps_subsystems) {
    // Two 2-qubit registers |01>|10> swapped -> |10>|01>.
    PureState out = apply_layer(PureState::basis(4, 0b0110), UnitaryLayer::register_permutation(0, 2, {1, 0}));
    ASSERT_EQ(out[0b1001], Complex(1));
}

TEST(ApplyLayer, preserves_norm_for_every_kind) {
    Rng rng(99);
    size_t q = 3;
    for (int trial = 0; trial < 1000; trial++) {
        PureState s = random_state(q, rng);
        for (const UnitaryLayer &layer : random_layers(q, rng)) {
            ASSERT_NEAR(apply_layer(s, layer).norm_squared(), 1.0, kTight);
        }
    }
}

TEST(ApplyLayer, dimension_errors_name_the_qubit) {
    try {
        apply_layer(PureState::zero(2), UnitaryLayer::hadamard_all({0, 5}));
        FAIL() << "expected DimensionError";
    } catch (const DimensionError &e) {
        ASSERT_EQ(e.offending_index(), 5u);
    }
    ASSERT_THROW(UnitaryLayer::hadamard_all({1, 1}), DimensionError);
}

TEST(UnitaryLayer, materialize_checks_unitarity) {
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 0) = 2;
    ASSERT_THROW(UnitaryLayer::custom({0}, bad), std::invalid_argument);
    ComplexMatrix h = UnitaryLayer::hadamard_all({0, 1}).materialize();
    ASSERT_LE(max_abs_diff(h, hadamard_matrix(2)), kTight);
    ComplexMatrix f = UnitaryLayer::qft({0, 1, 2}).materialize();
    ASSERT_LE(max_abs_diff(f, qft_matrix(3)), kTight);
    ASSERT_EQ(UnitaryLayer::qft({0}).kind(), LayerKind::kQft);
}

TEST(PartialTrace, examples) {
    double s = 1 / std::sqrt(2.0);
    std::vector<size_t> second = {1};
    DensityOperator bell = partial_trace(state_of({s, 0, 0, s}), second);
    ASSERT_LE(max_abs_diff(bell.matrix(), ComplexMatrix::Identity(2, 2) / 2.0), kTight);

    PureState plus_on_second = state_of({s, s, 0, 0});
    DensityOperator zero = partial_trace(plus_on_second, second);
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = 1;
    ASSERT_LE(max_abs_diff(zero.matrix(), expected), kTight);

    DensityOperator nothing = partial_trace(plus_on_second, {});
    Eigen::VectorXcd v = as_vector(plus_on_second);
    ASSERT_LE(max_abs_diff(nothing.matrix(), v * v.adjoint()), kTight);

    std::vector<size_t> all = {0, 1};
    DensityOperator everything = partial_trace(plus_on_second, all);
    ASSERT_EQ(everything.dim(), 1u);
    ASSERT_NEAR(everything.matrix()(0, 0).real(), 1.0, kTight);

    std::vector<size_t> bad = {2};
    ASSERT_THROW(partial_trace(plus_on_second, bad), DimensionError);
}

TEST(PartialTrace, invariant_under_isometry_on_traced_register) {
    Rng rng(3);
    for (int trial = 0; trial < 20; trial++) {
        PureState chi = random_state(4, rng);
        std::vector<size_t> env = {2, 3};
        DensityOperator before = partial_trace(chi, env);
        PureState moved = apply_layer(chi, UnitaryLayer::custom({2, 3}, random_unitary(4, rng)));
        DensityOperator after = partial_trace(moved, env);
        ASSERT_LE(max_abs_diff(before.matrix(), after.matrix()), 1e-10);
    }
}

TEST(PartialTrace, invariant_under_embedding_isometry) {
    // An isometry C^2 -> C^4 on the environment: append |0> then rotate.
    Rng rng(17);
    for (int trial = 0; trial < 20; trial++) {
        PureState chi = random_state(3, rng);
        std::vector<Complex> padded(16, 0);
        for (uint64_t k = 0; k < 8; k++) {
            padded[k * 2] = chi[k];
        }
        PureState embedded = apply_layer(state_of(padded), UnitaryLayer::custom({2, 3}, random_unitary(4, rng)));
        std::vector<size_t> env_small = {2};
        std::vector<size_t> env_big = {2, 3};
        ASSERT_LE(max_abs_diff(partial_trace(chi, env_small).matrix(), partial_trace(embedded, env_big).matrix()), 1e-10);
    }
}

TEST(TraceDistance, examples) {
    PureState zero = PureState::basis(1, 0);
    PureState one = PureState::basis(1, 1);
    PureState plus = apply_layer(zero, UnitaryLayer::hadamard_all({0}));
    auto rho = [](const PureState &s) { return DensityOperator::projector(s); };
    ASSERT_NEAR(trace_distance(rho(zero), rho(zero)), 0.0, kTight);
    ASSERT_NEAR(trace_distance(rho(zero), rho(one)), 1.0, kTight);
    ASSERT_NEAR(trace_distance(rho(zero), rho(plus)), std::sqrt(0.5), 1e-10);
    ASSERT_NEAR(pure_trace_distance(zero, plus), std::sqrt(0.5), 1e-10);
    ASSERT_THROW(trace_distance(rho(zero), DensityOperator::maximally_mixed(4)), std::invalid_argument);
}

TEST(TraceDistance, agrees_with_pure_formula_and_svd) {
    Rng rng(8);
    for (int trial = 0; trial < 50; trial++) {
        PureState a = random_state(3, rng);
        PureState b = random_state(3, rng);
        DensityOperator ra = DensityOperator::projector(a);
        DensityOperator rb = DensityOperator::projector(b);
        double td = trace_distance(ra, rb);
        ASSERT_NEAR(td, pure_trace_distance(a, b), 1e-10);
        ASSERT_NEAR(td, svd_trace_distance(ra.matrix(), rb.matrix()), 1e-10);
    }
}

TEST(TraceDistance, metric_and_contraction) {
    Rng rng(21);
    for (int trial = 0; trial < 10; trial++) {
        PureState a = random_state(3, rng);
        PureState b = random_state(3, rng);
        PureState c = random_state(3, rng);
        DensityOperator ra = DensityOperator::projector(a);
        DensityOperator rb = DensityOperator::projector(b);
        DensityOperator rc = DensityOperator::projector(c);
        ASSERT_LE(trace_distance(ra, rc), trace_distance(ra, rb) + trace_distance(rb, rc) + 1e-10);
        ASSERT_NEAR(trace_distance(ra, rb), trace_distance(rb, ra), 1e-12);
        std::vector<size_t> env = {2};
        ASSERT_LE(trace_distance(partial_trace(a, env), partial_trace(b, env)), trace_distance(ra, rb) + 1e-10);
    }
}

TEST(DensityOperator, validation) {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    ASSERT_THROW(DensityOperator::from_matrix(m), std::invalid_argument);
    ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2) / 2.0;
    nonherm(0, 1) = 0.1;
    ASSERT_THROW(DensityOperator::from_matrix(nonherm), std::invalid_argument);
    ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    ASSERT_THROW(DensityOperator::from_matrix(negative), std::invalid_argument);
    ASSERT_NEAR(DensityOperator::maximally_mixed(4).matrix().trace().real(), 1.0, kTight);
}

TEST(SymmetricProjector, examples) {
    ComplexMatrix p21 = symmetric_projector(2, 1);
    ASSERT_LE(max_abs_diff(p21, ComplexMatrix::Identity(2, 2)), kTight);
    ASSERT_NEAR(symmetric_projector(2, 2).trace().real(), 3.0, kTight);
    ComplexMatrix p42 = symmetric_projector(4, 2);
    ASSERT_NEAR(p42.trace().real(), 10.0, kTight);
    ASSERT_LE(max_abs_diff(p42 * p42, p42), kTight);
}

TEST(SymmetricProjector, matches_explicit_permutation_sum) {
    for (auto [d, t] : std::vector<std::pair<uint64_t, size_t>>{{2, 2}, {2, 3}, {3, 3}, {4, 2}, {2, 4}}) {
        ComplexMatrix p = symmetric_projector(d, t);
        ASSERT_LE(max_abs_diff(p, naive_symmetric_projector(d, t)), kTight) << d << " " << t;
        ASSERT_NEAR(p.trace().real(), static_cast<double>(binomial(d + t - 1, t)), 1e-10);
        ASSERT_LE(max_abs_diff(p * p, p), 1e-10);
    }
}

TEST(SymmetricProjector, budget_is_enforced) {
    try {
        symmetric_projector(16, 3, MemoryBudget::from_mib(1));
        FAIL() << "expected BudgetError";
    } catch (const BudgetError &e) {
        ASSERT_EQ(e.required(), complex_matrix_bytes(4096));
        ASSERT_EQ(e.available(), uint64_t{1} << 20);
    }
}

TEST(SymmetricBasis, orthonormal_and_spans_projector) {
    uint64_t d = 3;
    size_t t = 3;
    auto basis = symmetric_basis(d, t);
    ASSERT_EQ(basis.size(), binomial(d + t - 1, t));
    ComplexMatrix sum = ComplexMatrix::Zero(27, 27);
    for (const auto &orbit : basis) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(27);
        for (uint64_t idx : orbit) {
            v[idx] = 1.0 / std::sqrt(static_cast<double>(orbit.size()));
        }
        sum += v * v.adjoint();
    }
    ASSERT_LE(max_abs_diff(sum, naive_symmetric_projector(d, t)), kTight);
}

TEST(TransposeFlip, maximally_entangled_identity) {
    Rng rng(12);
    for (uint64_t d : {2, 4, 8, 16}) {
        ComplexMatrix u = random_unitary(d, rng);
        Eigen::VectorXcd left = Eigen::VectorXcd::Zero(d * d);
        Eigen::VectorXcd right = Eigen::VectorXcd::Zero(d * d);
        for (uint64_t x = 0; x < d; x++) {
            Eigen::VectorXcd ex = Eigen::VectorXcd::Unit(d, x);
            left += kron(Eigen::VectorXcd(u * ex), ex);
            right += kron(ex, Eigen::VectorXcd(u.transpose() * ex));
        }
        ASSERT_LE((left - right).cwiseAbs().maxCoeff(), kTight);
    }
}

TEST(TensorPower, matches_kronecker) {
    Rng rng(4);
    PureState s = random_state(2, rng);
    Eigen::VectorXcd v = as_vector(s);
    Eigen::VectorXcd expected = kron(kron(v, v), v);
    ASSERT_LE((tensor_power(s, 3) - expected).cwiseAbs().maxCoeff(), kTight);
    ASSERT_LE((as_vector(tensor(s, s)) - kron(v, v)).cwiseAbs().maxCoeff(), kTight);
}

TEST(ConjugateByTensorPower, matches_kronecker) {
    Rng rng(6);
    ComplexMatrix u = random_unitary(2, rng);
    ComplexMatrix m = random_unitary(4, rng);
    ComplexMatrix uu = kron(u, u);
    ASSERT_LE(max_abs_diff(conjugate_by_tensor_power(m, u, 2), uu * m * uu.adjoint()), kTight);
}

TEST(Budget, environment_override) {
    setenv("PRS_LAB_BUDGET_MIB", "3", 1);
    ASSERT_EQ(MemoryBudget::from_environment().bytes(), uint64_t{3} << 20);
    setenv("PRS_LAB_BUDGET_MIB", "junk", 1);
    ASSERT_THROW(MemoryBudget::from_environment(), std::invalid_argument);
    unsetenv("PRS_LAB_BUDGET_MIB");
    ASSERT_EQ(MemoryBudget::from_environment().bytes(), MemoryBudget::kDefaultMiB << 20);
}
