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

#ifndef PRSLAB_CORELIN_H
#define PRSLAB_CORELIN_H

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "prslab/budget.h"

// Dense complex linear algebra on qubit registers.
//
// Basis convention used throughout the project: qubit 0 is the most
// significant bit of a basis-state label. A register of k qubits listed as
// targets {q_0, ..., q_{k-1}} reads its local value with q_0 as the most
// significant bit as well.

namespace prslab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;

/// exp(2*pi*i*power/modulus), exact for multiples of a quarter turn.
Complex root_of_unity(uint64_t power, uint64_t modulus);

enum class Normalization {
    kUnit,
    kUnnormalized,
};

class PureState {
   public:
    static PureState zero(size_t num_qubits);
    static PureState basis(size_t num_qubits, uint64_t index);
    /// Length must be a power of two. With Normalization::kUnit the squared
    /// norm must be 1 within kNormTolerance; kUnnormalized marks an
    /// intermediate branch sum and skips the check.
    static PureState from_amplitudes(std::vector<Complex> amplitudes, Normalization normalization = Normalization::kUnit);

    size_t num_qubits() const {
        return num_qubits_;
    }
    uint64_t dim() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    Complex operator[](uint64_t index) const {
        return amplitudes_[index];
    }
    bool is_normalized() const {
        return normalized_;
    }
    double norm_squared() const;

   private:
    PureState(size_t num_qubits, std::vector<Complex> amplitudes, bool normalized);

    size_t num_qubits_;
    std::vector<Complex> amplitudes_;
    bool normalized_;
};

/// <a|b>
Complex inner_product(const PureState &a, const PureState &b);
/// Largest |a_k - b_k| over all basis states.
double max_amplitude_deviation(const PureState &a, const PureState &b);
PureState tensor(const PureState &a, const PureState &b);
/// |s>^{(x)t} as a flat amplitude vector (first copy most significant).
Eigen::VectorXcd tensor_power(const PureState &s, size_t copies, const MemoryBudget &budget = MemoryBudget());

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityOperator {
   public:
    /// Validates Hermiticity and trace within kNormTolerance, and the
    /// minimum eigenvalue (>= -1e-8) for dimensions up to kEigenCheckMaxDim.
    static DensityOperator from_matrix(ComplexMatrix matrix);
    static DensityOperator projector(const PureState &state);
    static DensityOperator maximally_mixed(uint64_t dim);

    static constexpr uint64_t kEigenCheckMaxDim = 512;

    uint64_t dim() const {
        return matrix_.rows();
    }
    const ComplexMatrix &matrix() const {
        return matrix_;
    }
    double min_eigenvalue() const;

   private:
    explicit DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    }
    ComplexMatrix matrix_;
};

enum class LayerKind {
    kHadamardAll,
    kQft,
    kPhaseDiagonal,
    kPermutation,
    kCustom,
};

struct HadamardAll {};

/// |x> -> 2^{-k/2} sum_y w^{xy} |y> with w = exp(2 pi i / 2^k), x and y read as integers.
struct Qft {};

/// |z> -> exp(2 pi i exponents[z] / modulus) |z> on the target register.
struct PhaseDiagonal {
    std::vector<uint64_t> exponents;
    uint64_t modulus;
};

/// Wire permutation: output wire j carries input wire `order[j]`, i.e.
/// R|a_0 ... a_{k-1}> = |a_{order[0]} ... a_{order[k-1]}>.
struct WirePermutation {
    std::vector<size_t> order;
};

struct CustomUnitary {
    ComplexMatrix matrix;
};

class UnitaryLayer {
   public:
    using Payload = std::variant<HadamardAll, Qft, PhaseDiagonal, WirePermutation, CustomUnitary>;

    static UnitaryLayer hadamard_all(std::vector<size_t> targets);
    static UnitaryLayer qft(std::vector<size_t> targets);
    static UnitaryLayer phase_diagonal(std::vector<size_t> targets, std::vector<uint64_t> exponents, uint64_t modulus);
    static UnitaryLayer permutation(std::vector<size_t> targets, std::vector<size_t> order);
    /// Register-level permutation: `registers` groups of `register_width`
    /// qubits starting at `offset` are permuted as whole subsystems.
    static UnitaryLayer register_permutation(
        size_t offset, size_t register_width, const std::vector<size_t> &register_order);
    static UnitaryLayer custom(std::vector<size_t> targets, ComplexMatrix matrix);

    LayerKind kind() const;
    const std::vector<size_t> &targets() const {
        return targets_;
    }
    size_t width() const {
        return targets_.size();
    }
    const Payload &payload() const {
        return payload_;
    }

    /// The 2^k x 2^k matrix acting on the target register. Throws if it is
    /// not unitary within kNormTolerance.
    ComplexMatrix materialize() const;

   private:
    UnitaryLayer(std::vector<size_t> targets, Payload payload);

    std::vector<size_t> targets_;
    Payload payload_;
};

/// Qubits offset, offset+1, ..., offset+width-1.
std::vector<size_t> qubit_range(size_t offset, size_t width);

/// U|state> with U acting as `layer` on its targets and as identity elsewhere.
PureState apply_layer(const PureState &state, const UnitaryLayer &layer);

/// Tr_E[|psi><psi|] where E is the set of traced qubits; remaining qubits keep
/// their relative order. Tracing every qubit gives the 1x1 operator [1].
DensityOperator partial_trace(const PureState &state, std::span<const size_t> traced_qubits);

/// Half the sum of absolute eigenvalues of a - b.
double trace_distance(const DensityOperator &a, const DensityOperator &b);
/// sqrt(1 - |<a|b>|^2), valid for normalized pure states.
double pure_trace_distance(const PureState &a, const PureState &b);

/// (1/t!) sum over permutations of the t tensor factors of (C^D)^{(x)t}.
/// Unnormalized; trace is C(D+t-1, t).
ComplexMatrix symmetric_projector(uint64_t local_dim, size_t copies, const MemoryBudget &budget = MemoryBudget());

/// Orthonormal basis of the symmetric subspace: one entry per multiset of
/// local digits, listing every distinct arrangement (as a flat index). The
/// basis vector is the uniform superposition over its arrangements.
std::vector<std::vector<uint64_t>> symmetric_basis(uint64_t local_dim, size_t copies);

/// (U^{(x)t}) M (U^{(x)t})^dagger for U acting on one tensor factor.
ComplexMatrix conjugate_by_tensor_power(const ComplexMatrix &m, const ComplexMatrix &u, size_t copies);

uint64_t binomial(uint64_t n, uint64_t k);

}  // namespace prslab

#endif
