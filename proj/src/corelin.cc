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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace prslab {

namespace {

bool is_power_of_two(uint64_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

size_t log2_exact(uint64_t v) {
    size_t k = 0;
    while ((uint64_t{1} << k) < v) {
        k++;
    }
    return k;
}

// Bit position (from the least significant end) of qubit q in an n-qubit label.
inline uint64_t qubit_bit(size_t num_qubits, size_t q) {
    return uint64_t{1} << (num_qubits - 1 - q);
}

struct RegisterMap {
    uint64_t mask = 0;
    // offsets[l] = global bits set by local register value l.
    std::vector<uint64_t> offsets;
    std::vector<uint64_t> bits;
};

RegisterMap map_register(size_t num_qubits, const std::vector<size_t> &targets) {
    RegisterMap map;
    size_t k = targets.size();
    for (size_t q : targets) {
        if (q >= num_qubits) {
            std::ostringstream msg;
            msg << "layer targets qubit " << q << " but the state has only " << num_qubits << " qubits";
            throw DimensionError(msg.str(), q);
        }
        map.bits.push_back(qubit_bit(num_qubits, q));
        map.mask |= map.bits.back();
    }
    map.offsets.assign(uint64_t{1} << k, 0);
    for (uint64_t l = 0; l < map.offsets.size(); l++) {
        uint64_t g = 0;
        for (size_t b = 0; b < k; b++) {
            if ((l >> (k - 1 - b)) & 1) {
                g |= map.bits[b];
            }
        }
        map.offsets[l] = g;
    }
    return map;
}

uint64_t local_value(const RegisterMap &map, uint64_t global) {
    uint64_t l = 0;
    for (uint64_t bit : map.bits) {
        l = (l << 1) | ((global & bit) ? 1 : 0);
    }
    return l;
}

void apply_dense(std::vector<Complex> &amps, const RegisterMap &map, const ComplexMatrix &u) {
    size_t local_dim = map.offsets.size();
    Eigen::VectorXcd in(local_dim);
    for (uint64_t g = 0; g < amps.size(); g++) {
        if (g & map.mask) {
            continue;
        }
        for (size_t l = 0; l < local_dim; l++) {
            in[l] = amps[g | map.offsets[l]];
        }
        Eigen::VectorXcd out = u * in;
        for (size_t l = 0; l < local_dim; l++) {
            amps[g | map.offsets[l]] = out[l];
        }
    }
}

ComplexMatrix qft_matrix(size_t width) {
    uint64_t dim = uint64_t{1} << width;
    ComplexMatrix m(dim, dim);
    double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (uint64_t y = 0; y < dim; y++) {
        for (uint64_t x = 0; x < dim; x++) {
            m(y, x) = scale * root_of_unity((x * y) % dim, dim);
        }
    }
    return m;
}

void check_unitary(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("unitary must be square");
    }
    ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
    double dev = (u.adjoint() * u - id).cwiseAbs().maxCoeff();
    if (dev > kNormTolerance) {
        std::ostringstream msg;
        msg << "matrix is not unitary: max |U^dagger U - I| = " << dev;
        throw std::invalid_argument(msg.str());
    }
}

void check_targets(const std::vector<size_t> &targets) {
    std::vector<size_t> sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
        throw DimensionError("layer targets qubit " + std::to_string(*dup) + " more than once", *dup);
    }
}

}  // namespace

Complex root_of_unity(uint64_t power, uint64_t modulus) {
    if (modulus == 0) {
        throw std::invalid_argument("root_of_unity: modulus must be positive");
    }
    power %= modulus;
    if ((4 * power) % modulus == 0) {
        switch ((4 * power) / modulus) {
            case 0:
                return {1.0, 0.0};
            case 1:
                return {0.0, 1.0};
            case 2:
                return {-1.0, 0.0};
            default:
                return {0.0, -1.0};
        }
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(power) / static_cast<double>(modulus));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(size_t num_qubits, std::vector<Complex> amplitudes, bool normalized)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
}

PureState PureState::zero(size_t num_qubits) {
    return basis(num_qubits, 0);
}

PureState PureState::basis(size_t num_qubits, uint64_t index) {
    if (num_qubits >= 63) {
        throw DimensionError("too many qubits for a dense state", num_qubits);
    }
    uint64_t dim = uint64_t{1} << num_qubits;
    if (index >= dim) {
        throw std::out_of_range("basis index " + std::to_string(index) + " out of range for " +
                                std::to_string(num_qubits) + " qubits");
    }
    MemoryBudget::from_environment().require(complex_vector_bytes(dim), "pure state");
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return PureState(num_qubits, std::move(amps), true);
}

PureState PureState::from_amplitudes(std::vector<Complex> amplitudes, Normalization normalization) {
    if (!is_power_of_two(amplitudes.size())) {
        throw std::invalid_argument(
            "amplitude vector length " + std::to_string(amplitudes.size()) + " is not a power of two");
    }
    size_t n = log2_exact(amplitudes.size());
    PureState s(n, std::move(amplitudes), normalization == Normalization::kUnit);
    if (normalization == Normalization::kUnit) {
        double norm = s.norm_squared();
        if (std::abs(norm - 1.0) > kNormTolerance) {
            std::ostringstream msg;
            msg << "state is not normalized: squared norm " << norm;
            throw std::invalid_argument(msg.str());
        }
    }
    return s;
}

double PureState::norm_squared() const {
    double acc = 0;
    for (const Complex &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

Complex inner_product(const PureState &a, const PureState &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    Complex acc = 0;
    for (uint64_t k = 0; k < a.dim(); k++) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

double max_amplitude_deviation(const PureState &a, const PureState &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("max_amplitude_deviation: dimension mismatch");
    }
    double dev = 0;
    for (uint64_t k = 0; k < a.dim(); k++) {
        dev = std::max(dev, std::abs(a[k] - b[k]));
    }
    return dev;
}

PureState tensor(const PureState &a, const PureState &b) {
    std::vector<Complex> out(a.dim() * b.dim());
    for (uint64_t i = 0; i < a.dim(); i++) {
        for (uint64_t j = 0; j < b.dim(); j++) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return PureState::from_amplitudes(
        std::move(out),
        a.is_normalized() && b.is_normalized() ? Normalization::kUnit : Normalization::kUnnormalized);
}

Eigen::VectorXcd tensor_power(const PureState &s, size_t copies, const MemoryBudget &budget) {
    uint64_t dim = saturating_pow(s.dim(), copies);
    budget.require(complex_vector_bytes(dim), "tensor power");
    Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
    out[0] = 1.0;
    uint64_t filled = 1;
    for (size_t c = 0; c < copies; c++) {
        // Expand in place from the back so earlier entries are read before being overwritten.
        for (uint64_t i = filled; i-- > 0;) {
            Complex base = out[i];
            for (uint64_t j = s.dim(); j-- > 0;) {
                out[i * s.dim() + j] = base * s[j];
            }
        }
        filled *= s.dim();
    }
    return out;
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator DensityOperator::from_matrix(ComplexMatrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw std::invalid_argument("density operator must be a non-empty square matrix");
    }
    double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kNormTolerance) {
        std::ostringstream msg;
        msg << "density operator is not Hermitian: max deviation " << herm;
        throw std::invalid_argument(msg.str());
    }
    Complex tr = matrix.trace();
    if (std::abs(tr - Complex(1.0)) > kNormTolerance) {
        std::ostringstream msg;
        msg << "density operator trace is " << tr << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
    DensityOperator rho(std::move(matrix));
    if (rho.dim() <= kEigenCheckMaxDim) {
        double lo = rho.min_eigenvalue();
        if (lo < -1e-8) {
            std::ostringstream msg;
            msg << "density operator has negative eigenvalue " << lo;
            throw std::invalid_argument(msg.str());
        }
    }
    return rho;
}

DensityOperator DensityOperator::projector(const PureState &state) {
    Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
    return from_matrix(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(uint64_t dim) {
    ComplexMatrix m = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
    return DensityOperator(std::move(m));
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// UnitaryLayer

UnitaryLayer::UnitaryLayer(std::vector<size_t> targets, Payload payload)
    : targets_(std::move(targets)), payload_(std::move(payload)) {
    check_targets(targets_);
}

UnitaryLayer UnitaryLayer::hadamard_all(std::vector<size_t> targets) {
    return UnitaryLayer(std::move(targets), HadamardAll{});
}

UnitaryLayer UnitaryLayer::qft(std::vector<size_t> targets) {
    return UnitaryLayer(std::move(targets), Qft{});
}

UnitaryLayer UnitaryLayer::phase_diagonal(
    std::vector<size_t> targets, std::vector<uint64_t> exponents, uint64_t modulus) {
    if (modulus == 0) {
        throw std::invalid_argument("phase modulus must be positive");
    }
    if (exponents.size() != (uint64_t{1} << targets.size())) {
        throw std::invalid_argument(
            "phase table has " + std::to_string(exponents.size()) + " entries for a " +
            std::to_string(targets.size()) + "-qubit register");
    }
    return UnitaryLayer(std::move(targets), PhaseDiagonal{std::move(exponents), modulus});
}

UnitaryLayer UnitaryLayer::permutation(std::vector<size_t> targets, std::vector<size_t> order) {
    if (order.size() != targets.size()) {
        throw std::invalid_argument("permutation length does not match the number of targets");
    }
    std::vector<size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); k++) {
        if (sorted[k] != k) {
            throw std::invalid_argument("wire order is not a permutation of 0..k-1");
        }
    }
    return UnitaryLayer(std::move(targets), WirePermutation{std::move(order)});
}

UnitaryLayer UnitaryLayer::register_permutation(
    size_t offset, size_t register_width, const std::vector<size_t> &register_order) {
    std::vector<size_t> order;
    for (size_t r : register_order) {
        for (size_t b = 0; b < register_width; b++) {
            order.push_back(r * register_width + b);
        }
    }
    return permutation(qubit_range(offset, register_width * register_order.size()), std::move(order));
}

UnitaryLayer UnitaryLayer::custom(std::vector<size_t> targets, ComplexMatrix matrix) {
    if (matrix.rows() != static_cast<Eigen::Index>(uint64_t{1} << targets.size())) {
        throw std::invalid_argument("custom matrix dimension does not match the number of targets");
    }
    check_unitary(matrix);
    return UnitaryLayer(std::move(targets), CustomUnitary{std::move(matrix)});
}

LayerKind UnitaryLayer::kind() const {
    return static_cast<LayerKind>(payload_.index());
}

ComplexMatrix UnitaryLayer::materialize() const {
    size_t k = width();
    uint64_t dim = uint64_t{1} << k;
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    // Apply the layer to every local basis state of a k-qubit register.
    UnitaryLayer local = *this;
    local.targets_ = qubit_range(0, k);
    for (uint64_t col = 0; col < dim; col++) {
        PureState out = apply_layer(PureState::basis(k, col), local);
        for (uint64_t row = 0; row < dim; row++) {
            m(row, col) = out[row];
        }
    }
    check_unitary(m);
    return m;
}

std::vector<size_t> qubit_range(size_t offset, size_t width) {
    std::vector<size_t> out(width);
    for (size_t k = 0; k < width; k++) {
        out[k] = offset + k;
    }
    return out;
}

PureState apply_layer(const PureState &state, const UnitaryLayer &layer) {
    RegisterMap map = map_register(state.num_qubits(), layer.targets());
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());

    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, HadamardAll>) {
                const double h = std::numbers::sqrt2 / 2;
                for (uint64_t bit : map.bits) {
                    for (uint64_t g = 0; g < amps.size(); g++) {
                        if (g & bit) {
                            continue;
                        }
                        Complex a = amps[g];
                        Complex b = amps[g | bit];
                        amps[g] = h * (a + b);
                        amps[g | bit] = h * (a - b);
                    }
                }
            } else if constexpr (std::is_same_v<T, Qft>) {
                apply_dense(amps, map, qft_matrix(layer.width()));
            } else if constexpr (std::is_same_v<T, PhaseDiagonal>) {
                std::vector<Complex> phases(p.exponents.size());
                for (size_t l = 0; l < phases.size(); l++) {
                    phases[l] = root_of_unity(p.exponents[l], p.modulus);
                }
                for (uint64_t g = 0; g < amps.size(); g++) {
                    amps[g] *= phases[local_value(map, g)];
                }
            } else if constexpr (std::is_same_v<T, WirePermutation>) {
                size_t k = layer.width();
                std::vector<Complex> out(amps.size());
                for (uint64_t g = 0; g < amps.size(); g++) {
                    uint64_t l = local_value(map, g);
                    uint64_t permuted = 0;
                    for (size_t j = 0; j < k; j++) {
                        uint64_t src_bit = (l >> (k - 1 - p.order[j])) & 1;
                        permuted |= src_bit << (k - 1 - j);
                    }
                    out[(g & ~map.mask) | map.offsets[permuted]] = amps[g];
                }
                amps = std::move(out);
            } else {
                apply_dense(amps, map, p.matrix);
            }
        },
        layer.payload());

    return PureState::from_amplitudes(
        std::move(amps), state.is_normalized() ? Normalization::kUnit : Normalization::kUnnormalized);
}

DensityOperator partial_trace(const PureState &state, std::span<const size_t> traced_qubits) {
    size_t n = state.num_qubits();
    std::vector<bool> traced(n, false);
    for (size_t q : traced_qubits) {
        if (q >= n) {
            throw DimensionError(
                "cannot trace out qubit " + std::to_string(q) + " of a " + std::to_string(n) + "-qubit state", q);
        }
        traced[q] = true;
    }
    std::vector<size_t> keep;
    std::vector<size_t> env;
    for (size_t q = 0; q < n; q++) {
        (traced[q] ? env : keep).push_back(q);
    }
    RegisterMap keep_map = map_register(n, keep);
    RegisterMap env_map = map_register(n, env);

    ComplexMatrix psi(keep_map.offsets.size(), env_map.offsets.size());
    for (size_t a = 0; a < keep_map.offsets.size(); a++) {
        for (size_t e = 0; e < env_map.offsets.size(); e++) {
            psi(a, e) = state[keep_map.offsets[a] | env_map.offsets[e]];
        }
    }
    return DensityOperator::from_matrix(psi * psi.adjoint());
}

double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(
            "trace_distance: dimension mismatch " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    ComplexMatrix diff = a.matrix() - b.matrix();
    double sum = 0;
    if (diff.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff.real(), Eigen::EigenvaluesOnly);
        sum = es.eigenvalues().cwiseAbs().sum();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
        sum = es.eigenvalues().cwiseAbs().sum();
    }
    return std::clamp(sum / 2, 0.0, 1.0);
}

double pure_trace_distance(const PureState &a, const PureState &b) {
    double overlap = std::norm(inner_product(a, b));
    return std::sqrt(std::max(0.0, 1.0 - overlap));
}

// ---------------------------------------------------------------------------
// Permutation operators

ComplexMatrix symmetric_projector(uint64_t local_dim, size_t copies, const MemoryBudget &budget) {
    if (local_dim == 0 || copies == 0) {
        throw std::invalid_argument("symmetric_projector needs D >= 1 and t >= 1");
    }
    uint64_t dim = saturating_pow(local_dim, copies);
    budget.require(complex_matrix_bytes(dim), "symmetric projector");

    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    double weight = 1.0;
    for (size_t k = 2; k <= copies; k++) {
        weight *= static_cast<double>(k);
    }
    weight = 1.0 / weight;

    std::vector<uint64_t> digits(copies);
    std::vector<size_t> perm(copies);
    for (uint64_t b = 0; b < dim; b++) {
        uint64_t rest = b;
        for (size_t c = copies; c-- > 0;) {
            digits[c] = rest % local_dim;
            rest /= local_dim;
        }
        for (size_t c = 0; c < copies; c++) {
            perm[c] = c;
        }
        do {
            uint64_t image = 0;
            for (size_t c = 0; c < copies; c++) {
                image = image * local_dim + digits[perm[c]];
            }
            p(image, b) += weight;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return p;
}

std::vector<std::vector<uint64_t>> symmetric_basis(uint64_t local_dim, size_t copies) {
    std::vector<std::vector<uint64_t>> basis;
    std::vector<uint64_t> digits(copies, 0);
    while (true) {
        std::vector<uint64_t> arrangement = digits;
        std::vector<uint64_t> indices;
        do {
            uint64_t idx = 0;
            for (uint64_t d : arrangement) {
                idx = idx * local_dim + d;
            }
            indices.push_back(idx);
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
        basis.push_back(std::move(indices));

        // Next non-decreasing digit tuple.
        size_t pos = copies;
        while (pos > 0 && digits[pos - 1] == local_dim - 1) {
            pos--;
        }
        if (pos == 0) {
            break;
        }
        uint64_t v = digits[pos - 1] + 1;
        for (size_t c = pos - 1; c < copies; c++) {
            digits[c] = v;
        }
    }
    return basis;
}

ComplexMatrix conjugate_by_tensor_power(const ComplexMatrix &m, const ComplexMatrix &u, size_t copies) {
    ComplexMatrix ut = ComplexMatrix::Identity(1, 1);
    for (size_t c = 0; c < copies; c++) {
        ComplexMatrix next(ut.rows() * u.rows(), ut.cols() * u.cols());
        for (Eigen::Index i = 0; i < ut.rows(); i++) {
            for (Eigen::Index j = 0; j < ut.cols(); j++) {
                next.block(i * u.rows(), j * u.cols(), u.rows(), u.cols()) = ut(i, j) * u;
            }
        }
        ut = std::move(next);
    }
    if (ut.rows() != m.rows()) {
        throw std::invalid_argument("conjugate_by_tensor_power: dimension mismatch");
    }
    return ut * m * ut.adjoint();
}

uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    uint64_t r = 1;
    for (uint64_t j = 1; j <= k; j++) {
        r = r * (n - k + j) / j;
    }
    return r;
}

}  // namespace prslab
