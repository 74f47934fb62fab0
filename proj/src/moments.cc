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

#include "prslab/moments.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace prslab {

namespace {

constexpr size_t kMaxChunks = 8;

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(k) for k in [0, tasks) on up to `threads` workers. The first
/// exception thrown by any task is rethrown.
template <typename Fn>
void run_parallel(size_t tasks, unsigned threads, Fn &&task) {
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks));
    if (threads <= 1) {
        for (size_t k = 0; k < tasks; k++) {
            task(k);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; w++) {
        pool.emplace_back([&]() {
            for (size_t k = next++; k < tasks; k = next++) {
                try {
                    task(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (std::thread &th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

uint64_t moment_dim(const MomentSpec &spec) {
    size_t q = output_qubits(spec);
    if (spec.t == 0) {
        throw std::invalid_argument("moments need t >= 1");
    }
    if (q * spec.t >= 32) {
        throw BudgetError(
            "moment operator on " + std::to_string(q * spec.t) + " qubits", UINT64_MAX, MemoryBudget().bytes());
    }
    return uint64_t{1} << (q * spec.t);
}

/// Unnormalized sum of |psi_k><psi_k|^{(x)t} for members [begin, end).
ComplexMatrix accumulate_members(
    const Ensemble &ens, uint64_t begin, uint64_t end, size_t t, uint64_t dim, const MomentOptions &options) {
    uint64_t bytes = complex_matrix_bytes(dim);
    uint64_t affordable = options.budget.bytes() / std::max<uint64_t>(bytes, 1);
    if (affordable < 2) {
        throw BudgetError("moment accumulation (" + std::to_string(dim) + "x" + std::to_string(dim) + ", two copies)",
                          saturating_mul(bytes, 2), options.budget.bytes());
    }
    uint64_t count = end - begin;
    size_t chunks = static_cast<size_t>(std::min<uint64_t>({kMaxChunks, std::max<uint64_t>(count, 1), affordable - 1}));
    std::vector<ComplexMatrix> partial(chunks);
    run_parallel(chunks, resolve_threads(options.threads), [&](size_t c) {
        ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
        uint64_t lo = begin + count * c / chunks;
        uint64_t hi = begin + count * (c + 1) / chunks;
        for (uint64_t k = lo; k < hi; k++) {
            Eigen::VectorXcd v = tensor_power(ens.state(k, options.budget), t, options.budget);
            acc.selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0);
        }
        partial[c] = std::move(acc);
    });
    for (size_t c = 1; c < chunks; c++) {
        partial[0] += partial[c];
        partial[c].resize(0, 0);
    }
    ComplexMatrix full = partial[0].selfadjointView<Eigen::Lower>();
    return full;
}

/// In-place unnormalized Walsh-Hadamard transform of every column.
void walsh_hadamard_columns(Eigen::MatrixXd &m) {
    Eigen::Index rows = m.rows();
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        double *v = m.col(col).data();
        for (Eigen::Index h = 1; h < rows; h <<= 1) {
            for (Eigen::Index a = 0; a < rows; a += 2 * h) {
                for (Eigen::Index b = a; b < a + h; b++) {
                    double x = v[b];
                    double y = v[b + h];
                    v[b] = x + y;
                    v[b + h] = x - y;
                }
            }
        }
    }
}

struct Branch {
    uint64_t key;
    uint32_t sign;
    uint64_t out;
};

double standard_normal_pair(std::mt19937_64 &rng, double &second) {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    double u1 = (static_cast<double>(rng() >> 11) + 1.0) * kScale;
    double u2 = static_cast<double>(rng() >> 11) * kScale;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    second = r * std::sin(theta);
    return r * std::cos(theta);
}

}  // namespace

std::string to_string(MomentSource source) {
    switch (source) {
        case MomentSource::kPlainPrs:
            return "plain";
        case MomentSource::kConstruction1:
            return "construction1";
        case MomentSource::kConstruction2:
            return "construction2";
        default:
            return "construction3";
    }
}

MomentSource parse_moment_source(std::string_view text) {
    if (text == "plain") {
        return MomentSource::kPlainPrs;
    }
    if (text == "construction1") {
        return MomentSource::kConstruction1;
    }
    if (text == "construction2") {
        return MomentSource::kConstruction2;
    }
    if (text == "construction3") {
        return MomentSource::kConstruction3;
    }
    throw std::invalid_argument(
        "unknown source '" + std::string(text) + "' (expected plain, construction1, construction2, construction3)");
}

std::string to_string(MomentMethod method) {
    switch (method) {
        case MomentMethod::kBruteForce:
            return "bruteforce";
        case MomentMethod::kDeltaPairing:
            return "deltapair";
        default:
            return "montecarlo";
    }
}

MomentMethod parse_moment_method(std::string_view text) {
    if (text == "bruteforce") {
        return MomentMethod::kBruteForce;
    }
    if (text == "deltapair") {
        return MomentMethod::kDeltaPairing;
    }
    if (text == "montecarlo") {
        return MomentMethod::kMonteCarlo;
    }
    throw std::invalid_argument(
        "unknown method '" + std::string(text) + "' (expected bruteforce, deltapair, montecarlo)");
}

size_t output_qubits(const MomentSpec &spec) {
    switch (spec.source) {
        case MomentSource::kPlainPrs:
            return spec.n;
        case MomentSource::kConstruction1:
            return spec.n + spec.i;
        case MomentSource::kConstruction2:
            return 2 * spec.n;
        default:
            return (spec.n / 2) * (spec.i + 1);
    }
}

size_t functions_per_member(const MomentSpec &spec) {
    switch (spec.source) {
        case MomentSource::kConstruction2:
            return 3;
        case MomentSource::kConstruction3:
            return spec.i;
        default:
            return 1;
    }
}

// ---------------------------------------------------------------------------
// Ensemble

namespace {

FunctionSpaceSpec scaled_space(const FunctionSpaceSpec &space, uint64_t per_member) {
    if (auto *p = std::get_if<PrfKeySpace>(&space)) {
        return PrfKeySpace{saturating_mul(p->count, per_member), p->seed};
    }
    if (auto *u = std::get_if<UniformSampleSpace>(&space)) {
        return UniformSampleSpace{saturating_mul(u->count, per_member), u->seed};
    }
    return space;
}

}  // namespace

Ensemble::Ensemble(const MomentSpec &spec, uint64_t enumeration_limit)
    : spec_(spec),
      source_(scaled_space(spec.space, functions_per_member(spec)), spec.n, phase_modulus(spec.kind, spec.n),
              enumeration_limit),
      per_member_(functions_per_member(spec)),
      size_(0) {
    if (per_member_ == 0) {
        throw std::invalid_argument("construction 3 needs at least one block");
    }
    if (source_.is_exhaustive()) {
        size_ = saturating_pow(source_.count(), per_member_);
        if (size_ > enumeration_limit) {
            throw BudgetError("enumerating all " + std::to_string(per_member_) + "-tuples of functions", size_,
                              enumeration_limit, "functions");
        }
    } else {
        size_ = source_.count() / per_member_;
    }
}

std::vector<BooleanFunction> Ensemble::functions(uint64_t member) const {
    if (member >= size_) {
        throw std::out_of_range("ensemble member " + std::to_string(member) + " out of range");
    }
    std::vector<BooleanFunction> fs;
    if (source_.is_exhaustive()) {
        std::vector<uint64_t> digits(per_member_);
        for (size_t j = per_member_; j-- > 0;) {
            digits[j] = member % source_.count();
            member /= source_.count();
        }
        for (uint64_t d : digits) {
            fs.push_back(source_.at(d));
        }
    } else {
        for (size_t j = 0; j < per_member_; j++) {
            fs.push_back(source_.at(member * per_member_ + j));
        }
    }
    return fs;
}

PureState Ensemble::state(uint64_t member, const MemoryBudget &budget) const {
    std::vector<BooleanFunction> fs = functions(member);
    switch (spec_.source) {
        case MomentSource::kPlainPrs:
            return prepare(PrsGenerator(spec_.kind, fs[0]), budget);
        case MomentSource::kConstruction1:
            return evaluate(construction1(fs[0], spec_.n, spec_.i, spec_.kind, spec_.final_layer), budget);
        case MomentSource::kConstruction2:
            return evaluate(construction2(fs[0], fs[1], fs[2], spec_.n, spec_.kind, spec_.final_layer), budget);
        default:
            return evaluate(construction3(fs, spec_.n, spec_.kind, spec_.final_layer, budget), budget);
    }
}

// ---------------------------------------------------------------------------
// Moments

DensityOperator ensemble_moment_bruteforce(const MomentSpec &spec, const MomentOptions &options) {
    uint64_t dim = moment_dim(spec);
    Ensemble ens(spec, options.enumeration_limit);
    ComplexMatrix sum = accumulate_members(ens, 0, ens.size(), spec.t, dim, options);
    sum /= static_cast<double>(ens.size());
    return DensityOperator::from_matrix(std::move(sum));
}

DensityOperator ensemble_moment_deltapair(const MomentSpec &spec, const MomentOptions &options) {
    if (spec.kind != PrsKind::kBinaryPhase) {
        throw std::invalid_argument("delta pairing supports the binary phase kind only");
    }
    if (spec.source != MomentSource::kPlainPrs && spec.source != MomentSource::kConstruction1) {
        throw std::invalid_argument("delta pairing supports the plain and construction1 sources only, got " +
                                    to_string(spec.source));
    }
    if (!std::holds_alternative<ExhaustiveSpace>(spec.space)) {
        throw std::invalid_argument("delta pairing computes the exhaustive average only");
    }
    if (spec.n == 0 || spec.n > 6) {
        throw DimensionError("delta pairing needs 1 <= n <= 6, got " + std::to_string(spec.n), spec.n);
    }
    bool plain = spec.source == MomentSource::kPlainPrs;
    size_t n = spec.n;
    size_t i = spec.i;
    if (!plain && (i < 1 || i >= n)) {
        throw std::invalid_argument("construction 1 needs 1 <= i < n");
    }
    size_t q = output_qubits(spec);
    size_t t = spec.t;
    uint64_t dim = moment_dim(spec);
    uint64_t big_n = uint64_t{1} << n;

    // Single-copy branches: the member state is sum_b (-1)^{f.key_b + sign_b} |out_b>
    // times a common amplitude.
    std::vector<Branch> branches;
    double amp_sq;
    if (plain) {
        for (uint64_t x = 0; x < big_n; x++) {
            branches.push_back({uint64_t{1} << x, 0, x});
        }
        amp_sq = 1.0 / static_cast<double>(big_n);
    } else {
        uint64_t tail_mask = (uint64_t{1} << (n - i)) - 1;
        for (uint64_t x = 0; x < big_n; x++) {
            for (uint64_t y = 0; y < big_n; y++) {
                uint32_t sign = std::popcount(y & ((x & tail_mask) << i)) & 1;
                branches.push_back({(uint64_t{1} << x) ^ (uint64_t{1} << y), sign, ((x >> (n - i)) << n) | y});
            }
        }
        amp_sq = 1.0 / static_cast<double>(big_n * big_n);
    }

    uint64_t tuples = saturating_pow(branches.size(), t);
    options.budget.require(
        saturating_mul(tuples, 32) + saturating_mul(saturating_mul(dim, dim), 8 + 16), "delta pairing grouping");

    std::unordered_map<uint64_t, std::vector<std::pair<uint64_t, int64_t>>> buckets;
    std::vector<size_t> pos(t, 0);
    for (uint64_t k = 0; k < tuples; k++) {
        uint64_t key = 0;
        uint32_t sign = 0;
        uint64_t out = 0;
        for (size_t c = 0; c < t; c++) {
            const Branch &b = branches[pos[c]];
            key ^= b.key;
            sign ^= b.sign;
            out = (out << q) | b.out;
        }
        buckets[key].emplace_back(out, sign ? -1 : 1);
        for (size_t c = t; c-- > 0;) {
            if (++pos[c] < branches.size()) {
                break;
            }
            pos[c] = 0;
        }
    }

    std::vector<std::vector<std::pair<uint64_t, int64_t>>> groups;
    groups.reserve(buckets.size());
    for (auto &[key, entries] : buckets) {
        std::sort(entries.begin(), entries.end());
        std::vector<std::pair<uint64_t, int64_t>> merged;
        for (const auto &e : entries) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(e);
            }
        }
        std::erase_if(merged, [](const auto &e) { return e.second == 0; });
        if (!merged.empty()) {
            groups.push_back(std::move(merged));
        }
    }
    buckets.clear();

    Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(dim, dim);
    unsigned threads = resolve_threads(options.threads);
    size_t stripes = std::min<uint64_t>(threads, dim);
    run_parallel(stripes, threads, [&](size_t s) {
        uint64_t lo = dim * s / stripes;
        uint64_t hi = dim * (s + 1) / stripes;
        for (const auto &group : groups) {
            for (const auto &[col, c_col] : group) {
                if (col < lo || col >= hi) {
                    continue;
                }
                double *column = m0.col(col).data();
                for (const auto &[row, c_row] : group) {
                    column[row] += static_cast<double>(c_row * c_col);
                }
            }
        }
    });

    m0 *= std::pow(amp_sq, static_cast<double>(t));
    if (!plain && spec.final_layer) {
        walsh_hadamard_columns(m0);
        m0.transposeInPlace();
        walsh_hadamard_columns(m0);
        m0.transposeInPlace();
        m0 /= static_cast<double>(dim);
    }
    return DensityOperator::from_matrix(m0.cast<Complex>());
}

DensityOperator haar_moment(uint64_t local_dim, size_t copies, const MemoryBudget &budget) {
    ComplexMatrix p = symmetric_projector(local_dim, copies, budget);
    p /= static_cast<double>(binomial(local_dim + copies - 1, copies));
    return DensityOperator::from_matrix(std::move(p));
}

DensityOperator haar_moment_monte_carlo(
    uint64_t local_dim, size_t copies, uint64_t samples, uint64_t seed, const MemoryBudget &budget) {
    if (samples == 0) {
        throw std::invalid_argument("Monte Carlo Haar moment needs at least one sample");
    }
    uint64_t dim = saturating_pow(local_dim, copies);
    budget.require(saturating_mul(complex_matrix_bytes(dim), 2), "Monte Carlo Haar moment");
    std::mt19937_64 rng(seed);
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    std::vector<Complex> v(local_dim);
    for (uint64_t s = 0; s < samples; s++) {
        double norm = 0;
        for (Complex &c : v) {
            double im;
            double re = standard_normal_pair(rng, im);
            c = {re, im};
            norm += std::norm(c);
        }
        double inv = 1.0 / std::sqrt(norm);
        for (Complex &c : v) {
            c *= inv;
        }
        Eigen::VectorXcd w = tensor_power(PureState::from_amplitudes(v), copies, budget);
        acc.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0);
    }
    ComplexMatrix full = acc.selfadjointView<Eigen::Lower>();
    full /= static_cast<double>(samples);
    return DensityOperator::from_matrix(std::move(full));
}

double haar_distance(const DensityOperator &moment, uint64_t local_dim, size_t copies) {
    uint64_t dim = saturating_pow(local_dim, copies);
    if (moment.dim() != dim) {
        throw std::invalid_argument(
            "moment has dimension " + std::to_string(moment.dim()) + ", expected " + std::to_string(dim));
    }
    const ComplexMatrix &m = moment.matrix();
    std::vector<std::vector<uint64_t>> basis = symmetric_basis(local_dim, copies);
    Eigen::Index sym_dim = static_cast<Eigen::Index>(basis.size());
    ComplexMatrix reduced(sym_dim, sym_dim);
    for (Eigen::Index b = 0; b < sym_dim; b++) {
        for (Eigen::Index a = 0; a < sym_dim; a++) {
            Complex acc = 0;
            for (uint64_t col : basis[b]) {
                for (uint64_t row : basis[a]) {
                    acc += m(row, col);
                }
            }
            reduced(a, b) = acc / std::sqrt(static_cast<double>(basis[a].size() * basis[b].size()));
        }
    }
    if (std::abs(reduced.trace() - m.trace()) > kNormTolerance) {
        return trace_distance(moment, haar_moment(local_dim, copies));
    }
    reduced -= ComplexMatrix::Identity(sym_dim, sym_dim) / static_cast<double>(sym_dim);
    double sum;
    if (reduced.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced.real(), Eigen::EigenvaluesOnly);
        sum = es.eigenvalues().cwiseAbs().sum();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(reduced, Eigen::EigenvaluesOnly);
        sum = es.eigenvalues().cwiseAbs().sum();
    }
    return std::clamp(sum / 2, 0.0, 1.0);
}

MomentReport monte_carlo_moment(const MomentSpec &spec, const MomentOptions &options) {
    if (std::holds_alternative<ExhaustiveSpace>(spec.space)) {
        throw std::invalid_argument("Monte Carlo moments need a sampled function space");
    }
    auto start = std::chrono::steady_clock::now();
    uint64_t dim = moment_dim(spec);
    uint64_t local_dim = uint64_t{1} << output_qubits(spec);
    Ensemble ens(spec, options.enumeration_limit);
    size_t batches = std::max<size_t>(1, std::min<uint64_t>(options.batches, ens.size()));

    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    std::vector<double> distances;
    for (size_t b = 0; b < batches; b++) {
        uint64_t lo = ens.size() * b / batches;
        uint64_t hi = ens.size() * (b + 1) / batches;
        ComplexMatrix sum = accumulate_members(ens, lo, hi, spec.t, dim, options);
        total += sum;
        sum /= static_cast<double>(hi - lo);
        distances.push_back(haar_distance(DensityOperator::from_matrix(std::move(sum)), local_dim, spec.t));
    }
    total /= static_cast<double>(ens.size());
    DensityOperator moment = DensityOperator::from_matrix(std::move(total));
    double distance = haar_distance(moment, local_dim, spec.t);

    std::optional<double> se;
    if (batches >= 2) {
        double mean = 0;
        for (double d : distances) {
            mean += d;
        }
        mean /= static_cast<double>(batches);
        double var = 0;
        for (double d : distances) {
            var += (d - mean) * (d - mean);
        }
        var /= static_cast<double>(batches - 1);
        se = std::sqrt(var / static_cast<double>(batches));
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return MomentReport{spec, MomentMethod::kMonteCarlo, std::move(moment), distance, elapsed.count(),
                        space_seed(spec.space), se};
}

MomentReport compare_to_haar(const MomentSpec &spec, MomentMethod method, const MomentOptions &options) {
    if (method == MomentMethod::kMonteCarlo) {
        return monte_carlo_moment(spec, options);
    }
    auto start = std::chrono::steady_clock::now();
    DensityOperator moment = method == MomentMethod::kBruteForce ? ensemble_moment_bruteforce(spec, options)
                                                                 : ensemble_moment_deltapair(spec, options);
    double distance = haar_distance(moment, uint64_t{1} << output_qubits(spec), spec.t);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return MomentReport{spec, method, std::move(moment), distance, elapsed.count(), space_seed(spec.space), std::nullopt};
}

}  // namespace prslab
