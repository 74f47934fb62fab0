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

#ifndef PRSLAB_TESTS_TEST_UTIL_H
#define PRSLAB_TESTS_TEST_UTIL_H

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "prslab/boolfn.h"
#include "prslab/corelin.h"

// Independent dense-matrix oracles and random generators shared by the tests.
// Nothing here calls the library's layer application, moment or projector code.

namespace prslab::testing {

using Rng = std::mt19937_64;

/// Normalized vector with i.i.d. complex Gaussian entries.
std::vector<Complex> random_amplitudes(uint64_t dim, Rng &rng);
PureState random_state(size_t num_qubits, Rng &rng);
/// Haar-ish unitary from the QR decomposition of a complex Gaussian matrix.
ComplexMatrix random_unitary(uint64_t dim, Rng &rng);
BooleanFunction random_function(size_t n, uint64_t m, Rng &rng);

Eigen::VectorXcd as_vector(const PureState &s);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron_power(const ComplexMatrix &a, size_t copies);
Eigen::VectorXcd kron(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b);

/// H^{(x)q} built from 2x2 Kronecker factors.
ComplexMatrix hadamard_matrix(size_t q);
/// exp(2 pi i xy / 2^q) / sqrt(2^q).
ComplexMatrix qft_matrix(size_t q);
/// diag(exp(2 pi i f(x) / m)).
ComplexMatrix phase_matrix(const BooleanFunction &f);
/// I_{2^offset} (x) u (x) I_{rest} on `total` qubits.
ComplexMatrix embed(const ComplexMatrix &u, size_t offset, size_t total);

/// Explicit R_pi on (C^D)^{(x)t}: output factor j carries input factor perm[j].
ComplexMatrix permutation_operator(uint64_t local_dim, const std::vector<size_t> &perm);
/// (1/t!) sum of permutation_operator over all perms.
ComplexMatrix naive_symmetric_projector(uint64_t local_dim, size_t copies);

/// Average of |v><v|^{(x)t} over the given vectors, by explicit Kronecker products.
ComplexMatrix naive_moment(const std::vector<Eigen::VectorXcd> &states, size_t copies);

/// Half the nuclear norm of a - b via singular values.
double svd_trace_distance(const ComplexMatrix &a, const ComplexMatrix &b);

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
   public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const {
        return path_;
    }
    std::string str() const {
        return path_.string();
    }

   private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path &path);

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

/// Runs the command line in-process; `args` excludes the program name.
CliResult run_cli_capture(const std::vector<std::string> &args);

}  // namespace prslab::testing

#endif
