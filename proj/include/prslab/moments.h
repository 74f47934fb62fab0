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

#ifndef PRSLAB_MOMENTS_H
#define PRSLAB_MOMENTS_H

#include <cstdint>
#include <optional>
#include <string>

#include "prslab/boolfn.h"
#include "prslab/corelin.h"
#include "prslab/expand.h"
#include "prslab/prsgen.h"

namespace prslab {

enum class MomentSource {
    kPlainPrs,
    kConstruction1,
    kConstruction2,
    kConstruction3,
};

/// "plain", "construction1", "construction2", "construction3".
std::string to_string(MomentSource source);
MomentSource parse_moment_source(std::string_view text);

struct MomentSpec {
    MomentSource source = MomentSource::kPlainPrs;
    size_t n = 1;
    /// Added qubits for construction 1, number of blocks l for construction 3,
    /// ignored otherwise.
    size_t i = 0;
    size_t t = 1;
    PrsKind kind = PrsKind::kBinaryPhase;
    FunctionSpaceSpec space = ExhaustiveSpace{};
    /// Apply the construction's final Fourier layer.
    bool final_layer = true;
};

/// Qubits of one ensemble member.
size_t output_qubits(const MomentSpec &spec);
/// Independent functions keying one ensemble member.
size_t functions_per_member(const MomentSpec &spec);

enum class MomentMethod {
    kBruteForce,
    kDeltaPairing,
    kMonteCarlo,
};

/// "bruteforce", "deltapair", "montecarlo".
std::string to_string(MomentMethod method);
MomentMethod parse_moment_method(std::string_view text);

struct MomentOptions {
    MemoryBudget budget = MemoryBudget::from_environment();
    uint64_t enumeration_limit = kDefaultEnumerationLimit;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
    /// Batches for the Monte Carlo standard error.
    size_t batches = 16;
};

/// The states whose t-th moment is averaged. Exhaustive spaces for
/// multi-function sources range over every tuple of functions; sampled spaces
/// assign functions k*b .. k*b+b-1 of the underlying stream to member k.
class Ensemble {
   public:
    Ensemble(const MomentSpec &spec, uint64_t enumeration_limit = kDefaultEnumerationLimit);

    uint64_t size() const {
        return size_;
    }
    std::vector<BooleanFunction> functions(uint64_t member) const;
    PureState state(uint64_t member, const MemoryBudget &budget = MemoryBudget()) const;

   private:
    MomentSpec spec_;
    FunctionSource source_;
    uint64_t per_member_;
    uint64_t size_;
};

/// Average of |psi><psi|^{(x)t} over the ensemble, by simulating every member.
DensityOperator ensemble_moment_bruteforce(const MomentSpec &spec, const MomentOptions &options = {});

/// Exact all-functions average for binary plain PRS and construction 1,
/// computed by grouping branch tuples on their combined XOR vector instead of
/// enumerating functions. Requires n <= 6.
DensityOperator ensemble_moment_deltapair(const MomentSpec &spec, const MomentOptions &options = {});

/// Pi_sym / C(D+t-1, t).
DensityOperator haar_moment(uint64_t local_dim, size_t copies, const MemoryBudget &budget = MemoryBudget());

/// Empirical average of |v><v|^{(x)t} over normalized complex Gaussian vectors v.
DensityOperator haar_moment_monte_carlo(
    uint64_t local_dim, size_t copies, uint64_t samples, uint64_t seed, const MemoryBudget &budget = MemoryBudget());

/// Trace distance between a t-copy moment on (C^D)^{(x)t} and the Haar moment.
/// Evaluated on the symmetric subspace when the moment lives there.
double haar_distance(const DensityOperator &moment, uint64_t local_dim, size_t copies);

struct MomentReport {
    MomentSpec spec;
    MomentMethod method = MomentMethod::kBruteForce;
    DensityOperator moment;
    double haar_distance = 0;
    int64_t runtime_ms = 0;
    uint64_t seed = 0;
    /// Batch standard error of haar_distance (Monte Carlo only).
    std::optional<double> standard_error;
};

/// Moment and Haar distance over a sampled space, split into
/// options.batches batches for a standard error of the distance.
MomentReport monte_carlo_moment(const MomentSpec &spec, const MomentOptions &options = {});

MomentReport compare_to_haar(const MomentSpec &spec, MomentMethod method, const MomentOptions &options = {});

}  // namespace prslab

#endif
