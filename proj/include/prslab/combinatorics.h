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

#ifndef PRSLAB_COMBINATORICS_H
#define PRSLAB_COMBINATORICS_H

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace prslab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned k);
/// Decimal string; rationals as "p/q" or "p" when integral.
std::string to_string(const BigInt &v);
std::string to_string(const Rational &v);

/// A t-tuple of bit strings with its collision structure.
struct TupleClass {
    size_t t;
    std::vector<uint64_t> elements;
    /// Positions whose element occurs nowhere else in the tuple.
    std::vector<size_t> unique_indices;
    /// Number of distinct elements k.
    size_t distinct_count;
    /// Multiplicity of each distinct element, in order of first occurrence.
    std::vector<size_t> class_sizes;

    static TupleClass of(std::vector<uint64_t> elements);
    bool all_distinct() const {
        return distinct_count == t;
    }
};

/// Number of t-tuples of distinct n-bit strings, 2^n (2^n - 1) ... (2^n - t + 1).
/// Verifies the lower bound 2^{nt}(1 - t^2/2^n) before returning.
BigInt dist_count(size_t n, size_t t);
Rational dist_lower_bound(size_t n, size_t t);

inline constexpr size_t kMaxPermutationCopies = 8;

/// ||(1/sqrt(t!)) sum_pi R_pi |a_1 ... a_t>||^2 by enumerating permutations and
/// grouping equal images. Verifies the bound (t-k+1)! before returning.
Rational perm_state_norm_sq(std::span<const uint64_t> elements);
/// The same norm from the collision classes: product of |S_i|!.
BigInt perm_state_norm_sq_by_classes(std::span<const uint64_t> elements);
/// (t-k+1)! for k distinct elements.
BigInt perm_state_norm_bound(std::span<const uint64_t> elements);
/// The same norm from an explicit state vector on t registers of
/// `register_bits` qubits each, built with register permutation layers.
double perm_state_norm_sq_dense(std::span<const uint64_t> elements, size_t register_bits);

/// (x''_1..x''_t, y_{1,>}..y_{t,>}) are 2t distinct (n-i)-bit strings, where
/// y_{j,>} is the last n-i bits of y_j. x' only fixes the shape.
bool in_dist_set(
    std::span<const uint64_t> x_prime,
    std::span<const uint64_t> x_double_prime,
    std::span<const uint64_t> y,
    size_t n,
    size_t i);

/// y has (n-2i)-bit suffix different from its (n-2i)-bit prefix. Needs n >= 2i+1.
bool in_g(uint64_t y, size_t n, size_t i);

/// The first n-i bits of every y_j are pairwise distinct and every y_j is in G.
/// Needs n >= 2i+1.
bool in_good_set(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i);

class NotGoodError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the collection admits more than one recombination.
class AmbiguousRecombinationError : public std::runtime_error {
   public:
    AmbiguousRecombinationError(const std::string &message, std::vector<std::vector<uint64_t>> candidates)
        : std::runtime_error(message), candidates_(std::move(candidates)) {
    }
    const std::vector<std::vector<uint64_t>> &candidates() const {
        return candidates_;
    }

   private:
    std::vector<std::vector<uint64_t>> candidates_;
};

/// The 2t n-bit strings {x'_j y'_j, y_j} as a sorted multiset.
std::vector<uint64_t> good_collection(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i);

/// Every way to read a sorted 2t-element collection as {x'_j y'_j, y_j} with
/// the y_j in G and distinct prefixes, each returned as the sorted set of
/// (i+n)-bit strings x'_j y_j.
std::vector<std::vector<uint64_t>> decode_collection(std::span<const uint64_t> collection, size_t n, size_t i);

struct Recombination {
    /// Sorted collection {x'_j y'_j, y_j}.
    std::vector<uint64_t> collection;
    /// For each j: (position of x'_j y'_j, position of y_j) in `collection`.
    std::vector<std::pair<size_t, size_t>> matching;
    /// Sorted {x'_j y_j}.
    std::vector<uint64_t> recombined;
};

/// Classifies the collection built from (x', y) using the collection alone and
/// pairs it into {x'_j y_j}. Throws NotGoodError outside Good and
/// AmbiguousRecombinationError when the classification is not unique.
Recombination recombine(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i);

struct GoodCensus {
    size_t n;
    size_t i;
    size_t t;
    /// Exhaustive count of (x', x'', y) in the Dist set.
    BigInt dist_members;
    /// 2^{2it} |Dist(n-i; 2t)|.
    BigInt dist_formula;
    BigInt good_members;
    /// 2^{(i+n)t} (1 - t^2/2^{n-i} - t/2^{n-i}).
    Rational bound;
    /// good_members - bound.
    Rational slack;
    uint64_t roundtrip_ok = 0;
    uint64_t ambiguous = 0;
    uint64_t wrong_decode = 0;
    uint64_t non_good_total = 0;
    uint64_t non_good_rejected = 0;
    struct Failure {
        std::vector<uint64_t> x_prime;
        std::vector<uint64_t> y;
        std::string reason;
        std::vector<std::vector<uint64_t>> candidates;
    };
    /// Up to max_failures recombination failures, in scan order.
    std::vector<Failure> failures;

    bool recombination_complete() const {
        return ambiguous == 0 && wrong_decode == 0 && non_good_rejected == non_good_total;
    }
};

/// Exhaustive scan of all (x', y) (and (x', x'', y) for Dist) at the given shape.
GoodCensus good_census(size_t n, size_t i, size_t t, size_t max_failures = 64);

/// n, i, t, |Dist|, |Good|, bound, slack
std::vector<std::string> census_csv_columns();
std::vector<std::string> census_csv_fields(const GoodCensus &census);
nlohmann::ordered_json to_json(const GoodCensus &census);

}  // namespace prslab

#endif
