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

#ifndef PRSLAB_BOOLFN_H
#define PRSLAB_BOOLFN_H

#include <array>
#include <cstdint>
#include <iterator>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prslab/budget.h"

namespace prslab {

/// Packed bit string of fixed length. Bit 0 is the first character of to_string().
class BitVector {
   public:
    explicit BitVector(size_t size = 0);

    size_t size() const {
        return size_;
    }
    bool get(size_t index) const;
    void set(size_t index, bool value);
    bool is_zero() const;
    size_t popcount() const;

    BitVector &operator^=(const BitVector &other);
    friend BitVector operator^(BitVector a, const BitVector &b) {
        a ^= b;
        return a;
    }
    bool operator==(const BitVector &other) const = default;

    /// '0'/'1' characters, index 0 first.
    std::string to_string() const;
    size_t hash() const;

   private:
    size_t size_;
    std::vector<uint64_t> words_;
};

/// e_x: the length-2^n indicator vector with a single one at position x.
BitVector indicator(size_t n, uint64_t x);

/// Truth table of f : {0,1}^n -> Z_m. Entry x is f(x), with x read under the
/// project-wide convention (first bit most significant).
class BooleanFunction {
   public:
    BooleanFunction(size_t input_bits, uint64_t modulus, std::vector<uint64_t> table);
    static BooleanFunction constant(size_t input_bits, uint64_t modulus, uint64_t value = 0);
    /// Inverse of to_hex().
    static BooleanFunction from_hex(size_t input_bits, uint64_t modulus, std::string_view hex);

    size_t input_bits() const {
        return input_bits_;
    }
    uint64_t modulus() const {
        return modulus_;
    }
    uint64_t domain_size() const {
        return table_.size();
    }
    const std::vector<uint64_t> &table() const {
        return table_;
    }
    uint64_t operator()(uint64_t x) const {
        return table_[x];
    }

    /// Entries packed with log2(m) bits each, table[0] first, most significant
    /// bit first, zero padded to a whole number of hex digits.
    std::string to_hex() const;

    bool operator==(const BooleanFunction &other) const = default;

   private:
    size_t input_bits_;
    uint64_t modulus_;
    std::vector<uint64_t> table_;
};

/// The table as a length-2^n bit vector. Requires m == 2.
BitVector as_indicator_vector(const BooleanFunction &f);

/// All m^(2^n) functions in lexicographic order of their tables (table[0]
/// is the most significant digit).
class FunctionSpace {
   public:
    FunctionSpace(size_t input_bits, uint64_t modulus);

    size_t input_bits() const {
        return input_bits_;
    }
    uint64_t modulus() const {
        return modulus_;
    }
    /// Saturates at UINT64_MAX.
    uint64_t size() const {
        return size_;
    }
    BooleanFunction at(uint64_t index) const;

    class iterator {
       public:
        using iterator_category = std::input_iterator_tag;
        using value_type = BooleanFunction;
        using difference_type = std::ptrdiff_t;
        using pointer = const BooleanFunction *;
        using reference = const BooleanFunction &;

        iterator(const FunctionSpace *space, uint64_t index);
        reference operator*() const {
            return current_;
        }
        pointer operator->() const {
            return &current_;
        }
        iterator &operator++();
        bool operator==(const iterator &other) const {
            return index_ == other.index_;
        }

       private:
        const FunctionSpace *space_;
        uint64_t index_;
        BooleanFunction current_;
    };

    iterator begin() const;
    iterator end() const;

   private:
    size_t input_bits_;
    uint64_t modulus_;
    uint64_t size_;
};

inline constexpr uint64_t kDefaultEnumerationLimit = uint64_t{1} << 24;

/// Throws BudgetError (unit "functions") if m^(2^n) exceeds `limit`.
FunctionSpace enumerate_all(size_t n, uint64_t m, uint64_t limit = kDefaultEnumerationLimit);

class PrfKey {
   public:
    static constexpr size_t kKeyBytes = 16;
    using Bytes = std::array<uint8_t, kKeyBytes>;

    PrfKey(Bytes bytes, std::string label);
    /// Deterministic key number `index` of a seeded key stream.
    static PrfKey derive(uint64_t seed, uint64_t index, std::string label = "prs");
    static PrfKey from_hex(std::string_view hex, std::string label = "prs");

    const Bytes &bytes() const {
        return bytes_;
    }
    const std::string &label() const {
        return label_;
    }
    std::string to_hex() const;

   private:
    Bytes bytes_;
    std::string label_;
};

/// First 8 bytes (big endian) of SHA-256(len(label) || label || key || x), mod m.
/// m must be a power of two; x must have at most n bits.
uint64_t prf_eval(const PrfKey &key, size_t n, uint64_t m, uint64_t x);

inline constexpr size_t kMaxPrfTableBits = 20;
BooleanFunction prf_truth_table(const PrfKey &key, size_t n, uint64_t m);

uint64_t splitmix64(uint64_t x);

/// A uniformly random table drawn from a 64-bit generator seeded with `seed`.
/// m must be a power of two.
BooleanFunction sample_uniform(size_t n, uint64_t m, uint64_t seed);

struct ExhaustiveSpace {
    bool operator==(const ExhaustiveSpace &) const = default;
};
struct PrfKeySpace {
    uint64_t count;
    uint64_t seed;
    bool operator==(const PrfKeySpace &) const = default;
};
struct UniformSampleSpace {
    uint64_t count;
    uint64_t seed;
    bool operator==(const UniformSampleSpace &) const = default;
};
using FunctionSpaceSpec = std::variant<ExhaustiveSpace, PrfKeySpace, UniformSampleSpace>;

std::string describe(const FunctionSpaceSpec &spec);
/// "exhaustive", "prf", or "uniform".
std::string space_name(const FunctionSpaceSpec &spec);
/// Seed of a sampled space, 0 for the exhaustive one.
uint64_t space_seed(const FunctionSpaceSpec &spec);

/// Random access to the functions of a space for a fixed (n, m).
class FunctionSource {
   public:
    FunctionSource(FunctionSpaceSpec spec, size_t n, uint64_t m, uint64_t enumeration_limit = kDefaultEnumerationLimit);

    uint64_t count() const {
        return count_;
    }
    BooleanFunction at(uint64_t index) const;
    const FunctionSpaceSpec &spec() const {
        return spec_;
    }
    bool is_exhaustive() const {
        return std::holds_alternative<ExhaustiveSpace>(spec_);
    }

   private:
    FunctionSpaceSpec spec_;
    size_t n_;
    uint64_t m_;
    uint64_t count_;
};

}  // namespace prslab

#endif
