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

#ifndef PRSLAB_BUDGET_H
#define PRSLAB_BUDGET_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prslab {

/// Raised when an operation would need more memory (or more enumerated items)
/// than it has been allowed. The message carries both sizes.
class BudgetError : public std::runtime_error {
   public:
    BudgetError(std::string_view what, uint64_t required, uint64_t available, std::string_view unit = "bytes");

    uint64_t required() const {
        return required_;
    }
    uint64_t available() const {
        return available_;
    }

   private:
    uint64_t required_;
    uint64_t available_;
};

/// Raised when a qubit index or register shape does not fit the state it is applied to.
class DimensionError : public std::invalid_argument {
   public:
    DimensionError(const std::string &message, size_t offending_index);

    size_t offending_index() const {
        return offending_index_;
    }

   private:
    size_t offending_index_;
};

class MemoryBudget {
   public:
    static constexpr uint64_t kDefaultMiB = 2048;

    MemoryBudget() : bytes_(kDefaultMiB << 20) {
    }
    static MemoryBudget from_bytes(uint64_t bytes);
    static MemoryBudget from_mib(uint64_t mib);
    /// The default budget, unless PRS_LAB_BUDGET_MIB is set in the environment.
    static MemoryBudget from_environment();

    uint64_t bytes() const {
        return bytes_;
    }

    /// Throws BudgetError if `bytes` exceeds the budget.
    void require(uint64_t bytes, std::string_view what) const;

   private:
    explicit MemoryBudget(uint64_t bytes) : bytes_(bytes) {
    }
    uint64_t bytes_;
};

// Saturating size arithmetic; everything above 2^64 is "too big" anyway.
uint64_t saturating_mul(uint64_t a, uint64_t b);
uint64_t saturating_pow(uint64_t base, uint64_t exponent);

/// Bytes occupied by a dense complex vector of `dim` entries.
uint64_t complex_vector_bytes(uint64_t dim);
/// Bytes occupied by a dense complex `dim` x `dim` matrix.
uint64_t complex_matrix_bytes(uint64_t dim);

}  // namespace prslab

#endif
