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

#include "prslab/budget.h"

#include <cstdlib>
#include <limits>
#include <sstream>

namespace prslab {

namespace {

std::string budget_message(std::string_view what, uint64_t required, uint64_t available, std::string_view unit) {
    std::ostringstream out;
    out << what << " needs " << required << " " << unit << " but only " << available << " " << unit
        << " are available";
    return out.str();
}

}  // namespace

BudgetError::BudgetError(std::string_view what, uint64_t required, uint64_t available, std::string_view unit)
    : std::runtime_error(budget_message(what, required, available, unit)), required_(required), available_(available) {
}

DimensionError::DimensionError(const std::string &message, size_t offending_index)
    : std::invalid_argument(message), offending_index_(offending_index) {
}

MemoryBudget MemoryBudget::from_bytes(uint64_t bytes) {
    return MemoryBudget(bytes);
}

MemoryBudget MemoryBudget::from_mib(uint64_t mib) {
    return MemoryBudget(saturating_mul(mib, uint64_t{1} << 20));
}

MemoryBudget MemoryBudget::from_environment() {
    const char *value = std::getenv("PRS_LAB_BUDGET_MIB");
    if (value == nullptr || *value == '\0') {
        return MemoryBudget();
    }
    char *end = nullptr;
    unsigned long long mib = std::strtoull(value, &end, 10);
    if (end == value || *end != '\0' || mib == 0) {
        throw std::invalid_argument("PRS_LAB_BUDGET_MIB must be a positive integer, got '" + std::string(value) + "'");
    }
    return from_mib(mib);
}

void MemoryBudget::require(uint64_t bytes, std::string_view what) const {
    if (bytes > bytes_) {
        throw BudgetError(what, bytes, bytes_);
    }
}

uint64_t saturating_mul(uint64_t a, uint64_t b) {
    if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a) {
        return std::numeric_limits<uint64_t>::max();
    }
    return a * b;
}

uint64_t saturating_pow(uint64_t base, uint64_t exponent) {
    uint64_t result = 1;
    for (uint64_t k = 0; k < exponent; k++) {
        result = saturating_mul(result, base);
        if (result == std::numeric_limits<uint64_t>::max()) {
            break;
        }
    }
    return result;
}

uint64_t complex_vector_bytes(uint64_t dim) {
    return saturating_mul(dim, 16);
}

uint64_t complex_matrix_bytes(uint64_t dim) {
    return saturating_mul(saturating_mul(dim, dim), 16);
}

}  // namespace prslab
