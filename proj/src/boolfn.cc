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

#include "prslab/boolfn.h"

#include <bit>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace prslab {

namespace {

bool is_power_of_two(uint64_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

void require_power_of_two(uint64_t m, const char *where) {
    if (!is_power_of_two(m)) {
        throw std::invalid_argument(std::string(where) + ": modulus " + std::to_string(m) + " is not a power of two");
    }
}

void check_input_bits(size_t n) {
    if (n >= 40) {
        throw DimensionError("input width " + std::to_string(n) + " is too large for a truth table", n);
    }
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    return -1;
}

using Digest = std::array<uint8_t, 32>;

Digest sha256(const std::vector<uint8_t> &message) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    Digest out{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), message.data(), message.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
        throw std::runtime_error("SHA-256 evaluation failed");
    }
    return out;
}

void append_u64(std::vector<uint8_t> &buf, uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) {
        buf.push_back(static_cast<uint8_t>(v >> s));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(size_t size) : size_(size), words_((size + 63) / 64, 0) {
}

bool BitVector::get(size_t index) const {
    if (index >= size_) {
        throw std::out_of_range("BitVector index " + std::to_string(index));
    }
    return (words_[index / 64] >> (index % 64)) & 1;
}

void BitVector::set(size_t index, bool value) {
    if (index >= size_) {
        throw std::out_of_range("BitVector index " + std::to_string(index));
    }
    uint64_t bit = uint64_t{1} << (index % 64);
    if (value) {
        words_[index / 64] |= bit;
    } else {
        words_[index / 64] &= ~bit;
    }
}

bool BitVector::is_zero() const {
    for (uint64_t w : words_) {
        if (w) {
            return false;
        }
    }
    return true;
}

size_t BitVector::popcount() const {
    size_t c = 0;
    for (uint64_t w : words_) {
        c += std::popcount(w);
    }
    return c;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector xor: length mismatch");
    }
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (size_t k = 0; k < size_; k++) {
        if (get(k)) {
            s[k] = '1';
        }
    }
    return s;
}

size_t BitVector::hash() const {
    uint64_t h = size_;
    for (uint64_t w : words_) {
        h = splitmix64(h ^ w);
    }
    return static_cast<size_t>(h);
}

BitVector indicator(size_t n, uint64_t x) {
    check_input_bits(n);
    BitVector v(size_t{1} << n);
    v.set(x, true);
    return v;
}

// ---------------------------------------------------------------------------
// BooleanFunction

BooleanFunction::BooleanFunction(size_t input_bits, uint64_t modulus, std::vector<uint64_t> table)
    : input_bits_(input_bits), modulus_(modulus), table_(std::move(table)) {
    check_input_bits(input_bits);
    if (modulus < 2) {
        throw std::invalid_argument("function modulus must be at least 2");
    }
    if (table_.size() != (uint64_t{1} << input_bits)) {
        throw std::invalid_argument(
            "truth table has " + std::to_string(table_.size()) + " entries, expected 2^" + std::to_string(input_bits));
    }
    for (size_t x = 0; x < table_.size(); x++) {
        if (table_[x] >= modulus) {
            throw std::invalid_argument(
                "truth table entry " + std::to_string(x) + " = " + std::to_string(table_[x]) + " is not below " +
                std::to_string(modulus));
        }
    }
}

BooleanFunction BooleanFunction::constant(size_t input_bits, uint64_t modulus, uint64_t value) {
    check_input_bits(input_bits);
    return BooleanFunction(input_bits, modulus, std::vector<uint64_t>(uint64_t{1} << input_bits, value));
}

std::string BooleanFunction::to_hex() const {
    require_power_of_two(modulus_, "to_hex");
    size_t width = std::countr_zero(modulus_);
    std::string out;
    uint32_t acc = 0;
    size_t acc_bits = 0;
    static const char *kDigits = "0123456789abcdef";
    for (uint64_t v : table_) {
        for (size_t b = width; b-- > 0;) {
            acc = (acc << 1) | ((v >> b) & 1);
            if (++acc_bits == 4) {
                out.push_back(kDigits[acc]);
                acc = 0;
                acc_bits = 0;
            }
        }
    }
    if (acc_bits) {
        out.push_back(kDigits[acc << (4 - acc_bits)]);
    }
    return out;
}

BooleanFunction BooleanFunction::from_hex(size_t input_bits, uint64_t modulus, std::string_view hex) {
    check_input_bits(input_bits);
    require_power_of_two(modulus, "from_hex");
    size_t width = std::countr_zero(modulus);
    uint64_t entries = uint64_t{1} << input_bits;
    size_t bits = entries * width;
    if (hex.size() != (bits + 3) / 4) {
        throw std::invalid_argument(
            "hex table has " + std::to_string(hex.size()) + " digits, expected " + std::to_string((bits + 3) / 4));
    }
    std::vector<uint64_t> table(entries, 0);
    for (size_t b = 0; b < bits; b++) {
        int d = hex_value(hex[b / 4]);
        if (d < 0) {
            throw std::invalid_argument("invalid hex digit in truth table");
        }
        uint64_t bit = (d >> (3 - b % 4)) & 1;
        table[b / width] = (table[b / width] << 1) | bit;
    }
    return BooleanFunction(input_bits, modulus, std::move(table));
}

BitVector as_indicator_vector(const BooleanFunction &f) {
    if (f.modulus() != 2) {
        throw std::invalid_argument("indicator vector needs a binary function, got modulus " + std::to_string(f.modulus()));
    }
    BitVector v(f.domain_size());
    for (uint64_t x = 0; x < f.domain_size(); x++) {
        v.set(x, f(x) != 0);
    }
    return v;
}

// ---------------------------------------------------------------------------
// FunctionSpace

FunctionSpace::FunctionSpace(size_t input_bits, uint64_t modulus)
    : input_bits_(input_bits), modulus_(modulus), size_(0) {
    check_input_bits(input_bits);
    if (modulus < 2) {
        throw std::invalid_argument("function modulus must be at least 2");
    }
    size_ = saturating_pow(modulus, uint64_t{1} << input_bits);
}

BooleanFunction FunctionSpace::at(uint64_t index) const {
    if (index >= size_) {
        throw std::out_of_range("function index " + std::to_string(index) + " out of range");
    }
    uint64_t entries = uint64_t{1} << input_bits_;
    std::vector<uint64_t> table(entries);
    for (uint64_t x = entries; x-- > 0;) {
        table[x] = index % modulus_;
        index /= modulus_;
    }
    return BooleanFunction(input_bits_, modulus_, std::move(table));
}

FunctionSpace::iterator::iterator(const FunctionSpace *space, uint64_t index)
    : space_(space),
      index_(index),
      current_(index < space->size() ? space->at(index) : BooleanFunction::constant(space->input_bits(), space->modulus())) {
}

FunctionSpace::iterator &FunctionSpace::iterator::operator++() {
    index_++;
    if (index_ < space_->size()) {
        current_ = space_->at(index_);
    }
    return *this;
}

FunctionSpace::iterator FunctionSpace::begin() const {
    return iterator(this, 0);
}

FunctionSpace::iterator FunctionSpace::end() const {
    return iterator(this, size_);
}

FunctionSpace enumerate_all(size_t n, uint64_t m, uint64_t limit) {
    FunctionSpace space(n, m);
    if (space.size() > limit) {
        throw BudgetError(
            "enumerating all functions {0,1}^" + std::to_string(n) + " -> Z_" + std::to_string(m), space.size(), limit,
            "functions");
    }
    return space;
}

// ---------------------------------------------------------------------------
// PRF

PrfKey::PrfKey(Bytes bytes, std::string label) : bytes_(bytes), label_(std::move(label)) {
}

PrfKey PrfKey::derive(uint64_t seed, uint64_t index, std::string label) {
    static const std::string kDomain = "prslab.keygen";
    std::vector<uint8_t> msg(kDomain.begin(), kDomain.end());
    append_u64(msg, seed);
    append_u64(msg, index);
    Digest d = sha256(msg);
    Bytes b{};
    std::copy(d.begin(), d.begin() + kKeyBytes, b.begin());
    return PrfKey(b, std::move(label));
}

PrfKey PrfKey::from_hex(std::string_view hex, std::string label) {
    if (hex.size() != 2 * kKeyBytes) {
        throw std::invalid_argument("PRF key must be " + std::to_string(2 * kKeyBytes) + " hex digits");
    }
    Bytes b{};
    for (size_t k = 0; k < kKeyBytes; k++) {
        int hi = hex_value(hex[2 * k]);
        int lo = hex_value(hex[2 * k + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("invalid hex digit in PRF key");
        }
        b[k] = static_cast<uint8_t>(hi * 16 + lo);
    }
    return PrfKey(b, std::move(label));
}

std::string PrfKey::to_hex() const {
    static const char *kDigits = "0123456789abcdef";
    std::string s;
    for (uint8_t v : bytes_) {
        s.push_back(kDigits[v >> 4]);
        s.push_back(kDigits[v & 15]);
    }
    return s;
}

uint64_t prf_eval(const PrfKey &key, size_t n, uint64_t m, uint64_t x) {
    require_power_of_two(m, "prf_eval");
    if (n > 63 || (x >> n) != 0) {
        throw std::invalid_argument("prf_eval: input " + std::to_string(x) + " has more than " + std::to_string(n) + " bits");
    }
    std::vector<uint8_t> msg;
    append_u64(msg, key.label().size());
    msg.insert(msg.end(), key.label().begin(), key.label().end());
    msg.insert(msg.end(), key.bytes().begin(), key.bytes().end());
    append_u64(msg, x);
    Digest d = sha256(msg);
    uint64_t v = 0;
    for (size_t k = 0; k < 8; k++) {
        v = (v << 8) | d[k];
    }
    return v & (m - 1);
}

BooleanFunction prf_truth_table(const PrfKey &key, size_t n, uint64_t m) {
    if (n > kMaxPrfTableBits) {
        throw DimensionError("PRF truth tables are limited to " + std::to_string(kMaxPrfTableBits) + " input bits", n);
    }
    std::vector<uint64_t> table(uint64_t{1} << n);
    for (uint64_t x = 0; x < table.size(); x++) {
        table[x] = prf_eval(key, n, m, x);
    }
    return BooleanFunction(n, m, std::move(table));
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

BooleanFunction sample_uniform(size_t n, uint64_t m, uint64_t seed) {
    require_power_of_two(m, "sample_uniform");
    check_input_bits(n);
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> table(uint64_t{1} << n);
    for (uint64_t &v : table) {
        v = rng() & (m - 1);
    }
    return BooleanFunction(n, m, std::move(table));
}

// ---------------------------------------------------------------------------
// Function spaces

std::string space_name(const FunctionSpaceSpec &spec) {
    switch (spec.index()) {
        case 0:
            return "exhaustive";
        case 1:
            return "prf";
        default:
            return "uniform";
    }
}

uint64_t space_seed(const FunctionSpaceSpec &spec) {
    if (auto *p = std::get_if<PrfKeySpace>(&spec)) {
        return p->seed;
    }
    if (auto *u = std::get_if<UniformSampleSpace>(&spec)) {
        return u->seed;
    }
    return 0;
}

std::string describe(const FunctionSpaceSpec &spec) {
    std::ostringstream out;
    if (auto *p = std::get_if<PrfKeySpace>(&spec)) {
        out << "prf(count=" << p->count << ", seed=" << p->seed << ")";
    } else if (auto *u = std::get_if<UniformSampleSpace>(&spec)) {
        out << "uniform(count=" << u->count << ", seed=" << u->seed << ")";
    } else {
        out << "exhaustive";
    }
    return out.str();
}

FunctionSource::FunctionSource(FunctionSpaceSpec spec, size_t n, uint64_t m, uint64_t enumeration_limit)
    : spec_(spec), n_(n), m_(m), count_(0) {
    if (is_exhaustive()) {
        count_ = enumerate_all(n, m, enumeration_limit).size();
    } else {
        require_power_of_two(m, "sampled function space");
        count_ = std::visit(
            [](const auto &s) -> uint64_t {
                if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ExhaustiveSpace>) {
                    return 0;
                } else {
                    return s.count;
                }
            },
            spec_);
        if (count_ == 0) {
            throw std::invalid_argument("sampled function space needs a positive count");
        }
    }
}

BooleanFunction FunctionSource::at(uint64_t index) const {
    if (index >= count_) {
        throw std::out_of_range("function index " + std::to_string(index) + " out of range");
    }
    if (auto *p = std::get_if<PrfKeySpace>(&spec_)) {
        return prf_truth_table(PrfKey::derive(p->seed, index), n_, m_);
    }
    if (auto *u = std::get_if<UniformSampleSpace>(&spec_)) {
        return sample_uniform(n_, m_, splitmix64(u->seed + index));
    }
    return FunctionSpace(n_, m_).at(index);
}

}  // namespace prslab
