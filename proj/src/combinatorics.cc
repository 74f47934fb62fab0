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

#include "prslab/combinatorics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "prslab/corelin.h"

namespace prslab {

namespace {

void require_shape(size_t expected, size_t got, const char *name) {
    if (expected != got) {
        std::ostringstream msg;
        msg << name << " has " << got << " entries, expected " << expected;
        throw std::invalid_argument(msg.str());
    }
}

void require_bits(std::span<const uint64_t> values, size_t bits, const char *name) {
    for (uint64_t v : values) {
        if (bits < 64 && (v >> bits) != 0) {
            std::ostringstream msg;
            msg << name << " entry " << v << " does not fit in " << bits << " bits";
            throw std::invalid_argument(msg.str());
        }
    }
}

void require_good_regime(size_t n, size_t i) {
    if (i == 0 || n < 2 * i + 1) {
        std::ostringstream msg;
        msg << "the G condition needs i >= 1 and n >= 2i+1, got n=" << n << ", i=" << i;
        throw std::invalid_argument(msg.str());
    }
}

BigInt pow2(size_t k) {
    return BigInt(1) << k;
}

uint64_t low_mask(size_t bits) {
    return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
}

/// Advances a t-digit counter in base 2^bits; false once it wraps to zero.
bool next_tuple(std::vector<uint64_t> &digits, size_t bits) {
    for (size_t k = digits.size(); k-- > 0;) {
        if (++digits[k] < (uint64_t{1} << bits)) {
            return true;
        }
        digits[k] = 0;
    }
    return false;
}

}  // namespace

BigInt factorial(unsigned k) {
    BigInt r = 1;
    for (unsigned j = 2; j <= k; j++) {
        r *= j;
    }
    return r;
}

std::string to_string(const BigInt &v) {
    return v.str();
}

std::string to_string(const Rational &v) {
    if (boost::multiprecision::denominator(v) == 1) {
        return boost::multiprecision::numerator(v).str();
    }
    return boost::multiprecision::numerator(v).str() + "/" + boost::multiprecision::denominator(v).str();
}

TupleClass TupleClass::of(std::vector<uint64_t> elements) {
    TupleClass c;
    c.t = elements.size();
    std::vector<uint64_t> order;
    std::map<uint64_t, size_t> counts;
    for (uint64_t e : elements) {
        if (counts[e]++ == 0) {
            order.push_back(e);
        }
    }
    for (size_t k = 0; k < elements.size(); k++) {
        if (counts[elements[k]] == 1) {
            c.unique_indices.push_back(k);
        }
    }
    for (uint64_t e : order) {
        c.class_sizes.push_back(counts[e]);
    }
    c.distinct_count = order.size();
    c.elements = std::move(elements);
    return c;
}

// ---------------------------------------------------------------------------
// Dist and permutation states

Rational dist_lower_bound(size_t n, size_t t) {
    return Rational(pow2(n * t)) * (Rational(1) - Rational(BigInt(t) * t, pow2(n)));
}

BigInt dist_count(size_t n, size_t t) {
    BigInt space = pow2(n);
    BigInt count = 1;
    for (size_t k = 0; k < t; k++) {
        if (space <= k) {
            count = 0;
            break;
        }
        count *= space - k;
    }
    if (Rational(count) < dist_lower_bound(n, t)) {
        throw std::logic_error("|Dist(" + std::to_string(n) + ";" + std::to_string(t) + ")| = " + count.str() +
                               " is below its lower bound");
    }
    return count;
}

Rational perm_state_norm_sq(std::span<const uint64_t> elements) {
    size_t t = elements.size();
    if (t == 0 || t > kMaxPermutationCopies) {
        throw std::invalid_argument(
            "permutation states are enumerated for 1 <= t <= " + std::to_string(kMaxPermutationCopies));
    }
    std::vector<size_t> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    std::map<std::vector<uint64_t>, uint64_t> images;
    std::vector<uint64_t> image(t);
    do {
        for (size_t k = 0; k < t; k++) {
            image[k] = elements[perm[k]];
        }
        images[image]++;
    } while (std::next_permutation(perm.begin(), perm.end()));
    BigInt sum = 0;
    for (const auto &[img, count] : images) {
        sum += BigInt(count) * count;
    }
    Rational norm(sum, factorial(static_cast<unsigned>(t)));
    if (norm > Rational(perm_state_norm_bound(elements))) {
        throw std::logic_error("permutation state norm " + to_string(norm) + " exceeds (t-k+1)!");
    }
    return norm;
}

BigInt perm_state_norm_sq_by_classes(std::span<const uint64_t> elements) {
    TupleClass c = TupleClass::of(std::vector<uint64_t>(elements.begin(), elements.end()));
    BigInt r = 1;
    for (size_t s : c.class_sizes) {
        r *= factorial(static_cast<unsigned>(s));
    }
    return r;
}

BigInt perm_state_norm_bound(std::span<const uint64_t> elements) {
    TupleClass c = TupleClass::of(std::vector<uint64_t>(elements.begin(), elements.end()));
    return factorial(static_cast<unsigned>(c.t - c.distinct_count + 1));
}

double perm_state_norm_sq_dense(std::span<const uint64_t> elements, size_t register_bits) {
    size_t t = elements.size();
    if (t == 0 || t > 4 || register_bits == 0 || register_bits * t > 16) {
        throw std::invalid_argument("dense permutation states are limited to t <= 4 and 16 qubits");
    }
    require_bits(elements, register_bits, "element");
    uint64_t index = 0;
    for (uint64_t e : elements) {
        index = (index << register_bits) | e;
    }
    size_t q = register_bits * t;
    PureState base = PureState::basis(q, index);
    std::vector<Complex> sum(uint64_t{1} << q);
    std::vector<size_t> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0;
    do {
        PureState moved = apply_layer(base, UnitaryLayer::register_permutation(0, register_bits, perm));
        for (uint64_t k = 0; k < sum.size(); k++) {
            sum[k] += moved[k];
        }
        count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    double norm = 0;
    for (const Complex &a : sum) {
        norm += std::norm(a);
    }
    return norm / count;
}

// ---------------------------------------------------------------------------
// Dist and Good sets

bool in_dist_set(
    std::span<const uint64_t> x_prime,
    std::span<const uint64_t> x_double_prime,
    std::span<const uint64_t> y,
    size_t n,
    size_t i) {
    if (i >= n) {
        throw std::invalid_argument("Dist set needs i < n");
    }
    size_t t = y.size();
    require_shape(t, x_prime.size(), "x'");
    require_shape(t, x_double_prime.size(), "x''");
    require_bits(x_prime, i, "x'");
    require_bits(x_double_prime, n - i, "x''");
    require_bits(y, n, "y");
    uint64_t tail = low_mask(n - i);
    std::vector<uint64_t> all(x_double_prime.begin(), x_double_prime.end());
    for (uint64_t v : y) {
        all.push_back(v & tail);
    }
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

bool in_g(uint64_t y, size_t n, size_t i) {
    require_good_regime(n, i);
    size_t width = n - 2 * i;
    return (y & low_mask(width)) != (y >> (2 * i));
}

bool in_good_set(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i) {
    require_good_regime(n, i);
    require_shape(y.size(), x_prime.size(), "x'");
    require_bits(x_prime, i, "x'");
    require_bits(y, n, "y");
    std::vector<uint64_t> prefixes;
    for (uint64_t v : y) {
        if (!in_g(v, n, i)) {
            return false;
        }
        prefixes.push_back(v >> i);
    }
    std::sort(prefixes.begin(), prefixes.end());
    return std::adjacent_find(prefixes.begin(), prefixes.end()) == prefixes.end();
}

std::vector<uint64_t> good_collection(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i) {
    require_shape(y.size(), x_prime.size(), "x'");
    std::vector<uint64_t> out;
    for (size_t j = 0; j < y.size(); j++) {
        out.push_back((x_prime[j] << (n - i)) | (y[j] >> i));
        out.push_back(y[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Decoding {
    std::vector<uint64_t> recombined;
    std::vector<std::pair<size_t, size_t>> matching;
};

std::vector<Decoding> decode_all(std::span<const uint64_t> collection, size_t n, size_t i) {
    require_good_regime(n, i);
    if (collection.size() % 2 != 0) {
        throw std::invalid_argument("collection must have an even number of elements");
    }
    size_t size = collection.size();
    size_t t = size / 2;
    uint64_t tail = low_mask(n - i);
    std::vector<Decoding> found;

    std::vector<bool> pick(size, false);
    std::fill(pick.begin(), pick.begin() + t, true);
    do {
        std::vector<size_t> zs;
        std::vector<size_t> ws;
        for (size_t k = 0; k < size; k++) {
            (pick[k] ? zs : ws).push_back(k);
        }
        bool ok = true;
        std::vector<uint64_t> prefixes;
        for (size_t z : zs) {
            if (!in_g(collection[z], n, i)) {
                ok = false;
                break;
            }
            prefixes.push_back(collection[z] >> i);
        }
        if (!ok) {
            continue;
        }
        std::sort(prefixes.begin(), prefixes.end());
        if (std::adjacent_find(prefixes.begin(), prefixes.end()) != prefixes.end()) {
            continue;
        }
        do {
            bool match = true;
            for (size_t j = 0; j < t && match; j++) {
                match = (collection[ws[j]] & tail) == (collection[zs[j]] >> i);
            }
            if (!match) {
                continue;
            }
            Decoding d;
            for (size_t j = 0; j < t; j++) {
                d.recombined.push_back(((collection[ws[j]] >> (n - i)) << n) | collection[zs[j]]);
                d.matching.emplace_back(ws[j], zs[j]);
            }
            std::sort(d.recombined.begin(), d.recombined.end());
            bool seen = std::any_of(found.begin(), found.end(), [&](const Decoding &e) {
                return e.recombined == d.recombined;
            });
            if (!seen) {
                found.push_back(std::move(d));
            }
        } while (std::next_permutation(ws.begin(), ws.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return found;
}

}  // namespace

std::vector<std::vector<uint64_t>> decode_collection(std::span<const uint64_t> collection, size_t n, size_t i) {
    std::vector<std::vector<uint64_t>> out;
    for (Decoding &d : decode_all(collection, n, i)) {
        out.push_back(std::move(d.recombined));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Recombination recombine(std::span<const uint64_t> x_prime, std::span<const uint64_t> y, size_t n, size_t i) {
    if (!in_good_set(x_prime, y, n, i)) {
        throw NotGoodError("(x', y) is not in the Good set");
    }
    Recombination r;
    r.collection = good_collection(x_prime, y, n, i);
    std::vector<Decoding> found = decode_all(r.collection, n, i);
    if (found.size() != 1) {
        std::vector<std::vector<uint64_t>> candidates;
        for (const Decoding &d : found) {
            candidates.push_back(d.recombined);
        }
        std::sort(candidates.begin(), candidates.end());
        throw AmbiguousRecombinationError(
            "collection admits " + std::to_string(found.size()) + " recombinations", std::move(candidates));
    }
    r.matching = std::move(found[0].matching);
    r.recombined = std::move(found[0].recombined);
    return r;
}

// ---------------------------------------------------------------------------
// Census

GoodCensus good_census(size_t n, size_t i, size_t t, size_t max_failures) {
    require_good_regime(n, i);
    if (t == 0 || (2 * n) * t > 24) {
        throw std::invalid_argument("census is limited to 1 <= t and 2nt <= 24");
    }
    GoodCensus c;
    c.n = n;
    c.i = i;
    c.t = t;
    c.dist_formula = pow2(2 * i * t) * dist_count(n - i, 2 * t);
    c.bound = Rational(pow2((i + n) * t)) *
              (Rational(1) - Rational(BigInt(t) * t, pow2(n - i)) - Rational(BigInt(t), pow2(n - i)));

    std::vector<uint64_t> xp(t, 0);
    do {
        std::vector<uint64_t> xpp(t, 0);
        do {
            std::vector<uint64_t> y(t, 0);
            do {
                if (in_dist_set(xp, xpp, y, n, i)) {
                    c.dist_members++;
                }
            } while (next_tuple(y, n));
        } while (next_tuple(xpp, n - i));
    } while (next_tuple(xp, i));

    std::fill(xp.begin(), xp.end(), 0);
    do {
        std::vector<uint64_t> y(t, 0);
        do {
            bool good = in_good_set(xp, y, n, i);
            if (good) {
                c.good_members++;
                std::vector<uint64_t> truth;
                for (size_t j = 0; j < t; j++) {
                    truth.push_back((xp[j] << n) | y[j]);
                }
                std::sort(truth.begin(), truth.end());
                try {
                    Recombination r = recombine(xp, y, n, i);
                    if (r.recombined == truth) {
                        c.roundtrip_ok++;
                    } else {
                        c.wrong_decode++;
                        if (c.failures.size() < max_failures) {
                            c.failures.push_back({xp, y, "wrong recombination", {r.recombined}});
                        }
                    }
                } catch (const AmbiguousRecombinationError &e) {
                    c.ambiguous++;
                    if (c.failures.size() < max_failures) {
                        c.failures.push_back({xp, y, "ambiguous", e.candidates()});
                    }
                }
            } else {
                c.non_good_total++;
                try {
                    recombine(xp, y, n, i);
                } catch (const NotGoodError &) {
                    c.non_good_rejected++;
                }
            }
        } while (next_tuple(y, n));
    } while (next_tuple(xp, i));

    c.slack = Rational(c.good_members) - c.bound;
    return c;
}

std::vector<std::string> census_csv_columns() {
    return {"n", "i", "t", "|Dist|", "|Good|", "bound", "slack"};
}

std::vector<std::string> census_csv_fields(const GoodCensus &c) {
    return {std::to_string(c.n),   std::to_string(c.i),       std::to_string(c.t),     to_string(c.dist_members),
            to_string(c.good_members), to_string(c.bound), to_string(c.slack)};
}

nlohmann::ordered_json to_json(const GoodCensus &c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["i"] = c.i;
    j["t"] = c.t;
    j["dist_members"] = to_string(c.dist_members);
    j["dist_formula"] = to_string(c.dist_formula);
    j["good_members"] = to_string(c.good_members);
    j["bound"] = to_string(c.bound);
    j["slack"] = to_string(c.slack);
    j["roundtrip_ok"] = c.roundtrip_ok;
    j["ambiguous"] = c.ambiguous;
    j["wrong_decode"] = c.wrong_decode;
    j["non_good_total"] = c.non_good_total;
    j["non_good_rejected"] = c.non_good_rejected;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto &f : c.failures) {
        nlohmann::ordered_json jf;
        jf["x_prime"] = f.x_prime;
        jf["y"] = f.y;
        jf["reason"] = f.reason;
        jf["candidates"] = f.candidates;
        j["failures"].push_back(jf);
    }
    return j;
}

}  // namespace prslab
