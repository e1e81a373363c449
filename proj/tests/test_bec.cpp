// Copyright 2026 The qimg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <set>

#include "qimg/bec.hpp"
#include "qimg/corpus.hpp"

using namespace qimg;

namespace {

// image whose bit planes are given minterm sets (plane index -> set of YX)
PixelImage image_from_planes(int n, int q, const std::vector<std::vector<uint32_t>>& planes) {
    PixelImage img = PixelImage::zero(n, q);
    for (size_t bit = 0; bit < planes.size(); ++bit) {
        for (uint32_t yx : planes[bit]) {
            const uint32_t y = yx >> n, x = yx & ((1u << n) - 1);
            img.set(y, x, img.at(y, x) | (1u << bit));
        }
    }
    return img;
}

std::multiset<uint32_t> expand_all(const std::vector<Implicant>& cubes, int bits) {
    std::multiset<uint32_t> out;
    for (const Implicant& im : cubes) {
        for (uint32_t m : expand_implicant(im, bits)) out.insert(m);
    }
    return out;
}

}  // namespace

TEST_SUITE("bec") {

TEST_CASE("minterms {01,10,11} minimize to two implicants") {
    BecStats stats;
    const auto cubes = minimize_plane({0b01, 0b10, 0b11}, 2, 4, &stats);
    REQUIRE(cubes.size() == 2);
    // expansion must reproduce the original set exactly
    CHECK(expand_all(cubes, 2) == std::multiset<uint32_t>{0b01, 0b10, 0b11});
    CHECK(stats.rounds >= 1);
}

TEST_CASE("the full 2x2 plane collapses to one gate with no controls") {
    const auto cubes = minimize_plane({0, 1, 2, 3}, 2, 4, nullptr);
    REQUIRE(cubes.size() == 1);
    CHECK(cubes[0].care_mask == 0);
}

TEST_CASE("a diagonal pair cannot merge") {
    const auto cubes = minimize_plane({0b00, 0b11}, 2, 4, nullptr);
    CHECK(cubes.size() == 2);
}

TEST_CASE("the four-pixel arrangement with 10 set bits compresses from 10 to 6 gates") {
    // plane 7 holds {01,10,11} (the merge discussed for C^7), plane 6 the
    // full square, plane 5 a diagonal pair, plane 4 a singleton
    PixelImage img = PixelImage::zero(1, 8);
    img.set(0, 0, 96);
    img.set(0, 1, 192);
    img.set(1, 0, 208);
    img.set(1, 1, 224);
    REQUIRE(count_one_bits(img) == 10);

    const BecResult res = bec_compress(prepare_uncompressed(img));
    CHECK(res.stats.gates_before == 10);
    CHECK(res.stats.gates_after == 6);
    CHECK(res.circuit.tally().mcx == 6);
    CHECK(bec_cost(res.stats, res.circuit).input_gates == 6);
}

TEST_CASE("semantic equivalence on all 16 exhaustive 2x2 bit planes") {
    for (uint32_t mask = 0; mask < 16; ++mask) {
        std::vector<uint32_t> minterms;
        for (uint32_t m = 0; m < 4; ++m) {
            if (mask & (1u << m)) minterms.push_back(m);
        }
        const PixelImage img = image_from_planes(1, 1, {minterms});
        const Circuit plain = prepare_uncompressed(img);
        const BecResult res = bec_compress(plain);
        CHECK(evaluate(res.circuit, 1, 1, 1).color_of == evaluate(plain, 1, 1, 1).color_of);
    }
}

TEST_CASE("semantic equivalence on sampled 4x4 bit planes") {
    std::mt19937 gen(31);
    for (int t = 0; t < 1500; ++t) {
        std::vector<uint32_t> minterms;
        const uint32_t mask = gen() & 0xFFFF;
        for (uint32_t m = 0; m < 16; ++m) {
            if (mask & (1u << m)) minterms.push_back(m);
        }
        const PixelImage img = image_from_planes(2, 1, {minterms});
        const Circuit plain = prepare_uncompressed(img);
        const BecResult res = bec_compress(plain);
        REQUIRE(evaluate(res.circuit, 2, 2, 1).color_of == evaluate(plain, 2, 2, 1).color_of);
        REQUIRE(res.stats.gates_after <= res.stats.gates_before);
    }
}

TEST_CASE("semantic equivalence on random 16x16 images") {
    for (uint64_t seed = 200; seed < 220; ++seed) {
        const PixelImage img = random_image(4, 8, seed);
        const Circuit plain = prepare_uncompressed(img);
        const BecResult res = bec_compress(plain);
        REQUIRE(evaluate(res.circuit, 4, 4, 8).color_of == evaluate(plain, 4, 4, 8).color_of);
    }
}

TEST_CASE("expansion of the output reproduces the input minterms exactly and disjointly") {
    std::mt19937 gen(32);
    for (int t = 0; t < 200; ++t) {
        std::vector<uint32_t> minterms;
        const uint32_t mask = gen() & 0xFFFF;
        for (uint32_t m = 0; m < 16; ++m) {
            if (mask & (1u << m)) minterms.push_back(m);
        }
        const auto cubes = minimize_plane(minterms, 4, 8, nullptr);
        const auto expanded = expand_all(cubes, 4);
        // multiset equality doubles as the disjointness check
        CHECK(expanded == std::multiset<uint32_t>(minterms.begin(), minterms.end()));
    }
}

TEST_CASE("compression is idempotent at the fixed point") {
    std::mt19937 gen(33);
    for (int t = 0; t < 30; ++t) {
        const PixelImage img = random_image(2, 8, gen());
        const BecResult once = bec_compress(prepare_uncompressed(img));
        const BecResult twice = bec_compress(once.circuit);
        CHECK(twice.stats.gates_after == once.stats.gates_after);
        CHECK(twice.circuit.serialize() == once.circuit.serialize());
    }
}

TEST_CASE("comparison count respects the preprocessing bound") {
    for (uint64_t seed = 300; seed < 310; ++seed) {
        const PixelImage img = random_image(2, 8, seed);
        const BecResult res = bec_compress(prepare_uncompressed(img));
        // bound: 2n * q * 2^(4n)
        CHECK(res.stats.comparison_bound == 4ull * 8 * 256);
        CHECK(res.stats.comparisons <= res.stats.comparison_bound);
        CHECK(res.stats.rounds <= res.stats.round_limit);
    }
}

TEST_CASE("all-zero image: no gates, no comparisons") {
    const BecResult res = bec_compress(prepare_uncompressed(PixelImage::zero(3, 8)));
    CHECK(res.stats.gates_before == 0);
    CHECK(res.stats.gates_after == 0);
    CHECK(res.stats.comparisons == 0);
    CHECK(res.circuit.tally().hadamard == 6);
}

TEST_CASE("constant image planes collapse completely") {
    PixelImage img = PixelImage::zero(2, 8);
    for (auto& p : img.pixels) p = 0b10100101;
    const BecResult res = bec_compress(prepare_uncompressed(img));
    // each of the 4 set planes collapses to a single zero-control gate
    CHECK(res.stats.gates_after == 4);
}

TEST_CASE("non-preparation circuits are rejected") {
    Circuit c(4);
    c.add(HGate{0});
    c.add(MulerGate{{0, 1}, {1, 1}, {2, 2}, {}});
    CHECK_THROWS_AS(bec_compress(c), std::invalid_argument);

    Circuit c2(4);
    c2.add(HGate{0});
    c2.add(McxGate{{{2, true}}, 3});  // control off the Hadamard register
    CHECK_THROWS_AS(bec_compress(c2), std::invalid_argument);
}

}  // TEST_SUITE
