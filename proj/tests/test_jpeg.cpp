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

#include <cmath>
#include <random>

#include "qimg/jpeg.hpp"

using namespace qimg;

namespace {

constexpr double kPi = 3.14159265358979323846;

double oracle_scale(int u) { return u == 0 ? 1.0 / (2.0 * std::sqrt(2.0)) : 0.5; }

// straight four-loop transcription, independent of the separable implementation
DctBlock naive_dct(const Block8& f) {
    DctBlock out;
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    s += f.at(i, j) * std::cos((i + 0.5) * kPi * u / 8.0) *
                         std::cos((j + 0.5) * kPi * v / 8.0);
                }
            }
            out.at(u, v) = oracle_scale(u) * oracle_scale(v) * s;
        }
    }
    return out;
}

Block8 random_block(std::mt19937& gen, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Block8 b;
    for (auto& v : b.values) v = double(dist(gen));
    return b;
}

}  // namespace

TEST_SUITE("jpeg") {

TEST_CASE("standard luminance quantization table") {
    const QuantMatrix& qm = QuantMatrix::standard_luminance();
    CHECK(qm.at(0, 0) == 16);
    CHECK(qm.at(0, 1) == 11);
    CHECK(qm.at(0, 2) == 10);
    CHECK(qm.at(0, 3) == 16);
    CHECK(qm.at(4, 5) == 109);
    CHECK(qm.at(6, 5) == 121);
    CHECK(qm.at(7, 4) == 112);
    CHECK(qm.at(7, 7) == 99);
    for (int v : qm.values) CHECK(v >= 1);
}

TEST_CASE("dct of the zero block is zero") {
    const DctBlock d = dct_8x8(Block8{});
    for (double c : d.coeffs) CHECK(c == 0.0);
}

TEST_CASE("dct of a constant block is DC-only with F(0,0) = 8c") {
    Block8 b;
    for (auto& v : b.values) v = 37.0;
    const DctBlock d = dct_8x8(b);
    CHECK(d.at(0, 0) == doctest::Approx(8.0 * 37.0).epsilon(1e-12));
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            if (u || v) CHECK(std::abs(d.at(u, v)) < 1e-9);
        }
    }
}

TEST_CASE("dct matches the four-loop oracle to 1e-9") {
    std::mt19937 gen(1);
    for (int t = 0; t < 20; ++t) {
        const Block8 b = random_block(gen);
        const DctBlock fast = dct_8x8(b);
        const DctBlock slow = naive_dct(b);
        for (int k = 0; k < 64; ++k) {
            CHECK(std::abs(fast.coeffs[k] - slow.coeffs[k]) < 1e-9);
        }
    }
}

TEST_CASE("idct inverts dct to 1e-9 on random integer blocks") {
    std::mt19937 gen(2);
    for (int t = 0; t < 50; ++t) {
        const Block8 b = random_block(gen);
        const Block8 back = idct_8x8(dct_8x8(b));
        for (int k = 0; k < 64; ++k) CHECK(std::abs(back.values[k] - b.values[k]) < 1e-9);
    }
}

TEST_CASE("DC-only inverse gives a constant block") {
    DctBlock d;
    d.at(0, 0) = 8.0 * 44.0;
    const Block8 b = idct_8x8(d);
    for (double v : b.values) CHECK(v == doctest::Approx(44.0).epsilon(1e-12));
}

TEST_CASE("single coefficient F(1,0)=1 inverts to the closed form") {
    DctBlock d;
    d.at(1, 0) = 1.0;
    const Block8 b = idct_8x8(d);
    for (int i = 0; i < 8; ++i) {
        const double expected =
            (1.0 / (2.0 * 2.0 * std::sqrt(2.0))) * std::cos((i + 0.5) * kPi / 8.0);
        for (int j = 0; j < 8; ++j) {
            CHECK(b.at(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("DC magnitude bound |F(0,0)| <= 8*(2^q-1)") {
    std::mt19937 gen(3);
    for (int t = 0; t < 20; ++t) {
        const Block8 b = random_block(gen);
        CHECK(std::abs(dct_8x8(b).at(0, 0)) <= 8.0 * 255.0 + 1e-9);
    }
}

TEST_CASE("quantize rounds half away from zero and clamps the DC special item") {
    SUBCASE("constant 255 block: 2040/16 rounds to 128, clamps to 127") {
        Block8 b;
        for (auto& v : b.values) v = 255.0;
        const DctBlock d = dct_8x8(b);
        CHECK(d.at(0, 0) == doctest::Approx(2040.0));
        const QuantBlock qb = quantize(d, QuantMatrix::standard_luminance(), 8);
        CHECK(qb.at(0, 0) == 127);
        for (int k = 1; k < 64; ++k) CHECK(qb.coeffs[k] == 0);
    }
    SUBCASE("zero block quantizes to zero") {
        const QuantBlock qb = quantize(DctBlock{}, QuantMatrix::standard_luminance(), 8);
        for (int c : qb.coeffs) CHECK(c == 0);
    }
    SUBCASE("-57.4 over 57 rounds to -1") {
        const QuantMatrix& qm = QuantMatrix::standard_luminance();
        CHECK(qm.at(2, 5) == 57);
        DctBlock d;
        d.at(2, 5) = -57.4;
        const QuantBlock qb = quantize(d, qm, 8);
        CHECK(qb.at(2, 5) == -1);
    }
    SUBCASE("exact halves round away from zero") {
        QuantMatrix ones;
        for (auto& v : ones.values) v = 2;
        DctBlock d;
        d.at(3, 3) = 3.0;   // 1.5 -> 2
        d.at(3, 4) = -3.0;  // -1.5 -> -2
        const QuantBlock qb = quantize(d, ones, 8);
        CHECK(qb.at(3, 3) == 2);
        CHECK(qb.at(3, 4) == -2);
    }
}

TEST_CASE("AC overflow is surfaced, not clamped") {
    DctBlock d;
    d.at(0, 1) = 1800.0;  // 1800/11 = 164 does not fit 7 magnitude bits
    CHECK_THROWS_AS(quantize(d, QuantMatrix::standard_luminance(), 8), CoeffOverflowError);
}

TEST_CASE("dequantize is the exact integer product") {
    QuantBlock qb;
    qb.at(0, 0) = 127;
    qb.at(1, 2) = -3;
    QuantMatrix qm = QuantMatrix::standard_luminance();
    CHECK(qm.at(1, 2) == 14);
    const DctBlock d = dequantize(qb, qm);
    CHECK(d.at(0, 0) == 2032.0);
    CHECK(d.at(1, 2) == -42.0);
    CHECK(d.at(5, 5) == 0.0);
    SUBCASE("spot values from the register pipeline") {
        QuantBlock z;
        z.at(0, 0) = 127;
        CHECK(dequantize(z, qm).at(0, 0) == 2032.0);
        QuantBlock m;
        m.at(0, 2) = -3;  // entry 10
        CHECK(dequantize(m, qm).at(0, 2) == -30.0);
    }
}

TEST_CASE("quantize-dequantize is idempotent under the same matrix") {
    std::mt19937 gen(4);
    const QuantMatrix& qm = QuantMatrix::standard_luminance();
    for (int t = 0; t < 30; ++t) {
        const DctBlock d = dct_8x8(random_block(gen));
        const QuantBlock q1 = quantize(d, qm, 8);
        CHECK(std::abs(q1.at(0, 0)) <= 127);  // DC always fits q-1 bits
        const DctBlock once = dequantize(q1, qm);
        const DctBlock twice = dequantize(quantize(once, qm, 8), qm);
        for (int k = 0; k < 64; ++k) CHECK(once.coeffs[k] == twice.coeffs[k]);
    }
}

TEST_CASE("zigzag order starts (0,0),(0,1),(1,0),(2,0),(1,1),(0,2) and is a permutation") {
    const auto& order = zigzag_order();
    CHECK(order[0] == std::pair{0, 0});
    CHECK(order[1] == std::pair{0, 1});
    CHECK(order[2] == std::pair{1, 0});
    CHECK(order[3] == std::pair{2, 0});
    CHECK(order[4] == std::pair{1, 1});
    CHECK(order[5] == std::pair{0, 2});
    CHECK(order[63] == std::pair{7, 7});
    // antidiagonal structure: each step stays on diagonal s or moves to s+1
    std::array<bool, 64> seen{};
    int prev_s = 0;
    for (const auto& [u, v] : order) {
        CHECK(u + v >= prev_s);
        CHECK(u + v <= prev_s + 1);
        prev_s = u + v;
        CHECK_FALSE(seen[size_t(u) * 8 + v]);
        seen[size_t(u) * 8 + v] = true;
    }
}

TEST_CASE("zigzag RLE examples") {
    SUBCASE("all zero emits just the EOF") {
        CHECK(zigzag_rle(QuantBlock{}).pairs.empty());
    }
    SUBCASE("DC-only block emits one pair with run 0") {
        QuantBlock qb;
        qb.at(0, 0) = 5;
        const RleSeq seq = zigzag_rle(qb);
        REQUIRE(seq.pairs.size() == 1);
        CHECK(seq.pairs[0].value == 5);
        CHECK(seq.pairs[0].zero_run == 0);
    }
    SUBCASE("zero runs collapse in zigzag order") {
        QuantBlock qb;
        qb.at(0, 0) = 5;
        qb.at(1, 0) = -2;  // zigzag position 2, one zero (0,1) before it
        const RleSeq seq = zigzag_rle(qb);
        REQUIRE(seq.pairs.size() == 2);
        CHECK(seq.pairs[0].value == 5);
        CHECK(seq.pairs[0].zero_run == 0);
        CHECK(seq.pairs[1].value == -2);
        CHECK(seq.pairs[1].zero_run == 1);
    }
}

TEST_CASE("zigzag RLE round-trips random sparse blocks exactly") {
    std::mt19937 gen(5);
    std::uniform_int_distribution<int> val(-127, 127);
    std::uniform_int_distribution<int> pos(0, 63);
    for (int t = 0; t < 100; ++t) {
        QuantBlock qb;
        for (int k = 0; k < 6; ++k) qb.coeffs[size_t(pos(gen))] = val(gen);
        const QuantBlock back = zigzag_unrle(zigzag_rle(qb));
        CHECK(back.coeffs == qb.coeffs);
    }
}

TEST_CASE("psnr") {
    PixelImage a = PixelImage::zero(3, 8);
    SUBCASE("identical images return the infinity sentinel") {
        CHECK(std::isinf(psnr(a, a)));
    }
    SUBCASE("uniform +1 difference gives 20*log10(255)") {
        PixelImage b = a;
        for (auto& p : b.pixels) p += 1;
        CHECK(psnr(a, b) == doctest::Approx(48.1308).epsilon(1e-4));
    }
    SUBCASE("mismatched geometry is rejected") {
        CHECK_THROWS_AS(psnr(a, PixelImage::zero(4, 8)), std::invalid_argument);
    }
}

}  // TEST_SUITE
