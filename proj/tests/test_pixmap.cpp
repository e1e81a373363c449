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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qimg/pixmap.hpp"

using namespace qimg;

namespace {

std::string ascii_pgm(uint32_t w, uint32_t h, uint32_t maxval,
                      const std::vector<uint32_t>& samples) {
    std::ostringstream out;
    out << "P2\n# test\n" << w << " " << h << "\n" << maxval << "\n";
    for (uint32_t s : samples) out << s << "\n";
    return out.str();
}

std::string binary_pgm(uint32_t w, uint32_t h, uint32_t maxval,
                       const std::vector<uint32_t>& samples) {
    std::ostringstream out;
    out << "P5\n" << w << " " << h << "\n" << maxval << "\n";
    for (uint32_t s : samples) {
        if (maxval > 255) out.put(char((s >> 8) & 0xFF));
        out.put(char(s & 0xFF));
    }
    return out.str();
}

}  // namespace

TEST_SUITE("pixmap") {

TEST_CASE("256x256 8-bit header maps to n=8, q=8") {
    std::vector<uint32_t> samples(256 * 256, 7);
    const PixelImage img = parse_pgm(binary_pgm(256, 256, 255, samples));
    CHECK(img.n == 8);
    CHECK(img.q == 8);
    CHECK_FALSE(img.padded);
    CHECK(img.at(0, 0) == 7);
}

TEST_CASE("200x200 input zero-pads to 256x256 with the warning flag") {
    std::vector<uint32_t> samples(200 * 200, 255);
    const PixelImage img = parse_pgm(ascii_pgm(200, 200, 255, samples));
    CHECK(img.n == 8);
    CHECK(img.q == 8);
    CHECK(img.padded);
    CHECK(img.original_width == 200);
    CHECK(img.at(199, 199) == 255);
    CHECK(img.at(200, 200) == 0);
    CHECK(img.at(255, 0) == 0);
}

TEST_CASE("1x1 input violates the blocking precondition") {
    CHECK_THROWS_WITH_AS(parse_pgm(ascii_pgm(1, 1, 255, {0})),
                         doctest::Contains("n >= 3"), std::runtime_error);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_pgm(""), std::runtime_error);
    CHECK_THROWS_AS(parse_pgm("P7\n8 8\n255\n"), std::runtime_error);
    // maxval not of the form 2^q - 1
    std::vector<uint32_t> samples(64, 0);
    CHECK_THROWS_WITH_AS(parse_pgm(ascii_pgm(8, 8, 200, samples)),
                         doctest::Contains("2^q - 1"), std::runtime_error);
    // truncated binary raster
    std::string bin = binary_pgm(8, 8, 255, samples);
    bin.resize(bin.size() - 10);
    CHECK_THROWS_WITH_AS(parse_pgm(bin), doctest::Contains("truncated"),
                         std::runtime_error);
}

TEST_CASE("16-bit samples round trip through write_pgm") {
    PixelImage img = PixelImage::zero(3, 12);
    img.set(0, 0, 4095);
    img.set(7, 7, 1234);
    const auto path = std::filesystem::temp_directory_path() / "qimg_pixmap_rt.pgm";
    write_pgm(img, path.string());
    const PixelImage back = load_pgm(path.string());
    CHECK(back.q == 12);
    CHECK(back.pixels == img.pixels);
    std::filesystem::remove(path);
}

TEST_CASE("block split geometry") {
    SUBCASE("n=3 gives exactly one block") {
        CHECK(split_blocks(PixelImage::zero(3, 8)).size() == 1);
    }
    SUBCASE("n=8 gives 1024 blocks") {
        CHECK(split_blocks(PixelImage::zero(8, 8)).size() == 1024);
    }
    SUBCASE("pixel (9,2) lands in block (1,0) at offset (1,2)") {
        PixelImage img = PixelImage::zero(4, 8);
        img.set(9, 2, 77);
        const auto blocks = split_blocks(img);
        const Block8& b = blocks[1 * 2 + 0];  // block row 1, col 0
        CHECK(b.block_row == 1);
        CHECK(b.block_col == 0);
        CHECK(b.at(1, 2) == 77.0);
    }
}

TEST_CASE("split then assemble is the identity") {
    std::mt19937 gen(42);
    for (int trial = 0; trial < 5; ++trial) {
        PixelImage img = PixelImage::zero(4, 8);
        for (auto& p : img.pixels) p = gen() & 0xFF;
        const PixelImage back = assemble_blocks(4, 8, split_blocks(img));
        CHECK(back.pixels == img.pixels);
    }
}

TEST_CASE("count_one_bits") {
    SUBCASE("all zero") { CHECK(count_one_bits(PixelImage::zero(3, 8)) == 0); }
    SUBCASE("single 255 pixel contributes 8") {
        PixelImage img = PixelImage::zero(3, 8);
        img.set(2, 3, 255);
        CHECK(count_one_bits(img) == 8);
    }
    SUBCASE("2x2 {0,128,192,255} totals 11") {
        PixelImage img = PixelImage::zero(1, 8);
        img.set(0, 0, 0);
        img.set(0, 1, 128);
        img.set(1, 0, 192);
        img.set(1, 1, 255);
        CHECK(count_one_bits(img) == 11);
    }
}

TEST_CASE("count_one_bits is bounded by q*2^(2n), equality only at full white") {
    std::mt19937 gen(7);
    const uint64_t bound = 8ull << (2 * 3);
    for (int trial = 0; trial < 20; ++trial) {
        PixelImage img = PixelImage::zero(3, 8);
        for (auto& p : img.pixels) p = gen() & 0xFF;
        const uint64_t ones = count_one_bits(img);
        CHECK(ones <= bound);
        const bool all_white =
            std::all_of(img.pixels.begin(), img.pixels.end(), [](uint32_t p) { return p == 255; });
        CHECK((ones == bound) == all_white);
    }
    PixelImage white = PixelImage::zero(3, 8);
    for (auto& p : white.pixels) p = 255;
    CHECK(count_one_bits(white) == bound);
}

}  // TEST_SUITE
