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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qimg {

/// A square grayscale image with side 2^n and q-bit pixels.
/// Immutable by convention once constructed; all pipeline stages take it
/// by const reference.
struct PixelImage {
    int n = 0;  ///< side length is 2^n; blocking paths require n >= 3
    int q = 0;  ///< bits per pixel, values in [0, 2^q)
    std::vector<uint32_t> pixels;  ///< row major, size 2^(2n)

    /// Set when the source file was not 2^n x 2^n and got zero padded.
    bool padded = false;
    uint32_t original_width = 0;
    uint32_t original_height = 0;

    uint32_t side() const { return 1u << n; }

    uint32_t at(uint32_t y, uint32_t x) const {
        return pixels[(size_t(y) << n) + x];
    }
    void set(uint32_t y, uint32_t x, uint32_t value) {
        pixels[(size_t(y) << n) + x] = value;
    }

    /// All-zero image of the given geometry.
    static PixelImage zero(int n, int q);
};

/// One 8x8 sample block f(i,j) cut out of an image, remembering where it
/// came from (block_row, block_col).
struct Block8 {
    std::array<double, 64> values{};
    uint32_t block_row = 0;
    uint32_t block_col = 0;

    double& at(int i, int j) { return values[size_t(i) * 8 + j]; }
    double at(int i, int j) const { return values[size_t(i) * 8 + j]; }
};

/// Loads a P2 (ASCII) or P5 (binary) PGM file.
///
/// maxval must be 2^q - 1 for some q <= 16. Images that are not square
/// powers of two are zero padded up to the next 2^n x 2^n and flagged via
/// PixelImage::padded; images smaller than 8x8 are rejected because the
/// blocking needs n >= 3.
PixelImage load_pgm(const std::string& path);

/// Same parser, working on an in-memory buffer (used by tests).
PixelImage parse_pgm(const std::string& bytes);

/// Writes a binary (P5) PGM. Samples wider than 8 bits are emitted as two
/// bytes, big endian, per the netpbm convention.
void write_pgm(const PixelImage& img, const std::string& path);

/// Cuts the image into its 2^(n-3) x 2^(n-3) blocks in row-major block
/// order. Pixel (Y, X) lands in block (Y div 8, X div 8) at offset
/// (Y mod 8, X mod 8).
std::vector<Block8> split_blocks(const PixelImage& img);

/// Inverse of split_blocks. Values must be integers in [0, 2^q).
PixelImage assemble_blocks(int n, int q, const std::vector<Block8>& blocks);

/// Total number of set bits over all q-bit pixel values.
uint64_t count_one_bits(const PixelImage& img);

}  // namespace qimg
