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
#include <stdexcept>
#include <utility>
#include <vector>

#include "qimg/pixmap.hpp"

namespace qimg {

/// 8x8 grid of DCT coefficients F(u,v).
struct DctBlock {
    std::array<double, 64> coeffs{};
    double& at(int u, int v) { return coeffs[size_t(u) * 8 + v]; }
    double at(int u, int v) const { return coeffs[size_t(u) * 8 + v]; }
};

/// 8x8 quantization matrix Q(u,v), all entries >= 1.
struct QuantMatrix {
    std::array<int, 64> values{};

    int at(int u, int v) const { return values[size_t(u) * 8 + v]; }

    /// The standard luminance table used throughout the cost analysis.
    static const QuantMatrix& standard_luminance();
};

/// 8x8 grid of signed quantized coefficients F_Q(u,v).
struct QuantBlock {
    std::array<int, 64> coeffs{};
    int& at(int u, int v) { return coeffs[size_t(u) * 8 + v]; }
    int at(int u, int v) const { return coeffs[size_t(u) * 8 + v]; }
};

/// Thrown when a quantized AC coefficient does not fit the q-1 magnitude
/// bits of the coefficient register. Only the DC term is clamped; AC
/// overflow is surfaced to the caller.
struct CoeffOverflowError : std::range_error {
    using std::range_error::range_error;
};

/// Forward 8x8 DCT, orthonormal scaling: c(0) = 1/(2*sqrt(2)), c(u!=0) = 1/2.
DctBlock dct_8x8(const Block8& block);

/// Inverse of dct_8x8 (same scaling), exact to ~1e-12 in double precision.
Block8 idct_8x8(const DctBlock& block);

/// Element-wise round(F/Q), rounding half away from zero. The DC term is
/// clamped into [-(2^(q-1)-1), 2^(q-1)-1]; an AC term whose magnitude does
/// not fit q-1 bits raises CoeffOverflowError.
QuantBlock quantize(const DctBlock& block, const QuantMatrix& qm, int q);

/// Element-wise exact integer product F_Q(u,v) * Q(u,v).
DctBlock dequantize(const QuantBlock& block, const QuantMatrix& qm);

/// (value, number of zeros skipped before it) in zigzag order; trailing
/// zeros are dropped and an EOF marker is implied after the last pair.
struct RlePair {
    int value = 0;
    int zero_run = 0;
};
struct RleSeq {
    std::vector<RlePair> pairs;
};

/// The standard zigzag scan as (u, v) index pairs.
const std::array<std::pair<int, int>, 64>& zigzag_order();

RleSeq zigzag_rle(const QuantBlock& block);
QuantBlock zigzag_unrle(const RleSeq& seq);

/// Standard PSNR in dB: 20*log10((2^q - 1)/sqrt(MSE)). Identical images
/// return +infinity. Both images must share n and q.
double psnr(const PixelImage& a, const PixelImage& b);

}  // namespace qimg
