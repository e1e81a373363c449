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

#include "qimg/jpeg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qimg {

namespace {

// cos((k + 0.5) * pi * u / 8) for k, u in 0..7
struct CosLut {
    double c[8][8];
    CosLut() {
        for (int k = 0; k < 8; ++k) {
            for (int u = 0; u < 8; ++u) {
                c[k][u] = std::cos((k + 0.5) * std::numbers::pi * u / 8.0);
            }
        }
    }
};
const CosLut kCos;

double scale(int u) { return u == 0 ? 1.0 / (2.0 * std::numbers::sqrt2) : 0.5; }

}  // namespace

const QuantMatrix& QuantMatrix::standard_luminance() {
    static const QuantMatrix qm{{
        16, 11, 10, 16, 24,  40,  51,  61,   //
        12, 12, 14, 19, 26,  58,  60,  55,   //
        14, 13, 16, 24, 40,  57,  69,  56,   //
        14, 17, 22, 29, 51,  87,  80,  62,   //
        18, 22, 37, 56, 68,  109, 103, 77,   //
        24, 35, 55, 64, 81,  104, 113, 92,   //
        49, 64, 78, 87, 103, 121, 120, 101,  //
        72, 92, 95, 98, 112, 100, 103, 99,   //
    }};
    return qm;
}

DctBlock dct_8x8(const Block8& block) {
    // separable: rows first, then columns
    double tmp[8][8];
    for (int i = 0; i < 8; ++i) {
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int j = 0; j < 8; ++j) s += block.at(i, j) * kCos.c[j][v];
            tmp[i][v] = s * scale(v);
        }
    }
    DctBlock out;
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int i = 0; i < 8; ++i) s += tmp[i][v] * kCos.c[i][u];
            out.at(u, v) = s * scale(u);
        }
    }
    return out;
}

Block8 idct_8x8(const DctBlock& block) {
    double tmp[8][8];
    for (int u = 0; u < 8; ++u) {
        for (int j = 0; j < 8; ++j) {
            double s = 0;
            for (int v = 0; v < 8; ++v) s += scale(v) * block.at(u, v) * kCos.c[j][v];
            tmp[u][j] = s;
        }
    }
    Block8 out;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            double s = 0;
            for (int u = 0; u < 8; ++u) s += scale(u) * tmp[u][j] * kCos.c[i][u];
            out.at(i, j) = s;
        }
    }
    return out;
}

QuantBlock quantize(const DctBlock& block, const QuantMatrix& qm, int q) {
    if (q < 2 || q > 16) throw std::invalid_argument("quantize: need 2 <= q <= 16");
    for (int v : qm.values) {
        if (v < 1) throw std::invalid_argument("quantize: quantization entries must be >= 1");
    }
    QuantBlock out;
    const long long mag_limit = (1ll << (q - 1)) - 1;
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            // std::round rounds half away from zero
            long long r = std::llround(block.at(u, v) / double(qm.at(u, v)));
            if (u == 0 && v == 0) {
                if (r > mag_limit) r = mag_limit;
                if (r < -mag_limit) r = -mag_limit;
            } else if (r > mag_limit || r < -mag_limit) {
                throw CoeffOverflowError("quantize: AC coefficient magnitude exceeds q-1 bits");
            }
            out.at(u, v) = int(r);
        }
    }
    return out;
}

DctBlock dequantize(const QuantBlock& block, const QuantMatrix& qm) {
    DctBlock out;
    for (int k = 0; k < 64; ++k) {
        out.coeffs[k] = double(block.coeffs[k]) * double(qm.values[k]);
    }
    return out;
}

const std::array<std::pair<int, int>, 64>& zigzag_order() {
    static const auto order = [] {
        std::array<std::pair<int, int>, 64> o{};
        int k = 0;
        for (int s = 0; s <= 14; ++s) {
            if (s % 2 == 0) {  // up-right: row decreasing
                for (int u = std::min(s, 7); u >= std::max(0, s - 7); --u) {
                    o[k++] = {u, s - u};
                }
            } else {  // down-left: row increasing
                for (int u = std::max(0, s - 7); u <= std::min(s, 7); ++u) {
                    o[k++] = {u, s - u};
                }
            }
        }
        return o;
    }();
    return order;
}

RleSeq zigzag_rle(const QuantBlock& block) {
    RleSeq seq;
    int run = 0;
    for (const auto& [u, v] : zigzag_order()) {
        const int val = block.at(u, v);
        if (val == 0) {
            ++run;
        } else {
            seq.pairs.push_back({val, run});
            run = 0;
        }
    }
    return seq;  // trailing zeros become the implied EOF
}

QuantBlock zigzag_unrle(const RleSeq& seq) {
    QuantBlock block;
    size_t pos = 0;
    for (const RlePair& p : seq.pairs) {
        pos += size_t(p.zero_run);
        if (p.value == 0 || pos >= 64) {
            throw std::invalid_argument("zigzag_unrle: malformed run sequence");
        }
        const auto& [u, v] = zigzag_order()[pos++];
        block.at(u, v) = p.value;
    }
    return block;
}

double psnr(const PixelImage& a, const PixelImage& b) {
    if (a.n != b.n || a.q != b.q) {
        throw std::invalid_argument("psnr: images must share n and q");
    }
    double sum = 0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = double(a.pixels[i]) - double(b.pixels[i]);
        sum += d * d;
    }
    if (sum == 0) return std::numeric_limits<double>::infinity();
    const double mse = sum / double(a.pixels.size());
    const double max_i = double((1u << a.q) - 1);
    return 20.0 * std::log10(max_i / std::sqrt(mse));
}

}  // namespace qimg
