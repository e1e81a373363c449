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
#include <iosfwd>
#include <optional>

#include "qimg/fixedq.hpp"
#include "qimg/gqir.hpp"
#include "qimg/jpeg.hpp"

namespace qimg {

/// Quantized coefficients laid out as an image-shaped register: the
/// coefficient of block (i, j) at in-block position (u, v) lives at
/// location Y = 8i + u, X = 8j + v. Sign and magnitude are separate
/// (q-1 magnitude bits plus a sign bit).
struct CoeffRegisterImage {
    int n = 0, q = 0;
    std::vector<uint32_t> magnitude;  ///< row major, each < 2^(q-1)
    std::vector<uint8_t> negative;

    size_t index(uint32_t y, uint32_t x) const { return (size_t(y) << n) + x; }
    uint32_t side() const { return 1u << n; }

    static CoeffRegisterImage from_blocks(const std::vector<QuantBlock>& blocks, int n,
                                          int q);
};

/// The quantization matrix as a (q-1)-bit register file; construction
/// fails if any entry does not fit. The standard table needs q >= 8.
struct QMatrixRegister {
    int q = 0;
    std::array<int, 64> entries{};

    int at(int u, int v) const { return entries[size_t(u) * 8 + v]; }
    static QMatrixRegister from(const QuantMatrix& qm, int q);
};

/// C(i,j,u,v) = c(u) c(v) cos[(i+0.5)pi u / 8] cos[(j+0.5)pi v / 8],
/// encoded sign-magnitude with q+3 fractional bits and no integer bits
/// (all 4096 values lie within +-0.2405).
struct CosTable {
    int q = 0;
    std::vector<SignMagFixed> encoded;  ///< [(i*8+j)*64 + u*8+v]
    std::vector<double> exact;

    const SignMagFixed& at(int i, int j, int u, int v) const {
        return encoded[(size_t(i) * 8 + j) * 64 + size_t(u) * 8 + v];
    }
    double exact_at(int i, int j, int u, int v) const {
        return exact[(size_t(i) * 8 + j) * 64 + size_t(u) * 8 + v];
    }

    static CosTable build(int q);
};

/// Everything recorded per output pixel while simulating Steps 4 and 5.
struct PixelTrace {
    uint32_t fq_mag = 0;  ///< coefficient stored at this location
    uint8_t fq_neg = 0;
    uint32_t fprime_mag = 0;  ///< 2(q-1)-bit product with the matrix entry
    uint8_t fprime_neg = 0;
    uint8_t g = 1;  ///< alignment flag of the matching matrix branch
    uint64_t accumulator = 0;  ///< 2q+6 bit modular sum after the adder chain
    int64_t exact_sum = 0;     ///< signed fixed-point sum (flagging aid)
    uint32_t pixel = 0;        ///< extracted bits 2q+2 .. q+3
    uint8_t wrapped = 0;       ///< exact sum outside [0, 2^q) in value
    uint8_t fprime_truncated = 0;  ///< |F'| did not fit the low q+3 bits
    uint8_t acc_wrapped_step = 0;  ///< some intermediate add/sub wrapped
};

/// Per-location trace for a whole image. Products are recomputed on
/// demand (write_jsonl) instead of being stored for every location.
struct PipelineTrace {
    int n = 0, q = 0;
    std::vector<PixelTrace> at;  ///< row major, size 2^(2n)

    void write_jsonl(std::ostream& out, const CosTable& table) const;
};

/// Full detail for one block: the 64 products feeding every output pixel.
struct BlockSim {
    std::array<PixelTrace, 64> pixels;                    ///< by i*8+j
    std::array<std::array<uint64_t, 64>, 64> product_mag;  ///< [i*8+j][u*8+v]
    std::array<std::array<uint8_t, 64>, 64> product_neg;
};

/// Simulates Steps 4 and 5 for one block of coefficients (sign/magnitude
/// pairs by u*8+v). Exact fixed-point semantics: F' = |F_Q| * Q with the
/// sign carried over; products are |F'| (low q+3 bits) times the encoded
/// cosine magnitude, 2q+6 bits; the adder chain accumulates modulo
/// 2^(2q+6), a set product sign selecting the reversed (subtracting)
/// adder.
BlockSim simulate_block(const std::array<uint32_t, 64>& coeff_mag,
                        const std::array<uint8_t, 64>& coeff_neg,
                        const QMatrixRegister& qreg, const CosTable& table);

/// Qubit map of the synthesized pipeline circuits.
struct QjpegLayout {
    int n = 0, q = 0;
    Span location;      ///< x_0..x_{n-1}, y_0..y_{n-1}
    Span coeff_mag;     ///< q-1 bits
    uint32_t coeff_sign = 0;
    Span qloc;          ///< matrix location register, 6 qubits
    Span qval;          ///< matrix value register, q-1 bits
    uint32_t g = 0;     ///< alignment flag
    Span fprime_mag;    ///< 2(q-1) bits
    uint32_t fprime_sign = 0;
    Span cloc;          ///< cosine-table location (i, j), 6 qubits
    Span ctable;        ///< 64 x (q+4) value qubits
    Span products;      ///< 64 x (2q+7) qubits
    Span accumulator;   ///< 2q+6 bits

    Span c_entry_mag(int u, int v) const;
    uint32_t c_entry_sign(int u, int v) const;
    Span product_mag(int u, int v) const;
    uint32_t product_sign(int u, int v) const;
    uint32_t num_qubits() const;

    static QjpegLayout make(int n, int q);
};

/// Step 2: 2n Hadamards plus one 2n-controlled NOT per set magnitude bit
/// and one per negative coefficient. evaluate() of the result reproduces
/// the register contents exactly.
Circuit synth_step2(const CoeffRegisterImage& coeffs);

/// Step 3: 6 Hadamards plus one 6-controlled NOT per set bit of the
/// matrix entries (208 for the standard table).
Circuit synth_step3(const QMatrixRegister& qreg);

/// Step 4 gates on the full pipeline register: the alignment CNOTs, the
/// flag gate, one flag-controlled multiplier and the sign-transfer gate.
Circuit synth_step4(const QjpegLayout& lay);

/// Step 5 gates: cosine-table preparation (6 Hadamards plus one
/// 6-controlled NOT per stored one bit), 64 location-controlled
/// multipliers, 128 sign gates and the 128 sign-selected adders.
Circuit synth_step5(const QjpegLayout& lay, const CosTable& table);

struct InverseQuantResult {
    PipelineTrace trace;  ///< fq/fprime fields filled in
    Circuit circuit;
};

/// Applies Step 4 semantics to every location and returns the gates.
InverseQuantResult inverse_quantization(const CoeffRegisterImage& coeffs,
                                        const QMatrixRegister& qreg);

/// Completes the trace with Step 5 semantics (products, adder chain,
/// extraction) and returns the Step 5 gates.
Circuit inverse_dct(PipelineTrace& trace, const CosTable& table);

struct PipelineResult {
    PixelImage recovered;          ///< raw extracted bits
    PixelImage recovered_display;  ///< wrapped locations clamped to [0, 2^q)
    PipelineTrace trace;
    GateTally tally;       ///< all quantum stages together
    uint64_t step2_mcx = 0;  ///< set bits + negatives over all coefficients
    uint64_t step3_mcx = 0;
    std::optional<double> measured_r_j;  ///< step2_mcx / count_one_bits(input)
    uint64_t wrapped_count = 0;
    uint64_t truncated_count = 0;
    Circuit step2_circuit;  ///< the image-dependent stage, for export
};

/// The whole pipeline: classical DCT + quantization (Step 1), register
/// synthesis (Steps 2-3) and exact semantic simulation of Steps 4-5.
PipelineResult run_pipeline(const PixelImage& img,
                            const QuantMatrix& qm = QuantMatrix::standard_luminance());

}  // namespace qimg
