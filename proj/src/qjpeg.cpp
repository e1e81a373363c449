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

#include "qimg/qjpeg.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace qimg {

CoeffRegisterImage CoeffRegisterImage::from_blocks(const std::vector<QuantBlock>& blocks,
                                                   int n, int q) {
    if (n < 3 || q < 2 || q > 16) {
        throw std::invalid_argument("CoeffRegisterImage: need n >= 3 and 2 <= q <= 16");
    }
    const uint32_t blocks_per_side = 1u << (n - 3);
    if (blocks.size() != size_t(blocks_per_side) * blocks_per_side) {
        throw std::invalid_argument("CoeffRegisterImage: block count mismatch");
    }
    CoeffRegisterImage out;
    out.n = n;
    out.q = q;
    out.magnitude.assign(size_t(1) << (2 * n), 0);
    out.negative.assign(size_t(1) << (2 * n), 0);
    const uint32_t mag_limit = 1u << (q - 1);
    size_t b = 0;
    for (uint32_t i = 0; i < blocks_per_side; ++i) {
        for (uint32_t j = 0; j < blocks_per_side; ++j, ++b) {
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const int val = blocks[b].at(u, v);
                    const uint32_t mag = uint32_t(val < 0 ? -val : val);
                    if (mag >= mag_limit) {
                        throw CoeffOverflowError(
                            "coefficient magnitude exceeds q-1 bits");
                    }
                    // X = 8j + v, Y = 8i + u
                    const size_t idx = out.index(8 * i + uint32_t(u), 8 * j + uint32_t(v));
                    out.magnitude[idx] = mag;
                    out.negative[idx] = val < 0 ? 1 : 0;
                }
            }
        }
    }
    return out;
}

QMatrixRegister QMatrixRegister::from(const QuantMatrix& qm, int q) {
    if (q < 2 || q > 16) throw std::invalid_argument("QMatrixRegister: 2 <= q <= 16");
    QMatrixRegister reg;
    reg.q = q;
    for (int k = 0; k < 64; ++k) {
        const int v = qm.values[size_t(k)];
        if (v < 1 || v >= (1 << (q - 1))) {
            throw std::invalid_argument(
                "QMatrixRegister: entry does not fit q-1 bits (the standard table needs "
                "q >= 8)");
        }
        reg.entries[size_t(k)] = v;
    }
    return reg;
}

CosTable CosTable::build(int q) {
    if (q < 2 || q > 16) throw std::invalid_argument("CosTable: 2 <= q <= 16");
    CosTable t;
    t.q = q;
    t.encoded.resize(4096);
    t.exact.resize(4096);
    auto scale = [](int u) {
        return u == 0 ? 1.0 / (2.0 * std::numbers::sqrt2) : 0.5;
    };
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const double value = scale(u) * scale(v) *
                                         std::cos((i + 0.5) * std::numbers::pi * u / 8.0) *
                                         std::cos((j + 0.5) * std::numbers::pi * v / 8.0);
                    const size_t idx = (size_t(i) * 8 + j) * 64 + size_t(u) * 8 + v;
                    t.exact[idx] = value;
                    t.encoded[idx] = encode_fixed(value, 0, q + 3);
                }
            }
        }
    }
    return t;
}

Span QjpegLayout::c_entry_mag(int u, int v) const {
    return {ctable.lo + uint32_t(u * 8 + v) * uint32_t(q + 4), uint32_t(q + 3)};
}
uint32_t QjpegLayout::c_entry_sign(int u, int v) const {
    return ctable.lo + uint32_t(u * 8 + v) * uint32_t(q + 4) + uint32_t(q + 3);
}
Span QjpegLayout::product_mag(int u, int v) const {
    return {products.lo + uint32_t(u * 8 + v) * uint32_t(2 * q + 7), uint32_t(2 * q + 6)};
}
uint32_t QjpegLayout::product_sign(int u, int v) const {
    return products.lo + uint32_t(u * 8 + v) * uint32_t(2 * q + 7) + uint32_t(2 * q + 6);
}
uint32_t QjpegLayout::num_qubits() const {
    return accumulator.lo + accumulator.width;
}

QjpegLayout QjpegLayout::make(int n, int q) {
    if (n < 3 || q < 2 || q > 16) {
        throw std::invalid_argument("QjpegLayout: need n >= 3 and 2 <= q <= 16");
    }
    QjpegLayout lay;
    lay.n = n;
    lay.q = q;
    uint32_t next = 0;
    auto take = [&next](uint32_t width) {
        const Span s{next, width};
        next += width;
        return s;
    };
    lay.location = take(uint32_t(2 * n));
    lay.coeff_mag = take(uint32_t(q - 1));
    lay.coeff_sign = take(1).lo;
    lay.qloc = take(6);
    lay.qval = take(uint32_t(q - 1));
    lay.g = take(1).lo;
    lay.fprime_mag = take(uint32_t(2 * (q - 1)));
    lay.fprime_sign = take(1).lo;
    lay.cloc = take(6);
    lay.ctable = take(64u * uint32_t(q + 4));
    lay.products = take(64u * uint32_t(2 * q + 7));
    lay.accumulator = take(uint32_t(2 * q + 6));
    return lay;
}

namespace {

// location controls encoding (Y, X) on an x-low / y-high register
std::vector<Control> location_controls(Span location, int n, uint32_t y, uint32_t x) {
    std::vector<Control> cs;
    cs.reserve(size_t(2) * n);
    for (int k = 0; k < n; ++k) cs.push_back({location.lo + uint32_t(k), ((x >> k) & 1u) != 0});
    for (int k = 0; k < n; ++k) {
        cs.push_back({location.lo + uint32_t(n + k), ((y >> k) & 1u) != 0});
    }
    return cs;
}

void emit_value_store(Circuit& c, const std::vector<Control>& controls, Span mag_span,
                      uint32_t value, std::optional<uint32_t> sign_qubit, bool negative) {
    for (uint32_t bit = 0; bit < mag_span.width; ++bit) {
        if ((value >> bit) & 1u) {
            c.add(McxGate{controls, mag_span.lo + bit});
        }
    }
    if (sign_qubit && negative) c.add(McxGate{controls, *sign_qubit});
}

}  // namespace

Circuit synth_step2(const CoeffRegisterImage& coeffs) {
    const int n = coeffs.n, q = coeffs.q;
    const PrepLayout lay{n, n, q};
    Circuit c(lay.num_qubits());
    for (uint32_t t = 0; t < lay.location_width(); ++t) c.add(HGate{t});
    const Span mag_span{lay.color_lo(), uint32_t(q - 1)};
    const uint32_t sign_qubit = lay.color_lo() + uint32_t(q - 1);
    const Span loc{0, uint32_t(2 * n)};
    for (uint32_t y = 0; y < coeffs.side(); ++y) {
        for (uint32_t x = 0; x < coeffs.side(); ++x) {
            const size_t idx = coeffs.index(y, x);
            if (coeffs.magnitude[idx] == 0 && coeffs.negative[idx] == 0) continue;
            emit_value_store(c, location_controls(loc, n, y, x), mag_span,
                             coeffs.magnitude[idx], sign_qubit, coeffs.negative[idx] != 0);
        }
    }
    return c;
}

Circuit synth_step3(const QMatrixRegister& qreg) {
    const int q = qreg.q;
    const PrepLayout lay{3, 3, q - 1};
    Circuit c(lay.num_qubits());
    for (uint32_t t = 0; t < 6; ++t) c.add(HGate{t});
    const Span val_span{6, uint32_t(q - 1)};
    const Span loc{0, 6};
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            emit_value_store(c, location_controls(loc, 3, uint32_t(u), uint32_t(v)),
                             val_span, uint32_t(qreg.at(u, v)), std::nullopt, false);
        }
    }
    return c;
}

Circuit synth_step4(const QjpegLayout& lay) {
    Circuit c(lay.num_qubits());
    // align the matrix location with the low location bits: T_Qk ^= T_k
    for (int k = 0; k < 3; ++k) {
        c.add(McxGate{{{lay.location.lo + uint32_t(k), true}}, lay.qloc.lo + uint32_t(k)});
        c.add(McxGate{{{lay.location.lo + uint32_t(lay.n + k), true}},
                      lay.qloc.lo + 3 + uint32_t(k)});
    }
    // g flips when every aligned qubit reads |0>
    std::vector<Control> zeros;
    for (uint32_t k = 0; k < 6; ++k) zeros.push_back({lay.qloc.lo + k, false});
    c.add(McxGate{zeros, lay.g});
    // one multiplier serves the whole superposition
    c.add(MulerGate{lay.coeff_mag, lay.qval, lay.fprime_mag, {{lay.g, true}}});
    // sign transfer
    c.add(McxGate{{{lay.g, true}, {lay.coeff_sign, true}}, lay.fprime_sign});
    return c;
}

Circuit synth_step5(const QjpegLayout& lay, const CosTable& table) {
    if (table.q != lay.q) throw std::invalid_argument("synth_step5: q mismatch");
    Circuit c(lay.num_qubits());
    // cosine-table preparation over its own (i, j) register
    for (uint32_t k = 0; k < 6; ++k) c.add(HGate{lay.cloc.lo + k});
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const auto controls = location_controls(lay.cloc, 3, uint32_t(i), uint32_t(j));
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const SignMagFixed& f = table.at(i, j, u, v);
                    emit_value_store(c, controls, lay.c_entry_mag(u, v),
                                     uint32_t(f.magnitude), lay.c_entry_sign(u, v),
                                     f.negative);
                }
            }
        }
    }
    // the low q+3 bits of |F'| feed the multipliers
    const Span fprime_low{lay.fprime_mag.lo, uint32_t(lay.q + 3)};
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            const auto loc_controls =
                location_controls({lay.location.lo, 6}, 3, uint32_t(u), uint32_t(v));
            c.add(MulerGate{fprime_low, lay.c_entry_mag(u, v), lay.product_mag(u, v),
                            loc_controls});
            // product sign = F' sign xor C sign, one gate per polarity case
            auto sign_controls = loc_controls;
            sign_controls.push_back({lay.fprime_sign, true});
            sign_controls.push_back({lay.c_entry_sign(u, v), false});
            c.add(McxGate{sign_controls, lay.product_sign(u, v)});
            sign_controls[sign_controls.size() - 2].positive = false;
            sign_controls[sign_controls.size() - 1].positive = true;
            c.add(McxGate{sign_controls, lay.product_sign(u, v)});
        }
    }
    // sign-selected adder chain into the accumulator
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            c.add(AdderGate{lay.product_mag(u, v), lay.accumulator, false,
                            {{lay.product_sign(u, v), false}}});
            c.add(AdderGate{lay.product_mag(u, v), lay.accumulator, true,
                            {{lay.product_sign(u, v), true}}});
        }
    }
    return c;
}

namespace {

// Shared Step 5 arithmetic for one output pixel: the 64 products and the
// modular adder chain, plus the exact signed sum used for flagging.
struct PixelAccumulator {
    uint64_t acc = 0;
    int64_t exact = 0;
    bool stepped_wrap = false;

    void add(uint64_t p_mag, bool p_neg, int q) {
        const uint64_t mask = (uint64_t(1) << (2 * q + 6)) - 1;
        if (p_neg) {
            if (acc < p_mag) stepped_wrap = true;
            acc = (acc - p_mag) & mask;
            exact -= int64_t(p_mag);
        } else {
            if (acc + p_mag > mask) stepped_wrap = true;
            acc = (acc + p_mag) & mask;
            exact += int64_t(p_mag);
        }
    }
};

}  // namespace

BlockSim simulate_block(const std::array<uint32_t, 64>& coeff_mag,
                        const std::array<uint8_t, 64>& coeff_neg,
                        const QMatrixRegister& qreg, const CosTable& table) {
    const int q = qreg.q;
    if (table.q != q) throw std::invalid_argument("simulate_block: q mismatch");
    BlockSim sim{};
    const uint64_t low_mask = (uint64_t(1) << (q + 3)) - 1;

    // Step 4 per coefficient
    std::array<uint64_t, 64> f3{};
    std::array<uint8_t, 64> fneg{};
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            const size_t k = size_t(u) * 8 + v;
            PixelTrace& t = sim.pixels[k];
            t.fq_mag = coeff_mag[k];
            t.fq_neg = coeff_neg[k];
            const uint64_t fprime = uint64_t(coeff_mag[k]) * uint64_t(qreg.at(u, v));
            t.fprime_mag = uint32_t(fprime);
            t.fprime_neg = coeff_neg[k];
            t.fprime_truncated = fprime > low_mask ? 1 : 0;
            f3[k] = fprime & low_mask;
            fneg[k] = coeff_neg[k];
        }
    }

    // Step 5 per output pixel
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const size_t out = size_t(i) * 8 + j;
            PixelAccumulator acc;
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const size_t k = size_t(u) * 8 + v;
                    const SignMagFixed& cf = table.at(i, j, u, v);
                    const uint64_t p_mag = f3[k] * cf.magnitude;
                    const bool p_neg = (fneg[k] != 0) != cf.negative;
                    sim.product_mag[out][k] = p_mag;
                    sim.product_neg[out][k] = p_neg ? 1 : 0;
                    acc.add(p_mag, p_neg, q);
                }
            }
            PixelTrace& t = sim.pixels[out];
            t.accumulator = acc.acc;
            t.exact_sum = acc.exact;
            t.acc_wrapped_step = acc.stepped_wrap ? 1 : 0;
            t.pixel = uint32_t((acc.acc >> (q + 3)) & ((uint64_t(1) << q) - 1));
            t.wrapped =
                (acc.exact < 0 || acc.exact >= (int64_t(1) << (2 * q + 3))) ? 1 : 0;
        }
    }
    return sim;
}

InverseQuantResult inverse_quantization(const CoeffRegisterImage& coeffs,
                                        const QMatrixRegister& qreg) {
    if (coeffs.q != qreg.q) throw std::invalid_argument("inverse_quantization: q mismatch");
    const int q = coeffs.q;
    InverseQuantResult res;
    res.trace.n = coeffs.n;
    res.trace.q = q;
    res.trace.at.assign(size_t(1) << (2 * coeffs.n), PixelTrace{});
    for (uint32_t y = 0; y < coeffs.side(); ++y) {
        for (uint32_t x = 0; x < coeffs.side(); ++x) {
            const size_t idx = coeffs.index(y, x);
            PixelTrace& t = res.trace.at[idx];
            t.fq_mag = coeffs.magnitude[idx];
            t.fq_neg = coeffs.negative[idx];
            t.fprime_mag = t.fq_mag * uint32_t(qreg.at(int(y % 8), int(x % 8)));
            t.fprime_neg = t.fq_neg;
            t.g = 1;
        }
    }
    res.circuit = synth_step4(QjpegLayout::make(coeffs.n, q));
    return res;
}

Circuit inverse_dct(PipelineTrace& trace, const CosTable& table) {
    if (trace.q != table.q) throw std::invalid_argument("inverse_dct: q mismatch");
    const int n = trace.n, q = trace.q;
    const uint32_t side = 1u << n;
    const uint64_t low_mask = (uint64_t(1) << (q + 3)) - 1;

    for (uint32_t by = 0; by < side; by += 8) {
        for (uint32_t bx = 0; bx < side; bx += 8) {
            // gather the block's recovered coefficients
            std::array<uint64_t, 64> f3{};
            std::array<uint8_t, 64> fneg{};
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    PixelTrace& t = trace.at[((size_t(by) + u) << n) + bx + v];
                    f3[size_t(u) * 8 + v] = t.fprime_mag & low_mask;
                    fneg[size_t(u) * 8 + v] = t.fprime_neg;
                    t.fprime_truncated = t.fprime_mag > low_mask ? 1 : 0;
                }
            }
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    PixelAccumulator acc;
                    for (int u = 0; u < 8; ++u) {
                        for (int v = 0; v < 8; ++v) {
                            const size_t k = size_t(u) * 8 + v;
                            const SignMagFixed& cf = table.at(i, j, u, v);
                            acc.add(f3[k] * cf.magnitude, (fneg[k] != 0) != cf.negative,
                                    q);
                        }
                    }
                    PixelTrace& t = trace.at[((size_t(by) + i) << n) + bx + j];
                    t.accumulator = acc.acc;
                    t.exact_sum = acc.exact;
                    t.acc_wrapped_step = acc.stepped_wrap ? 1 : 0;
                    t.pixel = uint32_t((acc.acc >> (q + 3)) & ((uint64_t(1) << q) - 1));
                    t.wrapped =
                        (acc.exact < 0 || acc.exact >= (int64_t(1) << (2 * q + 3))) ? 1
                                                                                    : 0;
                }
            }
        }
    }
    return synth_step5(QjpegLayout::make(n, q), table);
}

void PipelineTrace::write_jsonl(std::ostream& out, const CosTable& table) const {
    const uint32_t side = 1u << n;
    const uint64_t low_mask = (uint64_t(1) << (q + 3)) - 1;
    for (uint32_t y = 0; y < side; ++y) {
        for (uint32_t x = 0; x < side; ++x) {
            const PixelTrace& t = at[(size_t(y) << n) + x];
            out << "{\"y\":" << y << ",\"x\":" << x << ",\"fq\":" << (t.fq_neg ? "-" : "")
                << t.fq_mag << ",\"fprime\":" << (t.fprime_neg ? "-" : "") << t.fprime_mag
                << ",\"g\":" << int(t.g) << ",\"acc\":" << t.accumulator
                << ",\"exact\":" << t.exact_sum << ",\"pixel\":" << t.pixel
                << ",\"wrapped\":" << int(t.wrapped)
                << ",\"fprime_truncated\":" << int(t.fprime_truncated)
                << ",\"products\":[";
            const uint32_t by = y & ~7u, bx = x & ~7u;
            const int i = int(y % 8), j = int(x % 8);
            bool first = true;
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    const PixelTrace& cu = at[((size_t(by) + u) << n) + bx + v];
                    const SignMagFixed& cf = table.at(i, j, u, v);
                    const uint64_t p = (cu.fprime_mag & low_mask) * cf.magnitude;
                    const bool neg = (cu.fprime_neg != 0) != cf.negative;
                    if (!first) out << ',';
                    first = false;
                    out << (neg ? "-" : "") << p;
                }
            }
            out << "]}\n";
        }
    }
}

PipelineResult run_pipeline(const PixelImage& img, const QuantMatrix& qm) {
    const int n = img.n, q = img.q;
    const QMatrixRegister qreg = QMatrixRegister::from(qm, q);
    const CosTable table = CosTable::build(q);

    // Step 1 (classical): DCT and quantization per block
    std::vector<QuantBlock> qblocks;
    for (const Block8& b : split_blocks(img)) {
        qblocks.push_back(quantize(dct_8x8(b), qm, q));
    }
    const CoeffRegisterImage coeffs = CoeffRegisterImage::from_blocks(qblocks, n, q);

    PipelineResult res;
    res.step2_circuit = synth_step2(coeffs);
    const Circuit step3 = synth_step3(qreg);
    res.step2_mcx = res.step2_circuit.tally().mcx;
    res.step3_mcx = step3.tally().mcx;

    InverseQuantResult iq = inverse_quantization(coeffs, qreg);
    const Circuit step5 = inverse_dct(iq.trace, table);

    res.tally = res.step2_circuit.tally();
    res.tally += step3.tally();
    res.tally += iq.circuit.tally();
    res.tally += step5.tally();

    res.recovered = PixelImage::zero(n, q);
    res.recovered_display = PixelImage::zero(n, q);
    const uint32_t max_value = (1u << q) - 1;
    for (uint32_t y = 0; y < img.side(); ++y) {
        for (uint32_t x = 0; x < img.side(); ++x) {
            const PixelTrace& t = iq.trace.at[(size_t(y) << n) + x];
            res.recovered.set(y, x, t.pixel);
            if (t.wrapped) {
                ++res.wrapped_count;
                res.recovered_display.set(y, x, t.exact_sum < 0 ? 0u : max_value);
            } else {
                res.recovered_display.set(y, x, t.pixel);
            }
            if (t.fprime_truncated) ++res.truncated_count;
        }
    }
    res.trace = std::move(iq.trace);

    const uint64_t ones = count_one_bits(img);
    if (ones > 0) {
        res.measured_r_j = double(res.step2_mcx) / double(ones);
    }
    return res;
}

}  // namespace qimg
