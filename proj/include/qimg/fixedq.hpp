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

#include <cstdint>

namespace qimg {

// MULER and ADDER are treated as black boxes: exact input/output semantics
// plus closed-form gate-cost formulas. Their internal decompositions are out
// of scope here.

/// Exact unsigned product of two width-bit operands (result has 2*width bits).
/// Throws if an operand does not fit the declared width.
uint64_t muler_semantics(uint64_t a, uint64_t b, int width);

/// Forward: a + b as a (width+1)-bit value.
/// Reversed: b - a when b >= a, otherwise the modular wraparound
/// 2^width - (a - b).
uint64_t adder_semantics(uint64_t a, uint64_t b, int width, bool reversed);

/// Gate cost of a width-n multiplier network:
///   n^2 + 4n - 4 + (4n - 8 + 2*log2(n)) * log2(n)
/// Real valued because of the log terms.
double muler_cost(int n);

/// Gate cost of a width-n adder network: 8n - 2.
int64_t adder_cost(int n);

/// Gate cost of a width-n ripple adder: 4n - 2 (the stage building block
/// inside the multiplier network).
int64_t ripple_adder_cost(int n);

/// Sign-magnitude fixed point: a dedicated sign plus an unsigned magnitude
/// split into int_bits integer and frac_bits fractional bits.
struct SignMagFixed {
    bool negative = false;
    uint64_t magnitude = 0;  ///< < 2^(int_bits + frac_bits)
    int int_bits = 0;
    int frac_bits = 0;

    double value() const {
        const double m = double(magnitude) / double(uint64_t(1) << frac_bits);
        return negative ? -m : m;
    }
};

/// Rounds |x| to frac_bits fractional bits (half away from zero) and keeps
/// the sign separately. Throws if the rounded magnitude overflows the
/// declared width. Encoding error is at most 2^-(frac_bits+1).
SignMagFixed encode_fixed(double x, int int_bits, int frac_bits);

}  // namespace qimg
