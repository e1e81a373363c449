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

#include "qimg/fixedq.hpp"

#include <cmath>
#include <stdexcept>

namespace qimg {

uint64_t muler_semantics(uint64_t a, uint64_t b, int width) {
    if (width < 1 || width > 31) throw std::invalid_argument("muler: width out of range");
    const uint64_t limit = uint64_t(1) << width;
    if (a >= limit || b >= limit) throw std::invalid_argument("muler: operand exceeds width");
    return a * b;
}

uint64_t adder_semantics(uint64_t a, uint64_t b, int width, bool reversed) {
    if (width < 1 || width > 62) throw std::invalid_argument("adder: width out of range");
    const uint64_t limit = uint64_t(1) << width;
    if (a >= limit || b >= limit) throw std::invalid_argument("adder: operand exceeds width");
    if (!reversed) return a + b;  // fits width+1 bits
    return b >= a ? b - a : limit - (a - b);
}

double muler_cost(int n) {
    if (n < 1) throw std::invalid_argument("muler_cost: n >= 1 required");
    const double lg = std::log2(double(n));
    return double(n) * n + 4.0 * n - 4.0 + (4.0 * n - 8.0 + 2.0 * lg) * lg;
}

int64_t adder_cost(int n) {
    if (n < 1) throw std::invalid_argument("adder_cost: n >= 1 required");
    return 8ll * n - 2;
}

int64_t ripple_adder_cost(int n) {
    if (n < 1) throw std::invalid_argument("ripple_adder_cost: n >= 1 required");
    return 4ll * n - 2;
}

SignMagFixed encode_fixed(double x, int int_bits, int frac_bits) {
    if (int_bits < 0 || frac_bits < 0 || int_bits + frac_bits < 1 || int_bits + frac_bits > 62) {
        throw std::invalid_argument("encode_fixed: bad widths");
    }
    SignMagFixed f;
    f.int_bits = int_bits;
    f.frac_bits = frac_bits;
    f.negative = std::signbit(x) && x != 0.0;
    const double scaled = std::abs(x) * double(uint64_t(1) << frac_bits);
    const double rounded = std::round(scaled);  // half away from zero
    if (rounded >= double(uint64_t(1) << (int_bits + frac_bits))) {
        throw std::range_error("encode_fixed: magnitude overflow after rounding");
    }
    f.magnitude = uint64_t(rounded);
    if (f.magnitude == 0) f.negative = false;
    return f;
}

}  // namespace qimg
