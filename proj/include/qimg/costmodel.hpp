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

#include <iosfwd>
#include <optional>

#include "qimg/jpeg.hpp"
#include "qimg/pixmap.hpp"

namespace qimg {

/// Analytic complexity of the pipeline stages for a 2^n x 2^n image with
/// q-bit color. Real valued throughout because of the log terms.
struct CostReport {
    int n = 0, q = 0;
    double r_j = 0.1;
    double c_before = 0;  ///< uncompressed preparation: (q/2) * 2^(2n)
    double c2 = 0;        ///< coefficient input stage, r_j * c_before
    double c3 = 0;        ///< quantization-matrix storage, always 208
    double c4 = 0;        ///< inverse quantization stage
    double c5 = 0;        ///< inverse DCT stage
    double total = 0;     ///< c2 + c3 + c4 + c5
    double a_term = 0;    ///< (4q-12+2log2(q-1)) log2(q-1)
    double b_term = 0;    ///< 64 (4q+4+2log2(q+3)) log2(q+3)
    double m = 0;         ///< size threshold, a function of q only
    int min_n = 0;        ///< ceil(m)
    double r = 0;         ///< compression ratio 1 - total / c_before
};

CostReport analytic_costs(int n, int q, double r_j = 0.1);

/// m(q) = 0.5 log2((65q^2 + 2722q + 7449 + A + B) / (0.45 q)); preparation
/// is compressed exactly when n > m.
double threshold_m(int q);

/// ceil(m): the smallest image exponent that compresses.
int min_compressing_n(int q);

/// Same threshold found by direct search over n (verification path).
int min_compressing_n_constructive(int q, double r_j = 0.1);

double ratio_r(int n, int q, double r_j = 0.1);

/// Measured coefficient-to-pixel gate ratio: (set bits + negatives over
/// all quantized coefficients) / (set bits over all pixels). Undefined for
/// an all-black image.
std::optional<double> measured_r_j(const PixelImage& img, const QuantMatrix& qm);

/// Head-to-head gate counts of the two compression schemes on one image.
/// Gate counts follow the input-complexity convention: controlled NOTs
/// that store data, Hadamards excluded.
struct SchemeComparison {
    uint64_t gqir_gates = 0;  ///< uncompressed: one per set pixel bit
    uint64_t bec_gates = 0;
    double bec_ratio = 0;  ///< 1 - bec/gqir
    double bec_seconds = 0;
    uint64_t jpeg_gates = 0;  ///< coefficient-storage stage
    double jpeg_ratio = 0;   ///< 1 - jpeg/gqir
    double jpeg_seconds = 0;  ///< classical DCT + quantization time
};

struct CompareOptions {
    int bec_max_n = 8;   ///< the BEC preprocessing guard
    bool force = false;  ///< lift the guard explicitly
    bool run_bec = true;
};

SchemeComparison compare_schemes(const PixelImage& img,
                                 const QuantMatrix& qm = QuantMatrix::standard_luminance(),
                                 const CompareOptions& opts = {});

/// CSV: q,m,min_n for q in [q_lo, q_hi].
void write_threshold_curve_csv(std::ostream& out, int q_lo, int q_hi);

/// CSV: n,q,r over the given grid.
void write_ratio_surface_csv(std::ostream& out, int n_lo, int n_hi, int q_lo, int q_hi,
                             double r_j = 0.1);

}  // namespace qimg
