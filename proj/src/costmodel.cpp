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

#include "qimg/costmodel.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qimg/bec.hpp"
#include "qimg/qjpeg.hpp"

namespace qimg {

namespace {

double a_term(int q) {
    const double lg = std::log2(double(q - 1));
    return (4.0 * q - 12.0 + 2.0 * lg) * lg;
}

double b_term(int q) {
    const double lg = std::log2(double(q + 3));
    return 64.0 * (4.0 * q + 4.0 + 2.0 * lg) * lg;
}

void check_domain(int n, int q, double r_j) {
    if (n < 1) throw std::domain_error("cost model: n >= 1 required");
    if (q < 2) throw std::domain_error("cost model: q >= 2 required (log2(q-1) domain)");
    if (!(r_j > 0.0 && r_j <= 1.0)) {
        throw std::domain_error("cost model: r_j must lie in (0, 1]");
    }
}

double pow4n(int n) { return std::ldexp(1.0, 2 * n); }  // 2^(2n)

// set bits plus negatives over all quantized coefficients
uint64_t coefficient_gate_count(const PixelImage& img, const QuantMatrix& qm) {
    uint64_t numer = 0;
    for (const Block8& b : split_blocks(img)) {
        const QuantBlock qb = quantize(dct_8x8(b), qm, img.q);
        for (int coeff : qb.coeffs) {
            numer += uint64_t(std::popcount(uint32_t(coeff < 0 ? -coeff : coeff)));
            if (coeff < 0) ++numer;
        }
    }
    return numer;
}

}  // namespace

double threshold_m(int q) {
    if (q < 2) throw std::domain_error("threshold_m: q >= 2 required");
    const double numer = 65.0 * q * q + 2722.0 * q + 7449.0 + a_term(q) + b_term(q);
    return 0.5 * std::log2(numer / (0.45 * q));
}

int min_compressing_n(int q) { return int(std::ceil(threshold_m(q))); }

int min_compressing_n_constructive(int q, double r_j) {
    for (int n = 1; n <= 60; ++n) {
        const CostReport rep = analytic_costs(n, q, r_j);
        if (rep.total < rep.c_before) return n;
    }
    throw std::runtime_error("min_compressing_n_constructive: no n found");
}

CostReport analytic_costs(int n, int q, double r_j) {
    check_domain(n, q, r_j);
    CostReport rep;
    rep.n = n;
    rep.q = q;
    rep.r_j = r_j;
    rep.c_before = 0.5 * q * pow4n(n);
    rep.c2 = r_j * rep.c_before;
    rep.c3 = 208.0;
    rep.a_term = a_term(q);
    rep.b_term = b_term(q);
    rep.c4 = double(q) * q + 2.0 * q + 9.0 + rep.a_term;
    rep.c5 = 64.0 * q * q + 2720.0 * q + 7232.0 + rep.b_term;
    rep.total = rep.c2 + rep.c3 + rep.c4 + rep.c5;
    rep.m = threshold_m(q);
    rep.min_n = min_compressing_n(q);
    rep.r = 1.0 - rep.total / rep.c_before;
    return rep;
}

double ratio_r(int n, int q, double r_j) {
    return analytic_costs(n, q, r_j).r;
}

std::optional<double> measured_r_j(const PixelImage& img, const QuantMatrix& qm) {
    const uint64_t ones = count_one_bits(img);
    if (ones == 0) return std::nullopt;
    return double(coefficient_gate_count(img, qm)) / double(ones);
}

SchemeComparison compare_schemes(const PixelImage& img, const QuantMatrix& qm,
                                 const CompareOptions& opts) {
    using clock = std::chrono::steady_clock;
    SchemeComparison cmp;
    cmp.gqir_gates = count_one_bits(img);

    {
        const auto t0 = clock::now();
        cmp.jpeg_gates = coefficient_gate_count(img, qm);
        cmp.jpeg_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    }

    if (opts.run_bec) {
        if (img.n > opts.bec_max_n && !opts.force) {
            throw std::invalid_argument(
                "compare_schemes: BEC preprocessing above the size cap (n > " +
                std::to_string(opts.bec_max_n) + "); pass force to run anyway");
        }
        const auto t0 = clock::now();
        const BecResult bec = bec_compress(prepare_uncompressed(img));
        cmp.bec_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        cmp.bec_gates = bec.stats.gates_after;
    }

    if (cmp.gqir_gates > 0) {
        cmp.jpeg_ratio = 1.0 - double(cmp.jpeg_gates) / double(cmp.gqir_gates);
        if (opts.run_bec) {
            cmp.bec_ratio = 1.0 - double(cmp.bec_gates) / double(cmp.gqir_gates);
        }
    }
    return cmp;
}

void write_threshold_curve_csv(std::ostream& out, int q_lo, int q_hi) {
    if (q_lo < 2 || q_hi < q_lo) throw std::domain_error("threshold curve: bad q range");
    out << "q,m,min_n\n";
    for (int q = q_lo; q <= q_hi; ++q) {
        out << q << ',' << threshold_m(q) << ',' << min_compressing_n(q) << '\n';
    }
}

void write_ratio_surface_csv(std::ostream& out, int n_lo, int n_hi, int q_lo, int q_hi,
                             double r_j) {
    if (n_lo < 1 || n_hi < n_lo || q_lo < 2 || q_hi < q_lo) {
        throw std::domain_error("ratio surface: bad range");
    }
    out << "n,q,r\n";
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int q = q_lo; q <= q_hi; ++q) {
            out << n << ',' << q << ',' << ratio_r(n, q, r_j) << '\n';
        }
    }
}

}  // namespace qimg
