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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qimg/pixmap.hpp"

namespace qimg {

/// A control literal: the gate fires when `qubit` holds |1> (positive) or
/// |0> (negative). Negative controls are first class so that compressed
/// minterms keep their gate counts without surrounding NOT pairs.
struct Control {
    uint32_t qubit = 0;
    bool positive = true;

    bool operator==(const Control&) const = default;
};

/// A contiguous little-endian register slice: value bit k lives on qubit
/// lo + k.
struct Span {
    uint32_t lo = 0;
    uint32_t width = 0;

    bool operator==(const Span&) const = default;
};

struct HGate {
    uint32_t target = 0;
};

/// k-controlled NOT (k >= 0). Controls never include the target.
struct McxGate {
    std::vector<Control> controls;
    uint32_t target = 0;
};

/// Black-box multiplier: product ^= a * b when the controls match.
/// a and b have equal width; product is twice as wide.
struct MulerGate {
    Span a, b, product;
    std::vector<Control> controls;
};

/// Black-box adder acting on `sum` in place, modulo 2^sum.width:
/// forward sum += addend, reversed sum -= addend (the 2^n wraparound
/// convention for b < a).
struct AdderGate {
    Span addend, sum;
    bool reversed = false;
    std::vector<Control> controls;
};

/// Free-form annotation; simulated as the identity and never costed.
struct NoteGate {
    std::string text;
};

using Gate = std::variant<HGate, McxGate, MulerGate, AdderGate, NoteGate>;

/// Aggregate gate counts, derived from the gate list on demand.
struct GateTally {
    uint64_t hadamard = 0;
    uint64_t mcx = 0;
    std::map<uint32_t, uint64_t> mcx_by_controls;
    uint64_t muler = 0;
    uint64_t adder_forward = 0;
    uint64_t adder_reversed = 0;
    uint64_t notes = 0;

    /// Network cost under the drawn-gate rule: every Hadamard and every
    /// k-CNOT counts 1; MULER and ADDER boxes count via their
    /// width cost formulas.
    double elementary_cost = 0;

    GateTally& operator+=(const GateTally& other);
};

/// Ordered gate list over a fixed qubit count. Gates are validated against
/// the register bounds when added.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(uint32_t num_qubits) : num_qubits_(num_qubits) {}

    uint32_t num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }

    void add(Gate g);
    void append(const Circuit& other);  // must share num_qubits

    GateTally tally() const;

    /// Line-oriented text form, one gate per line; bit exact and diffable.
    std::string serialize() const;
    static Circuit parse(const std::string& text);

private:
    uint32_t num_qubits_ = 0;
    std::vector<Gate> gates_;
};

/// The per-location color map obtained from a preparation circuit: every
/// location YX in [0, 2^(h+w)) carries exactly one q-bit color value.
struct GqirState {
    int h = 0, w = 0, q = 0;
    std::vector<uint64_t> color_of;  ///< indexed by Y * 2^w + X

    uint64_t at(uint32_t y, uint32_t x) const {
        return color_of[(size_t(y) << w) + x];
    }
};

/// Register convention for preparation circuits built here:
/// qubits [0, w) hold x_0..x_{w-1}, [w, w+h) hold y_0..y_{h-1}, and
/// [h+w, h+w+q) hold color bits C^0..C^{q-1}.
struct PrepLayout {
    int h = 0, w = 0, q = 0;
    uint32_t location_lo() const { return 0; }
    uint32_t location_width() const { return uint32_t(h + w); }
    uint32_t color_lo() const { return uint32_t(h + w); }
    uint32_t color_width() const { return uint32_t(q); }
    uint32_t num_qubits() const { return uint32_t(h + w + q); }
};

/// h+w Hadamards followed by one (h+w)-controlled NOT per set color bit,
/// with negative controls on the 0 bits of the location. The MCX count
/// equals count_one_bits(img).
Circuit prepare_uncompressed(const PixelImage& img);

/// Exact classical evaluation of a preparation-style circuit: a leading
/// Hadamard layer followed by classical reversible gates only. Every basis
/// assignment of the Hadamard qubits evolves independently (the gates
/// permute computational basis states, so the uniform superposition is
/// preserved with one classical track per branch).
class BranchStates {
public:
    size_t branch_count() const { return size_t(1) << branch_qubits_.size(); }
    const std::vector<uint32_t>& branch_qubits() const { return branch_qubits_; }
    uint32_t num_qubits() const { return num_qubits_; }

    bool get(size_t branch, uint32_t qubit) const;
    uint64_t extract(size_t branch, Span span) const;

private:
    friend BranchStates run_branches(const Circuit&);
    uint32_t num_qubits_ = 0;
    uint32_t words_ = 0;
    std::vector<uint32_t> branch_qubits_;  // sorted Hadamard targets
    std::vector<uint64_t> data_;           // branch major
};

BranchStates run_branches(const Circuit& circuit);

/// Evaluates a preparation circuit under the PrepLayout convention for an
/// h x w location register with a q-bit color register.
GqirState evaluate(const Circuit& circuit, int h, int w, int q);

/// Square-image shorthand (h = w = n).
GqirState evaluate(const Circuit& circuit, int n, int q);

/// Inverse of the ideal preparation: rebuilds the pixel grid from the
/// state. Requires h == w.
PixelImage readback(const GqirState& state);

}  // namespace qimg
