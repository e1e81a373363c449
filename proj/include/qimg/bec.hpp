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

#include "qimg/gqir.hpp"

namespace qimg {

/// A product term over the location literals: bit set in care_mask means
/// the literal is fixed to the corresponding bit of pattern; a clear bit
/// is a don't-care. Expanding an implicant yields 2^(don't-cares)
/// original minterms.
struct Implicant {
    uint32_t pattern = 0;    ///< don't-care positions are zero here
    uint32_t care_mask = 0;  ///< 1 = fixed literal

    bool operator==(const Implicant&) const = default;
};

/// Instrumentation of one compression run.
struct BecStats {
    uint32_t rounds = 0;            ///< rounds actually executed
    uint32_t round_limit = 0;       ///< 2n (one per location literal)
    uint64_t comparisons = 0;       ///< pair examinations performed
    uint64_t comparison_bound = 0;  ///< analytic bound 2n * q * 2^(4n)
    uint64_t gates_before = 0;      ///< controlled NOTs going in
    uint64_t gates_after = 0;       ///< controlled NOTs coming out
};

struct BecResult {
    Circuit circuit;
    BecStats stats;
};

/// Pairwise minimization of one target bit's minterm set. Two implicants
/// merge when their care masks agree and their patterns differ in exactly
/// one fixed bit; scanning is in ascending pattern order and the first
/// matching partner wins, repeated for up to `round_limit` rounds or until
/// a round makes no merge. Merged implicants re-enter the pool in the next
/// round and may combine with survivors of any earlier round.
std::vector<Implicant> minimize_plane(std::vector<uint32_t> minterms, int location_bits,
                                      uint32_t round_limit, BecStats* stats);

/// Compresses a preparation circuit (Hadamard layer followed by controlled
/// NOTs whose controls all sit on the Hadamard register). Returns the
/// compressed circuit plus run statistics; semantics are preserved exactly
/// (every output implicant set expands back to the input minterm set).
BecResult bec_compress(const Circuit& prep);

/// Cost split: measured preprocessing comparisons next to the analytic
/// bound, and the input complexity (controlled-NOT count of the compressed
/// circuit).
struct BecCost {
    uint64_t preprocessing_comparisons = 0;
    uint64_t preprocessing_bound = 0;
    uint64_t input_gates = 0;
};

BecCost bec_cost(const BecStats& stats, const Circuit& compressed);

/// Expands an implicant back to its minterms (test and verification aid).
std::vector<uint32_t> expand_implicant(const Implicant& im, int location_bits);

}  // namespace qimg
