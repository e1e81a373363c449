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

#include "qimg/bec.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace qimg {

namespace {

uint64_t pool_key(const Implicant& im) {
    return (uint64_t(im.care_mask) << 32) | im.pattern;
}

// Scan order: ascending by the smallest covered minterm (the pattern with
// don't-cares zeroed), then by care mask. Round one coincides with the
// ascending-YX order of the original minterm scan.
bool scan_less(const Implicant& a, const Implicant& b) {
    if (a.pattern != b.pattern) return a.pattern < b.pattern;
    return a.care_mask < b.care_mask;
}

// One target bit's pool, minimized in place. Each round scans the pool in
// ascending order; the first mergeable partner (lowest scan position after
// the current entry) wins, both entries leave the round, and the merged
// cube joins the next round's pool, where it may combine with survivors of
// any earlier round. A partner differs in exactly one fixed bit and agrees
// on the care mask, so it can be probed directly instead of rescanning the
// whole tail; the probe order reproduces what the ascending pairwise scan
// would find first.
void minimize_cubes(std::vector<Implicant>& pool, uint32_t round_limit, BecStats* stats) {
    std::unordered_map<uint64_t, size_t> index;
    std::vector<bool> used;
    std::vector<Implicant> next;

    for (uint32_t round = 0; round < round_limit && pool.size() > 1; ++round) {
        if (stats) stats->rounds = std::max(stats->rounds, round + 1);
        std::sort(pool.begin(), pool.end(), scan_less);
        index.clear();
        index.reserve(pool.size() * 2);
        for (size_t i = 0; i < pool.size(); ++i) index.emplace(pool_key(pool[i]), i);
        used.assign(pool.size(), false);
        next.clear();
        bool merged_any = false;

        for (size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            size_t best = pool.size();
            uint32_t care = pool[i].care_mask;
            while (care) {
                const uint32_t bit = care & ~(care - 1);
                care &= care - 1;
                if (stats) ++stats->comparisons;
                const auto it =
                    index.find(pool_key({pool[i].pattern ^ bit, pool[i].care_mask}));
                if (it != index.end() && it->second > i && !used[it->second]) {
                    best = std::min(best, it->second);
                }
            }
            if (best < pool.size()) {
                used[i] = used[best] = true;
                const uint32_t bit = pool[i].pattern ^ pool[best].pattern;
                next.push_back({pool[i].pattern & ~bit, pool[i].care_mask & ~bit});
                merged_any = true;
            } else {
                next.push_back(pool[i]);
            }
        }
        pool.swap(next);
        if (!merged_any) break;
    }
    std::sort(pool.begin(), pool.end(), scan_less);
}

}  // namespace

std::vector<Implicant> minimize_plane(std::vector<uint32_t> minterms, int location_bits,
                                      uint32_t round_limit, BecStats* stats) {
    if (location_bits < 0 || location_bits > 31) {
        throw std::invalid_argument("minimize_plane: location_bits out of range");
    }
    const uint32_t full_mask =
        location_bits == 31 ? 0x7FFFFFFFu : (1u << location_bits) - 1;
    std::vector<Implicant> pool;
    pool.reserve(minterms.size());
    for (uint32_t m : minterms) {
        if (m > full_mask) throw std::invalid_argument("minimize_plane: minterm out of range");
        pool.push_back({m, full_mask});
    }
    minimize_cubes(pool, round_limit, stats);
    return pool;
}

BecResult bec_compress(const Circuit& prep) {
    std::vector<uint32_t> location;
    bool layer_done = false;
    for (const Gate& g : prep.gates()) {
        if (std::holds_alternative<HGate>(g)) {
            if (layer_done) {
                throw std::invalid_argument("bec_compress: circuit not in preparation form");
            }
            location.push_back(std::get<HGate>(g).target);
        } else if (std::holds_alternative<NoteGate>(g)) {
            continue;
        } else if (std::holds_alternative<McxGate>(g)) {
            layer_done = true;
        } else {
            throw std::invalid_argument("bec_compress: circuit not in preparation form");
        }
    }
    std::sort(location.begin(), location.end());
    if (location.size() > 31) {
        throw std::invalid_argument("bec_compress: location register too wide");
    }
    std::vector<int> loc_pos(prep.num_qubits(), -1);
    for (size_t k = 0; k < location.size(); ++k) loc_pos[location[k]] = int(k);

    // collect cubes per target; controls must sit on the location register
    // (missing literals are don't-cares, so re-running on compressed output
    // is well defined)
    std::map<uint32_t, std::vector<Implicant>> pools;
    uint64_t mcx_before = 0;
    for (const Gate& g : prep.gates()) {
        const auto* m = std::get_if<McxGate>(&g);
        if (m == nullptr) continue;
        ++mcx_before;
        if (loc_pos[m->target] >= 0) {
            throw std::invalid_argument("bec_compress: gate targets the location register");
        }
        Implicant im;
        for (const Control& c : m->controls) {
            const int pos = loc_pos[c.qubit];
            if (pos < 0) {
                throw std::invalid_argument("bec_compress: control off the location register");
            }
            im.care_mask |= 1u << pos;
            if (c.positive) im.pattern |= 1u << pos;
        }
        pools[m->target].push_back(im);
    }

    BecStats stats;
    stats.round_limit = uint32_t(location.size());
    stats.gates_before = mcx_before;
    const uint64_t color_planes = prep.num_qubits() - location.size();
    stats.comparison_bound = uint64_t(location.size()) * color_planes
                             << std::min<size_t>(2 * location.size(), 40);

    Circuit out(prep.num_qubits());
    for (uint32_t qb : location) out.add(HGate{qb});
    for (auto& [target, pool] : pools) {
        minimize_cubes(pool, stats.round_limit, &stats);
        for (const Implicant& im : pool) {
            McxGate gate;
            gate.target = target;
            for (size_t k = 0; k < location.size(); ++k) {
                if (im.care_mask & (1u << k)) {
                    gate.controls.push_back({location[k], (im.pattern >> k & 1u) != 0});
                }
            }
            out.add(std::move(gate));
            ++stats.gates_after;
        }
    }
    return {std::move(out), stats};
}

BecCost bec_cost(const BecStats& stats, const Circuit& compressed) {
    BecCost cost;
    cost.preprocessing_comparisons = stats.comparisons;
    cost.preprocessing_bound = stats.comparison_bound;
    cost.input_gates = compressed.tally().mcx;
    return cost;
}

std::vector<uint32_t> expand_implicant(const Implicant& im, int location_bits) {
    std::vector<uint32_t> free_bits;
    for (int k = 0; k < location_bits; ++k) {
        if (!(im.care_mask & (1u << k))) free_bits.push_back(uint32_t(k));
    }
    std::vector<uint32_t> out;
    out.reserve(size_t(1) << free_bits.size());
    for (uint32_t f = 0; f < (1u << free_bits.size()); ++f) {
        uint32_t m = im.pattern;
        for (size_t k = 0; k < free_bits.size(); ++k) {
            if ((f >> k) & 1u) m |= 1u << free_bits[k];
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace qimg
