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

#include "qimg/gqir.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "qimg/fixedq.hpp"

namespace qimg {

namespace {

void check_qubit(uint32_t qubit, uint32_t num_qubits, const char* what) {
    if (qubit >= num_qubits) {
        throw std::out_of_range(std::string(what) + " addresses qubit " +
                                std::to_string(qubit) + " outside register of " +
                                std::to_string(num_qubits));
    }
}

void check_span(const Span& s, uint32_t num_qubits, const char* what) {
    if (s.width == 0 || s.width > 62 || uint64_t(s.lo) + s.width > num_qubits) {
        throw std::out_of_range(std::string(what) + " span out of range");
    }
}

void check_controls(const std::vector<Control>& cs, uint32_t num_qubits,
                    const char* what) {
    for (size_t i = 0; i < cs.size(); ++i) {
        check_qubit(cs[i].qubit, num_qubits, what);
        for (size_t j = i + 1; j < cs.size(); ++j) {
            if (cs[i].qubit == cs[j].qubit) {
                throw std::invalid_argument(std::string(what) + " has a duplicate control");
            }
        }
    }
}

bool spans_overlap(const Span& a, const Span& b) {
    return a.lo < b.lo + b.width && b.lo < a.lo + a.width;
}

bool span_contains(const Span& s, uint32_t qubit) {
    return qubit >= s.lo && qubit < s.lo + s.width;
}

}  // namespace

void Circuit::add(Gate g) {
    if (const auto* h = std::get_if<HGate>(&g)) {
        check_qubit(h->target, num_qubits_, "H");
    } else if (const auto* m = std::get_if<McxGate>(&g)) {
        check_qubit(m->target, num_qubits_, "MCX");
        check_controls(m->controls, num_qubits_, "MCX");
        for (const Control& c : m->controls) {
            if (c.qubit == m->target) {
                throw std::invalid_argument("MCX control set includes the target");
            }
        }
    } else if (const auto* mu = std::get_if<MulerGate>(&g)) {
        check_span(mu->a, num_qubits_, "MULER a");
        check_span(mu->b, num_qubits_, "MULER b");
        check_span(mu->product, num_qubits_, "MULER product");
        check_controls(mu->controls, num_qubits_, "MULER");
        if (mu->a.width != mu->b.width || mu->product.width != mu->a.width + mu->b.width) {
            throw std::invalid_argument("MULER widths: need |a| == |b| and |p| == |a| + |b|");
        }
        if (spans_overlap(mu->product, mu->a) || spans_overlap(mu->product, mu->b)) {
            throw std::invalid_argument("MULER product overlaps an operand");
        }
        for (const Control& c : mu->controls) {
            if (span_contains(mu->product, c.qubit)) {
                throw std::invalid_argument("MULER control lies in the product register");
            }
        }
    } else if (const auto* ad = std::get_if<AdderGate>(&g)) {
        check_span(ad->addend, num_qubits_, "ADDER addend");
        check_span(ad->sum, num_qubits_, "ADDER sum");
        check_controls(ad->controls, num_qubits_, "ADDER");
        if (spans_overlap(ad->addend, ad->sum)) {
            throw std::invalid_argument("ADDER registers overlap");
        }
        if (ad->addend.width > ad->sum.width) {
            throw std::invalid_argument("ADDER addend wider than sum register");
        }
        for (const Control& c : ad->controls) {
            if (span_contains(ad->sum, c.qubit)) {
                throw std::invalid_argument("ADDER control lies in the sum register");
            }
        }
    }
    gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("Circuit::append: register sizes differ");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

GateTally& GateTally::operator+=(const GateTally& other) {
    hadamard += other.hadamard;
    mcx += other.mcx;
    for (const auto& [k, v] : other.mcx_by_controls) mcx_by_controls[k] += v;
    muler += other.muler;
    adder_forward += other.adder_forward;
    adder_reversed += other.adder_reversed;
    notes += other.notes;
    elementary_cost += other.elementary_cost;
    return *this;
}

GateTally Circuit::tally() const {
    GateTally t;
    for (const Gate& g : gates_) {
        if (std::holds_alternative<HGate>(g)) {
            ++t.hadamard;
            t.elementary_cost += 1;
        } else if (const auto* m = std::get_if<McxGate>(&g)) {
            ++t.mcx;
            ++t.mcx_by_controls[uint32_t(m->controls.size())];
            t.elementary_cost += 1;
        } else if (const auto* mu = std::get_if<MulerGate>(&g)) {
            ++t.muler;
            t.elementary_cost += muler_cost(int(mu->a.width));
        } else if (const auto* ad = std::get_if<AdderGate>(&g)) {
            ad->reversed ? ++t.adder_reversed : ++t.adder_forward;
            t.elementary_cost += double(adder_cost(int(ad->sum.width)));
        } else {
            ++t.notes;
        }
    }
    return t;
}

namespace {

std::string controls_to_string(const std::vector<Control>& cs) {
    if (cs.empty()) return "-";
    std::vector<Control> sorted = cs;
    std::sort(sorted.begin(), sorted.end(),
              [](const Control& a, const Control& b) { return a.qubit < b.qubit; });
    std::string out;
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sorted[i].qubit) + ':' + (sorted[i].positive ? '1' : '0');
    }
    return out;
}

std::vector<Control> controls_from_string(const std::string& s) {
    std::vector<Control> cs;
    if (s == "-") return cs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad control: " + item);
        cs.push_back({uint32_t(std::stoul(item.substr(0, colon))),
                      item.substr(colon + 1) == "1"});
    }
    return cs;
}

std::string span_to_string(const Span& s) {
    return std::to_string(s.lo) + '+' + std::to_string(s.width);
}

Span span_from_string(const std::string& s) {
    const auto plus = s.find('+');
    if (plus == std::string::npos) throw std::invalid_argument("bad span: " + s);
    return {uint32_t(std::stoul(s.substr(0, plus))), uint32_t(std::stoul(s.substr(plus + 1)))};
}

}  // namespace

std::string Circuit::serialize() const {
    std::string out = "QUBITS " + std::to_string(num_qubits_) + "\n";
    for (const Gate& g : gates_) {
        if (const auto* h = std::get_if<HGate>(&g)) {
            out += "H " + std::to_string(h->target) + "\n";
        } else if (const auto* m = std::get_if<McxGate>(&g)) {
            out += "MCX " + controls_to_string(m->controls) + " " +
                   std::to_string(m->target) + "\n";
        } else if (const auto* mu = std::get_if<MulerGate>(&g)) {
            out += "MULER " + span_to_string(mu->a) + " " + span_to_string(mu->b) + " " +
                   span_to_string(mu->product) + " " + controls_to_string(mu->controls) + "\n";
        } else if (const auto* ad = std::get_if<AdderGate>(&g)) {
            out += std::string(ad->reversed ? "ADDERR " : "ADDER ") +
                   span_to_string(ad->addend) + " " + span_to_string(ad->sum) + " " +
                   controls_to_string(ad->controls) + "\n";
        } else {
            out += "NOTE " + std::get<NoteGate>(g).text + "\n";
        }
    }
    return out;
}

Circuit Circuit::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Circuit c;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "QUBITS") {
            uint32_t n = 0;
            ls >> n;
            c = Circuit(n);
            have_header = true;
            continue;
        }
        if (!have_header) throw std::invalid_argument("circuit text lacks QUBITS header");
        if (kind == "H") {
            uint32_t t;
            ls >> t;
            c.add(HGate{t});
        } else if (kind == "MCX") {
            std::string ctrl;
            uint32_t t;
            ls >> ctrl >> t;
            c.add(McxGate{controls_from_string(ctrl), t});
        } else if (kind == "MULER") {
            std::string a, b, p, ctrl;
            ls >> a >> b >> p >> ctrl;
            c.add(MulerGate{span_from_string(a), span_from_string(b), span_from_string(p),
                            controls_from_string(ctrl)});
        } else if (kind == "ADDER" || kind == "ADDERR") {
            std::string a, s, ctrl;
            ls >> a >> s >> ctrl;
            c.add(AdderGate{span_from_string(a), span_from_string(s), kind == "ADDERR",
                            controls_from_string(ctrl)});
        } else if (kind == "NOTE") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
            c.add(NoteGate{rest});
        } else {
            throw std::invalid_argument("unknown gate line: " + line);
        }
    }
    if (!have_header) throw std::invalid_argument("circuit text lacks QUBITS header");
    return c;
}

Circuit prepare_uncompressed(const PixelImage& img) {
    const PrepLayout lay{img.n, img.n, img.q};
    Circuit c(lay.num_qubits());
    for (uint32_t t = 0; t < lay.location_width(); ++t) c.add(HGate{t});

    const uint32_t side = img.side();
    for (uint32_t y = 0; y < side; ++y) {
        for (uint32_t x = 0; x < side; ++x) {
            const uint32_t value = img.at(y, x);
            if (value == 0) continue;
            std::vector<Control> controls;
            controls.reserve(lay.location_width());
            for (int k = 0; k < lay.w; ++k) {
                controls.push_back({uint32_t(k), ((x >> k) & 1u) != 0});
            }
            for (int k = 0; k < lay.h; ++k) {
                controls.push_back({uint32_t(lay.w + k), ((y >> k) & 1u) != 0});
            }
            for (int bit = 0; bit < img.q; ++bit) {
                if ((value >> bit) & 1u) {
                    c.add(McxGate{controls, lay.color_lo() + uint32_t(bit)});
                }
            }
        }
    }
    return c;
}

bool BranchStates::get(size_t branch, uint32_t qubit) const {
    return (data_[branch * words_ + qubit / 64] >> (qubit % 64)) & 1u;
}

uint64_t BranchStates::extract(size_t branch, Span span) const {
    uint64_t out = 0;
    for (uint32_t k = 0; k < span.width; ++k) {
        out |= uint64_t(get(branch, span.lo + k)) << k;
    }
    return out;
}

namespace {

struct BranchWriter {
    std::vector<uint64_t>& data;
    uint32_t words;

    bool get(size_t branch, uint32_t qubit) const {
        return (data[branch * words + qubit / 64] >> (qubit % 64)) & 1u;
    }
    void flip(size_t branch, uint32_t qubit) {
        data[branch * words + qubit / 64] ^= uint64_t(1) << (qubit % 64);
    }
    uint64_t extract(size_t branch, Span s) const {
        uint64_t out = 0;
        for (uint32_t k = 0; k < s.width; ++k) out |= uint64_t(get(branch, s.lo + k)) << k;
        return out;
    }
    void write(size_t branch, Span s, uint64_t value) {
        for (uint32_t k = 0; k < s.width; ++k) {
            const bool want = (value >> k) & 1u;
            if (want != get(branch, s.lo + k)) flip(branch, s.lo + k);
        }
    }
    bool controls_match(size_t branch, const std::vector<Control>& cs) const {
        for (const Control& c : cs) {
            if (get(branch, c.qubit) != c.positive) return false;
        }
        return true;
    }
};

}  // namespace

BranchStates run_branches(const Circuit& circuit) {
    BranchStates bs;
    bs.num_qubits_ = circuit.num_qubits();
    bs.words_ = (circuit.num_qubits() + 63) / 64;

    // collect the Hadamard layer; it must come first
    bool layer_done = false;
    for (const Gate& g : circuit.gates()) {
        if (std::holds_alternative<HGate>(g)) {
            if (layer_done) {
                throw std::invalid_argument("run_branches: Hadamard after the first layer");
            }
            const uint32_t t = std::get<HGate>(g).target;
            check_qubit(t, bs.num_qubits_, "H");
            if (std::find(bs.branch_qubits_.begin(), bs.branch_qubits_.end(), t) !=
                bs.branch_qubits_.end()) {
                throw std::invalid_argument("run_branches: duplicate Hadamard target");
            }
            bs.branch_qubits_.push_back(t);
        } else if (!std::holds_alternative<NoteGate>(g)) {
            layer_done = true;
        }
    }
    std::sort(bs.branch_qubits_.begin(), bs.branch_qubits_.end());
    if (bs.branch_qubits_.size() > 26) {
        throw std::runtime_error("run_branches: too many Hadamard qubits to enumerate");
    }

    const size_t count = size_t(1) << bs.branch_qubits_.size();
    bs.data_.assign(count * bs.words_, 0);
    BranchWriter w{bs.data_, bs.words_};
    for (size_t b = 0; b < count; ++b) {
        for (size_t k = 0; k < bs.branch_qubits_.size(); ++k) {
            if ((b >> k) & 1u) w.flip(b, bs.branch_qubits_[k]);
        }
    }

    // position of each branch qubit inside the branch index, or -1
    std::vector<int> branch_pos(bs.num_qubits_, -1);
    for (size_t k = 0; k < bs.branch_qubits_.size(); ++k) {
        branch_pos[bs.branch_qubits_[k]] = int(k);
    }
    // "clean" = still holding its branch-defining value; gates that write a
    // branch qubit invalidate the cube fast path for later controls on it
    std::vector<bool> clean(bs.num_qubits_, false);
    for (uint32_t qb : bs.branch_qubits_) clean[qb] = true;
    auto dirty_qubit = [&](uint32_t qb) { clean[qb] = false; };
    auto dirty_span = [&](Span s) {
        for (uint32_t k = 0; k < s.width; ++k) clean[s.lo + k] = false;
    };

    for (const Gate& g : circuit.gates()) {
        if (std::holds_alternative<HGate>(g) || std::holds_alternative<NoteGate>(g)) continue;
        if (const auto* m = std::get_if<McxGate>(&g)) {
            bool cube_ok = true;
            for (const Control& c : m->controls) {
                if (branch_pos[c.qubit] < 0 || !clean[c.qubit]) {
                    cube_ok = false;
                    break;
                }
            }
            if (cube_ok) {
                // enumerate exactly the branches matching the control pattern
                size_t base = 0;
                std::vector<int> free_pos;
                std::vector<bool> fixed(bs.branch_qubits_.size(), false);
                for (const Control& c : m->controls) {
                    const int pos = branch_pos[c.qubit];
                    fixed[size_t(pos)] = true;
                    if (c.positive) base |= size_t(1) << pos;
                }
                for (size_t k = 0; k < bs.branch_qubits_.size(); ++k) {
                    if (!fixed[k]) free_pos.push_back(int(k));
                }
                const size_t combos = size_t(1) << free_pos.size();
                for (size_t f = 0; f < combos; ++f) {
                    size_t b = base;
                    for (size_t k = 0; k < free_pos.size(); ++k) {
                        if ((f >> k) & 1u) b |= size_t(1) << free_pos[size_t(k)];
                    }
                    w.flip(b, m->target);
                }
            } else {
                for (size_t b = 0; b < count; ++b) {
                    if (w.controls_match(b, m->controls)) w.flip(b, m->target);
                }
            }
            dirty_qubit(m->target);
        } else if (const auto* mu = std::get_if<MulerGate>(&g)) {
            for (size_t b = 0; b < count; ++b) {
                if (!w.controls_match(b, mu->controls)) continue;
                const uint64_t a = w.extract(b, mu->a);
                const uint64_t bb = w.extract(b, mu->b);
                w.write(b, mu->product, w.extract(b, mu->product) ^ (a * bb));
            }
            dirty_span(mu->product);
        } else if (const auto* ad = std::get_if<AdderGate>(&g)) {
            const uint64_t mask = (ad->sum.width == 64)
                                      ? ~uint64_t(0)
                                      : (uint64_t(1) << ad->sum.width) - 1;
            for (size_t b = 0; b < count; ++b) {
                if (!w.controls_match(b, ad->controls)) continue;
                const uint64_t a = w.extract(b, ad->addend);
                const uint64_t s = w.extract(b, ad->sum);
                w.write(b, ad->sum, (ad->reversed ? s - a : s + a) & mask);
            }
            dirty_span(ad->sum);
        }
    }
    return bs;
}

GqirState evaluate(const Circuit& circuit, int h, int w, int q) {
    const PrepLayout lay{h, w, q};
    if (lay.num_qubits() > circuit.num_qubits()) {
        throw std::invalid_argument("evaluate: circuit register smaller than layout");
    }
    BranchStates bs = run_branches(circuit);
    // the branch set must be exactly the location register
    std::vector<uint32_t> expected(lay.location_width());
    for (uint32_t k = 0; k < lay.location_width(); ++k) expected[k] = lay.location_lo() + k;
    if (bs.branch_qubits() != expected) {
        throw std::invalid_argument("evaluate: Hadamard layer is not the location register");
    }

    GqirState st;
    st.h = h;
    st.w = w;
    st.q = q;
    st.color_of.assign(size_t(1) << (h + w), 0);
    const Span loc{lay.location_lo(), lay.location_width()};
    const Span color{lay.color_lo(), lay.color_width()};
    for (size_t b = 0; b < bs.branch_count(); ++b) {
        st.color_of[bs.extract(b, loc)] = bs.extract(b, color);
    }
    return st;
}

GqirState evaluate(const Circuit& circuit, int n, int q) {
    return evaluate(circuit, n, n, q);
}

PixelImage readback(const GqirState& state) {
    if (state.h != state.w) throw std::invalid_argument("readback: image must be square");
    PixelImage img = PixelImage::zero(state.h, state.q);
    for (uint32_t y = 0; y < img.side(); ++y) {
        for (uint32_t x = 0; x < img.side(); ++x) {
            img.set(y, x, uint32_t(state.at(y, x)));
        }
    }
    return img;
}

}  // namespace qimg
