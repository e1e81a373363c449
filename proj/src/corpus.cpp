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

#include "qimg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "qimg/jpeg.hpp"

namespace qimg {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }  // [0, 1)

// lattice value in [-1, 1], fully determined by (ix, iy, seed)
double lattice(int64_t ix, int64_t iy, uint64_t seed) {
    const uint64_t h =
        splitmix64(uint64_t(ix) * 0x8DA6B343ull ^ uint64_t(iy) * 0xD8163841ull ^ seed);
    return double(h >> 11) * 0x1.0p-52 - 1.0;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// bilinear value noise with quintic fade, period "cell" pixels
double value_noise(double x, double y, double cell, uint64_t seed) {
    const double fx = x / cell, fy = y / cell;
    const int64_t ix = int64_t(std::floor(fx)), iy = int64_t(std::floor(fy));
    const double tx = fade(fx - double(ix)), ty = fade(fy - double(iy));
    const double v00 = lattice(ix, iy, seed), v10 = lattice(ix + 1, iy, seed);
    const double v01 = lattice(ix, iy + 1, seed), v11 = lattice(ix + 1, iy + 1, seed);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

double fbm(double x, double y, double base_cell, int octaves, double gain, uint64_t seed) {
    double out = 0, w = 1, norm = 0, cell = base_cell;
    for (int o = 0; o < octaves; ++o) {
        out += w * value_noise(x, y, cell, seed + uint64_t(o) * 0x51ED2701ull);
        norm += w;
        w *= gain;
        cell = std::max(1.0, cell / 2.0);
    }
    return out / norm;
}

// Block texture synthesized directly in the transform domain: every low
// band coefficient is an exact multiple of the matching quantization step
// (it survives the codec unchanged), while the high bands carry only
// sub-threshold "grain" that rounds away. This is what makes the corpus
// images hit realistic coefficient densities at controlled loss.
struct TexSpec {
    int kmax = 0;       // coefficient amplitude in quantization steps
    int q_cutoff = 0;   // bands with Q(u,v) <= q_cutoff carry signal
    double density = 1.0;
    double grain = 0.0;  // sub-threshold sigma on the remaining bands
};

void add_block_texture(std::vector<double>& px, int side, const TexSpec& t, uint64_t seed,
                       const std::function<double(double, double)>& gain_map) {
    const QuantMatrix& qm = QuantMatrix::standard_luminance();
    for (int by = 0; by < side; by += 8) {
        for (int bx = 0; bx < side; bx += 8) {
            uint64_t s = splitmix64(seed ^ (uint64_t(by) << 20) ^ uint64_t(bx));
            const double g = gain_map(bx + 4.0, by + 4.0);
            DctBlock d{};
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    if (u == 0 && v == 0) continue;
                    const int q = qm.at(u, v);
                    s = splitmix64(s);
                    const double r1 = unit(s);
                    s = splitmix64(s);
                    const double r2 = unit(s);
                    s = splitmix64(s);
                    const bool neg = s & 1;
                    double f = 0;
                    if (t.kmax > 0 && q <= t.q_cutoff) {
                        if (r1 < t.density * g) {
                            f = double(1 + int(r2 * t.kmax)) * q;
                        }
                    } else if (t.grain > 0) {
                        f = t.grain * g * (2.0 * r2 - 1.0) * 1.732;
                    }
                    d.at(u, v) = neg ? -f : f;
                }
            }
            if (g <= 0 && t.grain <= 0) continue;
            const Block8 b = idct_8x8(d);
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    px[size_t(by + i) * side + bx + j] += b.at(i, j);
                }
            }
        }
    }
}

// Identity within +-core around mid, then a soft knee; keeps the texture
// lattice exact over the working range while bounding the extremes.
PixelImage finish(const std::vector<double>& px, int side, double mid, int posterize) {
    const double core = 88.0, knee = 28.0;
    PixelImage img = PixelImage::zero(8, 8);
    for (uint32_t y = 0; y < uint32_t(side); ++y) {
        for (uint32_t x = 0; x < uint32_t(side); ++x) {
            double d = px[size_t(y) * side + x] - mid;
            if (d > core) {
                d = core + knee * std::tanh((d - core) / knee);
            } else if (d < -core) {
                d = -core - knee * std::tanh((-d - core) / knee);
            }
            long r = std::lround(std::clamp(mid + d, 0.0, 255.0));
            if (posterize > 1) r = (r / posterize) * posterize;
            img.set(y, x, uint32_t(r));
        }
    }
    return img;
}

constexpr int kSide = 256;

// bright flat sky, dark standing figure with a tripod, textured ground
PixelImage make_cameraman() {
    std::vector<double> px(size_t(kSide) * kSide);
    std::vector<double> gain(size_t(kSide) * kSide, 0.0);
    for (int y = 0; y < kSide; ++y) {
        for (int x = 0; x < kSide; ++x) {
            double v = 196.0 - 0.02 * y + 3.0 * fbm(x, y, 110, 2, 0.5, 80);
            const uint64_t h = splitmix64(0xD17Dull ^ (uint64_t(y) << 20) ^ uint64_t(x));
            if (unit(h) < 0.30) v += 4.0;  // sparse sky dither
            double g = 0;
            const double horizon = 97.0 + 12.0 * fbm(x, 0, 70, 2, 0.5, 82);
            if (y > horizon) {
                const double t = std::min(1.0, (y - horizon) / 8.0);
                v = (1 - t) * v + t * (106.0 + 12.0 * fbm(x, y, 26, 3, 0.5, 83));
                g = t * std::min(1.0, (y - horizon) / 14.0);
            }
            const double head = std::hypot(x - 112.0, y - 50.0) - 23.0;
            double body = 1e9;
            if (y > 66 && y < 188) {
                const double half_width =
                    27.0 + 17.0 * fade(std::clamp((y - 66.0) / 70.0, 0.0, 1.0)) -
                    (y > 152 ? 13.0 : 0.0);
                body = std::abs(x - 110.0) - half_width;
            }
            const double figure = std::min(head, body);
            if (figure < 0) {
                const double t = std::min(1.0, -figure / 3.0);
                v = (1 - t) * v + t * (50.0 + 6.0 * fbm(x, y, 12, 2, 0.5, 84));
                g = std::max(g, 0.16 * t);
            } else if (figure < 8.0) {
                g *= 0.35 + 0.65 * figure / 8.0;  // calm band along the silhouette
            }
            if (y > 120 && y < 225) {
                for (double leg : {-1.0, 1.0}) {
                    const double lx = 178.0 + leg * (y - 120.0) * 0.35;
                    const double w = std::exp(-(x - lx) * (x - lx) / (1.4 * 1.4));
                    if (w > 0.02) v += (62.0 - v) * w;
                    if (w > 0.3) g = std::max(g, 0.3);
                }
                if (y < 170) {
                    const double w = std::exp(-(x - 178.0) * (x - 178.0) / (1.3 * 1.3));
                    if (w > 0.02) v += (60.0 - v) * w;
                    if (w > 0.3) g = std::max(g, 0.3);
                }
            }
            px[size_t(y) * kSide + x] = v;
            gain[size_t(y) * kSide + x] = g;
        }
    }
    add_block_texture(px, kSide, {5, 24, 1.0, 2.6}, 890,
                      [&](double cx, double cy) {
                          return gain[size_t(cy) * kSide + size_t(cx)];
                      });
    return finish(px, kSide, 124.0, 4);
}

// soft portrait-like shading with diagonal bands and moderate detail
PixelImage make_lena() {
    std::vector<double> px(size_t(kSide) * kSide);
    for (int y = 0; y < kSide; ++y) {
        for (int x = 0; x < kSide; ++x) {
            px[size_t(y) * kSide + x] =
                128.0 + 62.0 * std::tanh(3.4 * fbm(x, y, 150, 3, 0.55, 70)) +
                12.0 * std::sin((x * 0.6 + y) * 0.035 + 2.0 * fbm(x, y, 128, 2, 0.5, 71));
        }
    }
    add_block_texture(px, kSide, {3, 24, 0.8, 4.6}, 889,
                      [](double, double) { return 1.0; });
    return finish(px, kSide, 128.0, 4);
}

// dense fur-like coefficient activity over strong bimodal patches
PixelImage make_baboon() {
    std::vector<double> px(size_t(kSide) * kSide);
    for (int y = 0; y < kSide; ++y) {
        for (int x = 0; x < kSide; ++x) {
            px[size_t(y) * kSide + x] = 128.0 +
                                        76.0 * std::tanh(3.0 * fbm(x, y, 90, 2, 0.5, 60)) +
                                        8.0 * fbm(x, y, 40, 2, 0.5, 61);
        }
    }
    add_block_texture(px, kSide, {2, 49, 1.0, 11.0}, 888,
                      [](double, double) { return 1.0; });
    return finish(px, kSide, 128.0, 16);
}

}  // namespace

PixelImage reference_image(const std::string& name) {
    if (name == "cameraman") return make_cameraman();
    if (name == "lena") return make_lena();
    if (name == "baboon") return make_baboon();
    throw std::invalid_argument("reference_image: unknown name " + name);
}

PixelImage random_image(int n, int q, uint64_t seed) {
    PixelImage img = PixelImage::zero(n, q);
    uint64_t state = seed * 0x9E3779B97F4A7C15ull + 0xABCDull;
    const uint32_t mask = (1u << q) - 1;
    for (auto& p : img.pixels) {
        state = splitmix64(state);
        p = uint32_t(state) & mask;
    }
    return img;
}

std::vector<NamedImage> bundled_corpus(uint64_t seed) {
    struct Profile {
        const char* name;
        double amp, cell;   // smooth structure
        double shape;       // tanh sharpening (0 = linear)
        TexSpec tex;
        int posterize;
    };
    // spans the realistic coefficient-density range, smooth scenes first
    static const Profile profiles[] = {
        {"gradient-sky", 30, 220, 0.0, {0, 0, 0.0, 1.5}, 1},
        {"soft-clouds", 55, 160, 0.0, {0, 0, 0.0, 2.5}, 1},
        {"dunes", 60, 120, 0.0, {1, 10, 0.5, 2.0}, 1},
        {"hills", 70, 100, 0.0, {1, 11, 0.8, 2.0}, 1},
        {"meadow", 60, 90, 0.0, {1, 14, 1.0, 2.5}, 1},
        {"forest-far", 55, 80, 0.0, {1, 16, 1.0, 3.0}, 1},
        {"river-bank", 62, 110, 0.0, {2, 14, 0.8, 3.0}, 1},
        {"portrait-a", 75, 140, 1.2, {2, 16, 0.9, 3.0}, 1},
        {"portrait-b", 70, 130, 1.2, {2, 19, 0.9, 3.5}, 1},
        {"street", 66, 96, 0.0, {2, 22, 0.9, 3.5}, 1},
        {"buildings", 72, 88, 1.5, {2, 24, 1.0, 3.5}, 1},
        {"rooftops", 64, 72, 1.5, {3, 24, 0.9, 4.0}, 1},
        {"market", 70, 84, 0.0, {3, 24, 1.0, 4.0}, 1},
        {"crowd", 62, 70, 0.0, {3, 26, 1.0, 4.5}, 1},
        {"orchard", 58, 96, 1.5, {3, 24, 0.9, 4.5}, 2},
        {"shrubs", 56, 88, 1.5, {3, 26, 1.0, 5.0}, 2},
        {"gravel", 52, 80, 2.0, {2, 29, 0.9, 5.5}, 4},
        {"bark", 50, 90, 2.0, {3, 26, 0.9, 6.0}, 4},
        {"moss", 48, 84, 2.0, {2, 35, 1.0, 7.0}, 4},
        {"grass-close", 46, 90, 2.5, {2, 35, 0.9, 8.0}, 8},
        {"pebbles", 44, 88, 2.5, {2, 35, 1.0, 9.0}, 8},
        {"static-fine", 42, 86, 2.5, {2, 37, 1.0, 10.0}, 8},
    };
    std::vector<NamedImage> out;
    out.reserve(std::size(profiles));
    int k = 0;
    for (const Profile& p : profiles) {
        const uint64_t s = splitmix64(seed) * 1000 + uint64_t(100 + 3 * k);
        std::vector<double> px(size_t(kSide) * kSide);
        for (int y = 0; y < kSide; ++y) {
            for (int x = 0; x < kSide; ++x) {
                const double base = fbm(x, y, p.cell, 3, 0.55, s);
                const double shaped =
                    p.shape > 0 ? std::tanh(p.shape * base) : base;
                px[size_t(y) * kSide + x] =
                    128.0 + p.amp * shaped + 6.0 * fbm(x, y, 34, 2, 0.5, s + 1);
            }
        }
        add_block_texture(px, kSide, p.tex, s + 2, [](double, double) { return 1.0; });
        out.push_back({p.name, finish(px, kSide, 128.0, p.posterize)});
        ++k;
    }
    return out;
}

}  // namespace qimg
