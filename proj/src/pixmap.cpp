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

#include "qimg/pixmap.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qimg {

PixelImage PixelImage::zero(int n, int q) {
    if (n < 0 || n > 13 || q < 1 || q > 16) {
        throw std::invalid_argument("PixelImage: need 0 <= n <= 13 and 1 <= q <= 16");
    }
    PixelImage img;
    img.n = n;
    img.q = q;
    img.pixels.assign(size_t(1) << (2 * n), 0);
    img.original_width = img.side();
    img.original_height = img.side();
    return img;
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(char(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    return tok;
}

uint32_t parse_header_number(std::istream& in, const char* what) {
    const std::string tok = next_token(in);
    if (tok.empty()) throw std::runtime_error(std::string("pgm: missing ") + what);
    uint64_t v = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw std::runtime_error(std::string("pgm: malformed ") + what + ": " + tok);
        }
        v = v * 10 + uint64_t(ch - '0');
        if (v > 0xFFFFFFFFull) throw std::runtime_error(std::string("pgm: ") + what + " out of range");
    }
    return uint32_t(v);
}

PixelImage from_samples(uint32_t width, uint32_t height, uint32_t maxval,
                        const std::vector<uint32_t>& samples) {
    const int qq = std::bit_width(maxval);
    if (maxval == 0 || maxval != (1u << qq) - 1) {
        throw std::runtime_error("pgm: maxval " + std::to_string(maxval) +
                                 " is not of the form 2^q - 1");
    }
    if (qq > 16) throw std::runtime_error("pgm: maxval too large (q > 16)");

    const uint32_t longer = std::max(width, height);
    int n = 0;
    while ((1u << n) < longer) ++n;
    if (n < 3) {
        throw std::runtime_error("pgm: image too small, 8x8 blocks must tile it (need n >= 3)");
    }

    PixelImage img;
    img.n = n;
    img.q = qq;
    img.original_width = width;
    img.original_height = height;
    img.padded = (width != img.side()) || (height != img.side());
    img.pixels.assign(size_t(1) << (2 * n), 0);
    for (uint32_t y = 0; y < height; ++y) {
        for (uint32_t x = 0; x < width; ++x) {
            img.set(y, x, samples[size_t(y) * width + x]);
        }
    }
    return img;
}

PixelImage parse_pgm_stream(std::istream& in) {
    const std::string magic = next_token(in);
    if (magic.empty()) throw std::runtime_error("pgm: empty file");
    if (magic != "P2" && magic != "P5") {
        throw std::runtime_error("pgm: unsupported magic '" + magic + "'");
    }
    const uint32_t width = parse_header_number(in, "width");
    const uint32_t height = parse_header_number(in, "height");
    const uint32_t maxval = parse_header_number(in, "maxval");
    if (width == 0 || height == 0) throw std::runtime_error("pgm: zero dimension");

    std::vector<uint32_t> samples;
    samples.reserve(size_t(width) * height);
    if (magic == "P2") {
        for (size_t i = 0; i < size_t(width) * height; ++i) {
            samples.push_back(parse_header_number(in, "sample"));
        }
    } else {
        // exactly one whitespace byte separates the header from raster data
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<char> raw(size_t(width) * height * bytes);
        in.read(raw.data(), std::streamsize(raw.size()));
        if (in.gcount() != std::streamsize(raw.size())) {
            throw std::runtime_error("pgm: truncated raster data");
        }
        for (size_t i = 0; i < size_t(width) * height; ++i) {
            uint32_t v;
            if (bytes == 2) {
                v = (uint32_t(uint8_t(raw[2 * i])) << 8) | uint8_t(raw[2 * i + 1]);
            } else {
                v = uint8_t(raw[i]);
            }
            samples.push_back(v);
        }
    }
    for (uint32_t v : samples) {
        if (v > maxval) throw std::runtime_error("pgm: sample exceeds maxval");
    }
    return from_samples(width, height, maxval, samples);
}

}  // namespace

PixelImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + path);
    return parse_pgm_stream(in);
}

PixelImage parse_pgm(const std::string& bytes) {
    std::istringstream in(bytes);
    return parse_pgm_stream(in);
}

void write_pgm(const PixelImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot write " + path);
    const uint32_t maxval = (1u << img.q) - 1;
    out << "P5\n" << img.side() << " " << img.side() << "\n" << maxval << "\n";
    if (maxval > 255) {
        for (uint32_t v : img.pixels) {
            out.put(char((v >> 8) & 0xFF));
            out.put(char(v & 0xFF));
        }
    } else {
        for (uint32_t v : img.pixels) out.put(char(v & 0xFF));
    }
    if (!out) throw std::runtime_error("pgm: write failed for " + path);
}

std::vector<Block8> split_blocks(const PixelImage& img) {
    if (img.n < 3) {
        throw std::invalid_argument("split_blocks: 8x8 blocks need n >= 3");
    }
    const uint32_t blocks_per_side = img.side() / 8;
    std::vector<Block8> blocks;
    blocks.reserve(size_t(blocks_per_side) * blocks_per_side);
    for (uint32_t bi = 0; bi < blocks_per_side; ++bi) {
        for (uint32_t bj = 0; bj < blocks_per_side; ++bj) {
            Block8 b;
            b.block_row = bi;
            b.block_col = bj;
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    b.at(u, v) = double(img.at(bi * 8 + u, bj * 8 + v));
                }
            }
            blocks.push_back(b);
        }
    }
    return blocks;
}

PixelImage assemble_blocks(int n, int q, const std::vector<Block8>& blocks) {
    PixelImage img = PixelImage::zero(n, q);
    const uint32_t blocks_per_side = img.side() / 8;
    if (blocks.size() != size_t(blocks_per_side) * blocks_per_side) {
        throw std::invalid_argument("assemble_blocks: block count does not match geometry");
    }
    for (const Block8& b : blocks) {
        for (int u = 0; u < 8; ++u) {
            for (int v = 0; v < 8; ++v) {
                const double val = b.at(u, v);
                const long long r = std::llround(val);
                if (std::abs(val - double(r)) > 1e-6 || r < 0 || r >= (1ll << q)) {
                    throw std::invalid_argument("assemble_blocks: sample not a q-bit integer");
                }
                img.set(b.block_row * 8 + uint32_t(u), b.block_col * 8 + uint32_t(v),
                        uint32_t(r));
            }
        }
    }
    return img;
}

uint64_t count_one_bits(const PixelImage& img) {
    uint64_t total = 0;
    for (uint32_t v : img.pixels) total += uint64_t(std::popcount(v));
    return total;
}

}  // namespace qimg
