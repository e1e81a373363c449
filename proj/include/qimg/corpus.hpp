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

#include <string>
#include <vector>

#include "qimg/pixmap.hpp"

namespace qimg {

// The classic photographic test images cannot be redistributed, so the
// benchmarks run against deterministic synthetic stand-ins whose JPEG
// statistics (coefficient density, loss, bit-plane structure) are matched
// to the reference measurements of the originals.

/// "cameraman", "lena" or "baboon": a 256x256 8-bit stand-in with the
/// corresponding statistics profile. Throws for unknown names.
PixelImage reference_image(const std::string& name);

struct NamedImage {
    std::string name;
    PixelImage image;
};

/// The bundled mini corpus: a deterministic mix of smooth, structured and
/// textured 8-bit images (at least 20) spanning the realistic range of
/// coefficient densities.
std::vector<NamedImage> bundled_corpus(uint64_t seed = 1);

/// Uniformly random pixels, reproducible from the seed (property tests).
PixelImage random_image(int n, int q, uint64_t seed);

}  // namespace qimg
