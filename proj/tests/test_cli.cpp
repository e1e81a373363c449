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

// Drives the installed binary end to end; the test runner passes its path
// via the QIMG_BIN environment variable.

#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qimg/corpus.hpp"
#include "qimg/gqir.hpp"
#include "qimg/pixmap.hpp"

using namespace qimg;
namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* env = std::getenv("QIMG_BIN");
    REQUIRE_MESSAGE(env != nullptr, "QIMG_BIN must point at the CLI binary");
    return env;
}

int run(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = binary() + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qimg_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("prepare --scheme plain writes circuit and report") {
    TempDir dir;
    const fs::path img_path = dir.path / "img.pgm";
    PixelImage img = PixelImage::zero(3, 8);
    img.set(1, 2, 200);
    img.set(7, 7, 3);
    write_pgm(img, img_path.string());

    const int code = run("prepare --scheme plain " + img_path.string() + " --out-dir " +
                         dir.path.string());
    CHECK(code == 0);
    const std::string circuit_text = slurp(dir.path / "img.circuit.txt");
    const Circuit c = Circuit::parse(circuit_text);
    CHECK(c.tally().hadamard == 6);
    CHECK(c.tally().mcx == count_one_bits(img));

    const auto report = nlohmann::json::parse(slurp(dir.path / "img.report.json"));
    CHECK(report["scheme"] == "plain");
    CHECK(report["one_bits"] == count_one_bits(img));
}

TEST_CASE("padding only warns: exit stays 0 and the report records it") {
    TempDir dir;
    const fs::path img_path = dir.path / "odd.pgm";
    {
        std::ofstream out(img_path, std::ios::binary);
        out << "P5\n200 200\n255\n";
        for (int i = 0; i < 200 * 200; ++i) out.put(char(90));
    }
    const int code = run("prepare --scheme plain " + img_path.string() + " --out-dir " +
                         dir.path.string() + " 2> /dev/null");
    CHECK(code == 0);
    const auto report = nlohmann::json::parse(slurp(dir.path / "odd.report.json"));
    REQUIRE(report["warnings"].size() == 1);
    CHECK(std::string(report["warnings"][0]).find("zero-padded") != std::string::npos);
}

TEST_CASE("prepare --scheme qjpeg writes the recovered image and PSNR") {
    TempDir dir;
    const fs::path img_path = dir.path / "flat.pgm";
    PixelImage img = PixelImage::zero(3, 8);
    for (auto& p : img.pixels) p = 255;
    write_pgm(img, img_path.string());

    const int code = run("prepare --scheme qjpeg " + img_path.string() + " --out-dir " +
                         dir.path.string());
    CHECK(code == 0);
    const PixelImage rec = load_pgm((dir.path / "flat.recovered.pgm").string());
    for (uint32_t p : rec.pixels) CHECK(p == 254);
    const auto report = nlohmann::json::parse(slurp(dir.path / "flat.report.json"));
    CHECK(report["psnr_db"].get<double>() == doctest::Approx(48.1308).epsilon(1e-3));
}

TEST_CASE("prepare --scheme bec refuses large images without --force") {
    TempDir dir;
    const fs::path img_path = dir.path / "big.pgm";
    write_pgm(random_image(9, 8, 3), img_path.string());
    const int code = run("prepare --scheme bec " + img_path.string() + " --out-dir " +
                             dir.path.string() + " 2> /dev/null");
    CHECK(code != 0);
    // the cap itself is adjustable
    const int ok = run("prepare --scheme bec " + img_path.string() + " --out-dir " +
                       dir.path.string() + " --max-n 9");
    CHECK(ok == 0);
}

TEST_CASE("cost reports and curves") {
    TempDir dir;
    SUBCASE("point report") {
        const fs::path out = dir.path / "cost.json";
        CHECK(run("cost --n 10 --q 8", out) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j["r"].get<double>() == doctest::Approx(0.88976).epsilon(1e-4));
        CHECK(j["min_n"] == 7);
    }
    SUBCASE("threshold curve CSV") {
        const fs::path out = dir.path / "curve.csv";
        CHECK(run("cost --curve m --q 4..40", out) == 0);
        const std::string text = slurp(out);
        CHECK(text.find("q,m,min_n") == 0);
        CHECK(text.find("\n8,") != std::string::npos);
    }
    SUBCASE("domain error exits nonzero") {
        CHECK(run("cost --n 1 --q 1 2> /dev/null") != 0);
    }
}

TEST_CASE("gen followed by corpus produces the statistics table") {
    TempDir dir;
    const fs::path imgdir = dir.path / "imgs";
    // limit to the generated set; BEC on 24 images is the slow part, skip it here
    CHECK(run("gen --out-dir " + imgdir.string()) == 0);
    size_t pgms = 0;
    for (const auto& e : fs::directory_iterator(imgdir)) {
        if (e.path().extension() == ".pgm") ++pgms;
    }
    CHECK(pgms >= 23);  // corpus plus the three reference stand-ins

    const fs::path out = dir.path / "corpus.txt";
    CHECK(run("corpus " + imgdir.string() + " --skip-bec --out-dir " + dir.path.string(),
              out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("name,n,q,one_bits,") == 0);
    CHECK(text.find("r_j_mean") != std::string::npos);
    CHECK(fs::exists(dir.path / "corpus.csv"));

    SUBCASE("empty directory is an error") {
        const fs::path empty = dir.path / "empty";
        fs::create_directories(empty);
        CHECK(run("corpus " + empty.string() + " 2> /dev/null") != 0);
    }
}

}  // TEST_SUITE
