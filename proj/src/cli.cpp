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

#include "qimg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "qimg/bec.hpp"
#include "qimg/corpus.hpp"
#include "qimg/costmodel.hpp"
#include "qimg/gqir.hpp"
#include "qimg/qjpeg.hpp"

namespace qimg::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= uint8_t(buf[i]);
            h *= 1099511628211ull;
        }
        if (in.gcount() < std::streamsize(sizeof buf)) break;
    }
    return h;
}

int thread_budget() {
    if (const char* env = std::getenv("QIMG_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json tally_json(const GateTally& t) {
    json j;
    j["hadamard"] = t.hadamard;
    j["mcx"] = t.mcx;
    json by;
    for (const auto& [k, v] : t.mcx_by_controls) by[std::to_string(k)] = v;
    j["mcx_by_controls"] = by;
    j["muler"] = t.muler;
    j["adder_forward"] = t.adder_forward;
    j["adder_reversed"] = t.adder_reversed;
    j["elementary_cost"] = t.elementary_cost;
    return j;
}

json cost_report_json(const CostReport& rep) {
    json j;
    j["n"] = rep.n;
    j["q"] = rep.q;
    j["r_j"] = rep.r_j;
    j["c_before"] = rep.c_before;
    j["c2"] = rep.c2;
    j["c3"] = rep.c3;
    j["c4"] = rep.c4;
    j["c5"] = rep.c5;
    j["total"] = rep.total;
    j["m"] = rep.m;
    j["min_n"] = rep.min_n;
    j["r"] = rep.r;
    return j;
}

struct PrepareArgs {
    std::string image_path;
    std::string scheme = "plain";
    std::string out_dir = ".";
    int max_n = 8;
    bool force = false;
    bool trace = false;
};

int cmd_prepare(const PrepareArgs& args) {
    const auto t0 = clock_type::now();
    std::vector<std::string> warnings;
    const PixelImage img = load_pgm(args.image_path);
    if (img.padded) {
        warnings.push_back("input " + std::to_string(img.original_width) + "x" +
                           std::to_string(img.original_height) +
                           " zero-padded to " + std::to_string(img.side()) + "x" +
                           std::to_string(img.side()));
    }

    fs::create_directories(args.out_dir);
    const std::string stem = fs::path(args.image_path).stem().string();
    const fs::path base = fs::path(args.out_dir) / stem;

    json report;
    report["command"] = "prepare";
    report["scheme"] = args.scheme;
    report["input"] = {{"path", args.image_path},
                       {"fnv1a", fnv1a_file(args.image_path)},
                       {"n", img.n},
                       {"q", img.q}};

    if (args.scheme == "plain") {
        const Circuit c = prepare_uncompressed(img);
        write_text_file(base.string() + ".circuit.txt", c.serialize());
        report["tally"] = tally_json(c.tally());
        report["one_bits"] = count_one_bits(img);
        std::cout << "plain: " << c.tally().mcx << " controlled NOTs, "
                  << c.tally().hadamard << " Hadamards\n";
    } else if (args.scheme == "bec") {
        if (img.n > args.max_n && !args.force) {
            std::cerr << "error: BEC preprocessing is gated for n > " << args.max_n
                      << " (this image has n = " << img.n << "); pass --force to run\n";
            return 1;
        }
        const auto b0 = clock_type::now();
        const BecResult bec = bec_compress(prepare_uncompressed(img));
        const double bec_seconds = std::chrono::duration<double>(clock_type::now() - b0).count();
        write_text_file(base.string() + ".circuit.txt", bec.circuit.serialize());
        report["tally"] = tally_json(bec.circuit.tally());
        report["stats"] = {{"rounds", bec.stats.rounds},
                           {"round_limit", bec.stats.round_limit},
                           {"comparisons", bec.stats.comparisons},
                           {"comparison_bound", bec.stats.comparison_bound},
                           {"gates_before", bec.stats.gates_before},
                           {"gates_after", bec.stats.gates_after}};
        report["timing_seconds"] = {{"bec", bec_seconds}};
        std::cout << "bec: " << bec.stats.gates_before << " -> " << bec.stats.gates_after
                  << " controlled NOTs (" << bec.stats.rounds << " rounds)\n";
    } else if (args.scheme == "qjpeg") {
        const PipelineResult res = run_pipeline(img);
        write_text_file(base.string() + ".step2.circuit.txt", res.step2_circuit.serialize());
        write_pgm(res.recovered_display, base.string() + ".recovered.pgm");
        if (args.trace) {
            std::ofstream tr(base.string() + ".trace.jsonl");
            res.trace.write_jsonl(tr, CosTable::build(img.q));
        }
        const double db = psnr(img, res.recovered_display);
        report["tally"] = tally_json(res.tally);
        report["step2_mcx"] = res.step2_mcx;
        report["step3_mcx"] = res.step3_mcx;
        if (res.measured_r_j) {
            report["r_j"] = *res.measured_r_j;
        } else {
            report["r_j"] = nullptr;
            warnings.push_back("r_j undefined: all-black input");
        }
        report["psnr_db"] = db;
        if (res.wrapped_count > 0) {
            warnings.push_back(std::to_string(res.wrapped_count) +
                               " wrapped pixel(s) clamped for display");
        }
        report["wrapped_pixels"] = res.wrapped_count;
        std::cout << "qjpeg: step2 " << res.step2_mcx << " controlled NOTs, PSNR "
                  << db << " dB\n";
    } else {
        std::cerr << "error: unknown scheme " << args.scheme << "\n";
        return 1;
    }

    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    report["warnings"] = warnings;
    report["elapsed_seconds"] = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_text_file(base.string() + ".report.json", report.dump(2) + "\n");
    return 0;
}

// accepts "8" or "4..40"
std::pair<int, int> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int v = std::stoi(s);
        return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

struct CostArgs {
    std::string n_spec;
    std::string q_spec;
    double r_j = 0.1;
    std::string curve;    // "m"
    std::string surface;  // "r"
};

int cmd_cost(const CostArgs& args) {
    if (!args.curve.empty()) {
        if (args.curve != "m") {
            std::cerr << "error: unknown curve " << args.curve << "\n";
            return 1;
        }
        const auto [qlo, qhi] = parse_range(args.q_spec.empty() ? "4..40" : args.q_spec);
        write_threshold_curve_csv(std::cout, qlo, qhi);
        return 0;
    }
    if (!args.surface.empty()) {
        if (args.surface != "r") {
            std::cerr << "error: unknown surface " << args.surface << "\n";
            return 1;
        }
        const auto [nlo, nhi] = parse_range(args.n_spec.empty() ? "7..14" : args.n_spec);
        const auto [qlo, qhi] = parse_range(args.q_spec.empty() ? "4..40" : args.q_spec);
        write_ratio_surface_csv(std::cout, nlo, nhi, qlo, qhi, args.r_j);
        return 0;
    }
    if (args.n_spec.empty() || args.q_spec.empty()) {
        std::cerr << "error: cost needs --n and --q (or --curve/--surface)\n";
        return 1;
    }
    const CostReport rep = analytic_costs(std::stoi(args.n_spec), std::stoi(args.q_spec),
                                          args.r_j);
    std::cout << cost_report_json(rep).dump(2) << "\n";
    return 0;
}

struct CorpusArgs {
    std::string directory;
    std::string out_dir;
    int max_n = 8;
    bool force = false;
    bool skip_bec = false;
};

struct CorpusRow {
    std::string name;
    int n = 0, q = 0;
    uint64_t one_bits = 0;
    uint64_t jpeg_gates = 0;
    double jpeg_ratio = 0;
    uint64_t bec_gates = 0;
    double bec_ratio = 0;
    bool bec_ran = false;
    std::optional<double> r_j;
    double psnr_db = 0;
    std::string error;
};

CorpusRow corpus_row(const fs::path& path, const CorpusArgs& args) {
    CorpusRow row;
    row.name = path.filename().string();
    try {
        const PixelImage img = load_pgm(path.string());
        row.n = img.n;
        row.q = img.q;
        row.one_bits = count_one_bits(img);
        CompareOptions copts;
        copts.bec_max_n = args.max_n;
        copts.force = args.force;
        copts.run_bec = !args.skip_bec && (img.n <= args.max_n || args.force);
        const SchemeComparison cmp = compare_schemes(img, QuantMatrix::standard_luminance(), copts);
        row.jpeg_gates = cmp.jpeg_gates;
        row.jpeg_ratio = cmp.jpeg_ratio;
        row.bec_ran = copts.run_bec;
        row.bec_gates = cmp.bec_gates;
        row.bec_ratio = cmp.bec_ratio;
        row.r_j = measured_r_j(img, QuantMatrix::standard_luminance());
        const PipelineResult res = run_pipeline(img);
        row.psnr_db = psnr(img, res.recovered_display);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_corpus(const CorpusArgs& args) {
    std::vector<fs::path> files;
    if (!fs::is_directory(args.directory)) {
        std::cerr << "error: not a directory: " << args.directory << "\n";
        return 1;
    }
    for (const auto& entry : fs::directory_iterator(args.directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        std::cerr << "error: no .pgm files in " << args.directory << "\n";
        return 1;
    }
    std::sort(files.begin(), files.end());

    std::vector<CorpusRow> rows(files.size());
    const int threads = std::min<int>(thread_budget(), int(files.size()));
    std::vector<std::future<void>> futs;
    std::atomic<size_t> cursor{0};
    for (int t = 0; t < threads; ++t) {
        futs.push_back(std::async(std::launch::async, [&] {
            for (size_t i = cursor.fetch_add(1); i < files.size(); i = cursor.fetch_add(1)) {
                rows[i] = corpus_row(files[i], args);
            }
        }));
    }
    for (auto& f : futs) f.get();

    std::ostringstream csv;
    csv << "name,n,q,one_bits,jpeg_gates,jpeg_ratio,bec_gates,bec_ratio,r_j,psnr_db\n";
    double sum = 0, sum_sq = 0, mn = 1e9, mx = -1e9;
    size_t defined = 0;
    bool had_error = false;
    for (const CorpusRow& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "error: " << row.name << ": " << row.error << "\n";
            had_error = true;
            continue;
        }
        csv << row.name << ',' << row.n << ',' << row.q << ',' << row.one_bits << ','
            << row.jpeg_gates << ',' << row.jpeg_ratio << ',';
        if (row.bec_ran) {
            csv << row.bec_gates << ',' << row.bec_ratio << ',';
        } else {
            csv << ",,";
        }
        if (row.r_j) {
            csv << *row.r_j;
            sum += *row.r_j;
            sum_sq += *row.r_j * *row.r_j;
            mn = std::min(mn, *row.r_j);
            mx = std::max(mx, *row.r_j);
            ++defined;
        } else {
            csv << "undefined";
        }
        csv << ',' << row.psnr_db << '\n';
    }
    std::cout << csv.str();

    json agg;
    agg["command"] = "corpus";
    agg["images"] = rows.size();
    agg["r_j_defined"] = defined;
    if (defined > 0) {
        const double mean = sum / double(defined);
        agg["r_j_min"] = mn;
        agg["r_j_max"] = mx;
        agg["r_j_mean"] = mean;
        agg["r_j_variance"] = sum_sq / double(defined) - mean * mean;
    }
    std::cout << agg.dump(2) << "\n";

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        write_text_file(fs::path(args.out_dir) / "corpus.csv", csv.str());
        write_text_file(fs::path(args.out_dir) / "corpus.summary.json", agg.dump(2) + "\n");
    }
    return had_error ? 1 : 0;
}

struct GenArgs {
    std::string out_dir = "corpus";
    uint64_t seed = 1;
    bool refs = true;
};

int cmd_gen(const GenArgs& args) {
    fs::create_directories(args.out_dir);
    size_t written = 0;
    for (const NamedImage& ni : bundled_corpus(args.seed)) {
        write_pgm(ni.image, (fs::path(args.out_dir) / (ni.name + ".pgm")).string());
        ++written;
    }
    if (args.refs) {
        for (const char* name : {"cameraman", "lena", "baboon"}) {
            write_pgm(reference_image(name),
                      (fs::path(args.out_dir) / (std::string(name) + ".pgm")).string());
            ++written;
        }
    }
    std::cout << "wrote " << written << " images to " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"GQIR image preparation: synthesis, compression and cost analysis"};
    app.require_subcommand(1);

    PrepareArgs prep;
    CLI::App* prepare = app.add_subcommand("prepare", "synthesize a preparation circuit");
    prepare->add_option("image", prep.image_path, "input PGM")->required();
    prepare->add_option("--scheme", prep.scheme, "plain | bec | qjpeg")
        ->check(CLI::IsMember({"plain", "bec", "qjpeg"}));
    prepare->add_option("--out-dir", prep.out_dir, "output directory");
    prepare->add_option("--max-n", prep.max_n, "BEC size cap (default 8)");
    prepare->add_flag("--force", prep.force, "lift the BEC size cap");
    prepare->add_flag("--trace", prep.trace, "write the per-location trace (qjpeg)");

    CostArgs cost;
    CLI::App* costc = app.add_subcommand("cost", "analytic complexity and ratios");
    costc->add_option("--n", cost.n_spec, "image exponent, or lo..hi for --surface");
    costc->add_option("--q", cost.q_spec, "color depth, or lo..hi for --curve/--surface");
    costc->add_option("--rj", cost.r_j, "coefficient density ratio (default 0.1)");
    costc->add_option("--curve", cost.curve, "emit a CSV curve: m");
    costc->add_option("--surface", cost.surface, "emit a CSV surface: r");

    CorpusArgs corpus;
    CLI::App* corpusc = app.add_subcommand("corpus", "per-image statistics for a directory");
    corpusc->add_option("directory", corpus.directory, "directory of PGM files")->required();
    corpusc->add_option("--out-dir", corpus.out_dir, "also write CSV/JSON here");
    corpusc->add_option("--max-n", corpus.max_n, "BEC size cap (default 8)");
    corpusc->add_flag("--force", corpus.force, "lift the BEC size cap");
    corpusc->add_flag("--skip-bec", corpus.skip_bec, "skip the BEC columns");

    GenArgs gen;
    CLI::App* genc = app.add_subcommand("gen", "write the bundled synthetic images");
    genc->add_option("--out-dir", gen.out_dir, "output directory (default corpus)");
    genc->add_option("--seed", gen.seed, "corpus variation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (prepare->parsed()) return cmd_prepare(prep);
        if (costc->parsed()) return cmd_cost(cost);
        if (corpusc->parsed()) return cmd_corpus(corpus);
        if (genc->parsed()) return cmd_gen(gen);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qimg::cli
