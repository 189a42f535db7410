#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "colorpack/bandwidth.hpp"
#include "colorpack/image.hpp"
#include "colorpack/package.hpp"
#include "colorpack/video_io.hpp"
#include "doctest.h"

using namespace cpk;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(COLORPACK_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream fields(line);
        std::string f;
        while (std::getline(fields, f, ',')) row.push_back(f);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::string field(const std::vector<std::vector<std::string>>& rows, std::size_t row, const std::string& name) {
    const auto& header = rows.at(0);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return rows.at(row).at(i);
    FAIL("no column " << name);
    return {};
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("colorpack_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::vector<FrameRGB> single_shot(int frames, int size) {
    std::vector<FrameRGB> video;
    for (int i = 0; i < frames; ++i) {
        FrameRGB f(size, size, 60, 140, 200);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < 2; ++x) std::fill_n(f.pixel((x + i) % size, y), 3, 15);
        video.push_back(f);
    }
    return video;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("stats prints the published table rows") {
    struct Row {
        const char* args;
        const char* column;
        double saved;
        double percent;
    };
    const Row rows[] = {
        {"--width 256 --height 256 --duration 60 --model-size 30", "saved_mib", 195.0, 57.78},
        {"--width 256 --height 256 --duration 900 --model-size 30", "saved_mib", 3345.0, 66.07},
        {"--width 1280 --height 720 --duration 900 --model-size 45 --fps 30", "saved_gib", 46.3, 66.60},
    };
    for (const auto& row : rows) {
        CAPTURE(row.args);
        const Run r = run(std::string("stats ") + row.args);
        REQUIRE(r.status == 0);
        const auto t = csv(r.out);
        REQUIRE(t.size() == 2);
        CHECK(std::stod(field(t, 1, row.column)) == doctest::Approx(row.saved).epsilon(0.001));
        CHECK(std::abs(std::stod(field(t, 1, "percent_saved")) - row.percent) <= 0.01);
    }
}

TEST_CASE("stats rejects bad flags") {
    CHECK(run("stats --width 256 --height 256 --duration 60").status != 0);
    CHECK(run("stats --width 0 --height 256 --duration 60 --model-size 1").status != 0);
    CHECK(run("stats --width 256 --height 256 --duration 60 --model-size 1 --fps 30/0").status != 0);
    CHECK(run("stats --width 256 --height 256 --duration 60 --model-size 1 --fps abc").status != 0);
    CHECK(run("").status != 0);
    CHECK(run("frobnicate").status != 0);
}

TEST_CASE("keyframes subcommand") {
    const fs::path dir = scratch_dir("keyframes");
    const fs::path raw = dir / "shot.rgb";
    write_raw_rgb24(raw, single_shot(90, 16));

    SUBCASE("default step gives three indices") {
        const Run r = run("keyframes --input " + q(raw) + " --width 16 --height 16 --output " + q(dir / "table.csv"));
        REQUIRE(r.status == 0);
        CHECK(r.out == "index\n0\n30\n60\n");
        const auto table = csv(read_file(dir / "table.csv"));
        REQUIRE(table.size() == 91);
        CHECK(table[0] == std::vector<std::string>{"frame", "distance", "cluster"});
        CHECK(table[90][0] == "89");
        CHECK(table[90][2] == "0");
    }
    SUBCASE("x=1 keeps every frame") {
        const Run r = run("keyframes --input " + q(raw) + " --width 16 --height 16 --x-step 1");
        REQUIRE(r.status == 0);
        const auto t = csv(r.out);
        REQUIRE(t.size() == 91);
        for (int i = 0; i < 90; ++i) CHECK(t[i + 1][0] == std::to_string(i));
    }
    SUBCASE("PPM directory input") {
        write_ppm_directory(dir / "frames", single_shot(90, 16));
        const Run r = run("keyframes --input " + q(dir / "frames"));
        CHECK(r.status == 0);
        CHECK(r.out == "index\n0\n30\n60\n");
    }
    SUBCASE("errors") {
        CHECK(run("keyframes --input ''").status != 0);
        CHECK(run("keyframes --input " + q(dir / "missing.rgb") + " --width 16 --height 16").status != 0);
        CHECK(run("keyframes --input " + q(raw)).status != 0);  // raw without dimensions
        CHECK(run("keyframes --input " + q(raw) + " --width 17 --height 16").status != 0);
        CHECK(run("keyframes --input " + q(raw) + " --width 16 --height 16 --x-step 0").status != 0);
    }
}

TEST_CASE("encode, decode and eval through the binary") {
    const fs::path dir = scratch_dir("pipeline");
    const auto video = single_shot(40, 16);
    write_raw_rgb24(dir / "in.rgb", video);
    const std::string common = "--input " + q(dir / "in.rgb") + " --width 16 --height 16 --train-size 16 --epochs 3 --seed 9";

    const Run a = run("encode " + common + " --output " + q(dir / "a.cpk"));
    REQUIRE(a.status == 0);
    const Run b = run("encode " + common + " --output " + q(dir / "b.cpk"));
    REQUIRE(b.status == 0);
    CHECK(read_file(dir / "a.cpk") == read_file(dir / "b.cpk"));
    CHECK(a.out == b.out);

    // The printed report is the bandwidth formula applied to the package.
    const Package p = read_package(dir / "a.cpk");
    const BandwidthReport expect = bandwidth_stats(p.meta, p.model.size());
    const auto t = csv(a.out);
    REQUIRE(t.size() == 2);
    CHECK(std::stoull(field(t, 1, "raw_bytes")) == expect.raw_size);
    CHECK(std::stoull(field(t, 1, "raw_bytes")) == 40u * 16 * 16 * 3);
    CHECK(std::stoull(field(t, 1, "model_bytes")) == p.model.size());
    CHECK(std::stoull(field(t, 1, "package_bytes")) == expect.package_size);
    CHECK(std::stoll(field(t, 1, "saved_bytes")) == expect.saved);
    CHECK(std::stod(field(t, 1, "percent_saved")) == doctest::Approx(expect.percent_saved).epsilon(1e-4));
    CHECK(p.keyframes == std::vector<std::uint32_t>{0, 30});

    SUBCASE("training size must be a multiple of 8") {
        const Run bad = run("encode --input " + q(dir / "in.rgb") + " --width 16 --height 16 --train-size 12 --output " +
                            q(dir / "c.cpk"));
        CHECK(bad.status != 0);
        CHECK_FALSE(fs::exists(dir / "c.cpk"));
    }

    SUBCASE("decode and eval") {
        const Run d = run("decode --input " + q(dir / "a.cpk") + " --output " + q(dir / "out.rgb"));
        REQUIRE(d.status == 0);
        CHECK(d.out == "width,height,frames\n16,16,40\n");
        const auto decoded = read_raw_rgb24(dir / "out.rgb", 16, 16);
        REQUIRE(decoded.size() == video.size());
        for (std::size_t i = 0; i < decoded.size(); ++i) {
            const GrayPlane g = p.frame(i);
            for (std::size_t k = 0; k < g.pixel_count(); ++k) {
                const Lab lab = srgb_to_lab(decoded[i].data[3 * k], decoded[i].data[3 * k + 1], decoded[i].data[3 * k + 2]);
                REQUIRE(std::abs(lab.L - dequantize_L(g.data[k])) <= 2.0);
            }
        }

        const Run same = run("eval --input " + q(dir / "in.rgb") + " --reference " + q(dir / "in.rgb") +
                             " --width 16 --height 16");
        REQUIRE(same.status == 0);
        const auto e = csv(same.out);
        REQUIRE(e.size() == 42);
        CHECK(e[0] == std::vector<std::string>{"frame", "mse_rgb", "psnr", "ab_mse"});
        CHECK(e[1][2] == "inf");
        CHECK(e[41][0] == "mean");
        CHECK(e[41][2] == "inf");

        auto shifted = video;
        for (auto& f : shifted)
            for (auto& v : f.data) v = static_cast<std::uint8_t>(v + 1);
        write_raw_rgb24(dir / "shifted.rgb", shifted);
        const Run off = run("eval --input " + q(dir / "shifted.rgb") + " --reference " + q(dir / "in.rgb") +
                            " --width 16 --height 16");
        REQUIRE(off.status == 0);
        CHECK(std::stod(csv(off.out)[41][2]) == doctest::Approx(20 * std::log10(255.0)).epsilon(1e-4));

        write_raw_rgb24(dir / "short.rgb", single_shot(10, 16));
        CHECK(run("eval --input " + q(dir / "short.rgb") + " --reference " + q(dir / "in.rgb") + " --width 16 --height 16")
                  .status != 0);
        write_ppm_directory(dir / "small", single_shot(40, 8));
        CHECK(run("eval --input " + q(dir / "small") + " --reference " + q(dir / "in.rgb") + " --width 16 --height 16")
                  .status != 0);
    }

    SUBCASE("decode rejects a damaged package") {
        std::string bytes = read_file(dir / "a.cpk");
        bytes[bytes.size() / 2] ^= 0x5a;
        std::ofstream(dir / "bad.cpk", std::ios::binary) << bytes;
        CHECK(run("decode --input " + q(dir / "bad.cpk") + " --output " + q(dir / "bad.rgb")).status != 0);
        CHECK(run("decode --input " + q(dir / "nothing.cpk") + " --output " + q(dir / "bad.rgb")).status != 0);
    }
}
