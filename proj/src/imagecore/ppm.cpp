#include "colorpack/ppm.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

namespace cpk {

namespace {

int read_header_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) throw std::runtime_error("PPM: malformed header");
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000) throw std::runtime_error("PPM: header value out of range");
        c = in.get();
    }
    // exactly one whitespace byte separates the last header field from the body
    if (c != EOF && !std::isspace(c)) throw std::runtime_error("PPM: malformed header");
    return static_cast<int>(value);
}

}  // namespace

FrameRGB read_ppm(std::istream& in) {
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '6') throw std::runtime_error("PPM: expected P6 magic");
    const int w = read_header_int(in);
    const int h = read_header_int(in);
    const int maxval = read_header_int(in);
    if (maxval != 255) throw std::runtime_error("PPM: only maxval 255 is supported");
    if (w < 1 || h < 1) throw std::runtime_error("PPM: empty image");
    FrameRGB frame(w, h);
    in.read(reinterpret_cast<char*>(frame.data.data()), static_cast<std::streamsize>(frame.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.data.size())) {
        throw std::runtime_error("PPM: truncated pixel data");
    }
    return frame;
}

FrameRGB read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_ppm(in);
}

void write_ppm(std::ostream& out, const FrameRGB& frame) {
    validate(frame);
    out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()), static_cast<std::streamsize>(frame.data.size()));
}

void write_ppm(const std::filesystem::path& path, const FrameRGB& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_ppm(out, frame);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace cpk
