// Copyright (c) 2026 The ravden authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ravden/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "file I/O assumes a little-endian host");

namespace ravden::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot create " + path.string());
    }
    return out;
}

void read_exact(std::istream& in, void* dst, std::size_t bytes,
                const std::string& what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) {
        throw FormatError("truncated " + what);
    }
}

// PNM header token: skips whitespace and '#' comments.
int next_pnm_int(std::istream& in, const std::string& what) {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) {
        throw FormatError("bad PNM header in " + what);
    }
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1'000'000'000L) throw FormatError("bad PNM header in " + what);
        c = in.get();
    }
    if (c != EOF) in.unget();
    return static_cast<int>(value);
}

}  // namespace

Frame load_image(const std::filesystem::path& path) {
    auto in = open_in(path);
    char magic[2];
    read_exact(in, magic, 2, path.string());
    int channels;
    if (magic[0] == 'P' && magic[1] == '5') {
        channels = 1;
    } else if (magic[0] == 'P' && magic[1] == '6') {
        channels = 3;
    } else {
        throw FormatError("not a binary PNM file: " + path.string());
    }
    const int width = next_pnm_int(in, path.string());
    const int height = next_pnm_int(in, path.string());
    const int maxval = next_pnm_int(in, path.string());
    if (width <= 0 || height <= 0 || (maxval != 255 && maxval != 65535)) {
        throw FormatError("unsupported PNM header in " + path.string());
    }
    in.get();  // single whitespace separator before the raster

    Frame frame(height, width, channels, Colorspace::SrgbEncoded);
    const std::size_t samples = frame.size();
    const float scale = 1.0f / static_cast<float>(maxval);
    if (maxval == 255) {
        std::vector<std::uint8_t> buf(samples);
        read_exact(in, buf.data(), buf.size(), path.string());
        std::size_t i = 0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                for (int c = 0; c < channels; ++c) {
                    frame.at(c, y, x) = static_cast<float>(buf[i++]) * scale;
                }
            }
        }
    } else {
        std::vector<std::uint8_t> buf(samples * 2);
        read_exact(in, buf.data(), buf.size(), path.string());
        std::size_t i = 0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                for (int c = 0; c < channels; ++c) {
                    const unsigned v = (unsigned(buf[i]) << 8) | buf[i + 1];  // big-endian
                    i += 2;
                    frame.at(c, y, x) = static_cast<float>(v) * scale;
                }
            }
        }
    }
    return frame;
}

void save_image(const std::filesystem::path& path, const Frame& frame, int bits) {
    if (bits != 8 && bits != 16) {
        throw std::invalid_argument("save_image: bits must be 8 or 16");
    }
    if (frame.channels() != 1 && frame.channels() != 3) {
        throw std::invalid_argument("save_image: expected 1 or 3 channels");
    }
    auto out = open_out(path);
    const int maxval = bits == 8 ? 255 : 65535;
    out << (frame.channels() == 1 ? "P5" : "P6") << "\n"
        << frame.width() << " " << frame.height() << "\n"
        << maxval << "\n";
    std::vector<std::uint8_t> buf;
    buf.reserve(frame.size() * (bits / 8));
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            for (int c = 0; c < frame.channels(); ++c) {
                const float v = std::clamp(frame.at(c, y, x), 0.0f, 1.0f);
                const long q = std::lround(double(v) * maxval);
                if (bits == 8) {
                    buf.push_back(static_cast<std::uint8_t>(q));
                } else {
                    buf.push_back(static_cast<std::uint8_t>(q >> 8));
                    buf.push_back(static_cast<std::uint8_t>(q & 0xff));
                }
            }
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) {
        throw FormatError("write failed: " + path.string());
    }
}

PackedRawFrame load_raw(const std::filesystem::path& path) {
    auto in = open_in(path);
    char magic[4];
    read_exact(in, magic, 4, path.string());
    if (std::memcmp(magic, "RPF1", 4) != 0) {
        throw FormatError("not an RPF1 file: " + path.string());
    }
    std::uint32_t height = 0, width = 0, channels = 0;
    read_exact(in, &height, 4, path.string());
    read_exact(in, &width, 4, path.string());
    read_exact(in, &channels, 4, path.string());
    if (channels != PackedRawFrame::kPlanes) {
        throw FormatError("RPF1 channel count is not 4: " + path.string());
    }
    if (height == 0 || width == 0 || height > 1u << 20 || width > 1u << 20) {
        throw FormatError("bad RPF1 dimensions: " + path.string());
    }
    PackedRawFrame packed(static_cast<int>(height), static_cast<int>(width));
    read_exact(in, packed.data().data(), packed.size() * sizeof(float), path.string());
    return packed;
}

void save_raw(const std::filesystem::path& path, const PackedRawFrame& packed) {
    auto out = open_out(path);
    out.write("RPF1", 4);
    const std::uint32_t height = packed.height();
    const std::uint32_t width = packed.width();
    const std::uint32_t channels = PackedRawFrame::kPlanes;
    out.write(reinterpret_cast<const char*>(&height), 4);
    out.write(reinterpret_cast<const char*>(&width), 4);
    out.write(reinterpret_cast<const char*>(&channels), 4);
    out.write(reinterpret_cast<const char*>(packed.data().data()),
              static_cast<std::streamsize>(packed.size() * sizeof(float)));
    if (!out) {
        throw FormatError("write failed: " + path.string());
    }
}

namespace {
constexpr float kFlowMagic = 202021.25f;
}

flow::FlowField load_flow(const std::filesystem::path& path) {
    auto in = open_in(path);
    float magic = 0.0f;
    read_exact(in, &magic, 4, path.string());
    if (magic != kFlowMagic) {
        throw FormatError("not a flow file: " + path.string());
    }
    std::int32_t width = 0, height = 0;
    read_exact(in, &width, 4, path.string());
    read_exact(in, &height, 4, path.string());
    if (width <= 0 || height <= 0 || width > 1 << 20 || height > 1 << 20) {
        throw FormatError("bad flow dimensions: " + path.string());
    }
    flow::FlowField field(height, width);
    std::vector<float> row(static_cast<std::size_t>(width) * 2);
    for (int y = 0; y < height; ++y) {
        read_exact(in, row.data(), row.size() * sizeof(float), path.string());
        for (int x = 0; x < width; ++x) {
            field.u(y, x) = row[2 * x];
            field.v(y, x) = row[2 * x + 1];
        }
    }
    return field;
}

void save_flow(const std::filesystem::path& path, const flow::FlowField& field) {
    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(&kFlowMagic), 4);
    const std::int32_t width = field.width();
    const std::int32_t height = field.height();
    out.write(reinterpret_cast<const char*>(&width), 4);
    out.write(reinterpret_cast<const char*>(&height), 4);
    std::vector<float> row(static_cast<std::size_t>(field.width()) * 2);
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            row[2 * x] = field.u(y, x);
            row[2 * x + 1] = field.v(y, x);
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) {
        throw FormatError("write failed: " + path.string());
    }
}

}  // namespace ravden::io
