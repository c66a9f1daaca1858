// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#include "hybp/frame_io.hpp"

#include "hybp/errors.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace hybp {

namespace {

void put_u32(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

uint32_t get_u32(const std::string& buf, size_t off) {
    return static_cast<uint8_t>(buf[off]) | (static_cast<uint8_t>(buf[off + 1]) << 8) |
           (static_cast<uint8_t>(buf[off + 2]) << 16) |
           (static_cast<uint32_t>(static_cast<uint8_t>(buf[off + 3])) << 24);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed on " + path);
}

VideoSequence read_rawv(const std::string& path) {
    const std::string buf = slurp(path);
    if (buf.size() < 20) throw FormatError("rawv: header truncated in " + path);
    if (std::memcmp(buf.data(), "RAWV", 4) != 0) throw FormatError("rawv: bad magic in " + path);
    const uint32_t w = get_u32(buf, 4);
    const uint32_t h = get_u32(buf, 8);
    const uint32_t n = get_u32(buf, 12);
    const uint32_t fps = get_u32(buf, 16);
    if (w == 0 || h == 0 || fps == 0) throw FormatError("rawv: zero dimension or fps in " + path);
    const size_t frame_bytes = static_cast<size_t>(w) * h;
    VideoSequence seq;
    seq.fps = fps;
    seq.name = path;
    size_t off = 20;
    for (uint32_t i = 0; i < n; ++i) {
        if (off + frame_bytes > buf.size())
            throw TruncationError("rawv: payload truncated at frame " + std::to_string(i), off);
        std::vector<uint8_t> bytes(frame_bytes);
        std::memcpy(bytes.data(), buf.data() + off, frame_bytes);
        seq.frames.push_back(Frame::from_u8(static_cast<int>(w), static_cast<int>(h), bytes));
        off += frame_bytes;
    }
    return seq;
}

size_t write_rawv(const VideoSequence& seq, const std::string& path) {
    std::string out;
    out.reserve(20 + seq.frame_count() * seq.frames[0].size());
    out.append("RAWV");
    put_u32(out, static_cast<uint32_t>(seq.frames[0].width));
    put_u32(out, static_cast<uint32_t>(seq.frames[0].height));
    put_u32(out, static_cast<uint32_t>(seq.frame_count()));
    put_u32(out, seq.fps);
    for (const auto& f : seq.frames) {
        const auto bytes = f.to_u8();
        out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }
    spill(path, out);
    return out.size();
}

VideoSequence read_y4m(const std::string& path) {
    const std::string buf = slurp(path);
    const size_t eol = buf.find('\n');
    if (buf.size() < 9 || buf.compare(0, 9, "YUV4MPEG2") != 0 || eol == std::string::npos)
        throw FormatError("y4m: bad stream header in " + path);

    int w = 0, h = 0;
    uint32_t fps = 30;
    bool chroma420 = false;
    bool colorspace_seen = false;
    std::istringstream header(buf.substr(0, eol));
    std::string tok;
    header >> tok; // YUV4MPEG2
    while (header >> tok) {
        if (tok.empty()) continue;
        switch (tok[0]) {
        case 'W': w = std::stoi(tok.substr(1)); break;
        case 'H': h = std::stoi(tok.substr(1)); break;
        case 'F': {
            const size_t colon = tok.find(':');
            if (colon == std::string::npos) throw FormatError("y4m: malformed F tag");
            const double num = std::stod(tok.substr(1, colon - 1));
            const double den = std::stod(tok.substr(colon + 1));
            if (den <= 0.0) throw FormatError("y4m: malformed F tag");
            fps = static_cast<uint32_t>(num / den + 0.5);
            break;
        }
        case 'C':
            colorspace_seen = true;
            if (tok.rfind("C420", 0) == 0)
                chroma420 = true;
            else if (tok == "C400" || tok == "Cmono")
                chroma420 = false;
            else
                throw FormatError("y4m: unsupported colorspace " + tok);
            break;
        default: break; // interlace/aspect/extension tags ignored
        }
    }
    if (!colorspace_seen) chroma420 = true; // y4m default is 4:2:0
    if (w <= 0 || h <= 0) throw FormatError("y4m: missing dimensions in " + path);

    const size_t luma_bytes = static_cast<size_t>(w) * h;
    const size_t chroma_bytes = chroma420 ? 2 * (static_cast<size_t>(w / 2) * (h / 2)) : 0;
    VideoSequence seq;
    seq.fps = fps == 0 ? 30 : fps;
    seq.name = path;
    size_t off = eol + 1;
    size_t index = 0;
    while (off < buf.size()) {
        if (buf.compare(off, 5, "FRAME") != 0)
            throw FormatError("y4m: bad frame marker at frame " + std::to_string(index));
        const size_t feol = buf.find('\n', off);
        if (feol == std::string::npos)
            throw TruncationError("y4m: truncated frame header at frame " + std::to_string(index),
                                  off);
        off = feol + 1;
        if (off + luma_bytes + chroma_bytes > buf.size())
            throw TruncationError("y4m: payload truncated at frame " + std::to_string(index), off);
        std::vector<uint8_t> bytes(luma_bytes);
        std::memcpy(bytes.data(), buf.data() + off, luma_bytes);
        seq.frames.push_back(Frame::from_u8(w, h, bytes));
        off += luma_bytes + chroma_bytes; // chroma discarded
        ++index;
    }
    if (seq.empty()) throw FormatError("y4m: no frames in " + path);
    return seq;
}

size_t write_y4m(const VideoSequence& seq, const std::string& path) {
    std::string out;
    out += "YUV4MPEG2 W" + std::to_string(seq.frames[0].width) + " H" +
           std::to_string(seq.frames[0].height) + " F" + std::to_string(seq.fps) +
           ":1 Ip A1:1 Cmono\n";
    for (const auto& f : seq.frames) {
        out += "FRAME\n";
        const auto bytes = f.to_u8();
        out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }
    spill(path, out);
    return out.size();
}

} // namespace

SequenceFormat sequence_format_from_string(const std::string& s) {
    if (s == "rawv") return SequenceFormat::Rawv;
    if (s == "y4m-luma" || s == "y4m") return SequenceFormat::Y4mLuma;
    throw UsageError("unknown sequence format: " + s);
}

VideoSequence read_sequence(const std::string& path, SequenceFormat format) {
    return format == SequenceFormat::Rawv ? read_rawv(path) : read_y4m(path);
}

size_t write_sequence(const VideoSequence& seq, const std::string& path, SequenceFormat format) {
    if (seq.empty()) throw UsageError("write_sequence: empty sequence");
    for (const auto& f : seq.frames)
        if (!f.same_dims(seq.frames[0]))
            throw UsageError("write_sequence: frames have mixed dimensions");
    return format == SequenceFormat::Rawv ? write_rawv(seq, path) : write_y4m(seq, path);
}

} // namespace hybp
