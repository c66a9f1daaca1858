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

#include "hybp/bitstream.hpp"
#include "hybp/codec.hpp"
#include "hybp/errors.hpp"

#include <cstring>

namespace hybp {

namespace {

constexpr size_t kUnitHeader = 8; // u8 type, u8 qp, u16 reserved, u32 payload length

void write_unit_header(std::vector<uint8_t>& out, FrameType type, int qp, uint32_t payload_len) {
    out.push_back(static_cast<uint8_t>(type));
    out.push_back(static_cast<uint8_t>(qp));
    out.push_back(0);
    out.push_back(0);
    out.push_back(static_cast<uint8_t>(payload_len & 0xFF));
    out.push_back(static_cast<uint8_t>((payload_len >> 8) & 0xFF));
    out.push_back(static_cast<uint8_t>((payload_len >> 16) & 0xFF));
    out.push_back(static_cast<uint8_t>((payload_len >> 24) & 0xFF));
}

struct UnitHeader {
    FrameType type;
    int qp;
    uint32_t payload_len;
};

UnitHeader read_unit_header(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < kUnitHeader) throw TruncationError("unit: header truncated", bytes.size());
    if (bytes[0] > 2) throw FormatError("unit: bad frame type byte");
    UnitHeader h;
    h.type = static_cast<FrameType>(bytes[0]);
    h.qp = bytes[1];
    h.payload_len = static_cast<uint32_t>(bytes[4]) | (static_cast<uint32_t>(bytes[5]) << 8) |
                    (static_cast<uint32_t>(bytes[6]) << 16) |
                    (static_cast<uint32_t>(bytes[7]) << 24);
    if (kUnitHeader + h.payload_len != bytes.size())
        throw TruncationError("unit: payload length mismatch", bytes.size());
    return h;
}

void encode_block_runlevel(BitWriter& bw, const std::vector<int16_t>& block) {
    const auto& zz = zigzag_order8();
    std::vector<std::pair<int, int16_t>> pairs;
    int run = 0;
    for (int idx : zz) {
        const int16_t v = block[idx];
        if (v == 0) {
            ++run;
        } else {
            pairs.emplace_back(run, v);
            run = 0;
        }
    }
    ue_encode(bw, pairs.size());
    for (const auto& [r, level] : pairs) {
        ue_encode(bw, static_cast<uint64_t>(r));
        se_encode(bw, level);
    }
}

std::vector<int16_t> decode_block_runlevel(BitReader& br) {
    const auto& zz = zigzag_order8();
    std::vector<int16_t> block(64, 0);
    const uint64_t n_pairs = ue_decode(br);
    if (n_pairs > 64) throw FormatError("unit: run-level pair count exceeds block size");
    int pos = 0;
    for (uint64_t p = 0; p < n_pairs; ++p) {
        const uint64_t run = ue_decode(br);
        const int64_t level = se_decode(br);
        pos += static_cast<int>(run);
        if (pos >= 64) throw FormatError("unit: run-level overruns block");
        if (level == 0 || level < -32768 || level > 32767)
            throw FormatError("unit: invalid run-level value");
        block[zz[pos]] = static_cast<int16_t>(level);
        ++pos;
    }
    return block;
}

} // namespace

std::vector<uint8_t> serialize_pb_unit(const ResidualUnit& unit) {
    BitWriter bw;
    for (const auto& field : unit.motion) {
        for (const auto& mv : field.mvs) {
            se_encode(bw, mv.dx);
            se_encode(bw, mv.dy);
        }
    }
    for (const auto& block : unit.blocks) encode_block_runlevel(bw, block);

    const std::vector<uint8_t> payload = bw.take();
    std::vector<uint8_t> out;
    out.reserve(kUnitHeader + payload.size());
    write_unit_header(out, unit.frame_type, unit.qp, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

ResidualUnit parse_pb_unit(const std::vector<uint8_t>& bytes, int blocks_x, int blocks_y,
                           int n_transform_blocks) {
    const UnitHeader h = read_unit_header(bytes);
    if (h.type == FrameType::I) throw FormatError("unit: expected P/B unit, found I");

    ResidualUnit unit;
    unit.frame_type = h.type;
    unit.qp = h.qp;
    BitReader br(bytes.data() + kUnitHeader, h.payload_len);

    const int n_fields = h.type == FrameType::B ? 2 : 1;
    for (int f = 0; f < n_fields; ++f) {
        MotionField field(blocks_x, blocks_y, 16);
        for (auto& mv : field.mvs) {
            mv.dx = static_cast<int>(se_decode(br));
            mv.dy = static_cast<int>(se_decode(br));
        }
        unit.motion.push_back(std::move(field));
    }
    unit.blocks.reserve(n_transform_blocks);
    for (int b = 0; b < n_transform_blocks; ++b) unit.blocks.push_back(decode_block_runlevel(br));
    return unit;
}

std::vector<uint8_t> serialize_i_unit(const Frame& frame) {
    const auto raster = frame.to_u8();
    std::vector<uint8_t> out;
    out.reserve(kUnitHeader + raster.size());
    write_unit_header(out, FrameType::I, 0, static_cast<uint32_t>(raster.size()));
    out.insert(out.end(), raster.begin(), raster.end());
    return out;
}

Frame parse_i_unit(const std::vector<uint8_t>& bytes, int width, int height) {
    const UnitHeader h = read_unit_header(bytes);
    if (h.type != FrameType::I) throw FormatError("unit: expected I unit");
    if (h.payload_len != static_cast<uint32_t>(width) * static_cast<uint32_t>(height))
        throw FormatError("unit: I raster size mismatch");
    std::vector<uint8_t> raster(bytes.begin() + kUnitHeader, bytes.end());
    return Frame::from_u8(width, height, raster);
}

std::vector<uint8_t> concat_units(const CodedGop& coded, bool include_i_unit) {
    std::vector<uint8_t> track;
    if (include_i_unit) {
        if (!coded.i_frame_unit) throw FormatError("concat_units: I unit not retained");
        track.insert(track.end(), coded.i_frame_unit->begin(), coded.i_frame_unit->end());
    }
    for (const auto& u : coded.pb_units) track.insert(track.end(), u.begin(), u.end());
    return track;
}

std::vector<std::vector<uint8_t>> split_units(const std::vector<uint8_t>& track) {
    std::vector<std::vector<uint8_t>> units;
    size_t off = 0;
    while (off < track.size()) {
        if (off + kUnitHeader > track.size())
            throw TruncationError("legacy track: unit header truncated", off);
        const uint32_t payload_len = static_cast<uint32_t>(track[off + 4]) |
                                     (static_cast<uint32_t>(track[off + 5]) << 8) |
                                     (static_cast<uint32_t>(track[off + 6]) << 16) |
                                     (static_cast<uint32_t>(track[off + 7]) << 24);
        const size_t total = kUnitHeader + payload_len;
        if (off + total > track.size())
            throw TruncationError("legacy track: unit payload truncated", off);
        units.emplace_back(track.begin() + static_cast<long>(off),
                           track.begin() + static_cast<long>(off + total));
        off += total;
    }
    return units;
}

} // namespace hybp
