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

#pragma once

#include "hybp/codec.hpp"
#include "hybp/frame.hpp"

#include <cstdint>
#include <vector>

namespace hybp {

uint32_t crc32(const uint8_t* data, size_t size);
inline uint32_t crc32(const std::vector<uint8_t>& bytes) { return crc32(bytes.data(), bytes.size()); }

// One GOP on the wire: serialized latent(s) in the neural track, concatenated
// coded units in the legacy track. Either track may be empty (traditional
// streams have no neural payload; prompt-only streams have no legacy payload).
struct GopRecord {
    std::vector<uint8_t> neural;
    std::vector<uint8_t> legacy;
};

struct StreamHeader {
    uint16_t version = 1;
    uint16_t width = 0;
    uint16_t height = 0;
    uint32_t fps = 30;
    CodecConfig codec;
    bool two_stage = true;
};

// HYBP layout, all little-endian: magic "HYBP", u16 version, u16 w, u16 h,
// u32 fps, u32 gop count, config block (u16 gop_length, u8 flags,
// u8 motion_block, u8 transform_block, u8 search_range, u8 qp_max,
// u8 reserved, f32 deblock_threshold), then per GOP u32 neural length +
// payload, u32 legacy length + payload, u32 crc32 over both payloads.
std::vector<uint8_t> mux(const std::vector<GopRecord>& gops, const StreamHeader& header);

struct DemuxResult {
    StreamHeader header;
    std::vector<GopRecord> gops;
};
DemuxResult demux(const std::vector<uint8_t>& bytes);

// Lossless re-encode of the generated keyframe prepended to the legacy
// track: a stream the plain decoder accepts with no injected reference.
std::vector<uint8_t> stitch(const Frame& i_frame, const std::vector<uint8_t>& legacy_bytes);

enum class DecodeMode { Direct, Stitched };

struct PipelineConfig {
    bool pipelined = true;
    size_t queue_depth = 1;
};

struct GopTiming {
    double generate_s = 0.0;
    double stitch_s = 0.0;
    double legacy_s = 0.0;
};

struct DecodeTiming {
    std::vector<GopTiming> per_gop;
    double wall_s = 0.0;

    double total_generate() const;
    double total_stitch() const;
    double total_legacy() const;
};

struct DecodeStreamResult {
    VideoSequence video;
    DecodeTiming timing;
};

// Full client-side decode. Both modes produce identical pixels; pipelined
// execution overlaps keyframe generation for GOP N+1 with the legacy decode
// of GOP N through a depth-1 queue, emitting frames in presentation order.
DecodeStreamResult decode_stream(const std::vector<uint8_t>& bytes, DecodeMode mode,
                                 const PipelineConfig& pipeline);

} // namespace hybp
