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

#include "hybp/container.hpp"

#include "hybp/errors.hpp"
#include "hybp/generator.hpp"
#include "hybp/pipeline.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cstring>

namespace hybp {

uint32_t crc32(const uint8_t* data, size_t size) {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = 0xFFFFFFFFu;
    for (size_t i = 0; i < size; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace {

constexpr size_t kHeaderBytes = 4 + 2 + 2 + 2 + 4 + 4 + 12;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xFF));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    put_u16(out, static_cast<uint16_t>(v & 0xFFFF));
    put_u16(out, static_cast<uint16_t>(v >> 16));
}

uint16_t get_u16(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint16_t>(b[off] | (b[off + 1] << 8));
}

uint32_t get_u32(const std::vector<uint8_t>& b, size_t off) {
    return static_cast<uint32_t>(get_u16(b, off)) |
           (static_cast<uint32_t>(get_u16(b, off + 2)) << 16);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Split the neural payload into its self-delimiting latent records.
std::vector<LatentCode> parse_latents(const std::vector<uint8_t>& neural) {
    std::vector<LatentCode> latents;
    size_t off = 0;
    while (off < neural.size()) {
        if (off + latent_header_bytes() > neural.size())
            throw TruncationError("neural track: latent header truncated", off);
        const uint32_t d = static_cast<uint32_t>(neural[off]) |
                           (static_cast<uint32_t>(neural[off + 1]) << 8) |
                           (static_cast<uint32_t>(neural[off + 2]) << 16) |
                           (static_cast<uint32_t>(neural[off + 3]) << 24);
        const size_t total = serialized_latent_size(static_cast<int>(d));
        if (off + total > neural.size())
            throw TruncationError("neural track: latent payload truncated", off);
        latents.push_back(deserialize_latent(
            std::vector<uint8_t>(neural.begin() + static_cast<long>(off),
                                 neural.begin() + static_cast<long>(off + total))));
        off += total;
    }
    return latents;
}

struct GopPlan {
    std::vector<LatentCode> latents;
    std::vector<std::vector<uint8_t>> units; // legacy units, decode order
    bool has_i_unit = false;
    int frame_count = 0;
};

GopPlan plan_gop(const GopRecord& record, size_t gop_index) {
    GopPlan plan;
    plan.latents = parse_latents(record.neural);
    auto units = split_units(record.legacy);
    plan.has_i_unit = !units.empty() && units[0][0] == static_cast<uint8_t>(FrameType::I);

    const size_t k = plan.latents.size();
    if (k == 0) {
        if (!plan.has_i_unit)
            throw FormatError("gop " + std::to_string(gop_index) +
                              ": no latent and no I unit to seed decoding");
        plan.frame_count = static_cast<int>(units.size());
    } else if (k == 1) {
        if (plan.has_i_unit)
            throw FormatError("gop " + std::to_string(gop_index) +
                              ": both latent and I unit present");
        plan.frame_count = 1 + static_cast<int>(units.size());
    } else {
        if (!units.empty())
            throw FormatError("gop " + std::to_string(gop_index) +
                              ": per-frame latents cannot carry a legacy track");
        plan.frame_count = static_cast<int>(k);
    }
    plan.units = std::move(units);
    return plan;
}

// Cache of generator weights; decode streams reuse one spec throughout.
class WeightsCache {
public:
    const GeneratorWeights& get(const GeneratorSpec& spec) {
        if (!weights_ || !(weights_->spec == spec))
            weights_ = std::make_unique<GeneratorWeights>(GeneratorWeights::build(spec));
        return *weights_;
    }

private:
    std::unique_ptr<GeneratorWeights> weights_;
};

} // namespace

std::vector<uint8_t> mux(const std::vector<GopRecord>& gops, const StreamHeader& header) {
    std::vector<uint8_t> out;
    out.reserve(kHeaderBytes);
    out.insert(out.end(), {'H', 'Y', 'B', 'P'});
    put_u16(out, header.version);
    put_u16(out, header.width);
    put_u16(out, header.height);
    put_u32(out, header.fps);
    put_u32(out, static_cast<uint32_t>(gops.size()));
    put_u16(out, static_cast<uint16_t>(header.codec.gop_length));
    uint8_t flags = 0;
    if (header.codec.b_frames_enabled) flags |= 1;
    if (!header.two_stage) flags |= 2;
    out.push_back(flags);
    out.push_back(static_cast<uint8_t>(header.codec.motion_block));
    out.push_back(static_cast<uint8_t>(header.codec.transform_block));
    out.push_back(static_cast<uint8_t>(header.codec.search_range));
    out.push_back(static_cast<uint8_t>(header.codec.qp_max));
    out.push_back(0);
    put_u32(out, std::bit_cast<uint32_t>(static_cast<float>(header.codec.deblock_threshold)));

    for (const auto& gop : gops) {
        put_u32(out, static_cast<uint32_t>(gop.neural.size()));
        out.insert(out.end(), gop.neural.begin(), gop.neural.end());
        put_u32(out, static_cast<uint32_t>(gop.legacy.size()));
        out.insert(out.end(), gop.legacy.begin(), gop.legacy.end());
        std::vector<uint8_t> both = gop.neural;
        both.insert(both.end(), gop.legacy.begin(), gop.legacy.end());
        put_u32(out, crc32(both));
    }
    return out;
}

DemuxResult demux(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < kHeaderBytes) throw TruncationError("stream: header truncated", bytes.size());
    if (std::memcmp(bytes.data(), "HYBP", 4) != 0) throw FormatError("stream: bad magic");

    DemuxResult result;
    StreamHeader& h = result.header;
    h.version = get_u16(bytes, 4);
    if (h.version != 1)
        throw FormatError("stream: unsupported version " + std::to_string(h.version));
    h.width = get_u16(bytes, 6);
    h.height = get_u16(bytes, 8);
    h.fps = get_u32(bytes, 10);
    const uint32_t gop_count = get_u32(bytes, 14);
    h.codec.gop_length = get_u16(bytes, 18);
    const uint8_t flags = bytes[20];
    h.codec.b_frames_enabled = (flags & 1) != 0;
    h.two_stage = (flags & 2) == 0;
    h.codec.motion_block = bytes[21];
    h.codec.transform_block = bytes[22];
    h.codec.search_range = bytes[23];
    h.codec.qp_max = bytes[24];
    h.codec.deblock_threshold = static_cast<double>(std::bit_cast<float>(get_u32(bytes, 26)));
    if (h.width == 0 || h.height == 0) throw FormatError("stream: zero dimensions");

    size_t off = kHeaderBytes;
    for (uint32_t g = 0; g < gop_count; ++g) {
        GopRecord record;
        if (off + 4 > bytes.size()) throw TruncationError("stream: neural length truncated", off);
        const uint32_t nlen = get_u32(bytes, off);
        off += 4;
        if (off + nlen > bytes.size()) throw TruncationError("stream: neural payload truncated", off);
        record.neural.assign(bytes.begin() + static_cast<long>(off),
                             bytes.begin() + static_cast<long>(off + nlen));
        off += nlen;
        if (off + 4 > bytes.size()) throw TruncationError("stream: legacy length truncated", off);
        const uint32_t llen = get_u32(bytes, off);
        off += 4;
        if (off + llen > bytes.size()) throw TruncationError("stream: legacy payload truncated", off);
        record.legacy.assign(bytes.begin() + static_cast<long>(off),
                             bytes.begin() + static_cast<long>(off + llen));
        off += llen;
        if (off + 4 > bytes.size()) throw TruncationError("stream: checksum truncated", off);
        const uint32_t stored = get_u32(bytes, off);
        off += 4;
        std::vector<uint8_t> both = record.neural;
        both.insert(both.end(), record.legacy.begin(), record.legacy.end());
        if (crc32(both) != stored) throw ChecksumError("stream: payload checksum mismatch", g);
        result.gops.push_back(std::move(record));
    }
    if (off != bytes.size()) throw FormatError("stream: trailing bytes after last GOP record");
    return result;
}

std::vector<uint8_t> stitch(const Frame& i_frame, const std::vector<uint8_t>& legacy_bytes) {
    std::vector<uint8_t> out = serialize_i_unit(i_frame);
    out.insert(out.end(), legacy_bytes.begin(), legacy_bytes.end());
    return out;
}

double DecodeTiming::total_generate() const {
    double s = 0.0;
    for (const auto& g : per_gop) s += g.generate_s;
    return s;
}
double DecodeTiming::total_stitch() const {
    double s = 0.0;
    for (const auto& g : per_gop) s += g.stitch_s;
    return s;
}
double DecodeTiming::total_legacy() const {
    double s = 0.0;
    for (const auto& g : per_gop) s += g.legacy_s;
    return s;
}

DecodeStreamResult decode_stream(const std::vector<uint8_t>& bytes, DecodeMode mode,
                                 const PipelineConfig& pipeline) {
    const DemuxResult parsed = demux(bytes);
    const StreamHeader& header = parsed.header;
    const int n_gops = static_cast<int>(parsed.gops.size());

    DecodeStreamResult result;
    result.video.fps = header.fps;
    result.timing.per_gop.resize(n_gops);

    std::vector<GopPlan> plans;
    plans.reserve(n_gops);
    for (int g = 0; g < n_gops; ++g) plans.push_back(plan_gop(parsed.gops[g], g));

    // stage A: keyframe generation on the worker thread
    WeightsCache weights;
    auto generate_stage = [&](int g) -> std::vector<Frame> {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Frame> frames;
        for (const LatentCode& latent : plans[g].latents) {
            if (latent.width != header.width || latent.height != header.height)
                throw FormatError("gop " + std::to_string(g) + ": latent dimensions mismatch");
            const GeneratorSpec spec = latent.spec(256, header.two_stage);
            frames.push_back(generate_iframe(weights.get(spec), latent.z).quantized());
        }
        result.timing.per_gop[g].generate_s = seconds_since(t0);
        return frames;
    };

    std::vector<std::vector<Frame>> decoded(n_gops);

    // stage B: legacy decode on the consumer thread
    auto legacy_stage = [&](int g, std::vector<Frame> generated) {
        const GopPlan& plan = plans[g];
        GopTiming& timing = result.timing.per_gop[g];
        if (plan.latents.size() > 1) {
            decoded[g] = std::move(generated); // per-frame latents: nothing to decode
            return;
        }
        CodedGop coded;
        coded.width = header.width;
        coded.height = header.height;
        coded.b_frames = header.codec.b_frames_enabled;
        coded.frame_count = plan.frame_count;

        if (plan.latents.empty()) {
            coded.i_frame_unit = plan.units[0];
            coded.pb_units.assign(plan.units.begin() + 1, plan.units.end());
            const auto t0 = std::chrono::steady_clock::now();
            decoded[g] = decode_gop(coded, std::nullopt, header.codec);
            timing.legacy_s = seconds_since(t0);
            return;
        }

        const Frame& keyframe = generated[0];
        if (mode == DecodeMode::Stitched) {
            const auto t_stitch = std::chrono::steady_clock::now();
            const auto stitched = stitch(keyframe, parsed.gops[g].legacy);
            timing.stitch_s = seconds_since(t_stitch);
            auto units = split_units(stitched);
            coded.i_frame_unit = units[0];
            coded.pb_units.assign(units.begin() + 1, units.end());
            const auto t0 = std::chrono::steady_clock::now();
            decoded[g] = decode_gop(coded, std::nullopt, header.codec);
            timing.legacy_s = seconds_since(t0);
        } else {
            coded.pb_units = plan.units;
            const auto t0 = std::chrono::steady_clock::now();
            decoded[g] = decode_gop(coded, keyframe, header.codec);
            timing.legacy_s = seconds_since(t0);
        }
    };

    const auto t_wall = std::chrono::steady_clock::now();
    if (pipeline.pipelined) {
        two_stage_pipeline<std::vector<Frame>>(n_gops, generate_stage, legacy_stage,
                                               pipeline.queue_depth);
    } else {
        for (int g = 0; g < n_gops; ++g) legacy_stage(g, generate_stage(g));
    }
    result.timing.wall_s = seconds_since(t_wall);

    for (auto& gop_frames : decoded)
        for (auto& f : gop_frames) result.video.frames.push_back(std::move(f));
    return result;
}

} // namespace hybp
