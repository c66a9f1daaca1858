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

#include "hybp/codec.hpp"

#include "hybp/errors.hpp"

#include <cmath>

namespace hybp {

namespace {

// Motion-compensated prediction for one schedule entry against the real
// (unrounded) reconstruction chain.
Frame predict(const ResidualUnit& unit, const ScheduleEntry& e, const std::vector<Frame>& chain) {
    Frame pred = warp(chain[e.ref0], unit.motion[0]);
    if (unit.frame_type == FrameType::B) {
        const Frame second = warp(chain[e.ref1], unit.motion[1]);
        for (size_t i = 0; i < pred.data.size(); ++i)
            pred.data[i] = 0.5 * (pred.data[i] + second.data[i]);
    }
    return pred;
}

std::vector<double> assemble_residual(const ResidualUnit& unit, int pw, int ph) {
    const int tb = 8;
    const int bx_count = pw / tb;
    std::vector<double> residual(static_cast<size_t>(pw) * ph, 0.0);
    for (size_t b = 0; b < unit.blocks.size(); ++b) {
        const auto block = dequant_itransform(unit.blocks[b], unit.qp);
        const int bx = static_cast<int>(b) % bx_count;
        const int by = static_cast<int>(b) / bx_count;
        for (int y = 0; y < tb; ++y)
            for (int x = 0; x < tb; ++x)
                residual[static_cast<size_t>(by * tb + y) * pw + bx * tb + x] =
                    block[y * tb + x];
    }
    return residual;
}

struct UnitRecon {
    Frame chain;                  // real-valued reference for later frames
    std::vector<double> residual; // what the decoder adds after warping
    BoundaryMask mask;            // frozen deblock gating (all-clear at qp == 0)
};

// The one reconstruction path shared by encoder and decoder; running the
// identical arithmetic on both sides is what makes the loop closed.
UnitRecon reconstruct_unit(const ResidualUnit& unit, const ScheduleEntry& e,
                           const std::vector<Frame>& chain, const CodecConfig& cfg) {
    const Frame pred = predict(unit, e, chain);
    const int pw = pred.width, ph = pred.height;
    UnitRecon r;
    r.residual = assemble_residual(unit, pw, ph);

    if (unit.qp == 0) {
        // Lossless bypass: integer residuals applied on the 8-bit grid.
        r.chain = Frame(pw, ph);
        for (size_t i = 0; i < pred.data.size(); ++i) {
            long p = std::lround(pred.data[i] * 255.0);
            if (p < 0) p = 0;
            if (p > 255) p = 255;
            r.chain.data[i] = (p + std::lround(r.residual[i] * 255.0)) / 255.0;
        }
        r.mask = BoundaryMask(pw, ph, 8); // all clear
        return r;
    }

    Frame pre(pw, ph);
    for (size_t i = 0; i < pred.data.size(); ++i) {
        double v = pred.data[i] + r.residual[i];
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
        pre.data[i] = v;
    }
    r.mask = compute_boundary_mask(pre, cfg.deblock_threshold);
    r.chain = deblock(pre, r.mask);
    return r;
}

std::vector<double> to_block(const std::vector<double>& raster, int pw, int bx, int by) {
    const int tb = 8;
    std::vector<double> block(tb * tb);
    for (int y = 0; y < tb; ++y)
        for (int x = 0; x < tb; ++x)
            block[y * tb + x] = raster[static_cast<size_t>(by * tb + y) * pw + bx * tb + x];
    return block;
}

} // namespace

EncodedGop encode_gop_with_recon(const std::vector<Frame>& frames, const Frame& injected_reference,
                                 int qp, const CodecConfig& cfg, bool retain_i_unit) {
    if (frames.empty()) throw UsageError("encode_gop: empty GOP");
    if (qp < 0 || qp > cfg.qp_max) throw UsageError("encode_gop: qp out of range");
    const int w = frames[0].width, h = frames[0].height;
    if (!injected_reference.same_dims(frames[0]))
        throw FormatError("encode_gop: injected reference dimension mismatch");
    for (const auto& f : frames)
        if (!f.same_dims(frames[0])) throw FormatError("encode_gop: mixed frame dimensions");

    const int pw = cfg.padded_dim(w), ph = cfg.padded_dim(h);
    const Frame i_quant = injected_reference.quantized();

    CodedGop coded;
    coded.width = w;
    coded.height = h;
    coded.qp = qp;
    coded.b_frames = cfg.b_frames_enabled;
    coded.frame_count = static_cast<int>(frames.size());
    if (retain_i_unit) coded.i_frame_unit = serialize_i_unit(i_quant);

    std::vector<Frame> chain(frames.size());
    chain[0] = pad_frame(i_quant, pw, ph);

    const auto schedule = gop_schedule(coded.frame_count, cfg.b_frames_enabled);
    const int tb = 8;
    const int n_tblocks = (pw / tb) * (ph / tb);

    for (const auto& e : schedule) {
        const Frame src = pad_frame(frames[e.pres], pw, ph);

        ResidualUnit unit;
        unit.frame_type = e.type;
        unit.qp = qp;
        unit.ref_indices.push_back(e.ref0);
        unit.motion.push_back(motion_estimate(src, chain[e.ref0], cfg));
        if (e.type == FrameType::B) {
            unit.ref_indices.push_back(e.ref1);
            unit.motion.push_back(motion_estimate(src, chain[e.ref1], cfg));
        }

        const Frame pred = predict(unit, e, chain);
        std::vector<double> residual(src.data.size());
        if (qp == 0) {
            for (size_t i = 0; i < src.data.size(); ++i) {
                long p = std::lround(pred.data[i] * 255.0);
                if (p < 0) p = 0;
                if (p > 255) p = 255;
                residual[i] = (std::lround(src.data[i] * 255.0) - p) / 255.0;
            }
        } else {
            for (size_t i = 0; i < src.data.size(); ++i) residual[i] = src.data[i] - pred.data[i];
        }

        unit.blocks.reserve(n_tblocks);
        for (int by = 0; by < ph / tb; ++by)
            for (int bx = 0; bx < pw / tb; ++bx)
                unit.blocks.push_back(transform_quant(to_block(residual, pw, bx, by), qp));

        chain[e.pres] = reconstruct_unit(unit, e, chain, cfg).chain;

        auto bytes = serialize_pb_unit(unit);
        coded.sizes.push_back(bytes.size());
        coded.pb_units.push_back(std::move(bytes));
    }

    EncodedGop out;
    out.coded = std::move(coded);
    out.reconstructions.reserve(frames.size());
    for (const auto& c : chain) out.reconstructions.push_back(crop_frame(c, w, h).quantized());
    return out;
}

CodedGop encode_gop(const std::vector<Frame>& frames, const Frame& injected_reference, int qp,
                    const CodecConfig& cfg, bool retain_i_unit) {
    return encode_gop_with_recon(frames, injected_reference, qp, cfg, retain_i_unit).coded;
}

GopDecode decode_gop_with_side_info(const CodedGop& coded,
                                    const std::optional<Frame>& injected_reference,
                                    const CodecConfig& cfg) {
    const bool has_unit = coded.i_frame_unit.has_value();
    if (has_unit == injected_reference.has_value())
        throw FormatError("decode_gop: exactly one of I unit / injected reference required");

    const int w = coded.width, h = coded.height;
    const int pw = cfg.padded_dim(w), ph = cfg.padded_dim(h);

    Frame i_frame = has_unit ? parse_i_unit(*coded.i_frame_unit, w, h)
                             : injected_reference->quantized();
    if (i_frame.width != w || i_frame.height != h)
        throw FormatError("decode_gop: reference dimension mismatch");

    const auto schedule = gop_schedule(coded.frame_count, coded.b_frames);
    if (schedule.size() != coded.pb_units.size())
        throw FormatError("decode_gop: unit count does not match GOP structure");

    GopDecode out;
    out.side.padded_w = pw;
    out.side.padded_h = ph;
    out.side.width = w;
    out.side.height = h;
    out.side.frame_count = coded.frame_count;
    out.side.schedule = schedule;
    out.side.motion.resize(coded.frame_count);
    out.side.residual.resize(coded.frame_count);
    out.side.masks.resize(coded.frame_count);
    out.side.unit_qp.assign(coded.frame_count, 0);

    std::vector<Frame> chain(coded.frame_count);
    chain[0] = pad_frame(i_frame, pw, ph);
    out.side.i_frame_chain = chain[0].data;

    const int n_tblocks = (pw / 8) * (ph / 8);
    for (size_t u = 0; u < schedule.size(); ++u) {
        const auto& e = schedule[u];
        ResidualUnit unit = parse_pb_unit(coded.pb_units[u], pw / cfg.motion_block,
                                          ph / cfg.motion_block, n_tblocks);
        if (unit.frame_type != e.type)
            throw FormatError("decode_gop: unit type does not match GOP structure");
        unit.ref_indices.push_back(e.ref0);
        if (e.type == FrameType::B) unit.ref_indices.push_back(e.ref1);

        UnitRecon r = reconstruct_unit(unit, e, chain, cfg);
        chain[e.pres] = std::move(r.chain);
        out.side.motion[e.pres] = std::move(unit.motion);
        out.side.residual[e.pres] = std::move(r.residual);
        out.side.masks[e.pres] = std::move(r.mask);
        out.side.unit_qp[e.pres] = unit.qp;
    }

    out.frames.reserve(coded.frame_count);
    for (int t = 0; t < coded.frame_count; ++t)
        out.frames.push_back(crop_frame(chain[t], w, h).quantized());
    return out;
}

std::vector<Frame> decode_gop(const CodedGop& coded, const std::optional<Frame>& injected_reference,
                              const CodecConfig& cfg) {
    return decode_gop_with_side_info(coded, injected_reference, cfg).frames;
}

} // namespace hybp
