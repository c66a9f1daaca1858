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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hybp/codec.hpp"
#include "hybp/errors.hpp"
#include "hybp/prng.hpp"
#include "hybp/synth.hpp"

#include <cmath>
#include <numbers>

using namespace hybp;

namespace {

Frame random_frame(int w, int h, uint64_t seed) {
    SplitMix64 rng(seed);
    Frame f(w, h);
    for (auto& v : f.data) v = rng.next_double();
    return f.quantized();
}

// Independent naive DCT-II oracle (direct cosine sums, no matrix reuse).
std::vector<double> oracle_dct8(const std::vector<double>& x) {
    std::vector<double> c(64, 0.0);
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (int y = 0; y < 8; ++y)
                for (int xx = 0; xx < 8; ++xx)
                    acc += x[y * 8 + xx] *
                           std::cos((2 * y + 1) * u * std::numbers::pi / 16.0) *
                           std::cos((2 * xx + 1) * v * std::numbers::pi / 16.0);
            const double au = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            const double av = v == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            c[u * 8 + v] = au * av * acc;
        }
    }
    return c;
}

// Exhaustive spec-conformant motion search written independently of the
// implementation: full integer search, then the 8 half-pel neighbors, with
// the (sad, |dx|+|dy|, dy, dx) tie-break.
MotionVector oracle_block_search(const Frame& target, const Frame& ref, int x0, int y0, int bs,
                                 int range) {
    auto sample = [&](double sx, double sy) {
        const int ix = static_cast<int>(std::floor(sx));
        const int iy = static_cast<int>(std::floor(sy));
        const double fx = sx - ix, fy = sy - iy;
        auto get = [&](int x, int y) {
            x = std::clamp(x, 0, ref.width - 1);
            y = std::clamp(y, 0, ref.height - 1);
            return ref.at(x, y);
        };
        return (1 - fy) * ((1 - fx) * get(ix, iy) + fx * get(ix + 1, iy)) +
               fy * ((1 - fx) * get(ix, iy + 1) + fx * get(ix + 1, iy + 1));
    };
    auto sad_halfpel = [&](int mvx, int mvy) {
        double s = 0.0;
        for (int y = 0; y < bs; ++y)
            for (int x = 0; x < bs; ++x)
                s += std::abs(target.at(x0 + x, y0 + y) -
                              sample(x0 + x + mvx * 0.5, y0 + y + mvy * 0.5));
        return s;
    };
    auto better = [](double sad, int dx, int dy, double bsad, int bdx, int bdy) {
        if (sad != bsad) return sad < bsad;
        if (std::abs(dx) + std::abs(dy) != std::abs(bdx) + std::abs(bdy))
            return std::abs(dx) + std::abs(dy) < std::abs(bdx) + std::abs(bdy);
        if (dy != bdy) return dy < bdy;
        return dx < bdx;
    };

    double best_sad = sad_halfpel(0, 0);
    int bdx = 0, bdy = 0;
    for (int dy = -range; dy <= range; ++dy)
        for (int dx = -range; dx <= range; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double s = sad_halfpel(2 * dx, 2 * dy);
            if (better(s, dx, dy, best_sad, bdx, bdy)) {
                best_sad = s;
                bdx = dx;
                bdy = dy;
            }
        }
    int mvx = 2 * bdx, mvy = 2 * bdy;
    double best = sad_halfpel(mvx, mvy);
    int rx = mvx, ry = mvy;
    for (int ny = -1; ny <= 1; ++ny)
        for (int nx = -1; nx <= 1; ++nx) {
            if (nx == 0 && ny == 0) continue;
            if (std::abs(mvx + nx) > 2 * range || std::abs(mvy + ny) > 2 * range) continue;
            const double s = sad_halfpel(mvx + nx, mvy + ny);
            if (better(s, mvx + nx, mvy + ny, best, rx, ry)) {
                best = s;
                rx = mvx + nx;
                ry = mvy + ny;
            }
        }
    return {rx, ry};
}

CodecConfig small_cfg() {
    CodecConfig cfg;
    cfg.gop_length = 4;
    return cfg;
}

bool frames_equal_u8(const Frame& a, const Frame& b) { return a.to_u8() == b.to_u8(); }

} // namespace

// --- transform path ---------------------------------------------------------

TEST_CASE("DCT orthonormality: transform then inverse is identity") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> block(64);
        for (auto& v : block) v = rng.next_double(-1.0, 1.0);
        // qp=4 has unit step, so the only loss is coefficient rounding
        const auto coeffs = transform_quant(block, 4);
        const auto oracle = oracle_dct8(block);
        for (int i = 0; i < 64; ++i)
            CHECK(coeffs[i] == static_cast<int16_t>(std::lround(oracle[i])));
    }
}

TEST_CASE("itransform(transform) reproduces real blocks to 1e-9") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 16; ++trial) {
        double block[64], coeffs[64], back[64];
        for (auto& v : block) v = rng.next_double(-1.0, 1.0);
        dct_forward8(block, coeffs);
        dct_inverse8(coeffs, back);
        double max_err = 0.0;
        for (int i = 0; i < 64; ++i) max_err = std::max(max_err, std::abs(back[i] - block[i]));
        CHECK(max_err < 1e-9);

        // forward transform agrees with the independent cosine-sum oracle
        const auto oracle = oracle_dct8(std::vector<double>(block, block + 64));
        for (int i = 0; i < 64; ++i) CHECK(coeffs[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
    }
}

TEST_CASE("zero block quantizes to zero at any qp") {
    const std::vector<double> zero(64, 0.0);
    for (int qp : {0, 4, 20, 51}) {
        const auto coeffs = transform_quant(zero, qp);
        for (int16_t c : coeffs) CHECK(c == 0);
    }
}

TEST_CASE("DC-only block at qp=10 quantizes to coefficient 2") {
    // orthonormal DC gain: constant 0.5 over 64 samples -> DC = 0.5 * 8 = 4,
    // quant_step(10) = 2, so round(4/2) = 2
    std::vector<double> block(64, 0.5);
    const auto coeffs = transform_quant(block, 10);
    CHECK(coeffs[0] == 2);
    for (int i = 1; i < 64; ++i) CHECK(coeffs[i] == 0);
    CHECK(quant_step(10) == doctest::Approx(2.0));
    CHECK(quant_step(4) == doctest::Approx(1.0));
}

TEST_CASE("qp=0 transform path is exact on the 1/255 grid") {
    SplitMix64 rng(5);
    std::vector<double> block(64);
    for (auto& v : block) v = static_cast<double>(static_cast<int>(rng.next_below(511)) - 255) / 255.0;
    const auto coeffs = transform_quant(block, 0);
    const auto back = dequant_itransform(coeffs, 0);
    for (int i = 0; i < 64; ++i) CHECK(back[i] == doctest::Approx(block[i]).epsilon(1e-15));
}

TEST_CASE("quantization roundtrip error bounded by half a step per coefficient") {
    SplitMix64 rng(6);
    for (int qp : {8, 20, 35}) {
        std::vector<double> block(64);
        for (auto& v : block) v = rng.next_double(-0.5, 0.5);
        const auto recon = dequant_itransform(transform_quant(block, qp), qp);
        const auto c0 = oracle_dct8(block);
        const auto c1 = oracle_dct8(recon);
        for (int i = 0; i < 64; ++i)
            CHECK(std::abs(c1[i] - c0[i]) <= quant_step(qp) * 0.5 + 1e-9);
    }
}

TEST_CASE("golden roundtrip mse at qp=20") {
    std::vector<double> block(64);
    for (int i = 0; i < 64; ++i) block[i] = 0.5 + 0.3 * std::sin(i * 0.37);
    const auto recon = dequant_itransform(transform_quant(block, 20), 20);
    double m = 0.0;
    for (int i = 0; i < 64; ++i) m += (recon[i] - block[i]) * (recon[i] - block[i]);
    m /= 64.0;
    CHECK(m == doctest::Approx(0.122921347943).epsilon(1e-9)); // frozen reference value
}

TEST_CASE("pathological inputs overflow the 16-bit coefficient range") {
    std::vector<double> block(64, 300.0); // far outside the [0,1] pixel domain
    CHECK_THROWS_AS(transform_quant(block, 0), FormatError);
}

// --- warp -------------------------------------------------------------------

TEST_CASE("zero motion warp is the identity") {
    const Frame f = random_frame(32, 32, 8);
    MotionField mvs(2, 2, 16);
    const Frame out = warp(f, mvs);
    for (size_t i = 0; i < f.data.size(); ++i) CHECK(out.data[i] == f.data[i]);
}

TEST_CASE("half-pel warp of a constant frame stays constant") {
    Frame f(16, 16, 0.375);
    MotionField mvs(1, 1, 16);
    mvs.at(0, 0) = {1, 0};
    const Frame out = warp(f, mvs);
    for (double v : out.data) CHECK(v == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("half-pel warp of a ramp averages horizontal neighbors") {
    Frame f(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) f.at(x, y) = x / 255.0;
    MotionField mvs(1, 1, 16);
    mvs.at(0, 0) = {1, 0};
    const Frame out = warp(f, mvs);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 15; ++x)
            CHECK(out.at(x, y) == doctest::Approx((f.at(x, y) + f.at(x + 1, y)) / 2.0));
        CHECK(out.at(15, y) == doctest::Approx(f.at(15, y))); // edge clamp
    }
}

TEST_CASE("warp is linear in the reference for fixed motion") {
    const Frame a = random_frame(32, 32, 21);
    const Frame b = random_frame(32, 32, 22);
    SplitMix64 rng(23);
    MotionField mvs(2, 2, 16);
    for (auto& mv : mvs.mvs)
        mv = {static_cast<int>(rng.next_below(33)) - 16, static_cast<int>(rng.next_below(33)) - 16};
    const double alpha = 0.7, beta = -0.4;
    Frame combo(32, 32);
    for (size_t i = 0; i < combo.data.size(); ++i)
        combo.data[i] = alpha * a.data[i] + beta * b.data[i];
    const Frame wa = warp(a, mvs), wb = warp(b, mvs), wc = warp(combo, mvs);
    for (size_t i = 0; i < wc.data.size(); ++i)
        CHECK(wc.data[i] == doctest::Approx(alpha * wa.data[i] + beta * wb.data[i]).epsilon(1e-9));
}

// --- motion estimation --------------------------------------------------------

TEST_CASE("identical frames give all-zero motion") {
    const Frame f = random_frame(32, 32, 12);
    const MotionField mvs = motion_estimate(f, f, small_cfg());
    for (const auto& mv : mvs.mvs) {
        CHECK(mv.dx == 0);
        CHECK(mv.dy == 0);
    }
}

TEST_CASE("translate pair: interior blocks find (2,0) half-pel") {
    const VideoSequence seq = synth_sequence(SynthKind::Translate, 64, 64, 2, 77);
    const MotionField mvs = motion_estimate(seq.frames[1], seq.frames[0], small_cfg());
    // wrap seam enters at the right edge; interior and left blocks see a pure shift
    for (int by = 0; by < mvs.blocks_y; ++by)
        for (int bx = 0; bx + 1 < mvs.blocks_x; ++bx) {
            CHECK(mvs.at(bx, by).dx == 2);
            CHECK(mvs.at(bx, by).dy == 0);
        }
}

TEST_CASE("motion search matches the exhaustive oracle") {
    const Frame ref = random_frame(32, 32, 100);
    // warp the reference by a known small shift plus noise to create a target
    VideoSequence pair = synth_sequence(SynthKind::Translate, 32, 32, 2, 100);
    const CodecConfig cfg = small_cfg();
    for (const auto& [target, reference] :
         {std::pair<const Frame&, const Frame&>{pair.frames[1], pair.frames[0]},
          std::pair<const Frame&, const Frame&>{ref, pair.frames[0]}}) {
        const MotionField got = motion_estimate(target, reference, cfg);
        for (int by = 0; by < got.blocks_y; ++by)
            for (int bx = 0; bx < got.blocks_x; ++bx) {
                const MotionVector expect = oracle_block_search(target, reference, bx * 16, by * 16,
                                                                16, cfg.search_range);
                CHECK(got.at(bx, by).dx == expect.dx);
                CHECK(got.at(bx, by).dy == expect.dy);
            }
    }
}

TEST_CASE("motion vectors stay within the half-pel range bound") {
    const Frame a = random_frame(48, 48, 1), b = random_frame(48, 48, 2);
    const CodecConfig cfg = small_cfg();
    const MotionField mvs = motion_estimate(a, b, cfg);
    for (const auto& mv : mvs.mvs) {
        CHECK(std::abs(mv.dx) <= 2 * cfg.search_range);
        CHECK(std::abs(mv.dy) <= 2 * cfg.search_range);
    }
}

// --- deblock ------------------------------------------------------------------

TEST_CASE("deblock leaves constant frames unchanged") {
    Frame f(32, 32, 0.6);
    const BoundaryMask mask = compute_boundary_mask(f, 0.08);
    // constant frame: every boundary pair is smooth, so all flags set
    for (uint8_t v : mask.vertical) CHECK(v == 1);
    for (uint8_t v : mask.horizontal) CHECK(v == 1);
    const Frame out = deblock(f, mask);
    for (double v : out.data) CHECK(v == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("all-clear mask is the identity") {
    const Frame f = random_frame(32, 32, 50);
    BoundaryMask mask(32, 32, 8);
    const Frame out = deblock(f, mask);
    CHECK(out.data == f.data);
}

TEST_CASE("step edge with the filter forced on becomes 0.25 / 0.75") {
    Frame f(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) f.at(x, y) = x < 8 ? 0.0 : 1.0;
    BoundaryMask mask(16, 16, 8);
    for (int y = 0; y < 16; ++y) mask.v_at(0, y) = 1;
    const Frame out = deblock(f, mask);
    for (int y = 0; y < 16; ++y) {
        CHECK(out.at(7, y) == doctest::Approx(0.25));
        CHECK(out.at(8, y) == doctest::Approx(0.75));
        CHECK(out.at(6, y) == doctest::Approx(0.0));
        CHECK(out.at(9, y) == doctest::Approx(1.0));
    }
}

TEST_CASE("boundary mask gating: strong edges stay unfiltered") {
    Frame f(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) f.at(x, y) = x < 8 ? 0.0 : 1.0;
    const BoundaryMask mask = compute_boundary_mask(f, 0.1);
    for (int y = 0; y < 16; ++y) CHECK(mask.v_at(0, y) == 0);
    // horizontal boundaries cross constant columns and stay smooth
    for (int x = 0; x < 16; ++x) CHECK(mask.h_at(0, x) == 1);
}

TEST_CASE("boundary mask matches direct evaluation on a fixture") {
    const Frame f = random_frame(32, 32, 123);
    const double threshold = 0.08;
    const BoundaryMask mask = compute_boundary_mask(f, threshold);
    for (int b = 0; b < mask.v_boundaries(); ++b) {
        const int x = (b + 1) * 8;
        for (int y = 0; y < 32; ++y)
            CHECK(mask.v_at(b, y) == (std::abs(f.at(x - 1, y) - f.at(x, y)) < threshold ? 1 : 0));
    }
    for (int b = 0; b < mask.h_boundaries(); ++b) {
        const int y = (b + 1) * 8;
        for (int x = 0; x < 32; ++x)
            CHECK(mask.h_at(b, x) == (std::abs(f.at(x, y - 1) - f.at(x, y)) < threshold ? 1 : 0));
    }
}

TEST_CASE("deblock is linear for a fixed mask") {
    const Frame a = random_frame(32, 32, 61), b = random_frame(32, 32, 62);
    const BoundaryMask mask = compute_boundary_mask(a, 0.2);
    Frame combo(32, 32);
    for (size_t i = 0; i < combo.data.size(); ++i) combo.data[i] = 0.25 * a.data[i] + 0.5 * b.data[i];
    const Frame da = deblock(a, mask), db = deblock(b, mask), dc = deblock(combo, mask);
    for (size_t i = 0; i < dc.data.size(); ++i)
        CHECK(dc.data[i] == doctest::Approx(0.25 * da.data[i] + 0.5 * db.data[i]).epsilon(1e-9));
}

// --- units ---------------------------------------------------------------------

TEST_CASE("pb unit roundtrip preserves motion and coefficients") {
    SplitMix64 rng(9);
    ResidualUnit unit;
    unit.frame_type = FrameType::B;
    unit.qp = 17;
    for (int fidx = 0; fidx < 2; ++fidx) {
        MotionField field(2, 2, 16);
        for (auto& mv : field.mvs)
            mv = {static_cast<int>(rng.next_below(33)) - 16,
                  static_cast<int>(rng.next_below(33)) - 16};
        unit.motion.push_back(field);
    }
    for (int b = 0; b < 16; ++b) {
        std::vector<int16_t> block(64, 0);
        for (int k = 0; k < 6; ++k)
            block[rng.next_below(64)] = static_cast<int16_t>(static_cast<int>(rng.next_below(41)) - 20);
        unit.blocks.push_back(block);
    }
    const auto bytes = serialize_pb_unit(unit);
    const ResidualUnit back = parse_pb_unit(bytes, 2, 2, 16);
    CHECK(back.frame_type == FrameType::B);
    CHECK(back.qp == 17);
    CHECK(back.motion == unit.motion);
    CHECK(back.blocks == unit.blocks);
}

TEST_CASE("i unit roundtrip is bit-exact") {
    const Frame f = random_frame(32, 16, 4);
    const auto bytes = serialize_i_unit(f);
    CHECK(bytes.size() == 8 + 32 * 16);
    const Frame back = parse_i_unit(bytes, 32, 16);
    CHECK(frames_equal_u8(back, f));
}

TEST_CASE("corrupt unit reports a truncation offset") {
    const Frame f = random_frame(16, 16, 3);
    auto bytes = serialize_i_unit(f);
    bytes.resize(bytes.size() - 5);
    CHECK_THROWS_AS(parse_i_unit(bytes, 16, 16), TruncationError);
}

// --- GOP encode/decode -----------------------------------------------------------

TEST_CASE("static GOP: zero motion, near-empty residual units") {
    const Frame f = random_frame(64, 64, 42);
    std::vector<Frame> frames(4, f);
    CodecConfig cfg = small_cfg();
    cfg.b_frames_enabled = false;
    const CodedGop coded = encode_gop(frames, f, 20, cfg);
    CHECK(coded.pb_units.size() == 3);
    const GopDecode dec = decode_gop_with_side_info(coded, f, cfg);
    for (int t = 1; t < 4; ++t)
        for (const auto& field : dec.side.motion[t])
            for (const auto& mv : field.mvs) {
                CHECK(mv.dx == 0);
                CHECK(mv.dy == 0);
            }
    // all-zero residual blocks cost one ue(0) bit each; with MVs the whole
    // unit stays tiny
    for (size_t s : coded.sizes) CHECK(s < 64);
}

TEST_CASE("gop_length=1 yields only the I unit") {
    const Frame f = random_frame(32, 32, 2);
    const CodedGop coded = encode_gop({f}, f, 20, small_cfg(), true);
    CHECK(coded.i_frame_unit.has_value());
    CHECK(coded.pb_units.empty());
    const auto frames = decode_gop(coded, std::nullopt, small_cfg());
    CHECK(frames.size() == 1);
    CHECK(frames_equal_u8(frames[0], f));
}

TEST_CASE("closed loop: decoder reproduces encoder reconstructions bit-exactly") {
    for (uint64_t seed : {1ULL, 2ULL}) {
        for (int qp : {0, 12, 30}) {
            for (bool b_frames : {false, true}) {
                VideoSequence seq = synth_sequence(SynthKind::Translate, 48, 48, 5, seed);
                CodecConfig cfg = small_cfg();
                cfg.b_frames_enabled = b_frames;
                const EncodedGop enc =
                    encode_gop_with_recon(seq.frames, seq.frames[0], qp, cfg);
                const auto dec = decode_gop(enc.coded, seq.frames[0], cfg);
                REQUIRE(dec.size() == enc.reconstructions.size());
                for (size_t t = 0; t < dec.size(); ++t)
                    CHECK(frames_equal_u8(dec[t], enc.reconstructions[t]));
            }
        }
    }
}

TEST_CASE("qp=0 decoding is lossless against the sources") {
    for (SynthKind kind : {SynthKind::Noise, SynthKind::CheckerPan, SynthKind::Translate}) {
        VideoSequence seq = synth_sequence(kind, 64, 64, 4, 9);
        for (bool b_frames : {false, true}) {
            CodecConfig cfg = small_cfg();
            cfg.b_frames_enabled = b_frames;
            const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 0, cfg);
            const auto dec = decode_gop(coded, seq.frames[0], cfg);
            for (size_t t = 0; t < dec.size(); ++t)
                CHECK(frames_equal_u8(dec[t], seq.frames[t]));
        }
    }
}

TEST_CASE("decoding twice is deterministic") {
    VideoSequence seq = synth_sequence(SynthKind::RotateGradient, 32, 48, 4, 13);
    const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 25, small_cfg());
    const auto a = decode_gop(coded, seq.frames[0], small_cfg());
    const auto b = decode_gop(coded, seq.frames[0], small_cfg());
    for (size_t t = 0; t < a.size(); ++t) CHECK(a[t].data == b[t].data);
}

TEST_CASE("non-multiple dimensions are padded and cropped back") {
    VideoSequence seq = synth_sequence(SynthKind::Translate, 20, 36, 3, 15);
    const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 0, small_cfg());
    const auto dec = decode_gop(coded, seq.frames[0], small_cfg());
    for (size_t t = 0; t < dec.size(); ++t) {
        CHECK(dec[t].width == 20);
        CHECK(dec[t].height == 36);
        CHECK(frames_equal_u8(dec[t], seq.frames[t]));
    }
}

TEST_CASE("injected reference and retained I unit decode identically") {
    VideoSequence seq = synth_sequence(SynthKind::CheckerPan, 32, 32, 4, 99);
    const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 18, small_cfg(), true);
    const auto via_unit = decode_gop(coded, std::nullopt, small_cfg());
    CodedGop stripped = coded;
    stripped.i_frame_unit.reset();
    const auto via_injection = decode_gop(stripped, seq.frames[0], small_cfg());
    for (size_t t = 0; t < via_unit.size(); ++t)
        CHECK(via_unit[t].data == via_injection[t].data);
}

TEST_CASE("decode rejects zero or two I-frame sources") {
    VideoSequence seq = synth_sequence(SynthKind::Noise, 32, 32, 2, 1);
    const CodedGop with_unit = encode_gop(seq.frames, seq.frames[0], 10, small_cfg(), true);
    CHECK_THROWS_AS(decode_gop(with_unit, seq.frames[0], small_cfg()), FormatError);
    CodedGop without = with_unit;
    without.i_frame_unit.reset();
    CHECK_THROWS_AS(decode_gop(without, std::nullopt, small_cfg()), FormatError);
}

TEST_CASE("truncated pb unit fails with an offset") {
    VideoSequence seq = synth_sequence(SynthKind::Translate, 32, 32, 3, 5);
    CodedGop coded = encode_gop(seq.frames, seq.frames[0], 20, small_cfg());
    coded.pb_units[1].resize(coded.pb_units[1].size() / 2);
    CHECK_THROWS_AS(decode_gop(coded, seq.frames[0], small_cfg()), TruncationError);
}

TEST_CASE("legacy track bytes are non-increasing in qp on fixtures") {
    for (SynthKind kind : {SynthKind::Translate, SynthKind::CheckerPan, SynthKind::RotateGradient}) {
        VideoSequence seq = synth_sequence(kind, 64, 64, 6, 21);
        CodecConfig cfg = small_cfg();
        size_t prev = SIZE_MAX;
        for (int qp = 0; qp <= cfg.qp_max; qp += 3) {
            const CodedGop coded = encode_gop(seq.frames, seq.frames[0], qp, cfg);
            CHECK(coded.pb_bytes() <= prev);
            prev = coded.pb_bytes();
        }
    }
}

TEST_CASE("B-frame schedule shape") {
    auto sched = gop_schedule(8, true);
    REQUIRE(sched.size() == 7);
    CHECK(sched[0].pres == 2);
    CHECK(sched[0].type == FrameType::P);
    CHECK(sched[1].pres == 1);
    CHECK(sched[1].type == FrameType::B);
    CHECK(sched[1].ref0 == 0);
    CHECK(sched[1].ref1 == 2);
    CHECK(sched[6].pres == 7);
    CHECK(sched[6].type == FrameType::P); // trailing odd frame has no future anchor
    CHECK(sched[6].ref0 == 6);

    auto no_b = gop_schedule(4, false);
    REQUIRE(no_b.size() == 3);
    for (int t = 1; t <= 3; ++t) {
        CHECK(no_b[t - 1].pres == t);
        CHECK(no_b[t - 1].type == FrameType::P);
        CHECK(no_b[t - 1].ref0 == t - 1);
    }
}

TEST_CASE("split_units inverts concat_units") {
    VideoSequence seq = synth_sequence(SynthKind::Translate, 32, 32, 5, 3);
    const CodedGop coded = encode_gop(seq.frames, seq.frames[0], 14, small_cfg(), true);
    const auto track = concat_units(coded, true);
    const auto units = split_units(track);
    REQUIRE(units.size() == coded.pb_units.size() + 1);
    CHECK(units[0] == *coded.i_frame_unit);
    for (size_t u = 0; u < coded.pb_units.size(); ++u) CHECK(units[u + 1] == coded.pb_units[u]);
}
