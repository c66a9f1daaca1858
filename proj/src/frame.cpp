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

#include "hybp/frame.hpp"

#include "hybp/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hybp {

namespace {

uint8_t to_byte(double v) {
    long r = std::lround(v * 255.0);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<uint8_t>(r);
}

} // namespace

std::vector<uint8_t> Frame::to_u8() const {
    std::vector<uint8_t> out(data.size());
    for (size_t i = 0; i < data.size(); ++i) out[i] = to_byte(data[i]);
    return out;
}

Frame Frame::from_u8(int w, int h, const std::vector<uint8_t>& bytes) {
    Frame f(w, h);
    for (size_t i = 0; i < f.data.size(); ++i) f.data[i] = bytes[i] / 255.0;
    return f;
}

Frame Frame::quantized() const {
    Frame f(width, height);
    for (size_t i = 0; i < data.size(); ++i) f.data[i] = to_byte(data[i]) / 255.0;
    return f;
}

double mse(const Frame& a, const Frame& b) {
    if (!a.same_dims(b)) throw FormatError("mse: frame dimensions differ");
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.data.size());
}

double psnr_from_mse(double m) {
    if (m <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / m);
}

double psnr(const Frame& a, const Frame& b) { return psnr_from_mse(mse(a, b)); }

void QualityReport::finalize() {
    per_frame_psnr.resize(per_frame_mse.size());
    double acc = 0.0;
    for (size_t i = 0; i < per_frame_mse.size(); ++i) {
        per_frame_psnr[i] = psnr_from_mse(per_frame_mse[i]);
        acc += per_frame_mse[i];
    }
    mean_psnr = per_frame_mse.empty()
                    ? 0.0
                    : psnr_from_mse(acc / static_cast<double>(per_frame_mse.size()));
}

QualityReport compare_sequences(const VideoSequence& decoded, const VideoSequence& source) {
    if (decoded.frame_count() != source.frame_count())
        throw FormatError("compare_sequences: frame counts differ");
    QualityReport r;
    r.per_frame_mse.reserve(decoded.frame_count());
    for (size_t i = 0; i < decoded.frame_count(); ++i)
        r.per_frame_mse.push_back(mse(decoded.frames[i], source.frames[i]));
    r.finalize();
    return r;
}

std::string quality_report_csv(const QualityReport& report) {
    std::ostringstream os;
    os << "frame_index,bytes,mse,psnr\n";
    for (size_t i = 0; i < report.per_frame_mse.size(); ++i) {
        os << i << ',';
        os << (i < report.bytes_per_frame.size() ? report.bytes_per_frame[i] : 0) << ',';
        os << report.per_frame_mse[i] << ',';
        if (std::isinf(report.per_frame_psnr[i]))
            os << "inf";
        else
            os << report.per_frame_psnr[i];
        os << '\n';
    }
    return os.str();
}

} // namespace hybp
