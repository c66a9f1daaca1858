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

#include <cstdint>
#include <string>
#include <vector>

namespace hybp {

/**
 * Single luma plane. The working form is real-valued in [0, 1]; the 8-bit
 * integer form is derived on demand and satisfies int == round(real * 255).
 */
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<double> data; // row-major, size width * height

    Frame() = default;
    Frame(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    size_t size() const { return data.size(); }

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    // Edge-clamped access, the sampling policy shared by warp and motion search.
    double at_clamped(int x, int y) const {
        if (x < 0) x = 0;
        if (x >= width) x = width - 1;
        if (y < 0) y = 0;
        if (y >= height) y = height - 1;
        return at(x, y);
    }

    std::vector<uint8_t> to_u8() const;
    static Frame from_u8(int w, int h, const std::vector<uint8_t>& bytes);

    // Snaps every sample to the 8-bit grid (round, divide back by 255).
    Frame quantized() const;

    bool same_dims(const Frame& o) const { return width == o.width && height == o.height; }
};

struct VideoSequence {
    std::vector<Frame> frames;
    uint32_t fps = 30;
    std::string name;

    size_t frame_count() const { return frames.size(); }
    bool empty() const { return frames.empty(); }
};

double mse(const Frame& a, const Frame& b);

// 10*log10(1/mse) for samples in [0,1]. Returns +infinity when mse == 0;
// the CSV emitter turns that into the string "inf".
double psnr(const Frame& a, const Frame& b);
double psnr_from_mse(double m);

struct QualityReport {
    std::vector<double> per_frame_mse;
    std::vector<double> per_frame_psnr;  // +inf where mse == 0
    std::vector<size_t> bytes_per_frame;
    double mean_psnr = 0.0; // PSNR of the mean MSE over frames

    void finalize(); // fills per_frame_psnr and mean_psnr from per_frame_mse
};

QualityReport compare_sequences(const VideoSequence& decoded, const VideoSequence& source);

// Columns: frame_index,bytes,mse,psnr. Infinite PSNR is written as "inf".
std::string quality_report_csv(const QualityReport& report);

} // namespace hybp
