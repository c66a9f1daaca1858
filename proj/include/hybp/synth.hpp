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

#include "hybp/frame.hpp"

#include <cstdint>
#include <string>

namespace hybp {

enum class SynthKind {
    Translate,      // smooth seeded texture panning right by (1,0) px/frame, wraparound
    RotateGradient, // linear gradient whose direction rotates per frame
    Noise,          // i.i.d. uniform samples
    CheckerPan,     // hard-edged checkerboard panning by (1,1) px/frame
};

SynthKind synth_kind_from_string(const std::string& s);

// Deterministic for fixed (kind, w, h, n_frames, seed). Every sample lands on
// the 8-bit grid, exactly as if the sequence had been read from a file.
VideoSequence synth_sequence(SynthKind kind, int w, int h, int n_frames, uint64_t seed);

} // namespace hybp
