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

#include <string>

namespace hybp {

enum class SequenceFormat { Rawv, Y4mLuma };

SequenceFormat sequence_format_from_string(const std::string& s);

// rawv layout: magic "RAWV", then little-endian u32 width, u32 height,
// u32 frame count, u32 fps; payload is frames in order, one byte per sample,
// row-major.
//
// y4m-luma accepts only C420*/C400/mono colorspaces; the luma plane is kept
// and chroma is discarded. Writing emits a Cmono stream.
VideoSequence read_sequence(const std::string& path, SequenceFormat format);

// Returns the number of bytes written. Roundtrip through read_sequence is
// bit-exact on the integer form.
size_t write_sequence(const VideoSequence& seq, const std::string& path, SequenceFormat format);

} // namespace hybp
