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

#include "hybp/errors.hpp"

#include <bit>

namespace hybp {

int BitReader::get_bit() {
    if (pos_ >= size_bits_)
        throw TruncationError("bitstream: read past end", pos_ / 8);
    const int bit = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
    ++pos_;
    return bit;
}

uint64_t BitReader::get_bits(int count) {
    uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | static_cast<uint64_t>(get_bit());
    return v;
}

void ue_encode(BitWriter& bw, uint64_t value) {
    const uint64_t v = value + 1;
    const int nbits = 64 - std::countl_zero(v);
    for (int i = 0; i < nbits - 1; ++i) bw.put_bit(0);
    bw.put_bits(v, nbits);
}

uint64_t ue_decode(BitReader& br) {
    int zeros = 0;
    while (br.get_bit() == 0) {
        if (++zeros > 63) throw FormatError("exp-golomb: prefix too long");
    }
    uint64_t v = 1;
    for (int i = 0; i < zeros; ++i) v = (v << 1) | static_cast<uint64_t>(br.get_bit());
    return v - 1;
}

void se_encode(BitWriter& bw, int64_t value) {
    const uint64_t mag = value < 0 ? static_cast<uint64_t>(-value) : static_cast<uint64_t>(value);
    ue_encode(bw, 2 * mag - (value > 0 ? 1 : 0));
}

int64_t se_decode(BitReader& br) {
    const uint64_t m = ue_decode(br);
    if (m == 0) return 0;
    if (m % 2 == 1) return static_cast<int64_t>((m + 1) / 2);
    return -static_cast<int64_t>(m / 2);
}

} // namespace hybp
