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
#include <vector>

namespace hybp {

// MSB-first bit writer. Byte alignment pads with zero bits.
class BitWriter {
public:
    void put_bit(int bit) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (nbits_ % 8));
        ++nbits_;
    }

    void put_bits(uint64_t value, int count) {
        for (int i = count - 1; i >= 0; --i) put_bit(static_cast<int>((value >> i) & 1u));
    }

    size_t bit_count() const { return nbits_; }

    std::vector<uint8_t> take() {
        nbits_ = 0;
        return std::move(bytes_);
    }

private:
    std::vector<uint8_t> bytes_;
    size_t nbits_ = 0;
};

// Reads bits back; throws TruncationError (with the bit offset's byte) when
// the stream runs out.
class BitReader {
public:
    BitReader(const uint8_t* data, size_t size) : data_(data), size_bits_(size * 8) {}
    explicit BitReader(const std::vector<uint8_t>& bytes) : BitReader(bytes.data(), bytes.size()) {}

    int get_bit();
    uint64_t get_bits(int count);

    size_t bits_consumed() const { return pos_; }
    size_t byte_offset() const { return pos_ / 8; }

private:
    const uint8_t* data_;
    size_t size_bits_;
    size_t pos_ = 0;
};

// Unsigned Exp-Golomb: value 0 encodes as the single bit "1".
void ue_encode(BitWriter& bw, uint64_t value);
uint64_t ue_decode(BitReader& br);

// Signed mapping v -> 2|v| - [v > 0], so 0 -> "1", 1 -> "010", -1 -> "011".
void se_encode(BitWriter& bw, int64_t value);
int64_t se_decode(BitReader& br);

} // namespace hybp
