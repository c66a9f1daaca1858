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

#include <stdexcept>
#include <string>

namespace hybp {

// Process exit codes, one per error family. Tests assert on these.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIo = 3,
    kExitFormat = 4,
    kExitChecksum = 5,
    kExitDivergence = 6,
    kExitBudget = 7,
};

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed headers, bad magic values, structural mismatches.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Payload ends before the declared length; carries the offending offset.
class TruncationError : public FormatError {
public:
    TruncationError(const std::string& msg, size_t offset)
        : FormatError(msg + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

class ChecksumError : public std::runtime_error {
public:
    ChecksumError(const std::string& msg, size_t gop_index)
        : std::runtime_error(msg + " (gop " + std::to_string(gop_index) + ")"),
          gop_index_(gop_index) {}
    size_t gop_index() const { return gop_index_; }

private:
    size_t gop_index_;
};

class OptimizationError : public std::runtime_error {
public:
    explicit OptimizationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hybp
