// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csiup/channel.hpp"

namespace csiup {

// Binary layout, little-endian, no padding:
//   "CSID" | u32 version=1 | u32 n_ant | u32 n_sub | f64 subcarrier_spacing_hz
//   | u32 pilot_spacing | u32 n_pilots | u32 record_count
//   then per record: u64 seed | DL block | UL block
//   block = n_ant * n_sub complex values, row-major, each (f32 re, f32 im).

inline constexpr std::uint32_t dataset_version = 1;

enum class DatasetErrc { bad_magic, version_mismatch, truncated, shape_mismatch, io };

class DatasetError : public std::runtime_error {
public:
    DatasetError(DatasetErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] DatasetErrc code() const { return code_; }

private:
    DatasetErrc code_;
};

struct Dataset {
    SystemConfig cfg;
    std::vector<ChannelPair> records;  // truth is not persisted
};

std::vector<std::uint8_t> encode_dataset(const SystemConfig& cfg, std::span<const ChannelPair> records);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

void write_dataset(const std::filesystem::path& path, const SystemConfig& cfg, std::span<const ChannelPair> records);
Dataset read_dataset(const std::filesystem::path& path);

/// Round matrices to the f32 storage precision (what a write/read cycle yields).
ChannelPair quantize_to_storage(const ChannelPair& pair);

}  // namespace csiup
