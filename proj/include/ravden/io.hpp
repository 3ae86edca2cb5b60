// Copyright (c) 2026 The ravden authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include "ravden/flow.hpp"
#include "ravden/frame.hpp"

namespace ravden::io {

/// Thrown for malformed, truncated, or otherwise unreadable files.
class FormatError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Binary PNM, P5 (gray) or P6 (color), maxval 255 or 65535.
/// 16-bit samples are big-endian; values normalize as v / maxval.
Frame load_image(const std::filesystem::path& path);
void save_image(const std::filesystem::path& path, const Frame& frame, int bits = 8);

/// RPF1 raw tensor file: magic "RPF1", little-endian u32 height, width,
/// channels, then height*width*channels little-endian 32-bit floats,
/// plane-major then row-major. Packed raw frames store channels = 4.
PackedRawFrame load_raw(const std::filesystem::path& path);
void save_raw(const std::filesystem::path& path, const PackedRawFrame& packed);

/// Middlebury-style flow file: little-endian float magic 202021.25,
/// i32 width, i32 height, then interleaved (u,v) float pairs, row-major.
flow::FlowField load_flow(const std::filesystem::path& path);
void save_flow(const std::filesystem::path& path, const flow::FlowField& field);

}  // namespace ravden::io
