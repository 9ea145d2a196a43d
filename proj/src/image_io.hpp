/* Copyright 2026 the fpvec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <vector>

#include "image.hpp"

namespace fpv {

// 8-bit single-channel (grayscale) PNG. The encoder stores scanlines
// uncompressed (zlib stored blocks) so output bytes depend on nothing but
// the pixels. The decoder handles any standard zlib stream and all five
// scanline filters, 8-bit grayscale, non-interlaced.
std::vector<uint8_t> encode_png_gray(const ClassRaster& img);
ClassRaster decode_png_gray(const std::vector<uint8_t>& bytes);

void write_png_gray(const std::string& path, const ClassRaster& img);
ClassRaster read_png_gray(const std::string& path);

// FPT1 raw tensor container: magic "FPT1", three little-endian u32
// (channels, height, width), then channels*height*width little-endian f32,
// row-major per channel.
std::vector<uint8_t> encode_fpt1(const HeatmapStack& stack);
HeatmapStack decode_fpt1(const std::vector<uint8_t>& bytes);

void write_fpt1(const std::string& path, const HeatmapStack& stack);
HeatmapStack read_fpt1(const std::string& path);

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes);

}  // namespace fpv
