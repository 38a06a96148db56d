#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "iis/frame.hpp"

namespace iis {

// IISV container (little-endian):
//   magic "IISV" | version u32 = 1 | width u32 | height u32
//   | frame_count u32 | fps_milli u32 | frames (width*height*3 bytes each,
//   RGB8 row-major, temporal order).
// An encoded clip is exactly 24 + frame_count*width*height*3 bytes.
Clip decode_iisv(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_iisv(const Clip& clip);

// Binary PPM (P6), maxval 255 only.
Frame read_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ppm(const Frame& frame);

// Loads every *.ppm in `dir`, ordered by lexicographic byte-order of
// filenames.
Clip load_frame_dir(const std::filesystem::path& dir,
                    std::uint32_t fps_milli = 30000);

// File-level conveniences used by the CLI and the evaluation harness.
Clip load_clip_file(const std::filesystem::path& path);
void save_clip_file(const std::filesystem::path& path, const Clip& clip);
void save_frame_dir(const std::filesystem::path& dir, const Clip& clip);
Frame load_ppm_file(const std::filesystem::path& path);
void save_ppm_file(const std::filesystem::path& path, const Frame& frame);

// BT.601 luma: (0.299 R + 0.587 G + 0.114 B) / 255, clamped to [0,1].
GrayFrame to_grayscale(const Frame& frame);

// Bilinear resampling with half-pixel-center coordinate mapping.
Frame resize_bilinear(const Frame& frame, int new_w, int new_h);

}  // namespace iis
