#include "iis/media_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "iis/error.hpp"

namespace iis {

namespace {

constexpr std::size_t kHeaderSize = 24;
constexpr std::uint32_t kVersion = 1;

std::uint32_t read_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

std::uint8_t clamp_channel(double v) {
  long r = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

}  // namespace

Clip decode_iisv(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "IISV", 4) != 0) {
    throw Error(Errc::bad_magic, "first 4 bytes are not \"IISV\"");
  }
  if (bytes.size() < kHeaderSize) {
    throw Error(Errc::truncated, "incomplete header");
  }
  // byte 4..8 is the format version; tolerated on read, always 1 on write
  std::uint32_t width = read_u32le(bytes.data() + 8);
  std::uint32_t height = read_u32le(bytes.data() + 12);
  std::uint32_t frame_count = read_u32le(bytes.data() + 16);
  std::uint32_t fps_milli = read_u32le(bytes.data() + 20);
  if (width == 0 || height == 0 || frame_count == 0 || fps_milli == 0) {
    throw Error(Errc::zero_dimension,
                "width, height, frame_count, and fps_milli must be nonzero");
  }
  std::size_t frame_bytes =
      static_cast<std::size_t>(width) * height * 3;
  std::size_t need = kHeaderSize + frame_bytes * frame_count;
  if (bytes.size() < need) {
    std::ostringstream msg;
    msg << "header promises " << need << " bytes, got " << bytes.size();
    throw Error(Errc::truncated, msg.str());
  }

  Clip clip;
  clip.fps_milli = fps_milli;
  clip.frames.reserve(frame_count);
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  for (std::uint32_t i = 0; i < frame_count; ++i, p += frame_bytes) {
    Frame f;
    f.width = static_cast<int>(width);
    f.height = static_cast<int>(height);
    f.index = static_cast<int>(i);
    f.pixels.assign(p, p + frame_bytes);
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

std::vector<std::uint8_t> encode_iisv(const Clip& clip) {
  if (clip.frames.empty()) {
    throw Error(Errc::zero_dimension, "cannot encode an empty clip");
  }
  std::uint32_t width = static_cast<std::uint32_t>(clip.width());
  std::uint32_t height = static_cast<std::uint32_t>(clip.height());
  std::size_t frame_bytes = static_cast<std::size_t>(width) * height * 3;

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + frame_bytes * clip.frames.size());
  out.insert(out.end(), {'I', 'I', 'S', 'V'});
  append_u32le(out, kVersion);
  append_u32le(out, width);
  append_u32le(out, height);
  append_u32le(out, static_cast<std::uint32_t>(clip.frames.size()));
  append_u32le(out, clip.fps_milli);
  for (const Frame& f : clip.frames) {
    if (f.width != static_cast<int>(width) || f.height != static_cast<int>(height)) {
      throw Error(Errc::mixed_dimensions, "frames differ in size");
    }
    out.insert(out.end(), f.pixels.begin(), f.pixels.end());
  }
  return out;
}

namespace {

// PPM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line.
struct PpmScanner {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  bool at_end() const { return pos >= bytes.size(); }

  void skip_space_and_comments() {
    while (!at_end()) {
      std::uint8_t c = bytes[pos];
      if (c == '#') {
        while (!at_end() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(c)) {
        ++pos;
      } else {
        return;
      }
    }
  }

  long next_number() {
    skip_space_and_comments();
    if (at_end() || !std::isdigit(bytes[pos])) {
      throw Error(Errc::truncated, "missing numeric field in PPM header");
    }
    long v = 0;
    while (!at_end() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000'000L) {
        throw Error(Errc::unsupported_format, "PPM header field out of range");
      }
      ++pos;
    }
    return v;
  }
};

}  // namespace

Frame read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(Errc::unsupported_format, "not a PNM file");
  }
  if (bytes[1] != '6') {
    throw Error(Errc::unsupported_format,
                std::string("only binary P6 is supported, got P") +
                    static_cast<char>(bytes[1]));
  }
  PpmScanner scan{bytes, 2};
  long width = scan.next_number();
  long height = scan.next_number();
  long maxval = scan.next_number();
  if (width < 1 || height < 1) {
    throw Error(Errc::zero_dimension, "PPM dimensions must be positive");
  }
  if (maxval != 255) {
    throw Error(Errc::unsupported_format, "only maxval 255 is supported");
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (scan.at_end() || !std::isspace(bytes[scan.pos])) {
    throw Error(Errc::truncated, "missing raster separator");
  }
  std::size_t data_start = scan.pos + 1;
  std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - data_start < need) {
    throw Error(Errc::truncated, "raster shorter than header promises");
  }

  Frame f;
  f.width = static_cast<int>(width);
  f.height = static_cast<int>(height);
  f.pixels.assign(bytes.begin() + data_start, bytes.begin() + data_start + need);
  return f;
}

std::vector<std::uint8_t> write_ppm(const Frame& frame) {
  if (!frame.valid()) {
    throw Error(Errc::zero_dimension, "frame fails its invariants");
  }
  std::string header = "P6\n" + std::to_string(frame.width) + " " +
                       std::to_string(frame.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
  return out;
}

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::io_failure, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(Errc::io_failure, "short write to " + path.string());
  }
}

}  // namespace

Clip load_frame_dir(const std::filesystem::path& dir, std::uint32_t fps_milli) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::io_failure, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw Error(Errc::empty_directory, "no .ppm files in " + dir.string());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });

  Clip clip;
  clip.fps_milli = fps_milli;
  clip.source_id = dir.string();
  for (const auto& file : files) {
    Frame f = read_ppm(read_file_bytes(file));
    if (!clip.frames.empty() &&
        (f.width != clip.width() || f.height != clip.height())) {
      throw Error(Errc::mixed_dimensions,
                  file.string() + " differs in size from earlier frames");
    }
    f.index = static_cast<int>(clip.frames.size());
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

Clip load_clip_file(const std::filesystem::path& path) {
  Clip clip = decode_iisv(read_file_bytes(path));
  clip.source_id = path.string();
  return clip;
}

void save_clip_file(const std::filesystem::path& path, const Clip& clip) {
  write_file_bytes(path, encode_iisv(clip));
}

void save_frame_dir(const std::filesystem::path& dir, const Clip& clip) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu.ppm", i);
    write_file_bytes(dir / name, write_ppm(clip.frames[i]));
  }
}

Frame load_ppm_file(const std::filesystem::path& path) {
  return read_ppm(read_file_bytes(path));
}

void save_ppm_file(const std::filesystem::path& path, const Frame& frame) {
  write_file_bytes(path, write_ppm(frame));
}

GrayFrame to_grayscale(const Frame& frame) {
  GrayFrame g;
  g.width = frame.width;
  g.height = frame.height;
  g.values.resize(static_cast<std::size_t>(frame.width) * frame.height);
  const std::uint8_t* p = frame.pixels.data();
  for (double& v : g.values) {
    double luma = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    v = std::clamp(luma, 0.0, 1.0);
    p += 3;
  }
  return g;
}

Frame resize_bilinear(const Frame& frame, int new_w, int new_h) {
  if (new_w < 1 || new_h < 1) {
    throw Error(Errc::zero_dimension, "target dimensions must be positive");
  }
  if (new_w == frame.width && new_h == frame.height) {
    return frame;
  }
  Frame out;
  out.width = new_w;
  out.height = new_h;
  out.index = frame.index;
  out.pixels.resize(static_cast<std::size_t>(new_w) * new_h * 3);

  double sx = static_cast<double>(frame.width) / new_w;
  double sy = static_cast<double>(frame.height) / new_h;
  for (int y = 0; y < new_h; ++y) {
    double src_y = (y + 0.5) * sy - 0.5;
    src_y = std::clamp(src_y, 0.0, static_cast<double>(frame.height - 1));
    int y0 = static_cast<int>(src_y);
    int y1 = std::min(y0 + 1, frame.height - 1);
    double fy = src_y - y0;
    for (int x = 0; x < new_w; ++x) {
      double src_x = (x + 0.5) * sx - 0.5;
      src_x = std::clamp(src_x, 0.0, static_cast<double>(frame.width - 1));
      int x0 = static_cast<int>(src_x);
      int x1 = std::min(x0 + 1, frame.width - 1);
      double fx = src_x - x0;

      const std::uint8_t* p00 = frame.at(x0, y0);
      const std::uint8_t* p10 = frame.at(x1, y0);
      const std::uint8_t* p01 = frame.at(x0, y1);
      const std::uint8_t* p11 = frame.at(x1, y1);
      std::uint8_t* dst = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        double top = p00[c] + (p10[c] - p00[c]) * fx;
        double bottom = p01[c] + (p11[c] - p01[c]) * fx;
        dst[c] = clamp_channel(top + (bottom - top) * fy);
      }
    }
  }
  return out;
}

}  // namespace iis
