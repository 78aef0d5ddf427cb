#include "qnttnn/frames.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <regex>

#include "qnttnn/errors.hpp"

namespace qnttnn {

namespace fs = std::filesystem;

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::vector<std::uint8_t>& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(buf[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < buf.size() && !std::isspace(buf[pos]) && buf[pos] != '#') {
    tok.push_back(static_cast<char>(buf[pos++]));
  }
  return tok;
}

Index parse_positive(const std::string& tok, const fs::path& path, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); })) {
    throw DataError(path.string() + ": malformed " + what);
  }
  return static_cast<Index>(std::stoll(tok));
}

std::uint8_t to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::round(clamped * 255.0));
}

}  // namespace

std::string frame_filename(Index one_based_index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%04lld.ppm", static_cast<long long>(one_based_index));
  return name;
}

QTensor3 frames_to_tensor(const FrameSequence& frames) {
  QTensor3 t(frames.height, frames.width, frames.frame_count());
  for (Index k = 0; k < frames.frame_count(); ++k) {
    const auto& px = frames.rgb[static_cast<std::size_t>(k)];
    for (Index row = 0; row < frames.height; ++row) {
      for (Index col = 0; col < frames.width; ++col) {
        const std::size_t o = static_cast<std::size_t>(3 * (row * frames.width + col));
        t.x(row, col, k) = px[o] / 255.0;
        t.y(row, col, k) = px[o + 1] / 255.0;
        t.z(row, col, k) = px[o + 2] / 255.0;
      }
    }
  }
  return t;
}

FrameSequence tensor_to_frames(const QTensor3& t) {
  FrameSequence frames;
  frames.height = t.n1();
  frames.width = t.n2();
  frames.rgb.resize(static_cast<std::size_t>(t.n3()));
  for (Index k = 0; k < t.n3(); ++k) {
    auto& px = frames.rgb[static_cast<std::size_t>(k)];
    px.resize(static_cast<std::size_t>(3 * t.n1() * t.n2()));
    for (Index row = 0; row < t.n1(); ++row) {
      for (Index col = 0; col < t.n2(); ++col) {
        const std::size_t o = static_cast<std::size_t>(3 * (row * t.n2() + col));
        px[o] = to_byte(t.x(row, col, k));
        px[o + 1] = to_byte(t.y(row, col, k));
        px[o + 2] = to_byte(t.z(row, col, k));
      }
    }
  }
  return frames;
}

std::vector<std::uint8_t> read_ppm(const fs::path& path, Index& height, Index& width) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                      std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (next_token(buf, pos) != "P6") {
    throw DataError(path.string() + ": not a binary PPM (expected P6 magic)");
  }
  width = parse_positive(next_token(buf, pos), path, "width");
  height = parse_positive(next_token(buf, pos), path, "height");
  const Index maxval = parse_positive(next_token(buf, pos), path, "maxval");
  if (maxval != 255) {
    throw DataError(path.string() + ": maxval " + std::to_string(maxval) + " is not 255");
  }
  if (pos >= buf.size() || !std::isspace(buf[pos])) {
    throw DataError(path.string() + ": truncated header");
  }
  ++pos;  // single whitespace byte before the raster
  const std::size_t bytes = static_cast<std::size_t>(3 * width * height);
  if (buf.size() - pos < bytes) {
    throw DataError(path.string() + ": truncated pixel data");
  }
  return {buf.begin() + static_cast<std::ptrdiff_t>(pos),
          buf.begin() + static_cast<std::ptrdiff_t>(pos + bytes)};
}

void write_ppm(const fs::path& path, const std::uint8_t* rgb, Index height, Index width) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb), static_cast<std::streamsize>(3 * width * height));
  if (!out) throw DataError("failed writing " + path.string());
}

FrameSequence load_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError(dir.string() + " is not a directory");
  }
  static const std::regex pattern(R"(frame_(\d{4,})\.ppm)");
  std::map<Index, fs::path> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, m, pattern)) {
      found.emplace(static_cast<Index>(std::stoll(m[1].str())), entry.path());
    }
  }
  if (found.empty()) {
    throw DataError("no frame_%04d.ppm files in " + dir.string());
  }
  FrameSequence frames;
  Index expected = 1;
  for (const auto& [index, path] : found) {
    if (index != expected) {
      throw DataError("frame numbering gap: expected " + frame_filename(expected) + " in " +
                      dir.string());
    }
    ++expected;
    Index h = 0;
    Index w = 0;
    std::vector<std::uint8_t> px = read_ppm(path, h, w);
    if (frames.rgb.empty()) {
      frames.height = h;
      frames.width = w;
    } else if (h != frames.height || w != frames.width) {
      throw DataError(path.string() + ": frame size differs from the first frame");
    }
    frames.rgb.push_back(std::move(px));
  }
  return frames;
}

void save_frames(const FrameSequence& frames, const fs::path& dir) {
  fs::create_directories(dir);
  for (Index k = 0; k < frames.frame_count(); ++k) {
    write_ppm(dir / frame_filename(k + 1), frames.rgb[static_cast<std::size_t>(k)].data(),
              frames.height, frames.width);
  }
}

}  // namespace qnttnn
