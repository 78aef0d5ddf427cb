#ifndef QNTTNN_FRAMES_HPP
#define QNTTNN_FRAMES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// RGB video frames with 8-bit channels. Pixel (row, col) of frame k starts at
/// rgb[k][3 * (row * width + col)].
struct FrameSequence {
  Index height = 0;  // n1
  Index width = 0;   // n2
  std::vector<std::vector<std::uint8_t>> rgb;

  Index frame_count() const { return static_cast<Index>(rgb.size()); }
};

/// Pure quaternion encoding 0 + R i + G j + B k with channels scaled to [0, 1].
QTensor3 frames_to_tensor(const FrameSequence& frames);

/// Inverse encoding of the x/y/z planes: clamp to [0, 1], scale by 255 and
/// round half away from zero. The scalar plane is dropped.
FrameSequence tensor_to_frames(const QTensor3& t);

/// Binary PPM (P6, maxval 255).
std::vector<std::uint8_t> read_ppm(const std::filesystem::path& path, Index& height, Index& width);
void write_ppm(const std::filesystem::path& path, const std::uint8_t* rgb, Index height,
               Index width);

/// Reads frame_0001.ppm, frame_0002.ppm, ... from dir. Throws DataError on a
/// missing directory, gaps in the numbering, ragged sizes or unsupported headers.
FrameSequence load_frames(const std::filesystem::path& dir);

/// Writes frame_%04d.ppm files (1-indexed) into dir, creating it if needed.
void save_frames(const FrameSequence& frames, const std::filesystem::path& dir);

std::string frame_filename(Index one_based_index);

}  // namespace qnttnn

#endif  // QNTTNN_FRAMES_HPP
