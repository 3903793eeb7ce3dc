#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "occbench/errors.hpp"

namespace occbench {

/// Interleaved 8-bit image, 3 (RGB) or 4 (RGBA) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c) {
    pixels.assign(static_cast<std::size_t>(w) * h * c, 0);
  }

  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

inline std::uint8_t clamp_channel(double value) {
  return static_cast<std::uint8_t>(std::clamp<long>(std::llround(value), 0, 255));
}

/// Bilinear resample to the requested size, all channels.
inline Image scale_bilinear(const Image& source, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0) {
    throw DimensionMismatchError("scaled image dimensions must be positive");
  }
  Image out(out_width, out_height, source.channels);
  double sx = static_cast<double>(source.width) / out_width;
  double sy = static_cast<double>(source.height) / out_height;
  for (int y = 0; y < out_height; ++y) {
    double src_y = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(src_y));
    double fy = src_y - y0;
    int y1 = std::min(y0 + 1, source.height - 1);
    y0 = std::clamp(y0, 0, source.height - 1);
    for (int x = 0; x < out_width; ++x) {
      double src_x = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(src_x));
      double fx = src_x - x0;
      int x1 = std::min(x0 + 1, source.width - 1);
      x0 = std::clamp(x0, 0, source.width - 1);
      for (int c = 0; c < source.channels; ++c) {
        double top = source.at(x0, y0, c) * (1.0 - fx) + source.at(x1, y0, c) * fx;
        double bottom = source.at(x0, y1, c) * (1.0 - fx) + source.at(x1, y1, c) * fx;
        out.at(x, y, c) = clamp_channel(top * (1.0 - fy) + bottom * fy);
      }
    }
  }
  return out;
}

/// Separable Gaussian blur of a scalar float plane (used to feather alpha).
inline std::vector<double> gaussian_blur_plane(const std::vector<double>& plane, int width,
                                               int height, double sigma) {
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  std::vector<double> horizontal(plane.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int xi = std::clamp(x + i, 0, width - 1);
        acc += plane[static_cast<std::size_t>(y) * width + xi] * kernel[i + radius];
      }
      horizontal[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  std::vector<double> out(plane.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int yi = std::clamp(y + i, 0, height - 1);
        acc += horizontal[static_cast<std::size_t>(yi) * width + x] * kernel[i + radius];
      }
      out[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return out;
}

}  // namespace occbench
