#include "densefeat/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace densefeat {

ColorImage load_color(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw std::runtime_error("cannot read image " + path.string());
  if (m.depth() != CV_8U) {
    cv::Mat tmp;
    m.convertTo(tmp, CV_8U, m.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
    m = tmp;
  }
  ColorImage img;
  img.width = m.cols;
  img.height = m.rows;
  img.channels = m.channels();
  img.values.resize(static_cast<std::size_t>(m.cols) * m.rows * img.channels);
  std::size_t i = 0;
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      // OpenCV stores BGR(A); reorder to RGB(A).
      const std::uint8_t* px = row + static_cast<std::size_t>(x) * img.channels;
      if (img.channels >= 3) {
        img.values[i++] = px[2] / 255.0;
        img.values[i++] = px[1] / 255.0;
        img.values[i++] = px[0] / 255.0;
        for (int c = 3; c < img.channels; ++c) img.values[i++] = px[c] / 255.0;
      } else {
        for (int c = 0; c < img.channels; ++c) img.values[i++] = px[c] / 255.0;
      }
    }
  }
  return img;
}

GrayImage load_gray(const std::filesystem::path& path) { return to_grayscale(load_color(path)); }

void save_gray(const std::filesystem::path& path, const GrayImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      m.at<std::uint8_t>(y, x) =
          static_cast<std::uint8_t>(std::lround(std::clamp(img(x, y), 0.0, 1.0) * 255.0));
  if (!cv::imwrite(path.string(), m)) throw std::runtime_error("cannot write " + path.string());
}

RgbImage to_rgb(const GrayImage& img) {
  RgbImage out{img.width(), img.height(), {}};
  out.rgb.reserve(img.size() * 3);
  for (double v : img.values()) {
    const auto b = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    out.rgb.insert(out.rgb.end(), {b, b, b});
  }
  return out;
}

void save_rgb(const std::filesystem::path& path, const RgbImage& img) {
  cv::Mat m(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* p = &img.rgb[(static_cast<std::size_t>(y) * img.width + x) * 3];
      m.at<cv::Vec3b>(y, x) = cv::Vec3b(p[2], p[1], p[0]);
    }
  }
  if (!cv::imwrite(path.string(), m)) throw std::runtime_error("cannot write " + path.string());
}

void save_labels_pgm(const std::filesystem::path& path, const std::vector<int>& labels,
                     int width, int height) {
  cv::Mat m(height, width, CV_16UC1);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      m.at<std::uint16_t>(y, x) = static_cast<std::uint16_t>(
          std::clamp(labels[static_cast<std::size_t>(y) * width + x], 0, 65535));
  if (!cv::imwrite(path.string(), m)) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace densefeat
