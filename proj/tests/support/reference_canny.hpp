#pragma once

// Edge detection by OpenCV, used only as an independent reference.

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "fairaug/attributes.hpp"

namespace testsupport {

inline cv::Mat reference_edges(const fairaug::ImageBuffer& img, const fairaug::CannyParams& p = {}) {
  cv::Mat rgb(img.height(), img.width(), CV_8UC3, const_cast<std::uint8_t*>(img.data().data()));
  cv::Mat gray, smooth, edges;
  cv::cvtColor(rgb, gray, cv::COLOR_RGB2GRAY);
  cv::GaussianBlur(gray, smooth, cv::Size(p.kernel_size, p.kernel_size), p.sigma, p.sigma,
                   cv::BORDER_REPLICATE);
  cv::Canny(smooth, edges, p.low_threshold, p.high_threshold, 3, true);
  return edges;
}

inline double reference_edge_density(const fairaug::ImageBuffer& img,
                                     const fairaug::CannyParams& p = {}) {
  const cv::Mat e = reference_edges(img, p);
  return static_cast<double>(cv::countNonZero(e)) / static_cast<double>(e.total());
}

}  // namespace testsupport
