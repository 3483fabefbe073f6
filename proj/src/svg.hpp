#ifndef RAUZY_SVG_HPP
#define RAUZY_SVG_HPP

#include <string>

#include "point_cloud.hpp"

namespace rauzy {

struct SvgOptions {
  int width = 800;
  int height = 800;
  std::size_t max_points = 60000;
  double radius = 0.8;
};

// Scatter plot, one colour per letter (1 blue, 2 green, 3 red). A 1-D cloud
// gets one horizontal band per letter.
std::string render_svg(const PointCloud& cloud, const SvgOptions& opt = {});

const char* letter_colour(std::size_t letter);

}  // namespace rauzy

#endif
