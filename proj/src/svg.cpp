#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace rauzy {

const char* letter_colour(std::size_t letter) {
  static const char* palette[] = {"#1f4fd8", "#1a9641", "#d7191c", "#7b3294", "#e08214", "#4d4d4d"};
  return palette[std::min<std::size_t>(letter, std::size(palette) - 1)];
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const PointCloud& cloud, const SvgOptions& opt) {
  const std::size_t dim = cloud.dim();
  if (dim > 2) throw ValidationError("render supports 1-D and 2-D charts");
  const std::size_t total = cloud.total();
  if (total == 0) throw ValidationError("nothing to render");
  const std::size_t stride = std::max<std::size_t>(1, (total + opt.max_points - 1) / opt.max_points);

  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  for (std::size_t a = 0; a < cloud.letters(); ++a) {
    const auto pts = cloud.bucket(static_cast<Letter>(a));
    for (std::size_t i = 0; i < pts.size(); i += dim)
      for (std::size_t c = 0; c < dim; ++c) {
        lo[c] = std::min(lo[c], pts[i + c]);
        hi[c] = std::max(hi[c], pts[i + c]);
      }
  }
  const double margin = 20.0;
  const double w = opt.width - 2 * margin, h = opt.height - 2 * margin;
  double scale = 0.0;
  if (dim == 1)
    scale = w / std::max(hi[0] - lo[0], 1e-12);
  else
    scale = std::min(w / std::max(hi[0] - lo[0], 1e-12), h / std::max(hi[1] - lo[1], 1e-12));

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double band = h / static_cast<double>(std::max<std::size_t>(1, cloud.letters()));
  std::size_t seen = 0;
  for (std::size_t a = 0; a < cloud.letters(); ++a) {
    const auto pts = cloud.bucket(static_cast<Letter>(a));
    out += "<g class=\"letter-" + std::to_string(a + 1) + "\" fill=\"" + letter_colour(a) + "\">\n";
    for (std::size_t i = 0; i < pts.size(); i += dim, ++seen) {
      if (seen % stride != 0) continue;
      const double x = margin + (pts[i] - lo[0]) * scale;
      double y = 0.0;
      if (dim == 1) {
        // Deterministic jitter inside the letter's band.
        const double frac = static_cast<double>((seen * 2654435761u) % 1000) / 1000.0;
        y = margin + band * (static_cast<double>(a) + 0.15 + 0.7 * frac);
      } else {
        y = margin + h - (pts[i + 1] - lo[1]) * scale;
      }
      out += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"" + fmt(opt.radius) + "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace rauzy
