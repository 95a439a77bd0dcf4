#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cbdrs/cloud.hpp"
#include "cbdrs/geom.hpp"
#include "cbdrs/switch_optim.hpp"

namespace cbdrs {

/// Shortest form that round-trips: 17 significant digits, '.' separator.
std::string format_real(double v);

/// Fixed four-decimal tag used in output file names.
std::string file_tag(double v);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string polyline_csv(const std::vector<Vec2>& pts);
/// Columns t, xi_x, xi_y, xd_x, xd_y, active in snapshot order.
std::string cloud_csv(const CloudSnapshot& snapshot);
/// Columns angle, x_s, y_s, J.
std::string ellipse_csv(const std::vector<EllipseSample>& samples);

struct Box {
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;

  static Box around(const Circle& c, double margin_fraction);
};

/// y-up SVG figure composed of named layers. The root element lists the
/// layer ids in its data-layers attribute.
class SvgFigure {
 public:
  explicit SvgFigure(Box frame);

  void circle(const std::string& layer, const Circle& c, const std::string& stroke, bool dashed = false);
  void polyline(const std::string& layer, const std::vector<Vec2>& pts, const std::string& stroke,
                bool closed = false, const std::string& fill = "none");
  /// At most max_points markers; denser inputs are strided deterministically.
  void points(const std::string& layer, const std::vector<Vec2>& pts, const std::string& fill,
              std::size_t max_points = 20000);

  std::vector<std::string> layers() const;
  std::string str() const;

 private:
  std::string& layer(const std::string& id);

  Box frame_;
  double marker_;
  std::vector<std::pair<std::string, std::string>> layers_;
};

}  // namespace cbdrs
