#include "cbdrs/output.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace cbdrs {

namespace {

std::string svg_num(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string file_tag(double v) { return fmt::format("{:.4f}", v); }

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string polyline_csv(const std::vector<Vec2>& pts) {
  std::string out = "x,y\n";
  for (const Vec2& p : pts) out += format_real(p.x) + "," + format_real(p.y) + "\n";
  return out;
}

std::string cloud_csv(const CloudSnapshot& snapshot) {
  std::string out = "t,xi_x,xi_y,xd_x,xd_y,active\n";
  const std::string t = format_real(snapshot.t);
  for (const PairState& p : snapshot.pairs) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", t, p.xi.x, p.xi.y, p.xd.x, p.xd.y,
                       p.active ? 1 : 0);
  }
  return out;
}

std::string ellipse_csv(const std::vector<EllipseSample>& samples) {
  std::string out = "angle,x_s,y_s,J\n";
  for (const auto& s : samples) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.angle, s.point.x, s.point.y, s.value);
  }
  return out;
}

Box Box::around(const Circle& c, double margin_fraction) {
  const double r = std::max(c.radius, 1e-9) * (1.0 + margin_fraction);
  return {c.center.x - r, c.center.x + r, c.center.y - r, c.center.y + r};
}

SvgFigure::SvgFigure(Box frame) : frame_(frame) {
  marker_ = 0.003 * std::max(frame.xmax - frame.xmin, frame.ymax - frame.ymin);
}

std::string& SvgFigure::layer(const std::string& id) {
  for (auto& [name, body] : layers_) {
    if (name == id) return body;
  }
  layers_.emplace_back(id, std::string{});
  return layers_.back().second;
}

void SvgFigure::circle(const std::string& id, const Circle& c, const std::string& stroke, bool dashed) {
  layer(id) += fmt::format(
      "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
      "vector-effect=\"non-scaling-stroke\"{}/>\n",
      svg_num(c.center.x), svg_num(c.center.y), svg_num(c.radius), stroke,
      dashed ? " stroke-dasharray=\"6 4\"" : "");
}

void SvgFigure::polyline(const std::string& id, const std::vector<Vec2>& pts, const std::string& stroke,
                         bool closed, const std::string& fill) {
  std::string coords;
  for (const Vec2& p : pts) coords += svg_num(p.x) + "," + svg_num(p.y) + " ";
  if (!coords.empty()) coords.pop_back();
  layer(id) += fmt::format(
      "<{} points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\"/>\n",
      closed ? "polygon" : "polyline", coords, fill, stroke);
}

void SvgFigure::points(const std::string& id, const std::vector<Vec2>& pts, const std::string& fill,
                       std::size_t max_points) {
  std::string& body = layer(id);
  const std::size_t stride = pts.size() > max_points ? (pts.size() + max_points - 1) / max_points : 1;
  body += fmt::format("<g fill=\"{}\">\n", fill);
  for (std::size_t i = 0; i < pts.size(); i += stride) {
    body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", svg_num(pts[i].x), svg_num(pts[i].y),
                        svg_num(marker_));
  }
  body += "</g>\n";
}

std::vector<std::string> SvgFigure::layers() const {
  std::vector<std::string> ids;
  for (const auto& [name, body] : layers_) ids.push_back(name);
  return ids;
}

std::string SvgFigure::str() const {
  std::string ids;
  for (const auto& [name, body] : layers_) ids += (ids.empty() ? "" : ",") + name;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"{} {} {} {}\" "
      "data-layers=\"{}\">\n",
      svg_num(frame_.xmin), svg_num(-frame_.ymax), svg_num(frame_.xmax - frame_.xmin),
      svg_num(frame_.ymax - frame_.ymin), ids);
  out += "<g transform=\"scale(1,-1)\">\n";
  for (const auto& [name, body] : layers_) {
    out += fmt::format("<g id=\"{}\">\n{}</g>\n", name, body);
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace cbdrs
