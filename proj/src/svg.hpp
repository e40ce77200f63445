#pragma once

#include <string>
#include <vector>

namespace interpnet::svg {

/// Fixed two-decimal coordinate text, deterministic across locales.
std::string coord(double v);

/// A single chart with data coordinates mapped onto a pixel canvas.
class Plot {
 public:
  Plot(double xmin, double xmax, double ymin, double ymax, std::string title);

  void circle(double x, double y, double radius, const std::string& fill, const std::string& stroke);
  void cross(double x, double y, double size, const std::string& color);
  void line(double x1, double y1, double x2, double y2, const std::string& color, bool dashed = false);
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color);
  /// Box from data corners.
  void box(double x1, double y1, double x2, double y2, const std::string& fill);
  void label_x(double x, const std::string& text);
  void axis_titles(const std::string& x, const std::string& y);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double xmin_, xmax_, ymin_, ymax_;
  std::string title_;
  std::vector<std::string> body_;
};

}  // namespace interpnet::svg
