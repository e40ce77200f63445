#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace interpnet::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

Plot::Plot(double xmin, double xmax, double ymin, double ymax, std::string title)
    : xmin_(xmin), xmax_(xmax > xmin ? xmax : xmin + 1.0), ymin_(ymin),
      ymax_(ymax > ymin ? ymax : ymin + 1.0), title_(std::move(title)) {}

double Plot::px(double x) const { return kMargin + (x - xmin_) / (xmax_ - xmin_) * (kWidth - 2 * kMargin); }

double Plot::py(double y) const {
  return kHeight - kMargin - (y - ymin_) / (ymax_ - ymin_) * (kHeight - 2 * kMargin);
}

void Plot::circle(double x, double y, double radius, const std::string& fill, const std::string& stroke) {
  body_.push_back("<circle cx=\"" + coord(px(x)) + "\" cy=\"" + coord(py(y)) + "\" r=\"" + coord(radius) +
                  "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>");
}

void Plot::cross(double x, double y, double size, const std::string& color) {
  const double cx = px(x);
  const double cy = py(y);
  for (int s : {1, -1}) {
    body_.push_back("<line x1=\"" + coord(cx - size) + "\" y1=\"" + coord(cy - s * size) + "\" x2=\"" +
                    coord(cx + size) + "\" y2=\"" + coord(cy + s * size) + "\" stroke=\"" + color + "\"/>");
  }
}

void Plot::line(double x1, double y1, double x2, double y2, const std::string& color, bool dashed) {
  body_.push_back("<line x1=\"" + coord(px(x1)) + "\" y1=\"" + coord(py(y1)) + "\" x2=\"" + coord(px(x2)) +
                  "\" y2=\"" + coord(py(y2)) + "\" stroke=\"" + color + "\"" +
                  (dashed ? " stroke-dasharray=\"4 3\"" : "") + "/>");
}

void Plot::polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color) {
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts += (i ? " " : "") + coord(px(xs[i])) + "," + coord(py(ys[i]));
  }
  body_.push_back("<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\"/>");
}

void Plot::box(double x1, double y1, double x2, double y2, const std::string& fill) {
  const double left = std::min(px(x1), px(x2));
  const double top = std::min(py(y1), py(y2));
  const double w = std::abs(px(x2) - px(x1));
  const double h = std::abs(py(y2) - py(y1));
  body_.push_back("<rect x=\"" + coord(left) + "\" y=\"" + coord(top) + "\" width=\"" + coord(w) +
                  "\" height=\"" + coord(h) + "\" fill=\"" + fill + "\" stroke=\"black\"/>");
}

void Plot::label_x(double x, const std::string& text) {
  body_.push_back("<text x=\"" + coord(px(x)) + "\" y=\"" + coord(kHeight - kMargin + 16) +
                  "\" text-anchor=\"middle\" font-size=\"11\">" + escape(text) + "</text>");
}

void Plot::axis_titles(const std::string& x, const std::string& y) {
  body_.push_back("<text x=\"" + coord(kWidth / 2) + "\" y=\"" + coord(kHeight - 12) +
                  "\" text-anchor=\"middle\" font-size=\"12\">" + escape(x) + "</text>");
  body_.push_back("<text x=\"14\" y=\"" + coord(kHeight / 2) + "\" transform=\"rotate(-90 14 " +
                  coord(kHeight / 2) + ")\" text-anchor=\"middle\" font-size=\"12\">" + escape(y) + "</text>");
}

std::string Plot::str() const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
                    coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title_) + "</text>\n";
  out += "<rect x=\"" + coord(kMargin) + "\" y=\"" + coord(kMargin) + "\" width=\"" +
         coord(kWidth - 2 * kMargin) + "\" height=\"" + coord(kHeight - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#888\"/>\n";
  out += "<text x=\"" + coord(kMargin) + "\" y=\"" + coord(kHeight - kMargin + 30) + "\" font-size=\"10\">" +
         coord(xmin_) + "</text>\n";
  out += "<text x=\"" + coord(kWidth - kMargin) + "\" y=\"" + coord(kHeight - kMargin + 30) +
         "\" text-anchor=\"end\" font-size=\"10\">" + coord(xmax_) + "</text>\n";
  out += "<text x=\"" + coord(kMargin - 4) + "\" y=\"" + coord(kHeight - kMargin) +
         "\" text-anchor=\"end\" font-size=\"10\">" + coord(ymin_) + "</text>\n";
  out += "<text x=\"" + coord(kMargin - 4) + "\" y=\"" + coord(kMargin + 10) +
         "\" text-anchor=\"end\" font-size=\"10\">" + coord(ymax_) + "</text>\n";
  for (const std::string& el : body_) {
    out += el + "\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace interpnet::svg
