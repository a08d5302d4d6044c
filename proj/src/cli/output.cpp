#include "hyflow/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hyflow/cli/serialize.hpp"
#include "hyflow/error.hpp"

namespace hyflow::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string curves_csv(const MeasureSolution& solution, int samples) {
  std::ostringstream out;
  out << "curve,t,x,y,w_m0,w_m1,w_m2,w_m3,w_n0,w_n1,w_n2,w_n3,w_rho,u,v,E\n";
  for (const auto& c : solution.curves) {
    const CurveSample first = c.sample(c.t_begin);
    for (double t : export_parameters(solution, c.t_begin, c.t_end, {first.x, first.y}, samples)) {
      const CurveSample s = c.sample(t);
      out << c.name << ',' << format_number(t) << ',' << format_number(s.x) << ','
          << format_number(s.y);
      for (double w : s.w_m) out << ',' << format_number(w);
      for (double w : s.w_n) out << ',' << format_number(w);
      out << ',' << format_number(s.w_rho) << ',' << format_number(s.u) << ','
          << format_number(s.v) << ',' << format_number(s.E) << '\n';
    }
  }
  return out.str();
}

std::string accretion_csv(const AccretionResult& result) {
  std::ostringstream out;
  out << "x,y,slope,M,Px,Py,ME,w_p\n";
  for (const auto& c : result.cells)
    out << format_number(c.x) << ',' << format_number(c.y) << ',' << format_number(c.slope) << ','
        << format_number(c.M) << ',' << format_number(c.Px) << ',' << format_number(c.Py) << ','
        << format_number(c.ME) << ',' << format_number(c.w_p) << '\n';
  return out.str();
}

namespace {

struct Box {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

struct Canvas {
  Box box;
  double scale = 1.0;
  double margin = 50.0;
  double width = 0, height = 0;
  std::ostringstream body;

  Canvas(Box b, double plot_width) : box(b) {
    scale = plot_width / (b.x1 - b.x0);
    width = plot_width + 2 * margin;
    height = (b.y1 - b.y0) * scale + 2 * margin;
  }
  double px(double x) const { return margin + (x - box.x0) * scale; }
  double py(double y) const { return margin + (box.y1 - y) * scale; }
  static std::string f(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
  double clamp_y(double y) const { return std::clamp(y, box.y0, box.y1); }

  void polyline(const std::vector<std::array<double, 2>>& pts, const std::string& style) {
    if (pts.size() < 2) return;
    body << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& p : pts) body << f(px(p[0])) << ',' << f(py(clamp_y(p[1]))) << ' ';
    body << "\"/>\n";
  }
  void polygon(const std::vector<std::array<double, 2>>& pts, const std::string& fill) {
    if (pts.size() < 3) return;
    body << "<polygon fill=\"" << fill << "\" stroke=\"none\" points=\"";
    for (const auto& p : pts) body << f(px(p[0])) << ',' << f(py(clamp_y(p[1]))) << ' ';
    body << "\"/>\n";
  }
  void marker(double x, double y, const std::string& color, const std::string& label) {
    body << "<circle cx=\"" << f(px(x)) << "\" cy=\"" << f(py(y)) << "\" r=\"4\" fill=\"" << color
         << "\"/>\n";
    if (!label.empty())
      body << "<text x=\"" << f(px(x) + 6) << "\" y=\"" << f(py(y) - 6)
           << "\" font-size=\"12\" font-family=\"sans-serif\">" << label << "</text>\n";
  }
  void text(double sx, double sy, const std::string& s, const std::string& color = "black") {
    body << "<text x=\"" << f(sx) << "\" y=\"" << f(sy) << "\" font-size=\"12\" fill=\"" << color
         << "\" font-family=\"sans-serif\">" << s << "</text>\n";
  }

  static double nice_step(double span) {
    const double raw = span / 8.0;
    const double p = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * p >= raw) return m * p;
    return 10 * p;
  }
  void axes() {
    const std::string style = "stroke=\"black\" stroke-width=\"1\"";
    body << "<line x1=\"" << f(px(box.x0)) << "\" y1=\"" << f(py(box.y0)) << "\" x2=\""
         << f(px(box.x1)) << "\" y2=\"" << f(py(box.y0)) << "\" " << style << "/>\n";
    body << "<line x1=\"" << f(px(box.x0)) << "\" y1=\"" << f(py(box.y0)) << "\" x2=\""
         << f(px(box.x0)) << "\" y2=\"" << f(py(box.y1)) << "\" " << style << "/>\n";
    const double step = nice_step(std::max(box.x1 - box.x0, box.y1 - box.y0));
    for (double x = std::ceil(box.x0 / step) * step; x <= box.x1 + 1e-12; x += step) {
      body << "<line x1=\"" << f(px(x)) << "\" y1=\"" << f(py(box.y0)) << "\" x2=\"" << f(px(x))
           << "\" y2=\"" << f(py(box.y0) + 5) << "\" " << style << "/>\n";
      text(px(x) - 8, py(box.y0) + 18, format_label(x));
    }
    for (double y = std::ceil(box.y0 / step) * step; y <= box.y1 + 1e-12; y += step) {
      body << "<line x1=\"" << f(px(box.x0) - 5) << "\" y1=\"" << f(py(y)) << "\" x2=\""
           << f(px(box.x0)) << "\" y2=\"" << f(py(y)) << "\" " << style << "/>\n";
      text(px(box.x0) - 40, py(y) + 4, format_label(y));
    }
    text(px(box.x1) - 10, py(box.y0) + 34, "x");
    text(px(box.x0) - 40, py(box.y1) - 10, "y");
  }
  static std::string format_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
  }
  std::string document(const std::string& title) const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\""
        << f(height) << "\" viewBox=\"0 0 " << f(width) << ' ' << f(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
      out << "<text x=\"" << f(margin) << "\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\">"
          << title << "</text>\n";
    out << body.str() << "</svg>\n";
    return out.str();
  }
};

constexpr int kPlotSamples = 400;

std::vector<std::array<double, 2>> curve_points(const DiracCurve& c) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i <= kPlotSamples; ++i) {
    const double s = static_cast<double>(i) / kPlotSamples;
    const CurveSample p = c.sample(c.t_begin + (c.t_end - c.t_begin) * s * s);
    if (std::isfinite(p.x) && std::isfinite(p.y)) pts.push_back({p.x, p.y});
  }
  return pts;
}

double plot_x_end(const MeasureSolution& s) {
  double x = 0.0;
  for (const auto& c : s.curves) x = std::max(x, c.sample(c.t_end).x);
  if (std::isfinite(s.x_limit)) x = std::min(std::max(x, 0.0), s.x_limit);
  return x > 0.0 ? x : 1.0;
}

Box bounding_box(const std::vector<const MeasureSolution*>& sols) {
  Box b{0.0, 0.0, 0.0, 0.0};
  double ymin = 0.0, ymax = 0.0;
  for (const auto* s : sols) {
    b.x1 = std::max(b.x1, plot_x_end(*s));
    for (const auto& c : s->curves)
      for (const auto& p : curve_points(c)) {
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
      }
    for (const auto& c : s->contacts) {
      const double x_end = std::isfinite(c.x_end) ? c.x_end : b.x1;
      ymin = std::min(ymin, c.y0 + c.slope * (x_end - c.x0));
    }
  }
  const double span = std::max(ymax - ymin, 1e-3);
  const double pad = 0.15 * std::min(span, std::max(b.x1, 1e-3));
  b.y0 = ymin - pad;
  b.y1 = ymax + pad;
  b.x1 *= 1.02;
  return b;
}

std::string region_fill(const std::string& name) {
  if (name.rfind("dead-gas", 0) == 0) return "#f3dcae";
  if (name.rfind("jet", 0) == 0) return "#cfe3f7";
  if (name == "vacuum") return "#d4d4d4";
  return "";
}

void draw_regions(Canvas& canvas, const MeasureSolution& s) {
  for (const auto& r : s.regions) {
    const std::string fill = region_fill(r.name);
    if (fill.empty()) continue;
    const double a = std::max(r.x_lo, canvas.box.x0);
    const double b = std::min(r.x_hi, canvas.box.x1);
    if (!(b > a)) continue;
    std::vector<std::array<double, 2>> upper, lower;
    for (int i = 0; i <= kPlotSamples; ++i) {
      const double x = a + (b - a) * i / kPlotSamples;
      upper.push_back({x, r.upper(x)});
      lower.push_back({x, r.lower(x)});
    }
    std::reverse(lower.begin(), lower.end());
    upper.insert(upper.end(), lower.begin(), lower.end());
    canvas.polygon(upper, fill);
  }
}

// Solid body under the wall, and behind the cliff when the ramp ends.
void draw_body(Canvas& canvas, const MeasureSolution& s) {
  const DiracCurve* wall = s.find_curve("wall");
  if (!wall) return;
  auto pts = curve_points(*wall);
  if (pts.empty()) return;
  const double x_end = pts.back()[0];
  std::vector<std::array<double, 2>> body = pts;
  body.push_back({x_end, canvas.box.y0});
  body.push_back({pts.front()[0], canvas.box.y0});
  canvas.polygon(body, "#9a9a9a");
  canvas.polyline(pts, "stroke=\"black\" stroke-width=\"2.5\"");
  if (s.x_star) {
    canvas.polyline({{x_end, canvas.box.y0}, {x_end, pts.back()[1]}},
                    "stroke=\"black\" stroke-width=\"2.5\"");
  }
}

void draw_markers(Canvas& canvas, const MeasureSolution& s) {
  if (s.classification.blow_up)
    canvas.marker((*s.classification.blow_up)[0], (*s.classification.blow_up)[1], "#c0392b",
                  "blow-up");
  if (s.classification.collision && (*s.classification.collision)[0] <= canvas.box.x1)
    canvas.marker((*s.classification.collision)[0], (*s.classification.collision)[1], "#1f5fa8",
                  "collision");
}

const char* kPalette[] = {"#c0392b", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                          "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

}  // namespace

std::string plot_svg(const MeasureSolution& solution, const std::string& title) {
  Canvas canvas(bounding_box({&solution}), 800.0);
  draw_regions(canvas, solution);
  draw_body(canvas, solution);
  for (const auto& c : solution.contacts) {
    const double x_end = std::min(std::isfinite(c.x_end) ? c.x_end : canvas.box.x1, canvas.box.x1);
    canvas.polyline({{c.x0, c.y0}, {x_end, c.y0 + c.slope * (x_end - c.x0)}},
                    "stroke=\"#1f5fa8\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  }
  for (const auto& c : solution.curves) {
    if (c.name == "wall") continue;
    canvas.polyline(curve_points(c), "stroke=\"#c0392b\" stroke-width=\"2\"");
  }
  draw_markers(canvas, solution);
  canvas.axes();
  return canvas.document(title);
}

std::string overlay_svg(const std::vector<std::pair<std::string, MeasureSolution>>& solutions,
                        const std::string& title) {
  std::vector<const MeasureSolution*> ptrs;
  for (const auto& [label, s] : solutions) ptrs.push_back(&s);
  if (ptrs.empty()) return Canvas(Box{}, 800.0).document(title);
  Canvas canvas(bounding_box(ptrs), 800.0);
  draw_body(canvas, *ptrs.front());
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const std::string color = kPalette[i % std::size(kPalette)];
    for (const auto& c : solutions[i].second.curves) {
      if (c.name == "wall") continue;
      canvas.polyline(curve_points(c), "stroke=\"" + color + "\" stroke-width=\"2\"");
    }
    canvas.text(canvas.width - 180, canvas.margin + 16.0 * i, solutions[i].first, color);
  }
  canvas.axes();
  return canvas.document(title);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace hyflow::cli
