#include "dirtyregion/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirtyregion/search.hpp"

namespace dirtyregion {

double Pentagon::max_r1() const { return std::max(0.0, std::min(m1, m12)); }
double Pentagon::max_r2() const { return std::max(0.0, std::min(m2, m12)); }

double RateRegion::max_r1() const {
  double best = 0.0;
  for (const auto& p : pentagons) best = std::max(best, p.max_r1());
  return best;
}

double RateRegion::max_r2() const {
  double best = 0.0;
  for (const auto& p : pentagons) best = std::max(best, p.max_r2());
  return best;
}

double RateRegion::max_sum() const {
  double best = 0.0;
  for (const auto& p : pentagons)
    best = std::max(best, std::min(p.m12, p.max_r1() + p.max_r2()));
  return best;
}

bool RateRegion::contains(RatePoint pt, double tol) const {
  return std::any_of(pentagons.begin(), pentagons.end(),
                     [&](const Pentagon& p) { return p.contains(pt, tol); });
}

std::vector<RatePoint> pentagon_vertices(const Pentagon& p) {
  const double x = p.max_r1();
  const double y = p.max_r2();
  const double s = std::max(0.0, p.m12);
  std::vector<RatePoint> v{{0.0, 0.0}};
  auto push = [&](RatePoint q) {
    const auto& last = v.back();
    if (q.r1 != last.r1 || q.r2 != last.r2) v.push_back(q);
  };
  push({x, 0.0});
  if (s >= x + y) {
    push({x, y});
  } else {
    push({x, s - x});
    push({s - y, y});
  }
  push({0.0, y});
  if (v.size() > 1 && v.back().r1 == 0.0 && v.back().r2 == 0.0) v.pop_back();
  return v;
}

BoundaryCurve upper_envelope(const std::vector<Pentagon>& pentagons, std::size_t r1_grid_size,
                             ExecPolicy policy) {
  if (pentagons.empty()) throw EmptyRegionError("upper_envelope needs at least one pentagon");
  double r1_max = 0.0;
  for (const auto& p : pentagons) r1_max = std::max(r1_max, p.max_r1());
  const auto grid = linspace({0.0, r1_max}, std::max<std::size_t>(r1_grid_size, 2));
  return policy == ExecPolicy::serial ? envelope_serial(pentagons, grid)
                                      : envelope_parallel(pentagons, grid);
}

BoundaryCurve concave_envelope(const BoundaryCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) return curve;
  // Upper hull, monotone chain; x is already strictly increasing.
  std::vector<RatePoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  BoundaryCurve out;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].r1;
    while (seg + 2 < hull.size() && hull[seg + 1].r1 < x) ++seg;
    const auto& a = hull[seg];
    const auto& b = hull[std::min(seg + 1, hull.size() - 1)];
    double y = a.r2;
    if (b.r1 > a.r1) y = a.r2 + (b.r2 - a.r2) * (x - a.r1) / (b.r1 - a.r1);
    y = std::max(y, pts[i].r2);
    out.points.push_back({x, y});
    out.binding.push_back(y > pts[i].r2 + 1e-12 ? "hull" : curve.binding[i]);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& destination, const std::string& content) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw ExportError("cannot open " + destination.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw ExportError("write failed for " + destination.string());
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::round(v * 100.0) / 100.0 + 0.0);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

void export_csv(const BoundaryCurve& curve, const std::filesystem::path& destination) {
  std::string s = "r1_bits,r2_bits,binding\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    s += format_number(curve.points[i].r1) + "," + format_number(curve.points[i].r2) + "," +
         (i < curve.binding.size() ? curve.binding[i] : std::string()) + "\n";
  }
  write_file(destination, s);
}

void export_table_csv(const Table& table, const std::filesystem::path& destination) {
  std::string s;
  auto join = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += row[i];
    }
    s += '\n';
  };
  join(table.header);
  for (const auto& row : table.rows) join(row);
  write_file(destination, s);
}

std::string render_svg(const PlotSpec& spec) {
  constexpr double W = 800, H = 600, left = 80, right = 190, top = 50, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  for (const auto& s : spec.series) {
    for (const auto& p : s.points) {
      if (!std::isfinite(p.r1) || !std::isfinite(p.r2)) continue;
      if (!any) {
        xmin = xmax = p.r1;
        ymin = ymax = p.r2;
        any = true;
      }
      xmin = std::min(xmin, p.r1);
      xmax = std::max(xmax, p.r1);
      ymin = std::min(ymin, p.r2);
      ymax = std::max(ymax, p.r2);
    }
  }
  xmin = std::min(xmin, 0.0);
  ymin = std::min(ymin, 0.0);
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  ymax += 0.05 * (ymax - ymin);

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
    << "<text x=\"" << px(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(spec.title) << "</text>\n";

  // axes and ticks
  o << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
    << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(pw)
    << "\" height=\"" << px(ph) << "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0, fy = ymin + (ymax - ymin) * i / 5.0;
    o << "<line x1=\"" << px(sx(fx)) << "\" y1=\"" << px(top + ph) << "\" x2=\"" << px(sx(fx))
      << "\" y2=\"" << px(top + ph + 5) << "\"/>\n";
    o << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(sy(fy)) << "\" x2=\"" << px(left)
      << "\" y2=\"" << px(sy(fy)) << "\"/>\n";
  }
  o << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0, fy = ymin + (ymax - ymin) * i / 5.0;
    o << "<text x=\"" << px(sx(fx)) << "\" y=\"" << px(top + ph + 20)
      << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    o << "<text x=\"" << px(left - 8) << "\" y=\"" << px(sy(fy) + 4)
      << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  o << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(H - 15)
    << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n"
    << "<text x=\"20\" y=\"" << px(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << px(top + ph / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n</g>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    if (s.markers) {
      o << "<g fill=\"" << color << "\">\n";
      for (const auto& p : s.points) {
        if (!std::isfinite(p.r1) || !std::isfinite(p.r2)) continue;
        o << "<circle cx=\"" << px(sx(p.r1)) << "\" cy=\"" << px(sy(p.r2)) << "\" r=\"2.5\"/>\n";
      }
      o << "</g>\n";
    } else if (!s.points.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      bool first = true;
      for (const auto& p : s.points) {
        if (!std::isfinite(p.r1) || !std::isfinite(p.r2)) continue;
        if (!first) o << ' ';
        o << px(sx(p.r1)) << ',' << px(sy(p.r2));
        first = false;
      }
      o << "\"/>\n";
    }
    const double ly = top + 10 + 22.0 * static_cast<double>(k);
    const double lx = W - right + 15;
    if (s.markers)
      o << "<circle cx=\"" << px(lx + 10) << "\" cy=\"" << px(ly) << "\" r=\"4\" fill=\"" << color
        << "\"/>\n";
    else
      o << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 20)
        << "\" y2=\"" << px(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << px(lx + 28) << "\" y=\"" << px(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void export_svg(const PlotSpec& spec, const std::filesystem::path& destination) {
  write_file(destination, render_svg(spec));
}

}  // namespace dirtyregion
