#include "causalstruct/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "causalstruct/error.hpp"

namespace causalstruct {

std::string_view to_string(Viewpoint view) {
  switch (view) {
    case Viewpoint::Front: return "front";
    case Viewpoint::Side: return "side";
    case Viewpoint::Top: return "top";
    case Viewpoint::ThreeQuarter: return "threequarter";
  }
  return "front";
}

Viewpoint parse_viewpoint(std::string_view text) {
  for (auto v : {Viewpoint::Front, Viewpoint::Side, Viewpoint::Top, Viewpoint::ThreeQuarter}) {
    if (to_string(v) == text) return v;
  }
  fail(ErrorKind::ConfigError, "unknown view '" + std::string(text) + "'");
}

namespace {

struct Point2 {
  double u;
  double v;
};

Point2 project(Viewpoint view, const Vec3& p) {
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
  static const double kInvSqrt6 = 1.0 / std::sqrt(6.0);
  switch (view) {
    case Viewpoint::Front: return {p.x, p.z};
    case Viewpoint::Side: return {p.y, p.z};
    case Viewpoint::Top: return {p.x, -p.y};
    case Viewpoint::ThreeQuarter:
      return {(p.x - p.y) * kInvSqrt2, (2.0 * p.z - p.x - p.y) * kInvSqrt6};
  }
  return {p.x, p.z};
}

// Larger is nearer to the viewer.
double depth(Viewpoint view, const Aabb& box) {
  const Vec3 c = box.center();
  switch (view) {
    case Viewpoint::Front: return c.y;
    case Viewpoint::Side: return c.x;
    case Viewpoint::Top: return box.max.z;
    case Viewpoint::ThreeQuarter: return c.x + c.y + c.z;
  }
  return 0.0;
}

std::array<Vec3, 8> corners(const Aabb& b) {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = {(i & 1) ? b.max.x : b.min.x, (i & 2) ? b.max.y : b.min.y,
              (i & 4) ? b.max.z : b.min.z};
  }
  return out;
}

// Monotone chain; counter-clockwise hull without collinear points.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.u < b.u || (a.u == b.u && a.v < b.v); });
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

std::string fill_color(const std::string& id) {
  std::uint32_t h = 2166136261u;  // FNV-1a
  for (unsigned char c : id) {
    h ^= c;
    h *= 16777619u;
  }
  return fmt::format("hsl({},55%,65%)", h % 360);
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

RenderedView render_view(const LayoutScene& scene, Viewpoint viewpoint, int width, int height) {
  if (width <= 0 || height <= 0) fail(ErrorKind::RenderFailed, "render size must be positive");

  std::string doc = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" data-view=\"{2}\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      width, height, to_string(viewpoint));

  struct Item {
    const PlacedObject* object;
    double depth;
  };
  std::vector<Item> items;
  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& o : scene.objects) {
    const auto box = o.aabb();
    for (const auto& c : corners(box)) {
      auto p = project(viewpoint, c);
      if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
        fail(ErrorKind::RenderFailed, "object '" + o.id + "' has a non-finite box");
      }
      umin = std::min(umin, p.u);
      umax = std::max(umax, p.u);
      vmin = std::min(vmin, p.v);
      vmax = std::max(vmax, p.v);
    }
    items.push_back({&o, depth(viewpoint, box)});
  }

  if (!items.empty()) {
    const double margin = std::min(16.0, std::min(width, height) / 8.0);
    const double span_u = std::max(umax - umin, 1e-9);
    const double span_v = std::max(vmax - vmin, 1e-9);
    const double px_per_m =
        std::min((width - 2.0 * margin) / span_u, (height - 2.0 * margin) / span_v);
    auto to_px = [&](const Point2& p) {
      return Point2{margin + (p.u - umin) * px_per_m, height - margin - (p.v - vmin) * px_per_m};
    };

    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.object->id < b.object->id;
    });

    for (const auto& item : items) {
      const auto& o = *item.object;
      const auto box = o.aabb();
      std::vector<Point2> pts;
      for (const auto& c : corners(box)) pts.push_back(to_px(project(viewpoint, c)));
      const auto color = fill_color(o.id);
      double cu = 0.0, cv = 0.0;
      if (viewpoint == Viewpoint::ThreeQuarter) {
        auto hull = convex_hull(pts);
        std::string points;
        for (const auto& p : hull) {
          points += fmt::format("{}{:.3f},{:.3f}", points.empty() ? "" : " ", p.u, p.v);
          cu += p.u / hull.size();
          cv += p.v / hull.size();
        }
        doc += fmt::format(
            "<polygon id=\"{}\" class=\"object\" points=\"{}\" fill=\"{}\" stroke=\"#333333\"/>\n",
            xml_escape(o.id), points, color);
      } else {
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const auto& p : pts) {
          x0 = std::min(x0, p.u);
          x1 = std::max(x1, p.u);
          y0 = std::min(y0, p.v);
          y1 = std::max(y1, p.v);
        }
        doc += fmt::format(
            "<rect id=\"{}\" class=\"object\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" "
            "height=\"{:.3f}\" fill=\"{}\" stroke=\"#333333\"/>\n",
            xml_escape(o.id), x0, y0, x1 - x0, y1 - y0, color);
        cu = 0.5 * (x0 + x1);
        cv = 0.5 * (y0 + y1);
      }
      doc += fmt::format(
          "<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n", cu,
          cv, xml_escape(o.name.empty() ? o.id : o.name));
    }
  }
  doc += "</svg>\n";
  return {viewpoint, width, height, std::move(doc)};
}

}  // namespace causalstruct
