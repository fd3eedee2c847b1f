#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "eaton/lattice.hpp"

namespace eaton {

namespace {

struct Box {
  double x0, x1, y0, y1;
  double w() const { return x1 - x0; }
  double h() const { return y1 - y0; }
};

void emit(std::ostream& os, const char* fmt_, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt_);
  std::vsnprintf(buf, sizeof(buf), fmt_, ap);
  va_end(ap);
  os << buf;
}

}  // namespace

void render_scene_svg(std::ostream& os, const Trajectory& t,
                      const std::optional<BandOverlay>& band) {
  // Bounding box of the sampled orbit (y axis flipped for screen coords).
  Box b{t.start.pos.x, t.start.pos.x, t.start.pos.y, t.start.pos.y};
  for (const Sample& s : t.samples) {
    b.x0 = std::min(b.x0, s.position.x);
    b.x1 = std::max(b.x1, s.position.x);
    b.y0 = std::min(b.y0, s.position.y);
    b.y1 = std::max(b.y1, s.position.y);
  }
  const double R = t.config.radius;
  const double margin = std::max({1.0, 4.0 * R, 0.05 * std::max(b.w(), b.h())});
  b = {b.x0 - margin, b.x1 + margin, b.y0 - margin, b.y1 + margin};

  const double scale = 900.0 / std::max(b.w(), b.h());
  const auto X = [&](double x) { return (x - b.x0) * scale; };
  const auto Y = [&](double y) { return (b.y1 - y) * scale; };

  emit(os,
       "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
       "height=\"%.0f\" viewBox=\"0 0 %.2f %.2f\">\n",
       b.w() * scale, b.h() * scale, b.w() * scale, b.h() * scale);
  emit(os, "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n");

  // Lattice elements, capped so pathological zoom levels stay writable.
  const double area = b.w() * b.h();
  if (area < 40000.0) {
    const auto pts =
        enumerate_in_box(t.config.lattice, b.x0, b.x1, b.y0, b.y1, 200000);
    const double stroke = std::max(0.6, 0.02 * scale * R);
    for (const BoxPoint& p : pts) {
      if (t.config.model == Model::Flat) {
        emit(os,
             "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
             "stroke=\"#555\" stroke-width=\"%.2f\"/>\n",
             X(p.p.x - R), Y(p.p.y), X(p.p.x + R), Y(p.p.y), stroke);
      } else {
        emit(os,
             "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" "
             "stroke=\"#555\" stroke-width=\"%.2f\"/>\n",
             X(p.p.x), Y(p.p.y), R * scale, stroke);
      }
    }
  }

  // Band edges drawn across the whole box.
  if (band && band->direction.norm() > 0.0) {
    const Vec2 u = band->direction * (1.0 / band->direction.norm());
    const Vec2 n{-u.y, u.x};
    const double span = 2.0 * std::max(b.w(), b.h());
    for (int side = -1; side <= 1; side += 2) {
      const Vec2 c = t.start.pos + n * (side * band->width);
      const Vec2 p0 = c - u * span, p1 = c + u * span;
      emit(os,
           "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
           "stroke=\"#c33\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n",
           X(p0.x), Y(p0.y), X(p1.x), Y(p1.y));
    }
  }

  // Orbit polyline, decimated to a sane point count.
  const std::size_t max_pts = 50000;
  const std::size_t step = std::max<std::size_t>(1, t.samples.size() / max_pts);
  os << "<polyline fill=\"none\" stroke=\"#2c6fbb\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < t.samples.size(); i += step) {
    emit(os, "%.2f,%.2f ", X(t.samples[i].position.x),
         Y(t.samples[i].position.y));
  }
  os << "\"/>\n";

  emit(os, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#d80\"/>\n",
       X(t.start.pos.x), Y(t.start.pos.y));
  os << "</svg>\n";
}

}  // namespace eaton
