#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosafe/scene.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

/// Render the workspace, regions, bodies and a robot path to SVG. Pure
/// presentation: nothing downstream depends on this output.
inline std::string render_svg(const Scene& scene, const std::vector<EnvState>& states) {
  const auto& k = scene.knowledge;
  const double scale = 60.0;
  const double w = k.bounds.half.x * 2 * scale;
  const double h = k.bounds.half.y * 2 * scale;
  auto X = [&](double x) { return (x - k.bounds.min_x()) * scale; };
  auto Y = [&](double y) { return h - (y - k.bounds.min_y()) * scale; };

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "' viewBox='0 0 " << w << ' ' << h << "'>\n";
  out << "<rect x='0' y='0' width='" << w << "' height='" << h
      << "' fill='white' stroke='black'/>\n";

  auto rect = [&](const Rect& r, const std::string& fill, double opacity) {
    out << "<rect x='" << X(r.min_x()) << "' y='" << Y(r.max_y()) << "' width='"
        << (r.half.x * 2 * scale) << "' height='" << (r.half.y * 2 * scale) << "' fill='" << fill
        << "' fill-opacity='" << opacity << "' stroke='black' stroke-width='0.5'/>\n";
  };

  for (int p = 1; p <= scene.num_regions(); ++p) {
    rect(scene.region(p), "gold", 0.6);
    const Rect& r = scene.region(p);
    out << "<text x='" << X(r.center.x) << "' y='" << Y(r.center.y)
        << "' font-size='12' text-anchor='middle'>" << scene.props.name(p) << "</text>\n";
  }
  for (const auto& b : k.bodies)
    if (b.kind == BodyKind::Fixed) rect(b.rect, "firebrick", 0.9);

  // Movable bodies: initial pose faint, final pose solid.
  for (const auto& b : k.bodies) {
    if (b.kind != BodyKind::Movable) continue;
    rect(b.rect, "steelblue", 0.25);
    if (!states.empty()) rect(states.back().body_rect(k, b.id), "steelblue", 0.85);
  }

  if (!states.empty()) {
    out << "<polyline fill='none' stroke='seagreen' stroke-width='1.5' points='";
    for (const auto& s : states) out << X(s.robot.p.x) << ',' << Y(s.robot.p.y) << ' ';
    out << "'/>\n";
    const auto& p0 = states.front().robot.p;
    const auto& p1 = states.back().robot.p;
    out << "<circle cx='" << X(p0.x) << "' cy='" << Y(p0.y) << "' r='" << k.robot.radius * scale
        << "' fill='seagreen' fill-opacity='0.3'/>\n";
    out << "<circle cx='" << X(p1.x) << "' cy='" << Y(p1.y) << "' r='" << k.robot.radius * scale
        << "' fill='seagreen'/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_svg_file(const std::string& path, const Scene& scene,
                           const std::vector<EnvState>& states) {
  std::ofstream out(path);
  if (out) out << render_svg(scene, states);
}

}  // namespace cosafe
