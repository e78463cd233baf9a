#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosafe/config.hpp"
#include "cosafe/formula.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

inline constexpr const char* kSceneHeader = "cosafe-tamp/1 scene";
inline constexpr double kPenetrationTolerance = 1e-3;   // metres
inline constexpr double kOverlapAreaTolerance = 1e-6;   // square metres

struct SceneError : std::runtime_error {
  explicit SceneError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A fully loaded problem instance: abstract knowledge, propositional
/// regions and any config overrides the scene file carried.
struct Scene {
  AbstractKnowledge knowledge;
  PropTable props;
  std::vector<Rect> regions;  // indexed by proposition id; [0] is unused
  PlannerConfig config;

  Scene() { regions.emplace_back(); }

  const Rect& region(int prop) const { return regions.at(static_cast<size_t>(prop)); }
  int num_regions() const { return static_cast<int>(regions.size()) - 1; }
};

namespace detail {

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

inline double to_num(const std::string& s, const std::string& what, int lineno) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SceneError("line " + std::to_string(lineno) + ": bad " + what + " '" + s + "'");
  }
}

}  // namespace detail

inline void validate_scene(const Scene& scene) {
  const auto& k = scene.knowledge;
  if (k.bounds.half.x <= 0 || k.bounds.half.y <= 0)
    throw SceneError("degenerate workspace bounds");
  if (k.robot.radius <= 0 || k.robot.mass <= 0 || k.robot.f_max <= 0 || k.robot.v_max <= 0)
    throw SceneError("robot parameters must be positive");
  if (!k.bounds.contains(k.robot.start)) throw SceneError("robot start outside workspace");

  for (const auto& b : k.bodies) {
    if (b.mass <= 0) throw SceneError("body " + b.name + ": mass must be positive");
    if (b.friction < 0) throw SceneError("body " + b.name + ": negative friction");
    if (b.rect.half.x <= 0 || b.rect.half.y <= 0)
      throw SceneError("body " + b.name + ": degenerate rectangle");
    if (b.kind == BodyKind::Fixed && !b.mregions.empty())
      throw SceneError("body " + b.name + ": fixed bodies carry no mRegions");
    for (const auto& m : b.mregions)
      if (m.depth <= 0) throw SceneError("body " + b.name + ": mRegion depth must be positive");
    if (disc_rect_penetration(k.robot.start, k.robot.radius, b.rect) > kPenetrationTolerance)
      throw SceneError("robot start penetrates body " + b.name);
  }

  // No initial penetration deeper than the tolerance between movables and
  // anything else (fixed-fixed unions are allowed to overlap).
  for (size_t i = 0; i < k.bodies.size(); ++i) {
    if (k.bodies[i].kind == BodyKind::Fixed) continue;
    for (size_t j = 0; j < k.bodies.size(); ++j) {
      if (i == j) continue;
      const Vec2 pen = penetration_depths(k.bodies[i].rect, k.bodies[j].rect);
      if (pen.x > kPenetrationTolerance && pen.y > kPenetrationTolerance)
        throw SceneError("bodies " + k.bodies[i].name + " and " + k.bodies[j].name +
                         " penetrate at load");
    }
  }

  for (int p = 1; p < static_cast<int>(scene.regions.size()); ++p) {
    const Rect& r = scene.regions[static_cast<size_t>(p)];
    if (r.half.x <= 0 || r.half.y <= 0)
      throw SceneError("region " + scene.props.name(p) + ": degenerate rectangle");
    if (!k.bounds.contains_rect(r))
      throw SceneError("region " + scene.props.name(p) + " outside workspace");
    for (int q = p + 1; q < static_cast<int>(scene.regions.size()); ++q)
      if (overlap_area(r, scene.regions[static_cast<size_t>(q)]) > kOverlapAreaTolerance)
        throw SceneError("regions " + scene.props.name(p) + " and " + scene.props.name(q) +
                         " overlap");
    for (const auto& b : k.bodies)
      if (b.kind == BodyKind::Fixed && overlap_area(r, b.rect) > kOverlapAreaTolerance)
        throw SceneError("region " + scene.props.name(p) + " overlaps fixed body " + b.name);
  }
}

inline Scene load_scene(std::istream& in) {
  Scene scene;
  auto& k = scene.knowledge;
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line) || line != kSceneHeader)
    throw SceneError("line 1: expected header '" + std::string(kSceneHeader) + "'");
  ++lineno;

  bool have_workspace = false, have_robot = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    auto num = [&](size_t i, const char* what) {
      if (i >= toks.size())
        throw SceneError("line " + std::to_string(lineno) + ": missing " + what);
      return detail::to_num(toks[i], what, lineno);
    };

    if (kw == "workspace") {
      if (toks.size() != 5) throw SceneError("line " + std::to_string(lineno) +
                                             ": workspace wants 4 numbers");
      k.bounds = Rect::from_min_max({num(1, "x0"), num(2, "y0")}, {num(3, "x1"), num(4, "y1")});
      have_workspace = true;
    } else if (kw == "robot") {
      // robot start X Y radius R mass M fmax F vmax V
      for (size_t i = 1; i < toks.size(); i += 2) {
        if (i + 1 >= toks.size())
          throw SceneError("line " + std::to_string(lineno) + ": dangling robot key " + toks[i]);
        const std::string& key = toks[i];
        if (key == "start") {
          k.robot.start = {num(i + 1, "x"), num(i + 2, "y")};
          ++i;
        } else if (key == "radius") k.robot.radius = num(i + 1, "radius");
        else if (key == "mass") k.robot.mass = num(i + 1, "mass");
        else if (key == "fmax") k.robot.f_max = num(i + 1, "fmax");
        else if (key == "vmax") k.robot.v_max = num(i + 1, "vmax");
        else throw SceneError("line " + std::to_string(lineno) + ": unknown robot key " + key);
      }
      have_robot = true;
    } else if (kw == "body") {
      if (toks.size() < 8)
        throw SceneError("line " + std::to_string(lineno) + ": body wants name kind rect x0 y0 x1 y1");
      BodySpec b;
      b.id = static_cast<int>(k.bodies.size());
      b.name = toks[1];
      if (toks[2] == "fixed") b.kind = BodyKind::Fixed;
      else if (toks[2] == "movable") b.kind = BodyKind::Movable;
      else throw SceneError("line " + std::to_string(lineno) + ": body kind must be fixed|movable");
      if (toks[3] != "rect")
        throw SceneError("line " + std::to_string(lineno) + ": expected 'rect'");
      b.rect = Rect::from_min_max({num(4, "x0"), num(5, "y0")}, {num(6, "x1"), num(7, "y1")});
      double mdepth = -1.0;  // default patched after parsing (robot diameter + 1cm)
      std::vector<Dir> faces(kAllDirs.begin(), kAllDirs.end());
      for (size_t i = 8; i < toks.size(); i += 2) {
        if (i + 1 >= toks.size())
          throw SceneError("line " + std::to_string(lineno) + ": dangling body key " + toks[i]);
        const std::string& key = toks[i];
        if (key == "mass") b.mass = num(i + 1, "mass");
        else if (key == "mu") b.friction = num(i + 1, "mu");
        else if (key == "mdepth") mdepth = num(i + 1, "mdepth");
        else if (key == "mregions") {
          faces.clear();
          std::istringstream fs(toks[i + 1]);
          std::string face;
          while (std::getline(fs, face, ',')) {
            Dir d;
            if (!parse_dir(face, d))
              throw SceneError("line " + std::to_string(lineno) + ": bad face '" + face + "'");
            faces.push_back(d);
          }
        } else {
          throw SceneError("line " + std::to_string(lineno) + ": unknown body key " + key);
        }
      }
      if (b.kind == BodyKind::Movable)
        for (Dir f : faces) b.mregions.push_back({f, mdepth});
      k.bodies.push_back(std::move(b));
    } else if (kw == "region") {
      if (toks.size() != 6)
        throw SceneError("line " + std::to_string(lineno) + ": region wants name x0 y0 x1 y1");
      int id;
      try {
        id = scene.props.declare(toks[1]);
      } catch (const std::invalid_argument& e) {
        throw SceneError("line " + std::to_string(lineno) + ": " + e.what());
      }
      if (id != static_cast<int>(scene.regions.size()))
        throw SceneError("line " + std::to_string(lineno) + ": duplicate region " + toks[1]);
      scene.regions.push_back(
          Rect::from_min_max({num(2, "x0"), num(3, "y0")}, {num(4, "x1"), num(5, "y1")}));
    } else if (kw == "config") {
      if (toks.size() != 3)
        throw SceneError("line " + std::to_string(lineno) + ": config wants key value");
      try {
        if (!scene.config.set(toks[1], toks[2]))
          throw SceneError("line " + std::to_string(lineno) + ": unknown config key " + toks[1]);
      } catch (const std::invalid_argument& e) {
        throw SceneError("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else {
      throw SceneError("line " + std::to_string(lineno) + ": unknown keyword " + kw);
    }
  }
  if (!have_workspace) throw SceneError("scene has no workspace line");
  if (!have_robot) throw SceneError("scene has no robot line");
  for (auto& b : k.bodies)
    for (auto& m : b.mregions)
      if (m.depth < 0) m.depth = 2.0 * k.robot.radius + 0.01;
  validate_scene(scene);
  return scene;
}

inline Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("cannot open scene file " + path);
  return load_scene(in);
}

inline void save_scene(const Scene& scene, std::ostream& out) {
  using detail::fmt_g;
  const auto& k = scene.knowledge;
  out << kSceneHeader << "\n";
  out << "workspace " << fmt_g(k.bounds.min_x()) << ' ' << fmt_g(k.bounds.min_y()) << ' '
      << fmt_g(k.bounds.max_x()) << ' ' << fmt_g(k.bounds.max_y()) << "\n";
  out << "robot start " << fmt_g(k.robot.start.x) << ' ' << fmt_g(k.robot.start.y) << " radius "
      << fmt_g(k.robot.radius) << " mass " << fmt_g(k.robot.mass) << " fmax "
      << fmt_g(k.robot.f_max) << " vmax " << fmt_g(k.robot.v_max) << "\n";
  for (const auto& b : k.bodies) {
    out << "body " << b.name << ' ' << (b.kind == BodyKind::Fixed ? "fixed" : "movable")
        << " rect " << fmt_g(b.rect.min_x()) << ' ' << fmt_g(b.rect.min_y()) << ' '
        << fmt_g(b.rect.max_x()) << ' ' << fmt_g(b.rect.max_y());
    if (b.kind == BodyKind::Movable) {
      out << " mass " << fmt_g(b.mass) << " mu " << fmt_g(b.friction);
      if (!b.mregions.empty()) {
        out << " mdepth " << fmt_g(b.mregions[0].depth) << " mregions ";
        for (size_t i = 0; i < b.mregions.size(); ++i)
          out << (i ? "," : "") << to_string(b.mregions[i].face);
      }
    }
    out << "\n";
  }
  for (int p = 1; p <= scene.num_regions(); ++p) {
    const Rect& r = scene.region(p);
    out << "region " << scene.props.name(p) << ' ' << fmt_g(r.min_x()) << ' ' << fmt_g(r.min_y())
        << ' ' << fmt_g(r.max_x()) << ' ' << fmt_g(r.max_y()) << "\n";
  }
  const PlannerConfig& c = scene.config;
  out << "config t_max_s " << fmt_g(c.t_max_s) << "\n";
  out << "config dt_s " << fmt_g(c.dt_s) << "\n";
  out << "config n_substeps " << c.n_substeps << "\n";
  out << "config n_min " << c.n_min << "\n";
  out << "config n_max " << c.n_max << "\n";
  out << "config resolution_m " << fmt_g(c.resolution_m) << "\n";
  out << "config seed " << c.seed << "\n";
  out << "config k_lead " << c.k_lead << "\n";
}

}  // namespace cosafe
