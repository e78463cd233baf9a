#pragma once

#include <string>
#include <vector>

#include "cosafe/geometry.hpp"

namespace cosafe {

enum class BodyKind { Fixed, Movable };

struct MRegionSpec {
  Dir face = Dir::PosX;
  double depth = 0.0;  // extrusion outward from the face, metres
};

/// Static per-body record of the abstract knowledge: what the body is,
/// its physical properties and its declared manipulation regions.
struct BodySpec {
  int id = 0;
  std::string name;
  BodyKind kind = BodyKind::Fixed;
  Rect rect;          // initial footprint
  double mass = 1.0;
  double friction = 0.3;
  std::vector<MRegionSpec> mregions;  // empty for fixed bodies
};

struct RobotSpec {
  Vec2 start;
  double radius = 0.3;
  double mass = 1.0;
  double f_max = 10.0;   // per-component control bound, N
  double v_max = 2.0;    // speed bound, m/s
};

/// Abstract knowledge K: everything about the world that never changes
/// while planning.
struct AbstractKnowledge {
  Rect bounds;                   // workspace
  RobotSpec robot;
  std::vector<BodySpec> bodies;  // indexed by body id
  double gravity = 9.81;
  double v_body_max = 2.0;

  const BodySpec& body(int id) const { return bodies.at(static_cast<size_t>(id)); }

  /// Geometry of a body's manipulation region for a given current footprint:
  /// the face extruded outward by the declared depth.
  static Rect mregion_rect(const Rect& body, const MRegionSpec& m) {
    const Vec2 n = unit(m.face);
    Vec2 half = body.half;
    Vec2 center = body.center;
    if (m.face == Dir::PosX || m.face == Dir::NegX) {
      center.x += n.x * (body.half.x + m.depth * 0.5);
      half.x = m.depth * 0.5;
    } else {
      center.y += n.y * (body.half.y + m.depth * 0.5);
      half.y = m.depth * 0.5;
    }
    return {center, half};
  }
};

/// Dynamic part of one movable body's state.
struct BodyState {
  Vec2 position;  // rectangle center
  Vec2 velocity;
};

struct RobotState {
  Vec2 p;
  double o = 0.0;  // orientation, carried but constant for the disc robot
  Vec2 v;
  double w = 0.0;  // angular velocity, always zero
};

/// E = X x S: poses/velocities of every body plus the robot state.
struct EnvState {
  std::vector<BodyState> bodies;  // one per body id (fixed bodies never move)
  RobotState robot;
  long step = 0;

  static EnvState initial(const AbstractKnowledge& k) {
    EnvState e;
    e.bodies.reserve(k.bodies.size());
    for (const auto& b : k.bodies) e.bodies.push_back({b.rect.center, {0.0, 0.0}});
    e.robot.p = k.robot.start;
    return e;
  }

  Rect body_rect(const AbstractKnowledge& k, int id) const {
    return {bodies[static_cast<size_t>(id)].position, k.body(id).rect.half};
  }
};

/// Planar force applied at the robot center.
struct Control {
  Vec2 force;
};

}  // namespace cosafe
