#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cosafe/config.hpp"
#include "cosafe/knowledge.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

/// Everything the validity checker needs to know about what happened during
/// one propagation step.
struct ContactReport {
  struct Contact {
    int body = -1;
    Dir face = Dir::PosX;              // contacted face of the body
    bool robot_inside_mregion = false; // robot center in that face's mRegion at onset
  };
  std::vector<Contact> contacts;     // movable bodies, first contact per body
  std::vector<int> fixed_contacts;   // fixed bodies the robot touched
  std::vector<double> displacement;  // per body id, net pose change over the step
  double max_penetration = 0.0;      // residual overlap after resolution
  bool speed_exceeded = false;

  bool has_contact(int body) const {
    for (const auto& c : contacts)
      if (c.body == body) return true;
    return false;
  }
};

namespace detail {

inline void clamp_speed(Vec2& v, double limit) {
  const double s = v.norm();
  if (s > limit && s > 0.0) v = v * (limit / s);
}

// Dominant axis of the penetration vector decides the contacted face;
// ties break toward x.
inline Dir contact_face(const Rect& body, const Vec2& robot_center) {
  const Vec2 cp = closest_point(body, robot_center);
  Vec2 d = robot_center - cp;
  if (d.norm() < 1e-12) {
    // Center inside the body: use the per-axis offset scaled by the extents.
    d = {(robot_center.x - body.center.x) / body.half.x,
         (robot_center.y - body.center.y) / body.half.y};
  }
  if (std::abs(d.x) >= std::abs(d.y)) return d.x >= 0.0 ? Dir::PosX : Dir::NegX;
  return d.y >= 0.0 ? Dir::PosY : Dir::NegY;
}

struct PhysicsPass {
  const AbstractKnowledge& k;
  EnvState& e;
  ContactReport& report;

  // Robot vs one rectangle: project the robot out and stop its normal motion.
  void robot_vs_rect(const Rect& r) {
    const double pen = disc_rect_penetration(e.robot.p, k.robot.radius, r);
    if (pen <= 0.0) return;
    const Vec2 cp = closest_point(r, e.robot.p);
    Vec2 n = e.robot.p - cp;  // outward from the rectangle
    if (n.norm() < 1e-12) {
      const Dir f = contact_face(r, e.robot.p);
      n = unit(f);
    } else {
      n = n * (1.0 / n.norm());
    }
    e.robot.p += n * pen;
    const double vn = e.robot.v.dot(n);
    if (vn < 0.0) e.robot.v += n * (-vn);
  }

  // Keep a rectangle inside the workspace, killing the blocked velocity.
  void rect_vs_bounds(Rect& r, Vec2& v) {
    const Rect& b = k.bounds;
    if (r.min_x() < b.min_x()) {
      r.center.x += b.min_x() - r.min_x();
      if (v.x < 0) v.x = 0;
    }
    if (r.max_x() > b.max_x()) {
      r.center.x -= r.max_x() - b.max_x();
      if (v.x > 0) v.x = 0;
    }
    if (r.min_y() < b.min_y()) {
      r.center.y += b.min_y() - r.min_y();
      if (v.y < 0) v.y = 0;
    }
    if (r.max_y() > b.max_y()) {
      r.center.y -= r.max_y() - b.max_y();
      if (v.y > 0) v.y = 0;
    }
  }

  // Move `a` out of `b` along the least-penetrated axis and zero the
  // component of `va` that points into `b`.
  void rect_vs_rect(Rect& a, Vec2& va, const Rect& b) {
    const Vec2 pen = penetration_depths(a, b);
    if (pen.x <= 0.0 || pen.y <= 0.0) return;
    if (pen.x <= pen.y) {
      const double s = a.center.x >= b.center.x ? 1.0 : -1.0;
      a.center.x += s * pen.x;
      if (va.x * s < 0) va.x = 0;
    } else {
      const double s = a.center.y >= b.center.y ? 1.0 : -1.0;
      a.center.y += s * pen.y;
      if (va.y * s < 0) va.y = 0;
    }
  }

  // Two movables: only the intruding side is corrected, so a resting box is
  // never bulldozed through another (boxes do not push boxes).
  void movable_vs_movable(Rect& a, Vec2& va, Rect& b, Vec2& vb) {
    const Vec2 pen = penetration_depths(a, b);
    if (pen.x <= 0.0 || pen.y <= 0.0) return;
    const bool along_x = pen.x <= pen.y;
    const double depth = along_x ? pen.x : pen.y;
    // n points from b towards a along the contact axis.
    const double s = along_x ? (a.center.x >= b.center.x ? 1.0 : -1.0)
                             : (a.center.y >= b.center.y ? 1.0 : -1.0);
    double& pa = along_x ? a.center.x : a.center.y;
    double& pb = along_x ? b.center.x : b.center.y;
    double& van = along_x ? va.x : va.y;
    double& vbn = along_x ? vb.x : vb.y;
    const bool a_into_b = van * s < 0.0;
    const bool b_into_a = vbn * s > 0.0;
    if (a_into_b == b_into_a) {  // head-on, or a static overlap
      pa += s * depth * 0.5;
      pb -= s * depth * 0.5;
      if (a_into_b) van = 0.0;
      if (b_into_a) vbn = 0.0;
    } else if (a_into_b) {
      pa += s * depth;
      van = 0.0;
    } else {
      pb -= s * depth;
      vbn = 0.0;
    }
  }
};

}  // namespace detail

/// PROPAGATOR: semi-implicit Euler over n_substeps internal substeps.
/// Deterministic: a pure function of its inputs.
inline std::pair<EnvState, ContactReport> propagate(const AbstractKnowledge& k,
                                                    const EnvState& e0, const Control& u,
                                                    double dt, int n_substeps = 10) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagation duration must be positive");
  if (!std::isfinite(u.force.x) || !std::isfinite(u.force.y))
    throw std::invalid_argument("non-finite control");
  if (n_substeps < 1) throw std::invalid_argument("n_substeps must be >= 1");

  EnvState e = e0;
  ContactReport report;
  report.displacement.assign(k.bodies.size(), 0.0);
  detail::PhysicsPass pass{k, e, report};

  const double h = dt / n_substeps;
  const double r_robot = k.robot.radius;

  for (int sub = 0; sub < n_substeps; ++sub) {
    // Integrate the robot.
    e.robot.v += u.force * (h / k.robot.mass);
    detail::clamp_speed(e.robot.v, k.robot.v_max);
    e.robot.p += e.robot.v * h;

    // Integrate movable bodies with Coulomb-style friction deceleration.
    for (const auto& spec : k.bodies) {
      if (spec.kind != BodyKind::Movable) continue;
      auto& bs = e.bodies[static_cast<size_t>(spec.id)];
      const double speed = bs.velocity.norm();
      if (speed > 0.0) {
        const double drop = spec.friction * k.gravity * h;
        const double ns = speed > drop ? speed - drop : 0.0;
        bs.velocity = ns > 0.0 ? bs.velocity * (ns / speed) : Vec2{0.0, 0.0};
      }
      detail::clamp_speed(bs.velocity, k.v_body_max);
      bs.position += bs.velocity * h;
    }

    // Contact resolution; a couple of rounds settle chained contacts.
    for (int round = 0; round < 3; ++round) {
      // Robot vs movable bodies: motion transfer along the push normal.
      for (const auto& spec : k.bodies) {
        if (spec.kind != BodyKind::Movable) continue;
        auto& bs = e.bodies[static_cast<size_t>(spec.id)];
        Rect body_rect{bs.position, spec.rect.half};
        const double pen = disc_rect_penetration(e.robot.p, r_robot, body_rect);
        if (pen <= 0.0) continue;

        const Dir face = detail::contact_face(body_rect, e.robot.p);
        if (!report.has_contact(spec.id)) {
          bool inside = false;
          for (const auto& m : spec.mregions)
            if (m.face == face &&
                AbstractKnowledge::mregion_rect(body_rect, m).contains(e.robot.p)) {
              inside = true;
              break;
            }
          report.contacts.push_back({spec.id, face, inside});
        }

        const Vec2 n = unit(opposite(face));  // push direction: into the body
        const double vrn = e.robot.v.dot(n);
        const double vbn = bs.velocity.dot(n);
        if (vrn > vbn) {
          const double dv = vrn - vbn;
          // Body acquires the robot's normal velocity; the reaction slows
          // the robot by the mass ratio (deceleration, never reversal).
          bs.velocity += n * dv;
          double vrn_new = vrn - (spec.mass / k.robot.mass) * dv;
          if (vrn > 0.0 && vrn_new < 0.0) vrn_new = 0.0;
          e.robot.v += n * (vrn_new - vrn);
          detail::clamp_speed(bs.velocity, k.v_body_max);
        }
        // Push the body out of the robot unless that would drive it into
        // another body or out of the workspace; in that case the robot is
        // the one moved back (final pass of this round).
        const Rect moved{bs.position + n * pen, spec.rect.half};
        bool blocked = !k.bounds.contains_rect(moved);
        for (const auto& other : k.bodies) {
          if (blocked) break;
          if (other.id == spec.id) continue;
          const Rect other_rect =
              other.kind == BodyKind::Fixed ? other.rect : e.body_rect(k, other.id);
          const Vec2 p2 = penetration_depths(moved, other_rect);
          blocked = p2.x > 0.0 && p2.y > 0.0;
        }
        if (!blocked) bs.position = moved.center;
      }

      // Movable vs fixed bodies and the workspace boundary.
      for (const auto& spec : k.bodies) {
        if (spec.kind != BodyKind::Movable) continue;
        auto& bs = e.bodies[static_cast<size_t>(spec.id)];
        Rect rect{bs.position, spec.rect.half};
        for (const auto& other : k.bodies)
          if (other.kind == BodyKind::Fixed) pass.rect_vs_rect(rect, bs.velocity, other.rect);
        pass.rect_vs_bounds(rect, bs.velocity);
        bs.position = rect.center;
      }

      // Movable vs movable, each unordered pair once.
      for (size_t i = 0; i < k.bodies.size(); ++i) {
        if (k.bodies[i].kind != BodyKind::Movable) continue;
        for (size_t j = i + 1; j < k.bodies.size(); ++j) {
          if (k.bodies[j].kind != BodyKind::Movable) continue;
          auto& ba = e.bodies[i];
          auto& bb = e.bodies[j];
          Rect ra{ba.position, k.bodies[i].rect.half};
          Rect rb{bb.position, k.bodies[j].rect.half};
          pass.movable_vs_movable(ra, ba.velocity, rb, bb.velocity);
          ba.position = ra.center;
          bb.position = rb.center;
        }
      }

      // Robot vs fixed bodies and the workspace boundary.
      for (const auto& spec : k.bodies) {
        if (spec.kind != BodyKind::Fixed) continue;
        if (disc_rect_penetration(e.robot.p, r_robot, spec.rect) > 0.0) {
          bool known = false;
          for (int id : report.fixed_contacts) known = known || id == spec.id;
          if (!known) report.fixed_contacts.push_back(spec.id);
        }
        pass.robot_vs_rect(spec.rect);
      }
      e.robot.p.x = std::clamp(e.robot.p.x, k.bounds.min_x() + r_robot, k.bounds.max_x() - r_robot);
      e.robot.p.y = std::clamp(e.robot.p.y, k.bounds.min_y() + r_robot, k.bounds.max_y() - r_robot);

      // Finally move the robot out of any movable it still overlaps.
      for (const auto& spec : k.bodies) {
        if (spec.kind != BodyKind::Movable) continue;
        const auto& bs = e.bodies[static_cast<size_t>(spec.id)];
        Rect body_rect{bs.position, spec.rect.half};
        const double pen = disc_rect_penetration(e.robot.p, r_robot, body_rect);
        if (pen <= 0.0) continue;
        const Dir face = detail::contact_face(body_rect, e.robot.p);
        e.robot.p += unit(face) * pen;
      }
    }
  }

  // Bookkeeping for the validity checker.
  for (const auto& spec : k.bodies) {
    const auto& before = e0.bodies[static_cast<size_t>(spec.id)];
    const auto& after = e.bodies[static_cast<size_t>(spec.id)];
    report.displacement[static_cast<size_t>(spec.id)] = (after.position - before.position).norm();
  }
  for (const auto& spec : k.bodies) {
    if (spec.kind != BodyKind::Movable) continue;
    const Rect rect = e.body_rect(k, spec.id);
    for (const auto& other : k.bodies) {
      if (other.id <= spec.id && other.kind == BodyKind::Movable) continue;
      if (other.id == spec.id) continue;
      const Rect other_rect =
          other.kind == BodyKind::Fixed ? other.rect : e.body_rect(k, other.id);
      const Vec2 pen = penetration_depths(rect, other_rect);
      if (pen.x > 0 && pen.y > 0)
        report.max_penetration = std::max(report.max_penetration, std::min(pen.x, pen.y));
    }
    const double rp = disc_rect_penetration(e.robot.p, r_robot, rect);
    if (rp > 0) report.max_penetration = std::max(report.max_penetration, rp);
    if (e.bodies[static_cast<size_t>(spec.id)].velocity.norm() > k.v_body_max + 1e-9)
      report.speed_exceeded = true;
  }
  if (e.robot.v.norm() > k.robot.v_max + 1e-9) report.speed_exceeded = true;

  e.step = e0.step + 1;
  return {e, report};
}

/// VALIDITYCHECKER: accept the propagated state iff it satisfies every
/// constraint the instantiated knowledge imposes.
inline bool validity_check(const AbstractKnowledge& k, const EnvState& e_new,
                           const InstKnowledge& kappa, const ContactReport& report) {
  if (!report.fixed_contacts.empty()) return false;
  if (report.speed_exceeded) return false;
  if (!k.bounds.contains(e_new.robot.p)) return false;

  for (const auto& c : report.contacts) {
    const ManipStatus& st = kappa.status(c.body);
    const Dir push = opposite(c.face);
    if (!st.allows(push)) return false;
    if (!c.robot_inside_mregion) return false;
  }
  for (size_t id = 0; id < report.displacement.size(); ++id) {
    if (k.bodies[id].kind != BodyKind::Movable) continue;
    if (kappa.statuses[id].cls == ManipClass::TemporarilyFixed &&
        report.displacement[id] > 1e-6)
      return false;
  }
  return true;
}

/// Uniform control and repetition-count sampling (Alg. "SampleControlAndSteps").
inline std::pair<Control, int> sample_control(std::mt19937_64& rng, const AbstractKnowledge& k,
                                              const PlannerConfig& cfg) {
  std::uniform_real_distribution<double> f(-k.robot.f_max, k.robot.f_max);
  std::uniform_int_distribution<int> n(cfg.n_min, cfg.n_max);
  Control u;
  u.force.x = f(rng);
  u.force.y = f(rng);
  return {u, n(rng)};
}

}  // namespace cosafe
