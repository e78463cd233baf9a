#include <catch_amalgamated.hpp>

#include <random>

#include "cosafe/physics.hpp"

using namespace cosafe;

namespace {

AbstractKnowledge empty_world() {
  AbstractKnowledge k;
  k.bounds = Rect::from_min_max({0, 0}, {10, 10});
  k.robot.start = {5, 5};
  k.robot.radius = 0.3;
  k.robot.mass = 1.0;
  k.robot.f_max = 5.0;
  k.robot.v_max = 2.0;
  return k;
}

BodySpec box(int id, Rect r, double mass = 1.0, double mu = 0.3,
             std::vector<Dir> faces = {Dir::PosX, Dir::NegX, Dir::PosY, Dir::NegY}) {
  BodySpec b;
  b.id = id;
  b.name = "box" + std::to_string(id);
  b.kind = BodyKind::Movable;
  b.rect = r;
  b.mass = mass;
  b.friction = mu;
  for (Dir f : faces) b.mregions.push_back({f, 0.61});
  return b;
}

BodySpec wall(int id, Rect r) {
  BodySpec b;
  b.id = id;
  b.name = "wall" + std::to_string(id);
  b.kind = BodyKind::Fixed;
  b.rect = r;
  return b;
}

bool bitwise_equal(const EnvState& a, const EnvState& b) {
  if (a.bodies.size() != b.bodies.size()) return false;
  for (size_t i = 0; i < a.bodies.size(); ++i) {
    if (!(a.bodies[i].position == b.bodies[i].position)) return false;
    if (!(a.bodies[i].velocity == b.bodies[i].velocity)) return false;
  }
  return a.robot.p == b.robot.p && a.robot.v == b.robot.v;
}

}  // namespace

TEST_CASE("propagation is a pure function of its inputs") {
  AbstractKnowledge k = empty_world();
  k.bodies.push_back(box(0, Rect{{6, 5}, {0.4, 0.4}}));
  k.bodies.push_back(box(1, Rect{{3, 3}, {0.3, 0.3}}));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(-k.robot.f_max, k.robot.f_max);
  std::vector<Control> controls;
  for (int i = 0; i < 300; ++i) controls.push_back({{f(rng), f(rng)}});

  auto run = [&] {
    EnvState e = EnvState::initial(k);
    for (const auto& u : controls) e = propagate(k, e, u, 0.05).first;
    return e;
  };
  const EnvState a = run();
  const EnvState b = run();
  REQUIRE(bitwise_equal(a, b));
}

TEST_CASE("propagate validates its arguments") {
  const AbstractKnowledge k = empty_world();
  const EnvState e = EnvState::initial(k);
  REQUIRE_THROWS_AS(propagate(k, e, Control{{1, 0}}, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(propagate(k, e, Control{{1, 0}}, -0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(propagate(k, e, Control{{1.0 / 0.0, 0}}, 0.05), std::invalid_argument);
  REQUIRE_THROWS_AS(propagate(k, e, Control{{1, 0}}, 0.05, 0), std::invalid_argument);
}

TEST_CASE("robot speed never exceeds its bound") {
  const AbstractKnowledge k = empty_world();
  EnvState e = EnvState::initial(k);
  for (int i = 0; i < 100; ++i) {
    e = propagate(k, e, Control{{k.robot.f_max, k.robot.f_max}}, 0.05).first;
    REQUIRE(e.robot.v.norm() <= k.robot.v_max + 1e-9);
  }
  REQUIRE(e.robot.v.norm() == Catch::Approx(k.robot.v_max));
}

TEST_CASE("free sliding is passive: speeds never increase without control") {
  AbstractKnowledge k = empty_world();
  k.bodies.push_back(box(0, Rect{{5, 7}, {0.4, 0.4}}, 1.0, 0.2));
  EnvState e = EnvState::initial(k);
  e.bodies[0].velocity = {1.2, 0.4};
  e.robot.v = {0.5, -0.3};
  double body_speed = e.bodies[0].velocity.norm();
  for (int i = 0; i < 200; ++i) {
    e = propagate(k, e, Control{{0, 0}}, 0.05).first;
    const double s = e.bodies[0].velocity.norm();
    REQUIRE(s <= body_speed + 1e-12);
    REQUIRE(e.robot.v.norm() <= 0.5831 + 1e-9);  // hypot(0.5, 0.3)
    body_speed = s;
  }
  REQUIRE(body_speed == 0.0);  // Coulomb friction brings boxes to rest
}

TEST_CASE("higher friction shortens the slide") {
  auto slide_distance = [](double mu) {
    AbstractKnowledge k = empty_world();
    k.bodies.push_back(box(0, Rect{{2, 5}, {0.4, 0.4}}, 1.0, mu));
    EnvState e = EnvState::initial(k);
    e.bodies[0].velocity = {1.5, 0};
    for (int i = 0; i < 400; ++i) e = propagate(k, e, Control{{0, 0}}, 0.05).first;
    REQUIRE(e.bodies[0].velocity.norm() == 0.0);
    return e.bodies[0].position.x - 2.0;
  };
  const double d1 = slide_distance(0.1);
  const double d2 = slide_distance(0.2);
  const double d3 = slide_distance(0.4);
  REQUIRE(d1 > d2);
  REQUIRE(d2 > d3);
  REQUIRE(d3 > 0.0);
  // Kinematic check: distance ~ v^2 / (2 mu g).
  REQUIRE(d2 == Catch::Approx(1.5 * 1.5 / (2 * 0.2 * 9.81)).margin(0.05));
}

TEST_CASE("the robot pushing a box transfers motion and reports the contact") {
  AbstractKnowledge k = empty_world();
  k.bodies.push_back(box(0, Rect{{6, 5}, {0.4, 0.4}}));
  EnvState e = EnvState::initial(k);
  e.robot.p = {5.2, 5};
  e.robot.v = {1.0, 0};

  bool contacted = false;
  for (int i = 0; i < 40; ++i) {
    auto [e_new, report] = propagate(k, e, Control{{3, 0}}, 0.05);
    e = e_new;
    for (const auto& c : report.contacts) {
      REQUIRE(c.body == 0);
      REQUIRE(c.face == Dir::NegX);  // hit from the left
      REQUIRE(c.robot_inside_mregion);
      contacted = true;
    }
    REQUIRE(report.max_penetration <= kPenetrationTolerance);
  }
  REQUIRE(contacted);
  REQUIRE(e.bodies[0].position.x > 6.05);   // the box moved
  REQUIRE(e.bodies[0].position.y == Catch::Approx(5.0).margin(1e-9));
}

TEST_CASE("boxes do not push boxes") {
  AbstractKnowledge k = empty_world();
  k.bodies.push_back(box(0, Rect{{4, 5}, {0.4, 0.4}}));
  k.bodies.push_back(box(1, Rect{{5.2, 5}, {0.4, 0.4}}));
  EnvState e = EnvState::initial(k);
  e.robot.p = {9, 9};               // robot well clear of both boxes
  e.bodies[0].velocity = {2.0, 0};  // box 0 slides into resting box 1

  const Vec2 b1_start = e.bodies[1].position;
  for (int i = 0; i < 100; ++i) {
    auto [e_new, report] = propagate(k, e, Control{{0, 0}}, 0.05);
    e = e_new;
    REQUIRE(report.max_penetration <= kPenetrationTolerance);
  }
  // The intruder stopped at the contact; the resting box never moved.
  REQUIRE(e.bodies[1].position.x == Catch::Approx(b1_start.x).margin(1e-9));
  REQUIRE(e.bodies[0].velocity.norm() == 0.0);
  REQUIRE(e.bodies[0].position.x <= 4.4 + 1e-6);
}

TEST_CASE("a box pressed against a wall stays outside it") {
  AbstractKnowledge k = empty_world();
  k.bodies.push_back(box(0, Rect{{8.8, 5}, {0.4, 0.4}}));
  k.bodies.push_back(wall(1, Rect::from_min_max({9.4, 0}, {10, 10})));
  EnvState e = EnvState::initial(k);
  e.robot.p = {8.0, 5};

  for (int i = 0; i < 60; ++i) {
    auto [e_new, report] = propagate(k, e, Control{{5, 0}}, 0.05);
    e = e_new;
    REQUIRE(report.max_penetration <= kPenetrationTolerance);
    // Box never enters the wall.
    REQUIRE(e.bodies[0].position.x + 0.4 <= 9.4 + kPenetrationTolerance);
  }
  // The robot did not tunnel through the box either.
  REQUIRE(e.robot.p.x + k.robot.radius <= e.bodies[0].position.x - 0.4 + kPenetrationTolerance);
}

TEST_CASE("randomized steps keep penetration within tolerance") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(1.0, 9.0);
  std::uniform_real_distribution<double> f(-5.0, 5.0);

  for (int world = 0; world < 40; ++world) {
    AbstractKnowledge k = empty_world();
    k.bodies.push_back(box(0, Rect{{pos(rng), pos(rng)}, {0.4, 0.4}}));
    k.bodies.push_back(box(1, Rect{{pos(rng), pos(rng)}, {0.3, 0.3}}));
    k.bodies.push_back(wall(2, Rect{{pos(rng), pos(rng)}, {0.5, 0.5}}));
    EnvState e = EnvState::initial(k);
    e.robot.p = {pos(rng), pos(rng)};
    for (int step = 0; step < 100; ++step) {
      auto [e_new, report] = propagate(k, e, Control{{f(rng), f(rng)}}, 0.05);
      e = e_new;
      REQUIRE(report.max_penetration <= kPenetrationTolerance);
      REQUIRE(k.bounds.contains(e.robot.p));
    }
  }
}

TEST_CASE("validity check enforces every knowledge constraint") {
  AbstractKnowledge k = empty_world();
  // Pushable only towards +y (its -y mRegion is declared and free).
  k.bodies.push_back(box(0, Rect{{5, 7}, {0.4, 0.4}}, 1.0, 0.3, {Dir::NegY}));
  k.bodies.push_back(box(1, Rect{{2, 2}, {0.3, 0.3}}, 1.0, 0.3, {}));  // no mRegions
  const EnvState e = EnvState::initial(k);
  const InstKnowledge kappa = infer_initial(k, e);
  REQUIRE(kappa.status(0).cls == ManipClass::FreelyMovable);
  REQUIRE(kappa.status(1).cls == ManipClass::TemporarilyFixed);

  ContactReport clean;
  clean.displacement.assign(k.bodies.size(), 0.0);

  SECTION("clean report passes") { REQUIRE(validity_check(k, e, kappa, clean)); }
  SECTION("touching a fixed body fails") {
    ContactReport r = clean;
    r.fixed_contacts.push_back(7);
    REQUIRE_FALSE(validity_check(k, e, kappa, r));
  }
  SECTION("speed violation fails") {
    ContactReport r = clean;
    r.speed_exceeded = true;
    REQUIRE_FALSE(validity_check(k, e, kappa, r));
  }
  SECTION("robot outside the workspace fails") {
    EnvState out = e;
    out.robot.p = {11, 5};
    REQUIRE_FALSE(validity_check(k, out, kappa, clean));
  }
  SECTION("allowed push from inside the mRegion passes") {
    ContactReport r = clean;
    r.contacts.push_back({0, Dir::NegY, true});  // pushing +y
    REQUIRE(validity_check(k, e, kappa, r));
  }
  SECTION("push along a disallowed direction fails") {
    ContactReport r = clean;
    r.contacts.push_back({0, Dir::PosY, true});  // pushing -y
    REQUIRE_FALSE(validity_check(k, e, kappa, r));
  }
  SECTION("push started outside the mRegion fails") {
    ContactReport r = clean;
    r.contacts.push_back({0, Dir::NegY, false});
    REQUIRE_FALSE(validity_check(k, e, kappa, r));
  }
  SECTION("displacing a temporarily fixed body fails") {
    ContactReport r = clean;
    r.displacement[1] = 1e-3;
    REQUIRE_FALSE(validity_check(k, e, kappa, r));
  }
  SECTION("sub-tolerance displacement of a fixed-class body passes") {
    ContactReport r = clean;
    r.displacement[1] = 1e-9;
    REQUIRE(validity_check(k, e, kappa, r));
  }
}

TEST_CASE("control sampling respects the bounds and the seed") {
  const AbstractKnowledge k = empty_world();
  PlannerConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 9;

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto [u, n] = sample_control(rng, k, cfg);
    REQUIRE(std::abs(u.force.x) <= k.robot.f_max);
    REQUIRE(std::abs(u.force.y) <= k.robot.f_max);
    REQUIRE(n >= cfg.n_min);
    REQUIRE(n <= cfg.n_max);
  }

  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    auto [ua, na] = sample_control(a, k, cfg);
    auto [ub, nb] = sample_control(b, k, cfg);
    REQUIRE(ua.force == ub.force);
    REQUIRE(na == nb);
  }
}
