#include <doctest.h>

#include "error.hpp"
#include "model.hpp"

using namespace fpv;

TEST_CASE("channel order matches the declared 21-channel layout") {
  CHECK(channel_index(PointKind{JunctionType{JunctionFamily::I, 0}}) == 0);
  CHECK(channel_index(PointKind{JunctionType{JunctionFamily::I, 3}}) == 3);
  CHECK(channel_index(PointKind{JunctionType{JunctionFamily::L, 0}}) == 4);
  CHECK(channel_index(PointKind{JunctionType{JunctionFamily::T, 0}}) == 8);
  CHECK(channel_index(PointKind{JunctionType{JunctionFamily::X, 0}}) == 12);
  CHECK(channel_index(PointKind{IconCorner::NW}) == 13);
  CHECK(channel_index(PointKind{IconCorner::SE}) == 16);
  CHECK(channel_index(PointKind{OpeningEnd::Left}) == 17);
  CHECK(channel_index(PointKind{OpeningEnd::Down}) == 20);
}

TEST_CASE("channel_index is a bijection over all 21 channels") {
  for (int c = 0; c < kNumChannels; ++c) {
    CHECK(channel_index(kind_from_channel(c)) == c);
  }
  CHECK_THROWS_AS(kind_from_channel(21), Error);
  CHECK_THROWS_AS(kind_from_channel(-1), Error);
}

TEST_CASE("junction arms round-trip through junction_from_arms") {
  for (int c = 0; c < 13; ++c) {
    JunctionType t = std::get<JunctionType>(kind_from_channel(c));
    unsigned mask = 0;
    for (Dir d : junction_arms(t)) mask |= 1u << static_cast<int>(d);
    JunctionType back;
    REQUIRE(junction_from_arms(mask, &back));
    CHECK(back == t);
  }
  JunctionType t;
  CHECK_FALSE(junction_from_arms(0, &t));
  // Straight pass-through (E+W, N+S) has no junction type.
  CHECK_FALSE(junction_from_arms(0b0101, &t));
  CHECK_FALSE(junction_from_arms(0b1010, &t));
}

TEST_CASE("wall polygon area equals centerline length times width") {
  Wall w{{10, 10}, {60, 10}, 4};
  auto poly = w.polygon();
  CHECK(poly[0] == Point{10, 8});
  CHECK(poly[1] == Point{60, 8});
  CHECK(poly[2] == Point{60, 12});
  CHECK(poly[3] == Point{10, 12});
  double area = std::abs(signed_area(std::span<const Point>(poly.data(), poly.size())));
  CHECK(area == doctest::Approx(w.length() * w.width).epsilon(1e-9));

  Wall v{{20, 5}, {20, 95}, 3.5};
  auto vp = v.polygon();
  double varea = std::abs(signed_area(std::span<const Point>(vp.data(), vp.size())));
  CHECK(varea == doctest::Approx(v.length() * v.width).epsilon(1e-9));
}

TEST_CASE("empty model validates cleanly") {
  FloorplanModel m;
  m.width = 100;
  m.height = 100;
  CHECK(validate_model(m).ok());
}

TEST_CASE("diagonal room edge is a violation") {
  FloorplanModel m;
  m.width = 100;
  m.height = 100;
  Room r;
  r.polygon = {{10, 10}, {90, 20}, {90, 60}, {10, 60}};
  r.label = RoomClass::Kitchen;
  m.rooms.push_back(r);
  ValidationReport rep = validate_model(m);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].code == "room-edge-not-axis-aligned");
  CHECK(rep.violations[0].element == "room[0]");
}

TEST_CASE("opening with no covering wall is a violation") {
  FloorplanModel m;
  m.width = 100;
  m.height = 100;
  m.openings.push_back({{50, 10}, {70, 10}, 4, IconClass::Window});
  ValidationReport rep = validate_model(m);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].code == "opening-outside-walls");

  // The same opening inside a wall passes.
  m.walls.push_back({{40, 10}, {80, 10}, 4});
  CHECK(validate_model(m).ok());
}

TEST_CASE("room label restrictions") {
  FloorplanModel m;
  m.width = 50;
  m.height = 50;
  Room r;
  r.polygon = {{10, 10}, {40, 10}, {40, 40}, {10, 40}};
  r.label = RoomClass::Wall;
  m.rooms.push_back(r);
  CHECK_FALSE(validate_model(m).ok());
  m.rooms[0].label = RoomClass::Background;
  CHECK_FALSE(validate_model(m).ok());
  m.rooms[0].label = RoomClass::Bath;
  CHECK(validate_model(m).ok());
}

TEST_CASE("self-intersecting room polygon is caught") {
  FloorplanModel m;
  m.width = 50;
  m.height = 50;
  Room r;
  r.polygon = {{10, 10}, {40, 10}, {10, 40}, {40, 40}};  // bowtie
  r.label = RoomClass::Bath;
  m.rooms.push_back(r);
  ValidationReport rep = validate_model(m);
  bool found = false;
  for (const Violation& v : rep.violations) found = found || v.code == "room-not-simple";
  CHECK(found);
}

TEST_CASE("icon and opening label rules") {
  FloorplanModel m;
  m.width = 50;
  m.height = 50;
  m.icons.push_back({{{10, 10}, {20, 20}}, IconClass::Window});
  ValidationReport rep = validate_model(m);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].code == "icon-label-opening");

  m.icons.clear();
  m.walls.push_back({{10, 30}, {40, 30}, 4});
  m.openings.push_back({{15, 30}, {25, 30}, 4, IconClass::Toilet});
  rep = validate_model(m);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].code == "opening-label-invalid");
}

TEST_CASE("geometry outside the frame is flagged") {
  FloorplanModel m;
  m.width = 50;
  m.height = 50;
  m.walls.push_back({{10, 10}, {80, 10}, 2});
  ValidationReport rep = validate_model(m);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].code == "wall-outside-frame");
}

TEST_CASE("class names round-trip and codes are frozen") {
  CHECK(static_cast<int>(RoomClass::Background) == 0);
  CHECK(static_cast<int>(RoomClass::Wall) == 2);
  CHECK(static_cast<int>(RoomClass::Kitchen) == 3);
  CHECK(static_cast<int>(RoomClass::OtherRooms) == 11);
  CHECK(static_cast<int>(IconClass::Empty) == 0);
  CHECK(static_cast<int>(IconClass::Window) == 1);
  CHECK(static_cast<int>(IconClass::Door) == 2);
  CHECK(static_cast<int>(IconClass::Chimney) == 10);
  for (int c = 0; c < kNumRoomClasses; ++c) {
    RoomClass out;
    REQUIRE(room_class_from_name(room_class_name(static_cast<RoomClass>(c)), &out));
    CHECK(static_cast<int>(out) == c);
  }
  for (int c = 0; c < kNumIconClasses; ++c) {
    IconClass out;
    REQUIRE(icon_class_from_name(icon_class_name(static_cast<IconClass>(c)), &out));
    CHECK(static_cast<int>(out) == c);
  }
  RoomClass rc;
  CHECK_FALSE(room_class_from_name("Banana", &rc));
}
