#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "nfwpt/scenario.hpp"

using namespace nfwpt;

namespace {

GeometryParams preset(double frequency) {
  GeometryParams p;
  p.frequency_hz = frequency;
  return p;
}

}  // namespace

TEST_CASE("build_geometry derives the element grid from the aperture") {
  // floor(2 D / lambda) with lambda = c / f, c = 2.998e8.
  const SystemGeometry g28 = build_geometry(preset(28e9));
  CHECK(g28.wavelength() == doctest::Approx(0.010707142857142858).epsilon(1e-15));
  CHECK(g28.wavenumber() == doctest::Approx(kTwoPi / g28.wavelength()).epsilon(1e-15));
  CHECK(g28.microstrips() == 56);
  CHECK(g28.elements_per_microstrip() == 56);
  CHECK(g28.element_count() == 3136);
  CHECK(g28.spacing() == doctest::Approx(0.005353571428571429).epsilon(1e-15));

  const SystemGeometry g12 = build_geometry(preset(1.2e9));
  CHECK(g12.wavelength() == doctest::Approx(0.24983333333333332).epsilon(1e-15));
  CHECK(g12.microstrips() == 2);
  CHECK(g12.element_count() == 4);
}

TEST_CASE("wavelength equal to twice the aperture gives a single centered element") {
  GeometryParams p;
  p.aperture_m = 0.3;
  p.frequency_hz = kSpeedOfLight / (2.0 * p.aperture_m);
  const SystemGeometry g = build_geometry(p);
  CHECK(g.element_count() == 1);
  CHECK(g.element_position(0, 0) == Point3{0.0, 0.0, 0.0});
}

TEST_CASE("build_geometry rejects apertures without room for an element") {
  GeometryParams p;
  p.frequency_hz = 0.4e9;  // lambda = 0.75 m > 2 D
  CHECK_THROWS_AS(build_geometry(p), std::invalid_argument);
  p.frequency_hz = -1.0;
  CHECK_THROWS_AS(build_geometry(p), std::invalid_argument);
  p = GeometryParams{};
  p.aperture_m = 0.0;
  CHECK_THROWS_AS(build_geometry(p), std::invalid_argument);
  p = GeometryParams{};
  p.spacing_fraction = 0.0;
  CHECK_THROWS_AS(build_geometry(p), std::invalid_argument);
}

TEST_CASE("element grid is planar, evenly spaced and centered") {
  for (double f : {28e9, 10e9, 1.2e9}) {
    const SystemGeometry g = build_geometry(preset(f));
    std::set<std::pair<long long, long long>> keys;
    const auto key = [&](const Point3& p) {
      return std::pair{std::llround(p.x / g.spacing() * 2.0), std::llround(p.y / g.spacing() * 2.0)};
    };
    for (std::size_t n = 0; n < g.element_count(); ++n) {
      const Point3 p = g.element_position(n);
      CHECK(p.z == 0.0);
      keys.insert(key(p));
    }
    // Negating both offsets maps the set onto itself.
    for (std::size_t n = 0; n < g.element_count(); ++n) {
      const Point3 p = g.element_position(n);
      CHECK(keys.count(key(Point3{-p.x, -p.y, 0.0})) == 1);
    }
    for (std::size_t i = 0; i + 1 < g.microstrips(); ++i) {
      CHECK(g.element_position(i + 1, 0).x - g.element_position(i, 0).x ==
            doctest::Approx(g.spacing()).epsilon(1e-12));
    }
    for (std::size_t l = 0; l + 1 < g.elements_per_microstrip(); ++l) {
      CHECK(g.element_position(0, l + 1).y - g.element_position(0, l).y ==
            doctest::Approx(g.spacing()).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_geometry is deterministic") {
  const SystemGeometry a = build_geometry(preset(28e9));
  const SystemGeometry b = build_geometry(preset(28e9));
  for (std::size_t n = 0; n < a.element_count(); n += 17)
    CHECK(a.element_position(n) == b.element_position(n));
  CHECK(a.wavelength() == b.wavelength());
}

TEST_CASE("region boundaries") {
  const SystemGeometry g28 = build_geometry(preset(28e9));
  const SystemGeometry g12 = build_geometry(preset(1.2e9));
  CHECK(fraunhofer_distance(g28) == doctest::Approx(16.811207471647762).epsilon(1e-12));
  CHECK(fresnel_limit(g28) == doctest::Approx(0.4555896104235878).epsilon(1e-12));
  CHECK(fraunhofer_distance(g12) == doctest::Approx(0.7204803202134756).epsilon(1e-12));
  CHECK(fresnel_limit(g12) == doctest::Approx(0.1594342230809553).epsilon(1e-12));
  CHECK(fresnel_limit(g28) < fraunhofer_distance(g28));
  CHECK(fresnel_limit(g12) < fraunhofer_distance(g12));

  SUBCASE("D = lambda gives d_F = 2 lambda") {
    GeometryParams p;
    p.aperture_m = 0.3;
    p.frequency_hz = kSpeedOfLight / 0.3;
    const SystemGeometry g = build_geometry(p);
    CHECK(fraunhofer_distance(g) == doctest::Approx(2.0 * g.wavelength()).epsilon(1e-14));
  }
  SUBCASE("D = 2 lambda gives a Fresnel limit of lambda 2^(1/3)") {
    GeometryParams p;
    p.aperture_m = 0.3;
    p.frequency_hz = kSpeedOfLight / 0.15;
    const SystemGeometry g = build_geometry(p);
    CHECK(fresnel_limit(g) == doctest::Approx(g.wavelength() * std::cbrt(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("classify_region") {
  const SystemGeometry g28 = build_geometry(preset(28e9));
  const SystemGeometry g12 = build_geometry(preset(1.2e9));
  CHECK(classify_region(g28, {0, 0, 1.51}) == FieldRegion::RadiatingNearField);
  CHECK(classify_region(g12, {0, 0, 1.51}) == FieldRegion::FarField);
  CHECK(classify_region(g28, {0, 0, 0.1}) == FieldRegion::Reactive);
  CHECK(classify_region(g28, {0, 0, fraunhofer_distance(g28)}) == FieldRegion::RadiatingNearField);
  CHECK(classify_region(g28, {0, 0, fresnel_limit(g28)}) == FieldRegion::RadiatingNearField);
  CHECK(to_string(FieldRegion::FarField) == "far-field");
}

TEST_CASE("scenario validation") {
  Scenario s{build_geometry(GeometryParams{}), {{{0, 0, 1.51}, 1.0}}, 1.0, 0.5};
  CHECK_NOTHROW(validate(s));
  auto bad = s;
  bad.receivers.clear();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = s;
  bad.receivers[0].weight = -0.1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = s;
  bad.receivers[0].position.z = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = s;
  bad.zeta = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = s;
  bad.p_max_w = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
