#include <doctest.h>

#include <cmath>

#include "hpmc/conditions.hpp"

using namespace hpmc;

TEST_CASE("domain trichotomy on the unit disk") {
  const GridDomain d = build_domain(DiskSpec{{0, 0}, 1.0}, 1.0 / 128);

  const ConditionReport r0 = classify_domain(d, constant_field(d, 0.0));
  CHECK(r0.classification == DomainClass::non_extremal);
  CHECK(r0.integral_H == 0.0);
  CHECK(r0.perimeter == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(r0.delta_hat == 1.0);

  const ConditionReport r2 = classify_domain(d, constant_field(d, 2.0));
  CHECK(r2.classification == DomainClass::extremal);
  CHECK(r2.integral_H == doctest::Approx(2 * M_PI).epsilon(2e-3));
  CHECK(r2.delta_hat <= r2.extremal_tol);

  const ConditionReport r3 = classify_domain(d, constant_field(d, 3.0));
  CHECK(r3.classification == DomainClass::infeasible);
}

TEST_CASE("integral scaling") {
  const GridDomain d = build_domain(DiskSpec{{0.3, 0.1}, 0.7}, 1.0 / 64);
  const ScalarField h1 = make_field(
      d, [](double x, double y) { return 0.4 + x - 0.3 * y * y; });
  ScalarField h2 = h1;
  h2.values *= 2.0;  // doubling commutes with rounding
  const ConditionReport a = classify_domain(d, h1);
  const ConditionReport b = classify_domain(d, h2);
  CHECK(b.integral_H == 2.0 * a.integral_H);
}

TEST_CASE("serrin margins") {
  const GridDomain d1 = build_domain(DiskSpec{{0, 0}, 1.0}, 1.0 / 64);
  const SerrinResult a = serrin_check(d1, constant_field(d1, 0.5), true);
  CHECK(a.pass);
  CHECK(a.min_margin == doctest::Approx(0.5).epsilon(1e-12));

  const SerrinResult strict = serrin_check(d1, constant_field(d1, 1.0), true);
  const SerrinResult weak = serrin_check(d1, constant_field(d1, 1.0), false);
  CHECK_FALSE(strict.pass);
  CHECK(weak.pass);

  const GridDomain d2 = build_domain(DiskSpec{{0, 0}, 0.5}, 1.0 / 128);
  const SerrinResult c = serrin_check(d2, constant_field(d2, 1.5), true);
  CHECK(c.pass);
  CHECK(c.min_margin == doctest::Approx(0.5).epsilon(1e-12));

  // monotone: decreasing |H| pointwise never flips pass -> fail
  const ScalarField big = make_field(
      d1, [](double x, double y) { return 0.9 * std::cos(x * y); });
  ScalarField small = big;
  small.values *= 0.5;
  if (serrin_check(d1, big, true).pass) CHECK(serrin_check(d1, small, true).pass);
  CHECK(serrin_check(d1, small, true).min_margin >=
        serrin_check(d1, big, true).min_margin);
}

TEST_CASE("cheeger bounds") {
  const GridDomain d1 = build_domain(DiskSpec{{0, 0}, 1.0}, 1.0 / 64);
  const CheegerBound b1 = cheeger_bound(d1);
  CHECK(b1.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b1.method == CheegerMethod::exact_disk);

  const GridDomain d2 = build_domain(DiskSpec{{0, 0}, 0.5}, 1.0 / 128);
  CHECK(cheeger_bound(d2).value == doctest::Approx(4.0).epsilon(1e-12));

  const GridDomain sq = build_domain(RectSpec{{0, 0}, {1, 1}}, 1.0 / 64);
  const CheegerBound bs = cheeger_bound(sq);
  CHECK(bs.method == CheegerMethod::heuristic_scan);
  CHECK(bs.value <= 4.0 + 1e-12);
  CHECK(bs.value >= 3.0);

  CHECK(cheeger_bound(sq, 3.77).method == CheegerMethod::user_supplied);
  CHECK(cheeger_bound(sq, 3.77).value == 3.77);
}

TEST_CASE("delta_hat over the scan family") {
  const GridDomain d = build_domain(DiskSpec{{0, 0}, 1.0}, 1.0 / 64);
  const ScalarField H = make_field(
      d, [](double x, double y) { return 0.8 * x + 0.2 * std::sin(3 * y); });
  const ConditionReport r = classify_domain(d, H);
  CHECK(r.delta_hat >= 0.0);
  CHECK(r.delta_hat <= 1.0);
  CHECK(r.scan_family_size > 10);
  // the full domain is part of the family
  CHECK(1.0 - std::abs(r.integral_H) / r.perimeter >= r.delta_hat - 1e-12);
}
