#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morandim/dini.hpp"
#include "morandim/scale_function.hpp"
#include "support/oracles.hpp"

using namespace morandim;

namespace {

RealFunction plain(double lo, double hi, std::function<double(double)> f) {
  RealFunction rf;
  rf.domain = {lo, hi};
  rf.eval = std::move(f);
  rf.derivative_hint = [](double) { return std::nullopt; };
  return rf;
}

}  // namespace

TEST_CASE("upper right derivative of smooth functions") {
  // The surrogate takes the max quotient over the mesh, so convex curvature
  // lands exactly one initial step above the true slope.
  auto sq = plain(0.0, 2.0, [](double x) { return x * x; });
  CHECK(dini_upper_right(sq, 0.5) == doctest::Approx(1.0 + 1e-2).epsilon(1e-12));

  auto rational = plain(0.0, 1.0, [](double t) { return t / (1.0 + t); });
  CHECK(dini_upper_right(rational, 0.5) == doctest::Approx(4.0 / 9.0).epsilon(1e-4));
}

TEST_CASE("derivative hint short-circuits the mesh") {
  RealFunction f = plain(0.0, 1.0, [](double t) { return t / (1.0 + t); });
  f.derivative_hint = [](double t) {
    return std::optional<double>((1.0) / ((1.0 + t) * (1.0 + t)));
  };
  CHECK(dini_upper_right(f, 0.5) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("no room to the right raises") {
  auto sq = plain(0.0, 1.0, [](double x) { return x; });
  CHECK_THROWS_WITH_AS(dini_upper_right(sq, 1.0),
                       "no right neighborhood for upper right derivative",
                       std::domain_error);
}

TEST_CASE("kink takes the larger one-sided slope") {
  auto kink = plain(0.0, 2.0, [](double x) { return std::abs(x - 1.0); });
  CHECK(dini_upper_right(kink, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("growth envelope worked values") {
  const auto [lo, hi] = exponential_envelope(0.5, std::log(2.0), 0.0, 1.0);
  CHECK(lo == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(hi == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("growth envelope degenerate and invalid widths") {
  const auto [lo, hi] = exponential_envelope(0.4, 0.0, 0.0, 1.0);
  CHECK(lo == 0.4);
  CHECK(hi == 0.4);
  CHECK_THROWS_AS(exponential_envelope(0.4, -0.1, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("growth envelope stays ordered and inside the band") {
  auto gen = testsupport::rng(2024);
  for (int i = 0; i < 200; ++i) {
    const double lambda = testsupport::uniform(gen, -0.5, 0.5);
    const double alpha = lambda + testsupport::uniform(gen, 0.1, 1.5);
    const double g0 = testsupport::uniform(gen, lambda, alpha);
    const double dx = testsupport::uniform(gen, 0.0, 3.0);
    const auto [lo, hi] = exponential_envelope(g0, dx, lambda, alpha);
    CHECK(lo <= hi);
    CHECK(lo >= lambda - 1e-12);
    CHECK(hi <= alpha + 1e-12);
  }
}

TEST_CASE("profile membership of the bounded-slope families") {
  const ClassReport affine =
      check_profile_admissible(ProfileFunction::affine(0.45, 0.1), 0.0, 1.0, 2000);
  CHECK(affine.member);
  CHECK(affine.violations.empty());

  const ClassReport rational =
      check_profile_admissible(ProfileFunction::extremal(0.0, 1.0, 1.0), 0.0, 1.0, 2000);
  CHECK(rational.member);

  const ClassReport flat =
      check_profile_admissible(ProfileFunction::constant(0.5), 0.0, 1.0, 500);
  CHECK(flat.member);
}

TEST_CASE("identity profile fails the slope constraint") {
  const ClassReport report =
      check_profile_admissible(ProfileFunction::affine(0.0, 1.0), 0.0, 1.0, 2000);
  CHECK_FALSE(report.member);
  bool derivative_seen = false;
  for (const Violation& v : report.violations)
    derivative_seen = derivative_seen || v.constraint == "derivative";
  CHECK(derivative_seen);
}

TEST_CASE("collapsed band admits only its constant") {
  CHECK(check_profile_admissible(ProfileFunction::constant(0.3), 0.3, 0.3, 100).member);
  const ClassReport off =
      check_profile_admissible(ProfileFunction::constant(0.4), 0.3, 0.3, 100);
  CHECK_FALSE(off.member);
  REQUIRE_FALSE(off.violations.empty());
  CHECK(off.violations.front().constraint == "range");
}

TEST_CASE("decreasing table is rejected as non-monotone") {
  const ProfileFunction table = ProfileFunction::table(
      {{{0.1, 0.6}}, {{0.5, 0.5}}, {{1.0, 0.7}}});
  const ClassReport report = check_profile_admissible(table, 0.0, 1.0, 500);
  CHECK_FALSE(report.member);
  bool monotone_seen = false;
  for (const Violation& v : report.violations)
    monotone_seen = monotone_seen || v.constraint == "monotone";
  CHECK(monotone_seen);
}

TEST_CASE("values outside the band are range violations") {
  const ClassReport report =
      check_profile_admissible(ProfileFunction::constant(1.05), 0.0, 1.0, 200);
  CHECK_FALSE(report.member);
  REQUIRE_FALSE(report.violations.empty());
  bool range_seen = false;
  for (const Violation& v : report.violations)
    range_seen = range_seen || v.constraint == "range";
  CHECK(range_seen);
}

TEST_CASE("band parameters may extend beyond [0, d]") {
  CHECK(check_profile_admissible(ProfileFunction::affine(0.45, 0.1), -0.2, 1.3, 500)
            .member);
}

TEST_CASE("assembled scale functions are admissible in their own band") {
  const PiecewiseScaleFunction g = assemble_scale_function(
      ProfileFunction::affine(0.45, 0.1), 0.0, 1.0, {0, 8.0, {}, {}});
  const ClassReport report = check_scale_admissible(g, 0.0, 1.0, 3000);
  CHECK(report.member);
  CHECK(report.violations.empty());
  CHECK(report.margin > 0.0);
}

TEST_CASE("a single hill fails against a narrower band") {
  const PiecewiseScaleFunction bump =
      make_bump(ProfileFunction::affine(0.45, 0.1), 0.25, 0.0, 1.0);
  CHECK(check_scale_admissible(bump, 0.0, 1.0, 1000).member);

  // The climb's slope is 1 - g, too steep once the ceiling drops to 0.8.
  const ClassReport narrow = check_scale_admissible(bump, 0.0, 0.8, 1000);
  CHECK_FALSE(narrow.member);
  bool derivative_seen = false;
  for (const Violation& v : narrow.violations)
    derivative_seen = derivative_seen || v.constraint == "derivative";
  CHECK(derivative_seen);
}

TEST_CASE("a dip through the floor is flagged against a raised floor") {
  const PiecewiseScaleFunction conn = make_connector(0.5, 0.5, 0.35, 0.0, 1.0);
  CHECK(check_scale_admissible(conn, 0.0, 1.0, 1000).member);
  CHECK_FALSE(check_scale_admissible(conn, 0.3, 1.0, 1000).member);
}
