#include <gtest/gtest.h>

#include "support.hpp"

using namespace asfilt;
using testsupport::load;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return errc::invalid_argument;
}

RingModel eq3(unsigned digits, unsigned m) { return RingModel::equal_char(3, 3, digits, m); }

}  // namespace

TEST(Tubular, KnownExamples) {
  auto pres = load("tate-oort-p3.json");
  Point x{eq3(4, 2).uniformizer()};
  EXPECT_EQ(tubular_membership(pres, x, Rational(3, 2)), Membership::Member);
  EXPECT_EQ(tubular_membership(pres, x, Rational(2)), Membership::Member);
  Point y{eq3(8, 4).uniformizer()};
  EXPECT_EQ(tubular_membership(pres, y, Rational(3, 2)), Membership::NonMember);
  Point z{eq3(4, 2).monomial(1, 3)};  // v = 3/2, f(z) = u^9 - u^5: v = 5/2, censored at horizon 2
  EXPECT_EQ(tubular_membership(pres, z, Rational(5, 2)), Membership::Undecidable);
}

TEST(PointSet, CardinalityAndShards) {
  PointSet set = PointSet::disk(eq3(6, 2), 2, Rational(3, 2));
  EXPECT_EQ(set.first_index(), 3u);
  EXPECT_EQ(set.cardinality(), 729u);
  std::set<Point> seen;
  for (unsigned shard = 0; shard < 4; ++shard)
    set.for_each(shard, 4, [&](std::span<const TruncElement> x) {
      EXPECT_GE(min_valuation(x), Rational(3, 2));
      EXPECT_TRUE(seen.insert(Point(x.begin(), x.end())).second);
    });
  EXPECT_EQ(seen.size(), 729u);
  EXPECT_EQ(PointSet::disk(RingModel::equal_char(2, 4, 6, 1), 1, Rational(2)).cardinality(), 256u);
}

TEST(ZeroSet, TateOortRamified) {
  auto zs = zero_set(testsupport::tate_oort(3, 1, 3), eq3(6, 2));
  ASSERT_EQ(zs.points.size(), 3u);
  EXPECT_EQ(zs.artifact_threshold, Rational(2));
  std::vector<std::string> names;
  for (const auto& p : zs.points) names.push_back(format_element(p[0]));
  EXPECT_EQ(names, (std::vector<std::string>{"0", "u", "2*u"}));
}

TEST(ZeroSet, DiagonalProduct) {
  auto zs = zero_set(load("diagonal-p3.json"), eq3(6, 2));
  EXPECT_EQ(zs.points.size(), 9u);
  EXPECT_EQ(zs.dimension, 2u);
}

TEST(ZeroSet, Guards) {
  EXPECT_EQ(code_of([] { zero_set(load("etale.json"), RingModel::padic(5, 2)); }), errc::model_mismatch);
  EXPECT_EQ(code_of([] { zero_set(load("tate-oort-p3.json"), eq3(9, 4)); }), errc::model_mismatch);
  EXPECT_EQ(code_of([] { zero_set(load("diagonal-p3.json"), eq3(14, 2), EnumerationOptions{1000, 1}); }),
            errc::enumeration_too_large);
}

// Zeros inside the disk of radius t_a are exactly G^a.
TEST(ZeroSet, AgreesWithSubgroupOrders) {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 12; ++n) {
    const unsigned p = std::array{2u, 3u}[n % 2];
    const unsigned m = 1 + static_cast<unsigned>(rng() % 2);
    RingModel base = RingModel::equal_char(p, p, 9, m);
    // distinct roots, so that zero classes and multiplicities agree
    std::vector<testsupport::SplitRoot> roots{{1, 1}, {1, 2}};
    if (p == 3 && rng() % 2) roots[1] = {2, 1};
    auto pres = Presentation::monogenic(testsupport::split_poly(base, roots));
    RingModel target = RingModel::equal_char(p, p, 9, m);
    auto zs = zero_set(pres, target);
    auto bf = break_function(pres);
    for (std::int64_t k = 1; k <= 8; ++k) {
      Rational a(k, 2);
      auto at = subgroup_at(pres, a);
      std::size_t inside = 0;
      for (const auto& x : zs.points)
        if (min_valuation(x) >= at.disk_radius) ++inside;
      EXPECT_EQ(inside, at.order) << "a = " << a;
      EXPECT_EQ(at.order, bf.order_at(a));
    }
  }
}

TEST(AdjugateTransform, KnownExamples) {
  auto to = load("tate-oort-p3.json");
  auto t = adjugate_transform(to);
  ASSERT_EQ(t.h.size(), 1u);
  EXPECT_EQ(t.h[0].terms(), to.equations()[0].terms());
  EXPECT_TRUE(t.shape_preserved);

  auto diag = load("diagonal-p3.json");
  auto td = adjugate_transform(diag);
  const auto det = td.linear.det;
  EXPECT_EQ(format_element(det), "u^2");
  EXPECT_EQ(td.h[0].coefficient({1, 0}), det);
  EXPECT_EQ(td.h[1].coefficient({0, 1}), det);
  EXPECT_TRUE(td.h[0].coefficient({0, 1}).is_zero());
  EXPECT_TRUE(td.shape_preserved);

  EXPECT_FALSE(adjugate_transform(load("bad-shape.json")).shape_preserved);
}

TEST(AdjugateTransform, CompositeMatchesPointwise) {
  std::mt19937_64 rng(42);
  RingModel ring = eq3(6, 1);
  MultiPoly f1(ring, 2), f2(ring, 2);
  f1.set({1, 0}, parse_element(ring, "u"));
  f1.set({0, 1}, parse_element(ring, "u^2"));
  f1.set({3, 0}, ring.one());
  f1.set({1, 2}, parse_element(ring, "1 + u"));
  f2.set({1, 0}, parse_element(ring, "u"));
  f2.set({0, 1}, parse_element(ring, "2*u"));
  f2.set({0, 3}, ring.one());
  Presentation pres(ring, {"X", "Y"}, {f1, f2});
  auto t = adjugate_transform(pres);
  for (int n = 0; n < 200; ++n) {
    Point x{testsupport::random_element(ring, rng, 1), testsupport::random_element(ring, rng, 1)};
    Point y = detail::apply_linear(t.linear.v, x);
    for (unsigned i = 0; i < 2; ++i) EXPECT_EQ(t.h[i](x), pres.equations()[i](y));
  }
}

TEST(HPreimage, TateOortAboveBound) {
  auto r = verify_h_preimage(load("tate-oort-p3.json"), Rational(8, 5), eq3(10, 5));
  EXPECT_TRUE(r.theorem_applies);
  EXPECT_EQ(r.radius, Rational(3, 5));
  EXPECT_EQ(r.enumerated, 2187u);
  EXPECT_EQ(r.artifacts, 243u);
  EXPECT_GT(r.resolved, 0u);
  EXPECT_TRUE(r.nonzero_zeros.empty());
  EXPECT_TRUE(r.pass);
  auto sharded = verify_h_preimage(load("tate-oort-p3.json"), Rational(8, 5), eq3(10, 5), {10'000'000, 3});
  EXPECT_EQ(sharded.artifacts, r.artifacts);
  EXPECT_EQ(sharded.resolved, r.resolved);
}

TEST(HPreimage, BelowBoundFindsRoots) {
  auto r = verify_h_preimage(load("tate-oort-p3.json"), Rational(5, 4), eq3(4, 2));
  EXPECT_FALSE(r.theorem_applies);
  EXPECT_EQ(r.nonzero_zeros.size(), 2u);
  EXPECT_TRUE(r.pass);
}

TEST(HPreimage, DiagonalAboveBound) {
  auto r = verify_h_preimage(load("diagonal-p3.json"), Rational(16, 5), eq3(7, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.resolved, 0u);
}

TEST(HPreimage, VacuousRunFails) {
  // every point of the disk lies past the artifact threshold
  auto r = verify_h_preimage(load("diagonal-p3.json"), Rational(16, 5), eq3(7, 2));
  EXPECT_EQ(r.resolved, 0u);
  EXPECT_FALSE(r.pass);
}

TEST(DiskImage, TateOort) {
  auto r = verify_disk_image(load("tate-oort-p3.json"), Rational(8, 5), eq3(10, 5));
  EXPECT_EQ(r.epsilon, Rational(1, 30));
  EXPECT_EQ(r.inclusion_checked, 2187u);
  EXPECT_EQ(r.inclusion_failures, 0u);
  EXPECT_EQ(r.composite_mismatches, 0u);
  EXPECT_GT(r.det_estimate_checked, 0u);
  EXPECT_EQ(r.det_estimate_failures, 0u);
  EXPECT_EQ(r.tail_estimate_failures, 0u);
  EXPECT_EQ(r.exclusion_samples, 200u);
  EXPECT_EQ(r.exclusion_failures, 0u);
  EXPECT_TRUE(r.pass);
}

TEST(DiskImage, DiagonalAndGuards) {
  auto diag = load("diagonal-p3.json");
  EXPECT_TRUE(verify_disk_image(diag, Rational(16, 5), eq3(7, 1)).pass);
  auto to = load("tate-oort-p3.json");
  EXPECT_EQ(code_of([&] { verify_disk_image(to, Rational(3, 2), eq3(10, 5)); }), errc::invalid_argument);
  DiskImageOptions opts;
  opts.epsilon = Rational(1, 15);  // the admissible range is (0, 1/15)
  EXPECT_EQ(code_of([&] { verify_disk_image(to, Rational(8, 5), eq3(10, 5), opts); }), errc::no_valid_epsilon);
  EXPECT_EQ(code_of([&] { verify_disk_image(to, Rational(8, 5), eq3(7, 5)); }), errc::precision_insufficient);
}
