#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "asfilt/cli.hpp"
#include "support.hpp"

using namespace asfilt;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

Rational ratio(unsigned p) { return Rational(static_cast<std::int64_t>(p), static_cast<std::int64_t>(p) - 1); }

Outcome tate_oort_closed_form() {
  Outcome out;
  const double limit = 1.0;
  double slowest = 0;
  for (unsigned p : {2u, 3u, 5u})
    for (unsigned c : {1u, 2u, 3u}) {
      const auto start = Clock::now();
      const Rational expected = ratio(p) * Rational(c);
      auto pres = testsupport::tate_oort(p, c, 2 * p * c + 2);
      json payload = cli::filtration_payload(pres, std::nullopt, false);
      const double t = seconds_since(start);
      slowest = std::max(slowest, t);
      const std::string tag = "p=" + std::to_string(p) + " c=" + std::to_string(c);
      out.require(t < limit, tag + " took " + std::to_string(t) + " s");
      const auto& jumps = payload["jumps"];
      out.require(jumps.size() == 1, tag + ": " + std::to_string(jumps.size()) + " jumps");
      if (jumps.size() != 1) continue;
      out.require(jumps[0]["a"] == to_string(expected), tag + ": jump at " + jumps[0]["a"].get<std::string>());
      out.require(jumps[0]["order_before"] == p && jumps[0]["order_after"] == 1, tag + ": wrong orders");
      // the same jump from the polygon evaluated term by term at the root valuation
      const Rational s(static_cast<std::int64_t>(c), static_cast<std::int64_t>(p) - 1);
      out.require(testsupport::naive_tropical(pres.univariate(), s) == expected, tag + ": tropical mismatch");
      out.require(break_function(pres).order_at(expected) == p, tag + ": G^a at the jump");
      out.require(break_function(pres).order_at(expected + Rational(1, 1000)) == 1, tag + ": G^a past the jump");
    }
  if (out.pass) out.detail = "9 cases, slowest " + std::to_string(slowest) + " s (limit 1 s each)";
  return out;
}

Outcome mu_p_consistency() {
  Outcome out;
  for (unsigned p : {3u, 5u, 7u}) {
    const std::string name = "mu-p" + std::to_string(p) + ".json";
    auto bf = break_function(testsupport::load(name));
    out.require(bf.jumps.size() == 1, name + ": expected one jump");
    if (bf.jumps.size() != 1) continue;
    out.require(bf.jumps[0].a == ratio(p), name + ": jump " + to_string(bf.jumps[0].a));
    out.require(bf.jumps[0].a == hattori_bound(p, 1, 1), name + ": differs from hattori_bound(p,1,1)");
    out.require(bf.jumps[0].order_before == p && bf.jumps[0].order_after == 1, name + ": wrong orders");
  }
  if (out.pass) out.detail = "p = 3, 5, 7 jump at p/(p-1)";
  return out;
}

Outcome linear_bound_property() {
  Outcome out;
  const double limit = 30.0;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  unsigned violations = 0, checked = 0;
  for (unsigned p : {2u, 3u, 5u})
    for (int n = 0; n < 500; ++n) {
      RingModel ring = RingModel::equal_char(p, p, 10, 1 + static_cast<unsigned>(n % 2));
      auto pres = testsupport::random_good_shape(ring, 4, 6, rng);
      auto report = verify_bound(pres);
      ++checked;
      out.require(report.good_shape, "generator produced a bad shape");
      if (report.max_jump > Rational(p, p - 1) * report.degree) ++violations;
    }
  out.require(violations == 0, std::to_string(violations) + " violations");

  auto bad = verify_bound(testsupport::load("bad-shape.json"));
  out.require(bad.max_jump == Rational(5) && bad.bound == Rational(9, 2), "bad-shape: max_jump " +
                                                                             to_string(bad.max_jump) + ", bound " +
                                                                             to_string(bad.bound));
  out.require(!bad.good_shape && !bad.pass, "bad-shape: not flagged");
  const double t = seconds_since(start);
  out.require(t < limit, "took " + std::to_string(t) + " s");
  if (out.pass)
    out.detail = std::to_string(checked) + " presentations, 0 violations, bad-shape 5 > 9/2, " + std::to_string(t) +
                 " s (limit 30 s)";
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  const double limit = 60.0;
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  const EnumerationOptions opts{1'000'000, 1};
  unsigned built = 0, compared = 0;
  while (built < 50) {
    const unsigned p = std::array{2u, 3u, 5u}[built % 3];
    const unsigned m = 1 + static_cast<unsigned>(rng() % 2);
    const unsigned digits = std::array{12u, 9u, 7u}[built % 3];
    RingModel ring = RingModel::equal_char(p, p, digits, m);
    const unsigned k = 1 + static_cast<unsigned>(rng() % 3);
    std::vector<testsupport::SplitRoot> roots;
    std::set<std::pair<unsigned, unsigned>> used;
    unsigned index_sum = 0, index_max = 0;
    for (unsigned i = 0; i < k; ++i) {
      testsupport::SplitRoot r{static_cast<std::uint8_t>(1 + rng() % (p - 1)), 1 + static_cast<unsigned>(rng() % 3)};
      if (!used.insert({r.residue, r.index}).second) continue;
      roots.push_back(r);
      index_sum += r.index;
      index_max = std::max(index_max, r.index);
    }
    // every root and every difference of roots must resolve below the artifact threshold
    if (index_sum + index_max >= digits) continue;
    ++built;
    auto f = testsupport::split_poly(ring, roots);
    auto pres = Presentation::monogenic(f);
    auto zs = zero_set(pres, ring, opts);
    auto bf = break_function(pres);
    out.require(zs.points.size() == roots.size() + 1, "zero set has " + std::to_string(zs.points.size()) + " points");

    std::vector<Rational> grid;
    const Rational first = bf.jumps.front().a, last = bf.jumps.back().a;
    grid.push_back(first / Rational(2));
    grid.push_back(first);
    grid.push_back(bf.jumps.size() > 1 ? (first + bf.jumps[1].a) / Rational(2) : first + Rational(1, 7));
    grid.push_back(last);
    grid.push_back(last + Rational(1, 5));
    for (const auto& a : grid) {
      auto at = subgroup_at(pres, a);
      std::size_t inside = 0;
      for (const auto& x : zs.points)
        if (min_valuation(x) >= at.disk_radius) ++inside;
      ++compared;
      out.require(inside == at.order && at.order == bf.order_at(a),
                  "a = " + to_string(a) + ": " + std::to_string(inside) + " zeros vs order " +
                      std::to_string(at.order));
    }
  }
  const double t = seconds_since(start);
  out.require(t < limit, "took " + std::to_string(t) + " s");
  if (out.pass)
    out.detail = std::to_string(built) + " presentations, " + std::to_string(compared) + " a-values, 0 mismatches, " +
                 std::to_string(t) + " s (limit 60 s)";
  return out;
}

void check_h_preimage(Outcome& out, const HPreimageReport& r, const std::string& tag) {
  out.require(r.theorem_applies, tag + ": a not above the bound");
  out.require(r.resolved > 0, tag + ": no resolved point");
  out.require(r.nonzero_zeros.empty(), tag + ": " + std::to_string(r.nonzero_zeros.size()) + " nonzero zeros");
  out.require(r.pass, tag + ": h-preimage failed");
}

void check_disk_image(Outcome& out, const DiskImageReport& r, const std::string& tag) {
  out.require(r.inclusion_failures == 0 && r.composite_mismatches == 0, tag + ": inclusion");
  out.require(r.det_estimate_checked > 0 && r.det_estimate_failures == 0, tag + ": det(U) estimate");
  out.require(r.tail_estimate_checked > 0 && r.tail_estimate_failures == 0, tag + ": higher-order estimate");
  out.require(r.exclusion_failures == 0, tag + ": exclusion");
  out.require(r.pass, tag + ": disk-image failed");
}

Outcome finite_precision_machinery() {
  Outcome out;
  const double limit = 120.0;
  const auto start = Clock::now();
  struct Case {
    std::string file;
    Rational a;
    RingModel target;
  };
  const std::vector<Case> cases{
      {"tate-oort-p3.json", Rational(8, 5), RingModel::equal_char(3, 3, 10, 5)},
      {"diagonal-p3.json", Rational(16, 5), RingModel::equal_char(3, 3, 10, 2)},
  };
  std::uint64_t points = 0;
  for (const auto& c : cases) {
    auto pres = testsupport::load(c.file);
    auto h = verify_h_preimage(pres, c.a, c.target);
    check_h_preimage(out, h, c.file);
    auto disk = verify_disk_image(pres, c.a, c.target);
    check_disk_image(out, disk, c.file);
    points += h.enumerated + disk.inclusion_checked;

    // the command line at its default model and budget
    for (const char* cmd : {"h-preimage", "disk-image"}) {
      std::ostringstream sink, err;
      const int code = cli::dispatch({"oracle", cmd, "-i", testsupport::data_path(c.file), "--a", to_string(c.a),
                                      "--json"},
                                     sink, err);
      out.require(code == cli::kExitOk, c.file + ": oracle " + cmd + " exited " + std::to_string(code));
    }
  }
  const double t = seconds_since(start);
  out.require(t < limit, "took " + std::to_string(t) + " s");
  if (out.pass)
    out.detail = "tate-oort at 8/5 and diagonal at 16/5, " + std::to_string(points) + " points, " +
                 std::to_string(t) + " s (limit 120 s)";
  return out;
}

Outcome sharpness() {
  Outcome out;
  for (unsigned p : {2u, 3u, 5u})
    for (unsigned c : {1u, 2u, 3u}) {
      auto pres = testsupport::tate_oort(p, c, 2 * p * c + 2);
      const Rational b = bound(pres);
      const std::string tag = "p=" + std::to_string(p) + " c=" + std::to_string(c);
      for (const auto& a : {b, b - Rational(1, 7), b / Rational(2), Rational(1, 100)})
        out.require(subgroup_at(pres, a).order == p, tag + ": order below at a = " + to_string(a));
      for (const auto& a : {b + Rational(1, 1000), b + Rational(1, 7), b + Rational(1), b * Rational(2)})
        out.require(subgroup_at(pres, a).order == 1, tag + ": order above at a = " + to_string(a));
    }

  // the disk of radius t_a counted directly, with roots of valuation 1/(p-1)
  for (unsigned p : {2u, 3u, 5u}) {
    auto pres = testsupport::tate_oort(p, 1, 4);
    const unsigned m = p - 1;
    RingModel target = RingModel::equal_char(p, p, 2 * m + 2 * (p == 2), m);
    auto zs = zero_set(pres, target);
    const Rational b = bound(pres);
    for (const auto& [a, expected] : {std::pair{b, p}, std::pair{b + Rational(1, 1000), 1u}}) {
      const Rational radius = subgroup_at(pres, a).disk_radius;
      unsigned inside = 0;
      for (const auto& x : zs.points)
        if (min_valuation(x) >= radius) ++inside;
      out.require(inside == expected, "p=" + std::to_string(p) + ": " + std::to_string(inside) +
                                          " zeros in the disk at a = " + to_string(a));
    }
  }
  if (out.pass) out.detail = "order p at a <= bound, 1 above, zero sets agree";
  return out;
}

Outcome canonical_calculators() {
  Outcome out;
  auto l1 = level1_params(5, 1, Rational(1, 10));
  out.require(l1.valid && l1.lower == Rational(1, 8) && l1.upper == Rational(9, 8) &&
                  l1.deg_quotient == Rational(1, 10),
              "level1_params(5,1,1/10)");
  auto ln = leveln_params(5, 1, 2, Rational(1, 20));
  out.require(ln.valid && ln.lower == Rational(3, 8) && ln.upper == Rational(19, 16) &&
                  ln.deg_quotient == Rational(3, 10),
              "leveln_params(5,1,2,1/20)");

  unsigned points = 0;
  for (unsigned p : {3u, 5u, 7u, 11u, 13u})
    for (unsigned e : {1u, 2u})
      for (unsigned n : {1u, 2u})
        for (std::int64_t k = 0; k < 10; ++k) {
          const Rational h(k, 37);
          auto r = leveln_params(p, e, n, h);
          std::int64_t pn = 1;
          for (unsigned i = 0; i < n; ++i) pn *= p;
          const Rational deg = Rational(static_cast<std::int64_t>(e) * (pn - 1), static_cast<std::int64_t>(p) - 1) * h;
          out.require(r.deg_quotient == deg, "deg_quotient at " + to_string(h));
          out.require(r.lower == ratio(p) * r.deg_quotient, "lower endpoint at " + to_string(h));
          ++points;
        }
  out.require(points == 200, "grid size");

  out.require(!level1_params(3, 1, Rational(1, 3)).valid, "h = 1/3 accepted at p=3, n=1");
  out.require(level1_params(3, 1, Rational(33, 100)).valid, "h = 33/100 rejected at p=3, n=1");
  out.require(!level1_params(5, 1, Rational(1, 2)).valid, "h = 1/2 accepted at p=5, n=1");
  out.require(!leveln_params(5, 1, 2, Rational(1, 10)).valid, "h = 1/10 accepted at p=5, n=2");
  out.require(leveln_params(5, 1, 2, Rational(9, 100)).valid, "h = 9/100 rejected at p=5, n=2");
  if (out.pass) out.detail = "reference values exact, 200-point grid, strict boundaries";
  return out;
}

Outcome smith_form() {
  Outcome out;
  std::mt19937_64 rng(8);
  const std::vector<RingModel> models{RingModel::equal_char(2, 2, 10, 1), RingModel::equal_char(3, 9, 8, 2),
                                      RingModel::equal_char(5, 5, 9, 1), RingModel::padic(3, 10),
                                      RingModel::padic(7, 8)};
  unsigned checked = 0, drawn = 0;
  while (checked < 100 && drawn < 10'000) {
    const auto& ring = models[drawn++ % models.size()];
    const std::size_t size = 1 + static_cast<std::size_t>(rng() % 4);
    Matrix m(ring, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        m(i, j) = testsupport::random_element(ring, rng, static_cast<unsigned>(rng() % 3));
    auto dv = determinant(m).valuation();
    if (!dv.is_exact()) continue;
    ++checked;
    auto ev = elementary_divisor_valuations(m);
    Rational total(0);
    for (const auto& v : ev) total += v;
    out.require(total == dv.value, "sum " + to_string(total) + " vs v(det) " + to_string(dv.value));
    out.require(ev == testsupport::determinantal_snf(m), "disagrees with determinantal divisors");
  }
  out.require(checked == 100, "only " + std::to_string(checked) + " matrices with exact determinant");
  if (out.pass) out.detail = "100 matrices, sums equal v(det), determinantal divisors agree";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Tate-Oort closed form", tate_oort_closed_form},
      {"mu_p consistency", mu_p_consistency},
      {"linear bound property suite", linear_bound_property},
      {"oracle equivalence", oracle_equivalence},
      {"finite-precision h-preimage and disk image", finite_precision_machinery},
      {"sharpness witness", sharpness},
      {"canonical calculators", canonical_calculators},
      {"Smith-form cross-check", smith_form},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
