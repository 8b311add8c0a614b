#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftlsin/generators.hpp"
#include "ftlsin/powerlaw.hpp"
#include "ftlsin/walker.hpp"
#include "test_util.hpp"

using namespace ftlsin;

namespace {

// Direct least-squares of log(v) on log(rank) over a given prefix,
// independent of the library implementation.
std::pair<double, double> regress_loglog(std::vector<double> v,
                                         std::size_t prefix) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  auto n = static_cast<double>(prefix);
  for (std::size_t i = 0; i < prefix; ++i) {
    double x = std::log(static_cast<double>(i + 1));
    double y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double r = (n * sxy - sx * sy) /
             std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return {slope, r * r};
}

}  // namespace

TEST_CASE("degenerate inputs are reported as undefined") {
  CHECK_FALSE(rank_frequency_fit({}).defined);
  CHECK_FALSE(rank_frequency_fit({3.0}).defined);
  CHECK_FALSE(rank_frequency_fit({2.0, 2.0, 2.0, 2.0}).defined);
  CHECK_FALSE(rank_frequency_fit({0.0, 0.0, 5.0}).defined);  // one nonzero
}

TEST_CASE("an exact power law is recovered with R^2 = 1") {
  std::vector<double> v;
  for (int r = 1; r <= 200; ++r) v.push_back(1000.0 * std::pow(r, -1.5));
  PowerLawFit fit = rank_frequency_fit(v);
  REQUIRE(fit.defined);
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zeros are dropped and order does not matter") {
  std::vector<double> v;
  for (int r = 1; r <= 100; ++r) v.push_back(500.0 * std::pow(r, -2.0));
  auto base = rank_frequency_fit(v);
  std::vector<double> shuffled(v.rbegin(), v.rend());
  shuffled.insert(shuffled.begin(), {0.0, 0.0, 0.0});
  auto noisy = rank_frequency_fit(shuffled);
  CHECK(noisy.slope == doctest::Approx(base.slope).epsilon(1e-12));
  CHECK(noisy.points_used == base.points_used);
}

TEST_CASE("the prefix covers exactly the top 95 percent of total mass") {
  // 20 at weight 19 each (=380) plus 20 at weight 1 (=20); total 400,
  // 95% = 380, so exactly the first 20 points are used.
  std::vector<double> v(20, 19.0);
  v.insert(v.end(), 20, 1.0);
  // Perturb so the fit is defined.
  v[0] = 19.5;
  PowerLawFit fit = rank_frequency_fit(v);
  REQUIRE(fit.defined);
  CHECK(fit.points_used == 20);
}

TEST_CASE("fit matches a direct regression oracle") {
  auto rng = std::mt19937_64(17);
  std::vector<double> v;
  for (int r = 1; r <= 300; ++r) {
    double noise = 0.9 + 0.2 * (static_cast<double>(rng()) /
                                static_cast<double>(rng.max()));
    v.push_back(2000.0 * std::pow(r, -1.2) * noise);
  }
  PowerLawFit fit = rank_frequency_fit(v);
  REQUIRE(fit.defined);
  auto [slope, r2] = regress_loglog(v, fit.points_used);
  CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(r2).epsilon(1e-10));
}

TEST_CASE("preferential-attachment degrees and walk visits are heavy-tailed") {
  Graph g = barabasi_albert(2000, 2, 5);
  std::vector<double> degrees;
  for (NodeId u = 0; u < static_cast<NodeId>(g.node_count()); ++u)
    degrees.push_back(static_cast<double>(g.neighbors(u).size()));
  PowerLawFit deg_fit = rank_frequency_fit(degrees);
  REQUIRE(deg_fit.defined);
  CHECK(deg_fit.slope < -0.2);

  WalkParams wp;
  wp.length = 20;
  wp.walks_per_node = 2;
  wp.seed = 3;
  WalkSet walks = generate_walk_set(g, wp, 4);
  auto hist = walk_frequency_histogram(walks);
  std::vector<double> freqs;
  for (const auto& [node, count] : hist)
    freqs.push_back(static_cast<double>(count));
  PowerLawFit walk_fit = rank_frequency_fit(freqs);
  REQUIRE(walk_fit.defined);
  CHECK(walk_fit.slope < -0.2);
  CHECK(walk_fit.r_squared > 0.5);
}

TEST_CASE("csv output lists rank and frequency in descending order") {
  test_util::TempFile f("", "plcsv");
  write_rank_frequency_csv({1.0, 5.0, 3.0}, f.path());
  auto text = test_util::slurp(f.path());
  CHECK(text.find("rank,frequency") == 0);
  CHECK(text.find("1,5") != std::string::npos);
  CHECK(text.find("3,1") != std::string::npos);
}
