#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vru/embed.hpp"
#include "vru/error.hpp"

using namespace vru;

namespace {

std::vector<double> sinusoid(std::size_t n, double period, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
  return x;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  for (auto& v : x) v = nd(gen);
  return x;
}

std::vector<std::vector<double>> points(const EmbeddedTrajectory& t) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < t.size(); ++k) out.emplace_back(t.point(k).begin(), t.point(k).end());
  return out;
}

}  // namespace

TEST_CASE("embed examples") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  CHECK(points(embed(x, 2, 1)) == std::vector<std::vector<double>>{{1, 2}, {2, 3}, {3, 4}, {4, 5}});
  for (std::size_t delay : {1u, 3u, 7u}) {
    const auto t = embed(x, 1, delay);
    CHECK(t.size() == 5);
    CHECK(std::vector<double>(t.coords().begin(), t.coords().end()) == x);
  }
  std::vector<double> ten = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto t = embed(ten, 3, 2);
  REQUIRE(t.size() == 6);
  CHECK(points(t).front() == std::vector<double>{1, 3, 5});
  CHECK(points(t).back() == std::vector<double>{6, 8, 10});
}

TEST_CASE("embed matches index arithmetic on random inputs") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + gen() % 6;
    const std::size_t delay = 1 + gen() % 12;
    const std::size_t n = (m - 1) * delay + 2 + gen() % 80;
    const auto x = noise(n, gen());
    const auto t = embed(x, m, delay);
    CHECK(t.size() == n - (m - 1) * delay);
    CHECK(points(t) == oracle::embed(x, m, delay));
  }
}

TEST_CASE("embed rejects short series") {
  CHECK_THROWS_AS(embed(std::vector<double>{1, 2, 3}, 3, 1), Error);
  CHECK_THROWS_AS(embed(std::vector<double>{1, 2, 3}, 2, 0), Error);
}

TEST_CASE("default embeddings fit a 100-sample window") {
  const auto acc = default_embedding(Sensor::accelerometer);
  const auto rot = default_embedding(Sensor::rotation_vector);
  CHECK(acc.delay == 10);
  CHECK(acc.dimension == 4);
  CHECK(acc.threshold == 0.9);
  CHECK(rot.delay == 30);
  CHECK(rot.dimension == 3);
  CHECK(rot.threshold == 0.01);
  CHECK(default_embedding(Sensor::gyroscope).delay == 10);
  CHECK(acc.valid_for(100));
  CHECK(rot.valid_for(100));
  CHECK_FALSE(rot.valid_for(61));
}

TEST_CASE("ami at lag 0 is the binned entropy") {
  const auto x = noise(500, 1);
  CHECK(ami(x, 0) == binned_entropy(x));
  CHECK(ami(x, 0) == doctest::Approx(oracle::marginal_entropy(x, 16)).epsilon(1e-12));
}

TEST_CASE("ami of independent uniform noise is near zero") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> ud;
  std::vector<double> x(10000);
  for (auto& v : x) v = ud(gen);
  CHECK(ami(x, 5) < 0.1);
}

TEST_CASE("ami curve of a sinusoid matches the histogram oracle") {
  const auto x = sinusoid(1000, 50);
  const auto curve = ami_curve(x, 40);
  for (std::size_t lag = 1; lag <= 40; ++lag) {
    CHECK(std::abs(curve[lag - 1] - oracle::histogram_mi(x, lag, 16)) < 1e-9);
  }
}

TEST_CASE("ami is symmetric under time reversal and non-negative") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = noise(50 + gen() % 200, gen());
    for (std::size_t i = 1; i < x.size(); ++i) x[i] += 0.8 * x[i - 1];
    std::vector<double> r(x.rbegin(), x.rend());
    for (std::size_t lag : {0u, 1u, 3u, 10u}) {
      CHECK(ami(x, lag) == ami(r, lag));
      CHECK(ami(x, lag) >= -1e-12);
    }
  }
}

TEST_CASE("ami error cases") {
  CHECK_THROWS_AS(ami(std::vector<double>(20, 3.0), 1), Error);
  try {
    ami(std::vector<double>(20, 3.0), 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
  }
  CHECK_THROWS_AS(ami(std::vector<double>{1, 2, 3}, 2), Error);
}

TEST_CASE("select_delay") {
  CHECK(select_delay(std::vector<double>{3, 2, 1, 2, 3}) == 3);
  CHECK(select_delay(std::vector<double>{5, 4, 3, 2, 1}) == 5);
  CHECK(select_delay(std::vector<double>{5, 2, 2, 4}) == 2);
  CHECK(select_delay(std::vector<double>{1.5}) == 1);
  CHECK(select_delay(std::vector<double>{1, 2, 3}) == 1);
  CHECK_THROWS_AS(select_delay(std::vector<double>{}), Error);
}

TEST_CASE("select_delay is invariant under positive affine maps") {
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> level(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> curve(2 + gen() % 30);
    for (auto& v : curve) v = level(gen) * 0.25;  // coarse grid keeps distinct values distinct
    const double a = 0.5 + static_cast<double>(gen() % 100) / 10.0;
    const double b = static_cast<double>(gen() % 100) - 50.0;
    auto mapped = curve;
    for (auto& v : mapped) v = a * v + b;
    CHECK(select_delay(curve) == select_delay(mapped));
  }
}

TEST_CASE("fnn on a sinusoid embedded at a quarter period") {
  const auto x = sinusoid(400, 40, 0.3);
  const double f1 = fnn_fraction(x, 1, 10);
  const double f2 = fnn_fraction(x, 2, 10);
  CHECK(f2 < 0.05);
  CHECK(f2 <= f1);
  CHECK(f2 == doctest::Approx(oracle::fnn(x, 2, 10, 10.0, 2.0)).epsilon(1e-12));
  CHECK(f1 == doctest::Approx(oracle::fnn(x, 1, 10, 10.0, 2.0)).epsilon(1e-12));
  const auto choice = select_dimension(x, 10, 6);
  CHECK(choice.dimension == 2);
  CHECK_FALSE(choice.capped);
}

TEST_CASE("fnn on white noise never unfolds") {
  // Under the default tolerances the fraction dips to roughly 0.1-0.2 at
  // dimensions 3-5, but it never reaches the 0.05 acceptance level.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = noise(500, seed);
    for (std::size_t m = 1; m <= 5; ++m) {
      const double f = fnn_fraction(x, m, 1);
      CHECK(f > 0.1);
      CHECK(f == doctest::Approx(oracle::fnn(x, m, 1, 10.0, 2.0)).epsilon(1e-12));
    }
    const auto choice = select_dimension(x, 1, 6);
    CHECK(choice.dimension == 6);
    CHECK(choice.capped);
  }
}

TEST_CASE("fnn on a ramp needs one dimension") {
  std::vector<double> ramp(200);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
  CHECK(select_dimension(ramp, 3, 5).dimension == 1);
}

TEST_CASE("fnn boundary: exactly two extendable points") {
  for (std::size_t m : {1u, 2u, 3u}) {
    const std::size_t delay = 4;
    const auto x = noise(m * delay + 2, 77 + m);
    const double f = fnn_fraction(x, m, delay);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK_THROWS_AS(fnn_fraction(noise(m * delay + 1, 5), m, delay), Error);
  }
}

TEST_CASE("fnn degenerate inputs") {
  CHECK_THROWS_AS(fnn_fraction(std::vector<double>(50, 1.0), 2, 1), Error);
  // the only two extendable points, (x0, x2) and (x1, x3), coincide
  const std::vector<double> x = {1, 1, 1, 1, 5, 7};
  try {
    fnn_fraction(x, 2, 2);
    FAIL("expected degenerate input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
  }
}

TEST_CASE("calibrate_channel averages and is idempotent") {
  const auto w = sinusoid(100, 40, 0.3);
  std::vector<std::vector<double>> one = {w};
  std::vector<std::vector<double>> two = {w, w};
  CalibrationConfig cfg;
  cfg.max_lag = 30;
  cfg.max_dim = 4;
  const auto a = calibrate_channel(one, cfg);
  const auto b = calibrate_channel(two, cfg);
  const auto curve = ami_curve(w, 30);
  CHECK(a.mean_ami == curve);
  CHECK(a.delay == select_delay(curve));
  CHECK(a.dimension.dimension == select_dimension(w, a.delay, 4).dimension);
  CHECK(b.mean_ami == a.mean_ami);
  CHECK(b.delay == a.delay);
  CHECK(b.dimension.dimension == a.dimension.dimension);
  CHECK(b.dimension.fnn_by_dim == a.dimension.fnn_by_dim);
}

TEST_CASE("calibrate_channel skips constant windows and averages the rest") {
  const auto w1 = sinusoid(100, 40, 0.3);
  const auto w2 = noise(100, 8);
  std::vector<std::vector<double>> windows = {w1, std::vector<double>(100, 2.0), w2};
  CalibrationConfig cfg;
  cfg.max_lag = 20;
  cfg.max_dim = 3;
  const auto cal = calibrate_channel(windows, cfg);
  CHECK(cal.windows_used == 2);
  const auto c1 = ami_curve(w1, 20), c2 = ami_curve(w2, 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(cal.mean_ami[i] == doctest::Approx((c1[i] + c2[i]) / 2).epsilon(1e-14));

  std::vector<std::vector<double>> flat = {std::vector<double>(100, 1.0)};
  CHECK_THROWS_AS(calibrate_channel(flat, cfg), Error);
}

TEST_CASE("calibrate keys results by channel") {
  std::map<ChannelId, std::vector<std::vector<double>>> data;
  data[{Sensor::gyroscope, Axis::x}] = {sinusoid(100, 40, 0.3)};
  CalibrationConfig cfg;
  cfg.max_lag = 20;
  cfg.max_dim = 4;
  const auto out = calibrate(data, cfg);
  REQUIRE(out.size() == 1);
  CHECK(out.count({Sensor::gyroscope, Axis::x}) == 1);
}
