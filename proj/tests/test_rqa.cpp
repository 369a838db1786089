#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vru/error.hpp"
#include "vru/rqa.hpp"

using namespace vru;

namespace {

RecurrencePlot from_rows(const std::vector<std::string>& rows) {
  std::vector<std::uint8_t> cells;
  for (const auto& r : rows)
    for (char c : r) cells.push_back(c == '1');
  return RecurrencePlot(rows.size(), std::move(cells));
}

RecurrencePlot all_true(std::size_t n) { return RecurrencePlot(n, std::vector<std::uint8_t>(n * n, 1)); }

RecurrencePlot loi_only(std::size_t n) {
  std::vector<std::uint8_t> cells(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) cells[i * n + i] = 1;
  return RecurrencePlot(n, std::move(cells));
}

std::vector<std::vector<bool>> as_bool(const RecurrencePlot& rp) {
  std::vector<std::vector<bool>> out(rp.size(), std::vector<bool>(rp.size()));
  for (std::size_t i = 0; i < rp.size(); ++i)
    for (std::size_t j = 0; j < rp.size(); ++j) out[i][j] = rp.at(i, j);
  return out;
}

RecurrencePlot random_rp(std::size_t n, double density, std::mt19937_64& gen) {
  std::bernoulli_distribution coin(density);
  std::vector<std::uint8_t> cells(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cells[i * n + i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) cells[i * n + j] = cells[j * n + i] = coin(gen);
  }
  return RecurrencePlot(n, std::move(cells));
}

std::vector<double> sinusoid(std::size_t n, double period) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + 0.3);
  return x;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  for (auto& v : x) v = nd(gen);
  return x;
}

// Radius whose recurrence rate is closest to `rr` (distance quantile).
double radius_for_rate(const EmbeddedTrajectory& t, double rr) {
  std::vector<double> d;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < t.dimension(); ++c) s += std::pow(t.point(i)[c] - t.point(j)[c], 2);
      d.push_back(std::sqrt(s));
    }
  std::sort(d.begin(), d.end());
  return d[static_cast<std::size_t>(rr * static_cast<double>(d.size()))];
}

}  // namespace

TEST_CASE("recurrence plot saturates and empties") {
  const auto t = embed(noise(40, 1), 3, 2);
  const auto full = recurrence_plot(t, 1e6);
  CHECK(full.recurrences() == t.size() * t.size());
  const auto loi = recurrence_plot(t, 1e-9);
  CHECK(loi.recurrences() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(loi.at(i, i));
}

TEST_CASE("recurrence plot matches the double-loop oracle bit for bit") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = noise(10 + 2 * 3, gen());
    const auto t = embed(x, 3, 3);
    REQUIRE(t.size() == 10);
    const double radius = 0.5 + static_cast<double>(gen() % 300) / 100.0;
    CHECK(as_bool(recurrence_plot(t, radius)) == oracle::recurrence(oracle::embed(x, 3, 3), radius));
  }
}

TEST_CASE("recurrence plot is symmetric and monotone in the threshold") {
  const auto t = embed(noise(120, 4), 4, 5);
  double prev = 0.0;
  for (double r : {0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
    const auto rp = recurrence_plot(t, r);
    for (std::size_t i = 0; i < rp.size(); ++i)
      for (std::size_t j = 0; j < rp.size(); ++j) CHECK(rp.at(i, j) == rp.at(j, i));
    const double rr = rqa_features(rp).rr;
    CHECK(rr >= prev);
    prev = rr;
  }
}

TEST_CASE("recurrence plot input checks") {
  const auto t = embed(noise(20, 5), 2, 1);
  CHECK_THROWS_AS(recurrence_plot(t, 0.0), Error);
  const auto bad = embed(std::vector<double>{1.0, NAN, 2.0, 3.0}, 1, 1);
  CHECK_THROWS_AS(recurrence_plot(bad, 1.0), Error);
  CHECK_THROWS_AS(from_rows({"10", "11"}), Error);
  CHECK_THROWS_AS(from_rows({"01", "10"}), Error);
}

TEST_CASE("relative threshold mode scales with the largest distance") {
  const auto t = embed(noise(60, 6), 2, 3);
  CHECK(recurrence_plot(t, 1.0, ThresholdMode::fraction_of_max).recurrences() == t.size() * t.size());
  const auto half = recurrence_plot(t, 0.5, ThresholdMode::fraction_of_max);
  CHECK(half.recurrences() < t.size() * t.size());
}

TEST_CASE("diagonal line histograms") {
  CHECK(diagonal_lines(loi_only(7), 1).empty());
  const std::size_t n = 9;
  const auto full = diagonal_lines(all_true(n), 2);
  REQUIRE(full.size() == n - 2);
  for (std::size_t len = 2; len < n; ++len) CHECK(full.at(len) == 2);
  CHECK(diagonal_lines(all_true(n), 1).at(1) == 2);

  // one run of length 3 on the second superdiagonal, plus its mirror
  const auto rp = from_rows({"101000",
                             "010100",
                             "101010",
                             "010100",
                             "001010",
                             "000001"});
  CHECK(diagonal_lines(rp, 2) == LineHistogram{{3, 2}});
}

TEST_CASE("vertical line histograms") {
  CHECK(vertical_lines(loi_only(6), 2).empty());
  CHECK(vertical_lines(loi_only(6), 1) == LineHistogram{{1, 6}});
  CHECK(vertical_lines(all_true(5), 2) == LineHistogram{{5, 5}});
  // column 2 holds rows 1-3; columns 1 and 3 pick up length-2 runs through the diagonal
  const auto rp = from_rows({"10000",
                             "01100",
                             "01110",
                             "00110",
                             "00001"});
  CHECK(vertical_lines(rp, 2) == LineHistogram{{2, 2}, {3, 1}});
  CHECK(vertical_lines(rp, 3) == LineHistogram{{3, 1}});
}

TEST_CASE("rqa features of saturated and empty plots") {
  const std::size_t n = 10;
  const auto full = rqa_features(all_true(n), 2, 2);
  CHECK(full.rr == 1.0);
  // every off-diagonal cell except the two corner cells lies on a line of length >= 2
  CHECK(full.det == doctest::Approx(static_cast<double>(n * n - n - 2) / (n * n - n)).epsilon(1e-15));
  CHECK(full.lmax == n - 1);
  CHECK(full.ent == doctest::Approx(std::log2(static_cast<double>(n - 2))).epsilon(1e-14));
  CHECK(full.lam == 1.0);
  CHECK(full.tt == n);
  CHECK(rqa_features(all_true(n), 1, 2).det == 1.0);

  const auto loi = rqa_features(loi_only(n), 2, 2);
  CHECK(loi.rr == doctest::Approx(1.0 / n));
  CHECK(loi.det == 0.0);
  CHECK(loi.lmax == 0.0);
  CHECK(loi.ent == 0.0);
  CHECK(loi.lam == 0.0);
  CHECK(loi.tt == 0.0);
}

TEST_CASE("rqa features match the line-enumeration oracle") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rp = random_rp(12, 0.1 + 0.8 * static_cast<double>(trial) / 50.0, gen);
    const auto f = rqa_features(rp, 2, 2);
    const auto o = oracle::rqa(as_bool(rp), 2, 2);
    CHECK(std::abs(f.rr - o.rr) <= 1e-12);
    CHECK(std::abs(f.det - o.det) <= 1e-12);
    CHECK(std::abs(f.lmax - o.lmax) <= 1e-12);
    CHECK(std::abs(f.ent - o.ent) <= 1e-12);
    CHECK(std::abs(f.lam - o.lam) <= 1e-12);
    CHECK(std::abs(f.tt - o.tt) <= 1e-12);
  }
}

TEST_CASE("rqa feature ranges and line-point accounting") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    const auto rp = random_rp(n, static_cast<double>(gen() % 100) / 100.0, gen);
    const auto f = rqa_features(rp);
    CHECK(f.rr >= 0.0);
    CHECK(f.rr <= 1.0);
    CHECK(f.det >= 0.0);
    CHECK(f.det <= 1.0);
    CHECK(f.lam >= 0.0);
    CHECK(f.lam <= 1.0);
    CHECK(f.ent >= 0.0);
    CHECK(f.lmax <= static_cast<double>(n - 1));
    CHECK((f.tt == 0.0 || f.tt >= 2.0));
    const double points = f.det * static_cast<double>(rp.recurrences() - n);
    CHECK(std::abs(points - std::round(points)) < 1e-9);
  }
}

TEST_CASE("periodic signals are more deterministic than noise") {
  const auto sin_t = embed(sinusoid(100, 20), 3, 5);
  const auto noise_t = embed(noise(100, 12), 3, 5);
  const auto sin_rp = recurrence_plot(sin_t, radius_for_rate(sin_t, 0.1));
  const auto noise_rp = recurrence_plot(noise_t, radius_for_rate(noise_t, 0.1));
  const auto fs = rqa_features(sin_rp);
  const auto fn = rqa_features(noise_rp);
  CHECK(std::abs(fs.rr - fn.rr) < 0.02);
  CHECK(fs.det > fn.det);
  CHECK(fs.lmax > fn.lmax);
}

TEST_CASE("rqa block layout and default trajectory lengths") {
  const auto x = sinusoid(100, 25);
  std::vector<Window> epoch;
  for (ChannelId c : all_channels()) epoch.push_back({c, 0, x});
  ChannelParams same{};
  same.fill({10, 4, 0.5});
  const auto block = rqa_block(epoch, same);
  REQUIRE(block.size() == 54);
  for (std::size_t c = 1; c < 9; ++c) {
    CHECK(std::equal(block.begin(), block.begin() + 6, block.begin() + static_cast<std::ptrdiff_t>(6 * c)));
  }
  const auto defaults = default_channel_params();
  CHECK(embed(x, defaults[0]).size() == 70);
  CHECK(embed(x, defaults[8]).size() == 40);
  CHECK(rqa_block(epoch, defaults).size() == 54);
  CHECK(rqa_feature_names().size() == 54);
  CHECK(rqa_feature_names()[6 * 6 + 5] == "rot_x.tt");

  epoch.pop_back();
  CHECK_THROWS_AS(rqa_block(epoch, defaults), Error);
}

TEST_CASE("recurrence plot dump format") {
  std::ostringstream out;
  write_recurrence_plot(out, from_rows({"110", "110", "001"}));
  CHECK(out.str() == "110\n110\n001\n");
}
