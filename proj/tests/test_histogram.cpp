#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "paretothresh/histogram.hpp"
#include "paretothresh/rng.hpp"
#include "support/fixtures.hpp"

using namespace paretothresh;

namespace {

RgbImage random_image(Rng& rng, int w, int h) {
  RgbImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  for (auto& px : img.pixels)
    px = {static_cast<std::uint8_t>(rng.next() & 0xFF),
          static_cast<std::uint8_t>(rng.next() & 0xFF),
          static_cast<std::uint8_t>(rng.next() & 0xFF)};
  return img;
}

}  // namespace

TEST_CASE("channel_histogram: single intensity concentrates all mass") {
  RgbImage img;
  img.width = 10;
  img.height = 10;
  img.pixels.assign(100, {10, 20, 30});
  const Histogram256 h = channel_histogram(img, Channel::R);
  CHECK(h.p[10] == 1.0);
  for (int i = 0; i < 256; ++i)
    if (i != 10) CHECK(h.p[i] == 0.0);
  CHECK(h.pixel_count == 100);
}

TEST_CASE("channel_histogram: hand-counted four pixels") {
  RgbImage img;
  img.width = 4;
  img.height = 1;
  img.pixels = {{0, 0, 0}, {0, 0, 0}, {128, 0, 0}, {255, 0, 0}};
  const Histogram256 h = channel_histogram(img, Channel::R);
  CHECK(h.p[0] == 0.5);
  CHECK(h.p[128] == 0.25);
  CHECK(h.p[255] == 0.25);
}

TEST_CASE("channel_histogram: full ramp is uniform") {
  RgbImage img;
  img.width = 16;
  img.height = 16;
  img.pixels.resize(256);
  for (int i = 0; i < 256; ++i)
    img.pixels[i] = {static_cast<std::uint8_t>(i), 0, 0};
  const Histogram256 h = channel_histogram(img, Channel::R);
  // counting oracle: every intensity appears exactly once; 1/256 is dyadic
  for (int i = 0; i < 256; ++i) CHECK(h.p[i] == 1.0 / 256);
}

TEST_CASE("histogram invariants on random images") {
  Rng rng(42);
  for (int round = 0; round < 20; ++round) {
    const RgbImage img = random_image(rng, 1 + static_cast<int>(rng.uniform_index(40)),
                                      1 + static_cast<int>(rng.uniform_index(40)));
    for (const Channel c : {Channel::R, Channel::G, Channel::B}) {
      const Histogram256 h = channel_histogram(img, c);
      double sum = 0.0;
      std::int64_t count_sum = 0;
      for (int i = 0; i < 256; ++i) {
        CHECK(h.p[i] >= 0.0);
        sum += h.p[i];
        // probabilities are exact count ratios
        const double scaled = h.p[i] * static_cast<double>(h.pixel_count);
        CHECK(std::abs(scaled - std::llround(scaled)) < 1e-9);
        count_sum += h.count(i);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(count_sum == img.pixel_count());
    }
  }
}

TEST_CASE("channel_histogram is permutation invariant, bitwise") {
  Rng rng(7);
  RgbImage img = random_image(rng, 31, 17);
  const Histogram256 before = channel_histogram(img, Channel::G);
  // deterministic shuffle
  for (std::size_t i = img.pixels.size() - 1; i > 0; --i)
    std::swap(img.pixels[i], img.pixels[rng.uniform_index(i + 1)]);
  const Histogram256 after = channel_histogram(img, Channel::G);
  CHECK(before.p == after.p);
  CHECK(before.pixel_count == after.pixel_count);
}

TEST_CASE("histogram_3d: uniform single color") {
  RgbImage img;
  img.width = 10;
  img.height = 10;
  img.pixels.assign(100, {10, 20, 30});
  const Sparse3DHistogram h = histogram_3d(img);
  REQUIRE(h.entries.size() == 1);
  CHECK(h.entries.at({10, 20, 30}) == 100);
}

TEST_CASE("histogram_3d: hand counts") {
  RgbImage img;
  img.width = 3;
  img.height = 1;
  img.pixels = {{1, 2, 3}, {1, 2, 3}, {4, 5, 6}};
  const Sparse3DHistogram h = histogram_3d(img);
  REQUIRE(h.entries.size() == 2);
  CHECK(h.entries.at({1, 2, 3}) == 2);
  CHECK(h.entries.at({4, 5, 6}) == 1);

  RgbImage two;
  two.width = 2;
  two.height = 1;
  two.pixels = {{0, 0, 0}, {0, 0, 0}};
  CHECK(histogram_3d(two).entries.at({0, 0, 0}) == 2);
}

TEST_CASE("histogram_3d: counts sum to pixel count on random images") {
  Rng rng(5);
  for (int round = 0; round < 10; ++round) {
    const RgbImage img = random_image(rng, 1 + static_cast<int>(rng.uniform_index(30)),
                                      1 + static_cast<int>(rng.uniform_index(30)));
    const Sparse3DHistogram h = histogram_3d(img);
    CHECK(h.total() == img.pixel_count());
    for (const auto& [rgb, count] : h.entries) CHECK(count > 0);
  }
}

TEST_CASE("histogram_3d csv: header and lexicographic order") {
  const RgbImage img = fixtures::banded_rgb_64();
  const Sparse3DHistogram h = histogram_3d(img);
  std::ostringstream out;
  write_histogram3d_csv(h, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,g,b,count");
  std::vector<std::array<int, 3>> triples;
  std::int64_t total = 0;
  while (std::getline(in, line)) {
    std::array<int, 3> rgb{};
    long count = 0;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row >> rgb[0] >> rgb[1] >> rgb[2] >> count;
    triples.push_back(rgb);
    total += count;
  }
  CHECK(std::is_sorted(triples.begin(), triples.end()));
  CHECK(total == img.pixel_count());
}
