#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "fastids/bench.hpp"
#include "fastids/metrics.hpp"
#include "fastids/parallel.hpp"
#include "fastids/random.hpp"
#include "oracles.hpp"

using namespace fastids;

TEST_SUITE("bench") {

TEST_CASE("target functions") {
  CHECK(f1(1.0, 1.0) == doctest::Approx(9.0));
  const double h = std::numbers::pi / 2;
  CHECK(f2(h, h) == doctest::Approx(std::sqrt(5.0 * 4.0 / (std::numbers::pi * std::numbers::pi))));
  CHECK(f2(h, h) == doctest::Approx(1.4235).epsilon(1e-4));
}

TEST_CASE("regression generators") {
  const auto a = gen_f1(500, 77);
  const auto b = gen_f1(500, 77);
  const auto c = gen_f1(500, 78);
  REQUIRE(a.size() == 500);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    differs = differs || a[i].x != c[i].x;
    for (double v : a[i].x) {
      CHECK(v >= 1.0);
      CHECK(v <= 10.0);
    }
    CHECK(a[i].y == f1(a[i].x[0], a[i].x[1]));
  }
  CHECK(differs);
  for (const auto& s : gen_f2(100, 3)) CHECK(s.y == f2(s.x[0], s.x[1]));
}

TEST_CASE("two spirals") {
  const SpiralParams p;
  const auto data = gen_two_spiral(200, p, 5);
  REQUIRE(data.size() == 400);
  int ones = 0;
  const double rmax = p.max_radius();
  CHECK(rmax == doctest::Approx(p.pitch * 6 * std::numbers::pi + p.r0));
  for (const auto& s : data) {
    const double r = std::hypot(s.x[0], s.x[1]);
    CHECK(r >= p.r0 - 1e-12);
    CHECK(r <= rmax + 1e-12);
    CHECK((s.y == 0.0 || s.y == 1.0));
    ones += s.y == 1.0;
    // Class 0 lies on the curve; class 1 on its reflection.
    const double theta = std::atan2(s.y == 0.0 ? s.x[1] : -s.x[1], s.y == 0.0 ? s.x[0] : -s.x[0]);
    const double turns = (r - p.r0) / p.pitch - theta;
    const double k = turns / (2 * std::numbers::pi);
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
  CHECK(ones == 200);
  const auto again = gen_two_spiral(200, p, 5);
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(again[i].x == data[i].x);
}

TEST_CASE("three rings") {
  const RingParams p;
  auto label = [&](double x, double y) {
    const double r = x * x + y * y;
    return r < p.r1 ? 0.0 : (r < p.r2 ? 1.0 : 2.0);
  };
  CHECK(label(0, 0) == 0.0);
  CHECK(label(0, 1.5) == 1.0);
  CHECK(label(2.5, 0) == 2.0);
  const auto data = gen_three_ring(150, p, 9);
  REQUIRE(data.size() == 450);
  int counts[3] = {0, 0, 0};
  for (const auto& s : data) {
    CHECK(s.y == label(s.x[0], s.x[1]));
    CHECK(std::abs(s.x[0]) <= 3.0);
    ++counts[static_cast<int>(s.y)];
  }
  CHECK(counts[0] == 150);
  CHECK(counts[1] == 150);
  CHECK(counts[2] == 150);
  RingParams tiny;
  tiny.box_min = 5.0;
  tiny.box_max = 6.0;
  CHECK_THROWS_AS(gen_three_ring(10, tiny, 1), GenerationError);
}

TEST_CASE("generate splits class totals evenly") {
  CHECK(generate(DatasetKind::kThreeRing, 900, 1, {}, {}).size() == 900);
  CHECK(generate(DatasetKind::kTwoSpiral, 400, 1, {}, {}).size() == 400);
  CHECK(dataset_labels(DatasetKind::kThreeRing) == std::vector<double>{0, 1, 2});
  CHECK(is_classification(DatasetKind::kTwoSpiral));
  CHECK_FALSE(is_classification(DatasetKind::kF1));
  for (auto k : {DatasetKind::kF1, DatasetKind::kF2, DatasetKind::kTwoSpiral, DatasetKind::kThreeRing})
    CHECK(dataset_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(dataset_from_string("mnist"), ConfigError);
}

TEST_CASE("dataset csv round trip") {
  const auto data = gen_f1(20, 4);
  std::stringstream s;
  write_dataset_csv(s, data, 0);
  const auto back = read_dataset_csv(s);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].x == data[i].x);
    CHECK(back[i].y == data[i].y);
  }
  std::stringstream headerless("1,2,3\n4,5,6\n");
  CHECK(read_dataset_csv(headerless).size() == 2);
  std::stringstream ragged("1,2,3\n4,5\n");
  CHECK_THROWS_AS(read_dataset_csv(ragged), InputError);
}

TEST_CASE("fvu") {
  const std::vector<double> y{1.0, 2.0, 4.0, 7.0};
  CHECK(fvu(y, y) == 0.0);
  const std::vector<double> mean(4, 3.5);
  CHECK(fvu(mean, y) == doctest::Approx(1.0));
  std::vector<double> shifted = y;
  for (double& v : shifted) v += 0.5;
  CHECK(fvu(shifted, y) == doctest::Approx(4 * 0.25 / 21.0));
  const std::vector<double> p{1.5, 1.0, 4.5, 6.0};
  CHECK(fvu(p, y) == doctest::Approx(oracle::fvu(p, y)));
  std::vector<double> p2 = p, y2 = y, p3 = p, y3 = y;
  for (auto& v : p2) v += 100.0;
  for (auto& v : y2) v += 100.0;
  for (auto& v : p3) v *= -3.0;
  for (auto& v : y3) v *= -3.0;
  CHECK(fvu(p2, y2) == doctest::Approx(fvu(p, y)));
  CHECK(fvu(p3, y3) == doctest::Approx(fvu(p, y)));
  CHECK_THROWS_AS(fvu(std::vector<double>{1.0}, std::vector<double>{1.0}), MetricError);
  CHECK_THROWS_AS(fvu(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), MetricError);
  CHECK_THROWS_AS(fvu(std::vector<double>{1.0, 2.0}, std::vector<double>{3.0, 3.0}), MetricError);
}

TEST_CASE("accuracy") {
  const std::vector<double> t{0, 1, 2, 1};
  CHECK(accuracy(t, t) == 1.0);
  CHECK(accuracy(std::vector<double>{1, 0, 0, 0}, t) == 0.0);
  CHECK(accuracy(std::vector<double>{0, 1, 2, 2}, t) == 0.75);
}

TEST_CASE("seed mixing and parallel helpers") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 3) == mix_seed(5, 3));
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw InputError("boom");
                  }),
                  InputError);
  CHECK(resolve_threads(3) >= 1);
}

TEST_CASE("benchmark report") {
  BenchRequest r;
  r.dataset = DatasetKind::kF2;
  r.backends = {Backend::kClassic, Backend::kFast};
  r.config.partitions = {2, 2};
  r.config.resolution = Resolution(64, 64);
  r.config.kernel = KernelShape::gaussian(3.0);
  r.config.fast.sigma = 3.0;
  r.train_size = 300;
  r.test_size = 200;
  r.runs = 3;
  r.seed = 123;
  const auto rep = run_benchmark(r);
  REQUIRE(rep.runs.size() == 6);
  REQUIRE(rep.summaries.size() == 2);
  CHECK(rep.speedup.has_value());
  for (const auto& s : rep.summaries) {
    double sum = 0.0;
    std::vector<double> vals;
    for (const auto& rec : rep.runs) {
      if (rec.backend != s.backend) continue;
      sum += rec.value;
      vals.push_back(rec.value);
      CHECK(rec.metric == "fvu");
      CHECK(rec.planes == 4);
    }
    CHECK(s.mean == doctest::Approx(sum / 3.0));
    double ss = 0.0;
    for (double v : vals) ss += (v - s.mean) * (v - s.mean);
    CHECK(s.stddev == doctest::Approx(std::sqrt(ss / 2.0)));
    CHECK(s.cells_per_plane == (s.backend == Backend::kFast ? 3u * 64 : 64u * 64));
  }

  // Repeat runs with identical seeds give identical metrics.
  const auto again = run_benchmark(r);
  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    CHECK(again.runs[i].value == rep.runs[i].value);
    CHECK(again.runs[i].seed == rep.runs[i].seed);
  }
  std::stringstream csv;
  rep.write_csv(csv);
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("per-plane memory at full resolution") {
  BenchRequest r;
  r.dataset = DatasetKind::kF2;
  r.backends = {Backend::kFast, Backend::kClassic};
  r.train_size = 50;
  r.test_size = 20;
  r.config.kernel = KernelShape::gaussian(2.0);
  const auto rep = run_benchmark(r);
  for (const auto& s : rep.summaries) {
    CHECK(s.cells_per_plane == (s.backend == Backend::kFast ? 768u : 65536u));
  }
}

TEST_CASE("classification metric") {
  BenchRequest r;
  r.dataset = DatasetKind::kThreeRing;
  r.config.resolution = Resolution(64, 64);
  r.config.fast.sigma = 2.0;
  r.train_size = 300;
  r.test_size = 300;
  const auto rep = run_benchmark(r);
  CHECK(rep.runs.front().metric == "accuracy");
  CHECK(rep.runs.front().value >= 0.0);
  CHECK(rep.runs.front().value <= 1.0);
  CHECK_FALSE(rep.speedup.has_value());
}

}
