#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nanoseg/synth.hpp"
#include "support.hpp"

using namespace nanoseg;

namespace {

SceneSpec quiet(int n, Exposure e = Exposure::Even) {
  SceneSpec s;
  s.particle_count = n;
  s.exposure = e;
  return s;
}

// Smallest Chebyshev distance between pixels of different labels.
int min_crack(const GroundTruth& gt, int limit) {
  int best = limit + 1;
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      const int l = gt.label(x, y);
      if (l == 0) continue;
      for (int dy = -limit; dy <= limit; ++dy) {
        for (int dx = -limit; dx <= limit; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= gt.width || ny >= gt.height) continue;
          const int o = gt.label(nx, ny);
          if (o != 0 && o != l) best = std::min(best, std::max(std::abs(dx), std::abs(dy)));
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST(Generate, SingleParticle) {
  const Scene s = generate(quiet(1));
  ASSERT_EQ(s.truth.particles.size(), 1u);
  std::int64_t bright = 0;
  std::int64_t labelled = 0;
  for (int y = 0; y < s.image.height(); ++y) {
    for (int x = 0; x < s.image.width(); ++x) {
      bright += s.image(x, y) == 180;
      labelled += s.truth.label(x, y) == 1;
      EXPECT_EQ(s.image(x, y) == 180, s.truth.label(x, y) == 1);
    }
  }
  EXPECT_EQ(s.truth.particles[0].area, bright);
  EXPECT_EQ(s.truth.particles[0].area, labelled);
}

TEST(Generate, DeterministicForSeed) {
  SceneSpec spec = quiet(16, Exposure::Satellite);
  spec.noise_sigma = 8;
  const Scene a = generate(spec);
  const Scene b = generate(spec);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.truth.labels, b.truth.labels);
  spec.seed = 8;
  EXPECT_NE(generate(spec).image, a.image);
}

TEST(Generate, SixteenParticlesWithTwoPixelCracks) {
  const Scene s = generate(quiet(16));
  std::set<int> labels(s.truth.labels.begin(), s.truth.labels.end());
  labels.erase(0);
  EXPECT_EQ(labels.size(), 16u);
  EXPECT_EQ(*labels.begin(), 1);
  EXPECT_EQ(*labels.rbegin(), 16);
  EXPECT_GE(min_crack(s.truth, 4), 3);  // at least 2 crack pixels between particles
}

TEST(Generate, ParticlesAreTouchingAggregates) {
  // Placement lets discs overlap, so some particles share a crack exactly gap wide.
  SceneSpec spec = quiet(40);
  spec.width = spec.height = 320;
  const Scene s = generate(spec);
  EXPECT_EQ(min_crack(s.truth, 4), 3);
}

TEST(Generate, CrackAndBodyLevels) {
  const Scene s = generate(quiet(16));
  for (int y = 0; y < s.image.height(); ++y) {
    for (int x = 0; x < s.image.width(); ++x) {
      if (s.truth.label(x, y) == 0) {
        EXPECT_LE(s.image(x, y), 30);
      } else {
        EXPECT_EQ(s.image(x, y), 180);
      }
    }
  }
}

TEST(Generate, CrossAddsHighlightInsideParticles) {
  const Scene even = generate(quiet(16));
  const Scene cross = generate(quiet(16, Exposure::Cross));
  EXPECT_EQ(even.truth.labels, cross.truth.labels);
  std::int64_t boosted = 0;
  for (std::size_t k = 0; k < cross.truth.labels.size(); ++k) {
    const int v = cross.image.pixels()[k];
    if (cross.truth.labels[k] == 0) {
      EXPECT_EQ(v, even.image.pixels()[k]);
    } else {
      EXPECT_TRUE(v == 180 || v == 240);
      boosted += v == 240;
    }
  }
  EXPECT_GT(boosted, 16 * 20);
}

TEST(Generate, SatelliteDebrisIsNotTruth) {
  const Scene even = generate(quiet(16));
  const Scene sat = generate(quiet(16, Exposure::Satellite));
  EXPECT_EQ(even.truth.labels, sat.truth.labels);
  std::int64_t debris = 0;
  for (std::size_t k = 0; k < sat.truth.labels.size(); ++k) {
    if (sat.truth.labels[k] == 0 && sat.image.pixels()[k] == 180) ++debris;
  }
  EXPECT_GT(debris, 16);
  // Debris blobs are small: radius at most 3, so 29 pixels each at most.
  const BinaryMask specks = binary_threshold(sat.image, 100);
  BinaryMask truth_mask(sat.image.width(), sat.image.height());
  for (int y = 0; y < truth_mask.height(); ++y) {
    for (int x = 0; x < truth_mask.width(); ++x) truth_mask.set(x, y, sat.truth.label(x, y) != 0);
  }
  const BinaryMask only_debris = bitwise_and(specks, complement(truth_mask));
  for (const Contour& c : find_outer_contours(only_debris)) EXPECT_LE(c.filled_area, 29);
}

TEST(Generate, PolarizedRampSpansSixtyEachWay) {
  SceneSpec spec = quiet(4, Exposure::Polarized);
  const Scene s = generate(spec);
  const int w = spec.width;
  // Column 0 background is 20 - 60 clamped to 0; last column is 20 + 60.
  for (int y = 0; y < spec.height; ++y) {
    if (s.truth.label(0, y) == 0) EXPECT_EQ(s.image(0, y), 0);
    if (s.truth.label(w - 1, y) == 0) EXPECT_EQ(s.image(w - 1, y), 80);
  }
}

TEST(Generate, InfeasiblePackingReportsAttempts) {
  SceneSpec spec = quiet(60);
  spec.width = spec.height = 96;
  try {
    generate(spec);
    FAIL();
  } catch (const GenerationError& e) {
    EXPECT_EQ(e.attempts(), 600);
    EXPECT_LT(e.placed(), 60);
  }
}

TEST(Generate, InvalidSpecThrows) {
  SceneSpec spec;
  spec.gap = 0;
  EXPECT_THROW(generate(spec), std::invalid_argument);
  spec = SceneSpec{};
  spec.radius_min = 30;
  spec.radius_max = 20;
  EXPECT_THROW(generate(spec), std::invalid_argument);
}

TEST(Truth, LabelImageRoundTrip) {
  const Scene s = generate(quiet(16));
  const GroundTruth back = truth_from_labels(s.truth.label_image());
  EXPECT_EQ(back.labels, s.truth.labels);
  ASSERT_EQ(back.particles.size(), s.truth.particles.size());
  for (std::size_t i = 0; i < back.particles.size(); ++i) {
    EXPECT_EQ(back.particles[i].area, s.truth.particles[i].area);
    EXPECT_DOUBLE_EQ(back.particles[i].centroid_x, s.truth.particles[i].centroid_x);
  }
}

TEST(Truth, SparseLabelsRejected) {
  EXPECT_THROW(truth_from_labels(GrayImage(3, 1, {0, 2, 2})), std::invalid_argument);
}

TEST(Evaluate, GroundTruthAsDetectionsIsPerfect) {
  for (auto e : {Exposure::Even, Exposure::Cross}) {
    const Scene s = generate(quiet(16, e));
    const Metrics m = evaluate(report_from_truth(s.truth), s.truth);
    EXPECT_EQ(m.detected, 16u);
    EXPECT_DOUBLE_EQ(m.precision, 1.0);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.mean_iou, 1.0);
    EXPECT_DOUBLE_EQ(m.count_error, 0.0);
  }
}

TEST(Evaluate, EmptyReport) {
  const Scene s = generate(quiet(5));
  const Metrics m = evaluate(std::span<const Contour>{}, s.truth.width, s.truth.height, s.truth);
  EXPECT_EQ(m.detected, 0u);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.mean_iou, 0.0);
  EXPECT_DOUBLE_EQ(m.count_error, 1.0);
}

TEST(Evaluate, MergedDetectionMatchesAtMostOnce) {
  // Two equal particles, one detection covering both: IoU 0.5 with each.
  GrayImage labels(12, 5);
  for (int y = 1; y < 4; ++y) {
    for (int x = 1; x < 5; ++x) labels(x, y) = 1;
    for (int x = 7; x < 11; ++x) labels(x, y) = 2;
  }
  const GroundTruth gt = truth_from_labels(labels);
  const auto det = find_outer_contours(nanoseg::testing::filled_rect(12, 5, 1, 1, 10, 3));
  const Metrics m = evaluate(det, 12, 5, gt);
  EXPECT_LE(m.matched, 1u);
  EXPECT_LE(m.recall, 0.5);
}

TEST(Evaluate, GreedyPrefersHigherIou) {
  GrayImage labels(20, 6);
  for (int y = 1; y < 5; ++y) {
    for (int x = 1; x < 9; ++x) labels(x, y) = 1;
  }
  const GroundTruth gt = truth_from_labels(labels);
  // Exact copy and a smaller overlapping box; only the copy matches.
  std::vector<Contour> det = find_outer_contours(nanoseg::testing::filled_rect(20, 6, 1, 1, 6, 4));
  const auto exact = find_outer_contours(nanoseg::testing::filled_rect(20, 6, 1, 1, 8, 4));
  det.push_back(exact[0]);
  const Metrics m = evaluate(det, 20, 6, gt);
  EXPECT_EQ(m.matched, 1u);
  EXPECT_DOUBLE_EQ(m.mean_iou, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
}

TEST(Evaluate, DimensionMismatchThrows) {
  const Scene s = generate(quiet(3));
  EXPECT_THROW(evaluate(std::span<const Contour>{}, 10, 10, s.truth), std::invalid_argument);
}

TEST(Evaluate, MetricsStayInUnitInterval) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SceneSpec spec = quiet(20, Exposure::Polarized);
    spec.seed = seed;
    spec.noise_sigma = 10;
    const Scene s = generate(spec);
    const Metrics m = evaluate(analyze(s.image, PipelineConfig{}), s.truth);
    for (double v : {m.precision, m.recall, m.mean_iou}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}
