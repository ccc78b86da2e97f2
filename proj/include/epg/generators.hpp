// generators.hpp — seeded synthetic 2-D distributions.
//
// The shapes mirror the test distributions used for the accuracy-complexity
// studies: a noisy segment, a circular arc (pseudo-linear), a k-branch
// star, and a two-level tree skeleton. Randomness comes from SplitMix64
// plus Box-Muller, fixed here so fixtures stay reproducible; coordinates
// are identical across runs for a given seed.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "epg/dataset.hpp"

namespace epg {

// SplitMix64 (Steele, Lea, Flood 2014). Full 64-bit state, passes BigCrush.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; generates pairs, caches the second.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class Shape { linear, arc, star, treelike };

inline Shape shape_from_name(const std::string& name) {
  if (name == "linear") return Shape::linear;
  if (name == "arc") return Shape::arc;
  if (name == "star") return Shape::star;
  if (name == "treelike") return Shape::treelike;
  throw data_error("unknown shape: " + name);
}

struct GeneratorSpec {
  Shape shape = Shape::linear;
  long n_points = 300;
  double noise_sd = 0.05;  // scatter in units of the unit-scale skeleton
  int branches = 3;        // star only
  std::uint64_t seed = 0;
};

struct GeneratedData {
  DataSet data;
  std::vector<int> labels;  // skeleton segment (branch) index per point
};

namespace detail {
struct Segment {
  double x0, y0, x1, y1;
  double length() const { return std::hypot(x1 - x0, y1 - y0); }
};

inline GeneratedData sample_skeleton(const std::vector<Segment>& segs, const GeneratorSpec& spec) {
  SplitMix64 rng(spec.seed);
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& s : segs) {
    total += s.length();
    cumulative.push_back(total);
  }
  GeneratedData out;
  out.data.dim = 2;
  out.data.column_names = {"x", "y"};
  out.data.points.reserve(std::size_t(spec.n_points) * 2);
  out.labels.reserve(std::size_t(spec.n_points));
  for (long i = 0; i < spec.n_points; ++i) {
    const double u = rng.uniform() * total;
    std::size_t k = 0;
    while (k + 1 < segs.size() && u > cumulative[k]) ++k;
    const auto& s = segs[k];
    const double prev = k == 0 ? 0.0 : cumulative[k - 1];
    const double t = s.length() > 0.0 ? (u - prev) / s.length() : 0.0;
    double x = s.x0 + t * (s.x1 - s.x0) + spec.noise_sd * rng.gaussian();
    double y = s.y0 + t * (s.y1 - s.y0) + spec.noise_sd * rng.gaussian();
    out.data.points.push_back(x);
    out.data.points.push_back(y);
    out.labels.push_back(int(k));
  }
  return out;
}
}  // namespace detail

inline GeneratedData generate_labeled(const GeneratorSpec& spec) {
  if (spec.n_points < 10) throw data_error("generator needs at least 10 points");
  if (spec.noise_sd < 0.0) throw data_error("negative noise");
  using detail::Segment;
  constexpr double pi = std::numbers::pi;
  switch (spec.shape) {
    case Shape::linear: {
      const double a = pi / 6.0;  // off-axis so no coordinate is degenerate
      return detail::sample_skeleton({Segment{0.0, 0.0, std::cos(a), std::sin(a)}}, spec);
    }
    case Shape::arc: {
      // 150-degree unit-radius arc; orthogonal projection onto the chord
      // axis is one-to-one, the pseudo-linear case.
      SplitMix64 rng(spec.seed);
      GeneratedData out;
      out.data.dim = 2;
      out.data.column_names = {"x", "y"};
      for (long i = 0; i < spec.n_points; ++i) {
        const double theta = (rng.uniform() - 0.5) * (150.0 / 180.0) * pi;
        out.data.points.push_back(std::sin(theta) + spec.noise_sd * rng.gaussian());
        out.data.points.push_back(std::cos(theta) + spec.noise_sd * rng.gaussian());
        out.labels.push_back(0);
      }
      return out;
    }
    case Shape::star: {
      if (spec.branches < 2) throw data_error("star needs at least 2 branches");
      std::vector<Segment> segs;
      for (int b = 0; b < spec.branches; ++b) {
        const double a = pi / 2.0 + 2.0 * pi * double(b) / double(spec.branches);
        segs.push_back({0.0, 0.0, std::cos(a), std::sin(a)});
      }
      return detail::sample_skeleton(segs, spec);
    }
    case Shape::treelike: {
      // Four unit branches from a center (a 4-star gestalt); two opposite
      // tips split again into short sub-branches (two 3-stars).
      std::vector<Segment> segs;
      const double tips[4] = {pi / 4.0, 3.0 * pi / 4.0, 5.0 * pi / 4.0, 7.0 * pi / 4.0};
      for (double a : tips) segs.push_back({0.0, 0.0, std::cos(a), std::sin(a)});
      for (int which : {0, 2}) {
        const double a = tips[which];
        const double tx = std::cos(a), ty = std::sin(a);
        for (double da : {0.6, -0.6}) {
          segs.push_back({tx, ty, tx + 0.6 * std::cos(a + da), ty + 0.6 * std::sin(a + da)});
        }
      }
      return detail::sample_skeleton(segs, spec);
    }
  }
  throw data_error("unknown shape");
}

inline DataSet generate(const GeneratorSpec& spec) { return generate_labeled(spec).data; }

}  // namespace epg
