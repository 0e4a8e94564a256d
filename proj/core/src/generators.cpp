#include "gmt/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace gmt {

DiscreteMeasure gen_segment(double length, double spacing) {
  if (!(spacing > 0.0) || !(length > 0.0))
    throw std::invalid_argument("gen_segment: need length, spacing > 0");
  const long count = static_cast<long>(std::floor(length / spacing + 0.5)) + 1;
  std::vector<double> coords, weights;
  coords.reserve(2 * count);
  weights.reserve(count);
  for (long i = 0; i < count; ++i) {
    coords.push_back(static_cast<double>(i) * spacing);
    coords.push_back(0.0);
    weights.push_back(spacing);
  }
  return build_measure_flat(std::move(coords), std::move(weights), 2, 1);
}

DiscreteMeasure gen_kplane(std::size_t n, double extent, double spacing) {
  if (n < 1) throw std::invalid_argument("gen_kplane: n >= 1");
  if (!(spacing > 0.0) || !(extent > 0.0))
    throw std::invalid_argument("gen_kplane: need extent, spacing > 0");
  const long per_axis = static_cast<long>(std::floor(extent / spacing + 0.5)) + 1;
  const std::size_t d = n + 1;
  long total = 1;
  for (std::size_t a = 0; a < n; ++a) total *= per_axis;
  const double w = std::pow(spacing, static_cast<double>(n));
  std::vector<double> coords, weights;
  coords.reserve(static_cast<std::size_t>(total) * d);
  weights.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (std::size_t a = 0; a < n; ++a) {
      coords.push_back(static_cast<double>(rest % per_axis) * spacing);
      rest /= per_axis;
    }
    coords.push_back(0.0);
    weights.push_back(w);
  }
  return build_measure_flat(std::move(coords), std::move(weights), d, n);
}

DiscreteMeasure gen_lipschitz_graph(double amplitude, double frequency,
                                    double extent, double spacing) {
  if (!(amplitude * frequency < 1.0) || amplitude < 0.0 || frequency <= 0.0)
    throw std::invalid_argument(
        "gen_lipschitz_graph: need amplitude*frequency < 1");
  if (!(spacing > 0.0) || !(extent > 0.0))
    throw std::invalid_argument("gen_lipschitz_graph: need extent, spacing > 0");
  const long half = static_cast<long>(std::floor(extent / spacing + 0.5));
  std::vector<double> coords, weights;
  for (long i = -half; i <= half; ++i) {
    const double x = static_cast<double>(i) * spacing;
    const double slope = amplitude * frequency * std::cos(frequency * x);
    coords.push_back(x);
    coords.push_back(amplitude * std::sin(frequency * x));
    weights.push_back(spacing * std::sqrt(1.0 + slope * slope));
  }
  return build_measure_flat(std::move(coords), std::move(weights), 2, 1);
}

DiscreteMeasure gen_cantor4(unsigned generations) {
  if (generations < 1 || generations > 8)
    throw std::invalid_argument("gen_cantor4: generations in [1, 8]");
  const std::size_t count = 1ull << (2 * generations);  // 4^g
  const double w = 1.0 / static_cast<double>(count);
  std::vector<double> coords, weights;
  coords.reserve(2 * count);
  weights.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    // Base-4 digits pick the corner sub-square at each generation;
    // offsets are exact dyadic rationals.
    double x = 0.0, y = 0.0, side = 1.0;
    std::size_t rest = code;
    for (unsigned g = 0; g < generations; ++g) {
      const unsigned digit = rest & 3u;
      rest >>= 2;
      const double off = 0.75 * side;
      if (digit & 1u) x += off;
      if (digit & 2u) y += off;
      side *= 0.25;
    }
    coords.push_back(x);
    coords.push_back(y);
    weights.push_back(w);
  }
  return build_measure_flat(std::move(coords), std::move(weights), 2, 1);
}

DiscreteMeasure gen_parallel_lines(unsigned count, double spacing,
                                   double extent, double sample_spacing) {
  if (count < 1) throw std::invalid_argument("gen_parallel_lines: count >= 1");
  if (!(sample_spacing > 0.0) || !(extent > 0.0))
    throw std::invalid_argument("gen_parallel_lines: need extent, spacing > 0");
  if (count > 1 && !(spacing > 0.0))
    throw std::invalid_argument("gen_parallel_lines: line spacing must be > 0");
  const long half = static_cast<long>(std::floor(extent / sample_spacing + 0.5));
  std::vector<double> coords, weights;
  // Heights 0, +-spacing, ... for odd count; half-offset for even count.
  // Signed integer multiples keep the configuration exactly symmetric in
  // floating point.
  const double height_base = (count % 2 == 0) ? 0.5 : 0.0;
  const long k_lo = -static_cast<long>(count / 2);
  for (unsigned line = 0; line < count; ++line) {
    const double k = static_cast<double>(k_lo + static_cast<long>(line)) +
                     ((count % 2 == 0) ? height_base : 0.0);
    const double y = k * spacing;
    for (long i = -half; i <= half; ++i) {
      coords.push_back(static_cast<double>(i) * sample_spacing);
      coords.push_back(y);
      weights.push_back(sample_spacing);
    }
  }
  return build_measure_flat(std::move(coords), std::move(weights), 2, 1);
}

SphereMap gen_omega(const std::vector<SphereMap::Mode>& modes, double delta) {
  if (modes.empty()) throw std::invalid_argument("gen_omega: empty mode list");
  if (!(delta < 0.1) || delta < 0.0)
    throw std::invalid_argument("gen_omega: need 0 <= delta < 1/10");
  std::vector<SphereMap::Mode> scaled = modes;
  if (delta == 0.0) {
    for (auto& m : scaled) m.a = m.b = 0.0;
    return SphereMap(std::move(scaled));
  }
  // Unscaled max|psi'| on the same 4096-point grid the class validates on,
  // evaluated directly because the class guard would reject large raw modes.
  double raw_max = 0.0;
  const int grid = 4096;
  for (int i = 0; i < grid; ++i) {
    const double theta = 3.14159265358979323846 * i / grid;
    double s = 0.0;
    for (const auto& m : modes) {
      const double w = 2.0 * m.k;
      s += -m.a * w * std::sin(w * theta) + m.b * w * std::cos(w * theta);
    }
    raw_max = std::max(raw_max, std::abs(s));
  }
  if (raw_max == 0.0)
    throw std::invalid_argument("gen_omega: modes have zero derivative");
  const double scale = delta / raw_max;
  for (auto& m : scaled) {
    m.a *= scale;
    m.b *= scale;
  }
  return SphereMap(std::move(scaled));
}

}  // namespace gmt
