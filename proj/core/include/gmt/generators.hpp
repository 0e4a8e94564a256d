#pragma once

#include <cstdint>
#include <string>

#include "gmt/measure.hpp"
#include "gmt/sphere_map.hpp"

namespace gmt {

// Deterministic synthetic measures. Everything is lattice-built from
// integer indices, so identical parameters give bit-identical measures on
// any platform; there is no hidden randomness.

// Unit-density samples of [0, length] x {0} in R^2, weight = spacing each,
// n = 1. Points are generated as i*spacing so mirrored index pairs have
// exactly opposite coordinates after recentering.
DiscreteMeasure gen_segment(double length, double spacing);

// Unit-density lattice on [0, extent]^n x {0} in R^{n+1}, weights spacing^n.
DiscreteMeasure gen_kplane(std::size_t n, double extent, double spacing);

// Arclength-weighted samples of the graph (x, amplitude*sin(frequency*x))
// over x in [-extent, extent]. Requires amplitude*frequency < 1 so the
// graph is a Lipschitz image with constant < 1.
DiscreteMeasure gen_lipschitz_graph(double amplitude, double frequency,
                                    double extent, double spacing);

// Corner points of the 4-corner Cantor set (ratio 1/4) at generation g:
// 4^g points, weights 4^{-g}, n = 1. Purely 1-unrectifiable in the limit.
DiscreteMeasure gen_cantor4(unsigned generations);

// `count` horizontal lines at heights 0, +-spacing, ..., each sampled at
// unit density over x in [-extent, extent]. Symmetric under reflection
// through any lattice point of the middle line (count odd).
DiscreteMeasure gen_parallel_lines(unsigned count, double spacing,
                                   double extent, double sample_spacing);

// SphereMap with the given Fourier modes rescaled so the measured
// max|psi'| equals delta exactly. delta must stay below 1/10; the mode
// list must be non-empty (delta = 0 gives the identity).
SphereMap gen_omega(const std::vector<SphereMap::Mode>& modes, double delta);

}  // namespace gmt
