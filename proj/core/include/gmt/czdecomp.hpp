#pragma once

#include <iosfwd>
#include <string>

#include "gmt/cubes.hpp"
#include "gmt/measure.hpp"

namespace gmt {

// Calderon-Zygmund decomposition of a finite measure nu relative to mu at
// level lambda: maximal dyadic cubes D_j where nu is too dense for mu,
// a matched density f = dnu/dmu outside them, unit weights w_j on the bad
// cubes, and constant-sign bumps b_j on R_j = 6 D_j with matching
// integrals.
//
// The dyadic grid is anchored at the joint support bounding box corner
// (stored in `origin`): cube coordinates are relative to that corner, and
// the root is the smallest power-of-two cube over the joint extent. An
// absolute standard grid cannot always contain both supports in one cube,
// so the anchored frame is used for the whole decomposition.
struct CZResult {
  double lambda = 0.0;
  Vec origin;
  std::vector<GridCube> cubes;  // D_j, pairwise disjoint (anchored frame)
  // f on spt(nu) outside U D_j: (nu point index, value).
  std::vector<std::pair<std::uint32_t, double>> f;
  // Per j: b_j on spt(mu) cap R_j and w_j on spt(nu) cap D_j.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> b;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> w;

  bool in_cube(VecView x, std::size_t j) const;
  bool in_dilated(VecView x, std::size_t j, double eta) const;
  bool in_bad_set(VecView x) const;  // union of D_j
};

// Requires lambda > 2^{d+1} ||nu|| / ||mu||. Throws when a selected
// cube has mu(R_j) = 0 (the caller must refine mu's sampling) or when a
// nu point outside the bad set has no mu point at exactly its location.
CZResult cz_decompose(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                      double lambda);

struct CZCheck {
  int id = 0;
  std::string name;
  bool pass = false;
  double constant = 0.0;  // reported constant where one is defined
  std::string witness;    // first failing cube / point, empty when passing
};

// The ten postconditions, with explicit constants. Failures are results,
// not errors.
std::vector<CZCheck> verify_cz(const CZResult& result,
                               const DiscreteMeasure& nu,
                               const DiscreteMeasure& mu);

void write_cz_json(std::ostream& out, const CZResult& result);

}  // namespace gmt
