#pragma once

#include <iosfwd>
#include <string>

#include "gmt/measure.hpp"

namespace gmt {

// Measure file formats.
//   JSON: {"d": int, "n": int, "points": [[f64,...],...],
//          "weights": [f64,...], "meta": {...}}
//   CSV : header `x1,...,xd,w`, one row per point.
// Both readers reject NaN/Inf anywhere in the payload.

DiscreteMeasure read_measure_json(std::istream& in);
DiscreteMeasure read_measure_json_file(const std::string& path);
void write_measure_json(std::ostream& out, const DiscreteMeasure& mu);

DiscreteMeasure read_measure_csv(std::istream& in, std::size_t n_intrinsic);
DiscreteMeasure read_measure_csv_file(const std::string& path,
                                      std::size_t n_intrinsic);
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu);

}  // namespace gmt
