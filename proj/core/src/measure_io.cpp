#include "gmt/measure_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace gmt {

namespace {

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string("measure io: non-finite ") + what);
  return v;
}

}  // namespace

DiscreteMeasure read_measure_json(std::istream& in) {
  nlohmann::json j;
  in >> j;
  const std::size_t d = j.at("d").get<std::size_t>();
  const std::size_t n = j.at("n").get<std::size_t>();
  const auto& pts = j.at("points");
  const auto& ws = j.at("weights");
  if (pts.size() != ws.size())
    throw std::invalid_argument("measure io: point/weight count mismatch");
  std::vector<double> coords;
  coords.reserve(pts.size() * d);
  for (const auto& row : pts) {
    if (row.size() != d)
      throw std::invalid_argument("measure io: point dimension mismatch");
    for (const auto& v : row)
      coords.push_back(finite_or_throw(v.get<double>(), "coordinate"));
  }
  std::vector<double> weights;
  weights.reserve(ws.size());
  for (const auto& v : ws)
    weights.push_back(finite_or_throw(v.get<double>(), "weight"));
  return build_measure_flat(std::move(coords), std::move(weights), d, n);
}

DiscreteMeasure read_measure_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("measure io: cannot open " + path);
  return read_measure_json(in);
}

void write_measure_json(std::ostream& out, const DiscreteMeasure& mu) {
  nlohmann::json j;
  j["d"] = mu.dim_ambient();
  j["n"] = mu.dim_intrinsic();
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double c : mu.point(i)) row.push_back(c);
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  j["weights"] = mu.weights();
  j["meta"] = nlohmann::json::object();
  out << j.dump(1) << "\n";
}

DiscreteMeasure read_measure_csv(std::istream& in, std::size_t n_intrinsic) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("measure io: empty csv");
  // Header x1,...,xd,w determines d.
  std::size_t d = 0;
  {
    std::stringstream head(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(head, col, ',')) cols.push_back(col);
    if (cols.size() < 2 || cols.back() != "w")
      throw std::invalid_argument("measure io: csv header must be x1,...,xd,w");
    d = cols.size() - 1;
  }
  std::vector<double> coords, weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ','))
      vals.push_back(finite_or_throw(std::stod(cell), "csv value"));
    if (vals.size() != d + 1)
      throw std::invalid_argument("measure io: csv row width mismatch");
    coords.insert(coords.end(), vals.begin(), vals.begin() + d);
    weights.push_back(vals.back());
  }
  return build_measure_flat(std::move(coords), std::move(weights), d,
                            n_intrinsic);
}

DiscreteMeasure read_measure_csv_file(const std::string& path,
                                      std::size_t n_intrinsic) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("measure io: cannot open " + path);
  return read_measure_csv(in, n_intrinsic);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu) {
  const std::size_t d = mu.dim_ambient();
  for (std::size_t a = 1; a <= d; ++a) out << "x" << a << ",";
  out << "w\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.point(i)) out << c << ",";
    out << mu.weight(i) << "\n";
  }
}

}  // namespace gmt
