#include "sphvar/io.hpp"

#include "sphvar/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sphvar {
namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double to_double(const std::string& s, int lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw DataError("line " + std::to_string(lineno) + ": not a number '" + s + "'");
  }
}

// Rows of a CSV with the expected header; blank lines are skipped.
std::vector<std::vector<std::string>> read_rows(const std::string& text, const std::string& header) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != header) throw DataError("expected CSV header '" + header + "', got '" + line + "'");
      saw_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != 3) throw DataError("line " + std::to_string(lineno) + ": expected 3 columns");
    rows.push_back(std::move(cells));
  }
  if (!saw_header) throw DataError("empty CSV input");
  return rows;
}

CoefficientPyramid from_band_map(double scaling, const std::map<int, std::vector<double>>& bands) {
  CoefficientPyramid c;
  c.scaling = scaling;
  int expect = 0;
  for (const auto& [j, v] : bands) {
    if (j != expect++) throw DataError("pyramid bands are not contiguous from 0");
    c.bands.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return c;
}

}  // namespace

std::string pyramid_to_csv(const CoefficientPyramid& c) {
  std::string s = "band,k,value\nscaling,0," + g17(c.scaling) + "\n";
  for (int j = 0; j < c.num_bands(); ++j) {
    for (Eigen::Index k = 0; k < c.bands[j].size(); ++k) {
      s += std::to_string(j) + "," + std::to_string(k) + "," + g17(c.bands[j][k]) + "\n";
    }
  }
  return s;
}

CoefficientPyramid pyramid_from_csv(const std::string& text) {
  double scaling = 0.0;
  std::map<int, std::vector<double>> bands;
  int lineno = 1;
  for (const auto& row : read_rows(text, "band,k,value")) {
    ++lineno;
    const double v = to_double(row[2], lineno);
    if (row[0] == "scaling") {
      scaling = v;
      continue;
    }
    const int j = static_cast<int>(to_double(row[0], lineno));
    const int k = static_cast<int>(to_double(row[1], lineno));
    auto& b = bands[j];
    if (k != static_cast<int>(b.size())) throw DataError("pyramid CSV: band " + row[0] + " rows out of order");
    b.push_back(v);
  }
  return from_band_map(scaling, bands);
}

std::string pyramid_to_json(const CoefficientPyramid& c) {
  nlohmann::json j;
  j["scaling"] = c.scaling;
  j["bands"] = nlohmann::json::object();
  for (int b = 0; b < c.num_bands(); ++b) {
    j["bands"][std::to_string(b)] = std::vector<double>(c.bands[b].data(), c.bands[b].data() + c.bands[b].size());
  }
  return j.dump() + "\n";
}

CoefficientPyramid pyramid_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::map<int, std::vector<double>> bands;
    for (const auto& [key, v] : j.at("bands").items()) bands[std::stoi(key)] = v.get<std::vector<double>>();
    return from_band_map(j.at("scaling").get<double>(), bands);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed pyramid JSON: ") + e.what());
  }
}

std::string dataset_to_csv(const Dataset& d) {
  std::string s = "theta,phi,y\n";
  for (const auto& r : d) s += g17(r.X.theta()) + "," + g17(r.X.phi()) + "," + g17(r.Y) + "\n";
  return s;
}

Dataset dataset_from_csv(const std::string& text) {
  Dataset d;
  int lineno = 1;
  for (const auto& row : read_rows(text, "theta,phi,y")) {
    ++lineno;
    d.push_back({Direction::from_angles(to_double(row[0], lineno), to_double(row[1], lineno)), to_double(row[2], lineno)});
  }
  return d;
}

std::string values_to_csv(std::span<const Direction> points, const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(points.size()) != values.size()) throw ShapeError("values_to_csv: size mismatch");
  std::string s = "theta,phi,value\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    s += g17(points[i].theta()) + "," + g17(points[i].phi()) + "," + g17(values[static_cast<Eigen::Index>(i)]) + "\n";
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace sphvar
