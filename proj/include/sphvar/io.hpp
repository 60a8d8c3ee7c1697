#pragma once

#include "sphvar/estimators.hpp"

#include <string>

namespace sphvar {

// Pyramid CSV: header "band,k,value"; the scaling coefficient is the row
// "scaling,0,<value>", needlet rows carry the scale index. Values use %.17g.
std::string pyramid_to_csv(const CoefficientPyramid& c);
CoefficientPyramid pyramid_from_csv(const std::string& text);

// Pyramid JSON: {"scaling": x, "bands": {"0": [...], "1": [...], ...}}.
std::string pyramid_to_json(const CoefficientPyramid& c);
CoefficientPyramid pyramid_from_json(const std::string& text);

// Dataset CSV: header "theta,phi,y", angles in radians.
std::string dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(const std::string& text);

// Sampled estimate: header "theta,phi,value".
std::string values_to_csv(std::span<const Direction> points, const Eigen::VectorXd& values);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sphvar
