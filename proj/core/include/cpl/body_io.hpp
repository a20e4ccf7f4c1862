#pragma once

#include <string>

#include "cpl/body.hpp"

namespace cpl {

// Body file format: {"dim": n, "type": "vpolytope"|"hpolytope"|"ellipsoid"
// |"ball_cylinder", "data": ...}. Bodies serialize in canonical order so
// files are byte-reproducible for identical inputs.
std::string body_to_json(const ConvexBody& K);
ConvexBody body_from_json(const std::string& text);

ConvexBody load_body(const std::string& path);
void save_body(const ConvexBody& K, const std::string& path);

// shortest round-trip decimal formatting used in all CSV output
std::string format_double(double v);

}  // namespace cpl
