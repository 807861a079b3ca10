#pragma once

#include <string>

#include "ar3/dtm.hpp"
#include "ar3/model.hpp"
#include "ar3/optimality.hpp"

namespace ar3 {

// JSON encodings. Matrices are nested row arrays; tensors are tagged by kind
// ("zero" | "diagonal" with "t" | "lowrank" with "factors" as a list of factor
// vectors | "dense" with "entries" flattened row-major); the metric is either
// the string "identity" or a dense matrix.

std::string to_json(const QuarticModel& m, int indent = 2);
QuarticModel model_from_json(const std::string& text);

std::string to_json(const SqrModel& m, int indent = 2);
SqrModel sqr_from_json(const std::string& text);

std::string to_json(const OptimalityReport& r, int indent = 2);

// Point files: either a bare array or {"s": [...]}.
std::string point_to_json(const Vector& s, int indent = 2);
Vector point_from_json(const std::string& text);

// Solve results with the full iteration trace.
std::string to_json(const DtmResult& r, int indent = 2);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ar3
