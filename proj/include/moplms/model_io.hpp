#pragma once

#include <string>
#include <variant>

#include "moplms/baselines.hpp"
#include "moplms/landmark.hpp"

namespace moplms {

// Serializes a fitted model to a self-describing JSON document. Reals are
// written with 17 significant digits so that save -> load reproduces every
// coefficient bit for bit.
void save_model(const std::string& path, const LandmarkModel& model);
void save_model(const std::string& path, const BaselineModel& model);

// Loaders validate the schema version and the structural invariants of the
// stored model and throw std::runtime_error with the offending path on any
// mismatch, including a document of the other model family.
LandmarkModel load_landmark_model(const std::string& path);
BaselineModel load_baseline_model(const std::string& path);

using AnyModel = std::variant<LandmarkModel, BaselineModel>;

// Dispatches on the document's "model" tag so callers can predict without
// knowing which family produced the file.
AnyModel load_any_model(const std::string& path);

}  // namespace moplms
