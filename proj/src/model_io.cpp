#include "moplms/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "moplms/detail/format.hpp"

namespace moplms {
namespace {

using nlohmann::json;
using detail::append_matrix_json;
using detail::append_reals_json;
using detail::format_real;

void write_document(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("save_model: cannot open '" + path +
                             "' for writing");
  }
  out << body;
  if (!out.flush()) {
    throw std::runtime_error("save_model: write to '" + path + "' failed");
  }
}

json parse_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open model document '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& err) {
    throw std::runtime_error("model document '" + path +
                             "' is not valid JSON: " + err.what());
  }
}

// Shared structural checks: schema version first so old readers fail with a
// versioning message rather than a missing-field one.
void check_header(const json& doc, const std::string& path,
                  const std::string& expected_model) {
  if (!doc.is_object()) {
    throw std::runtime_error("model document '" + path +
                             "' must be a JSON object");
  }
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw std::runtime_error("model document '" + path +
                             "' is missing an integer schema_version");
  }
  const int version = doc["schema_version"].get<int>();
  if (version != kModelSchemaVersion) {
    throw std::runtime_error(
        "model document '" + path + "' has unsupported schema_version " +
        std::to_string(version) + " (expected " +
        std::to_string(kModelSchemaVersion) + ")");
  }
  if (!doc.contains("model") || !doc["model"].is_string()) {
    throw std::runtime_error("model document '" + path +
                             "' is missing the model tag");
  }
  const std::string model = doc["model"].get<std::string>();
  if (!expected_model.empty() && model != expected_model) {
    throw std::runtime_error("model document '" + path + "' holds a " + model +
                             " model, not a " + expected_model + " model");
  }
}

[[noreturn]] void fail_field(const std::string& path, const char* field,
                             const char* why) {
  throw std::runtime_error("model document '" + path + "': field '" + field +
                           "' " + why);
}

double read_real(const json& doc, const std::string& path, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number()) {
    fail_field(path, field, "must be a number");
  }
  return doc[field].get<double>();
}

std::vector<double> read_reals(const json& doc, const std::string& path,
                               const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) {
    fail_field(path, field, "must be an array of numbers");
  }
  std::vector<double> values;
  values.reserve(doc[field].size());
  for (const auto& entry : doc[field]) {
    if (!entry.is_number()) fail_field(path, field, "must be an array of numbers");
    values.push_back(entry.get<double>());
  }
  return values;
}

std::vector<std::size_t> read_indices(const json& doc, const std::string& path,
                                      const char* field) {
  if (!doc.contains(field) || !doc[field].is_array()) {
    fail_field(path, field, "must be an array of non-negative integers");
  }
  std::vector<std::size_t> values;
  values.reserve(doc[field].size());
  for (const auto& entry : doc[field]) {
    if (!entry.is_number_unsigned()) {
      fail_field(path, field, "must be an array of non-negative integers");
    }
    values.push_back(entry.get<std::size_t>());
  }
  return values;
}

Matrix read_matrix(const json& doc, const std::string& path,
                   const char* field) {
  if (!doc.contains(field) || !doc[field].is_object()) {
    fail_field(path, field, "must be a {rows, cols, data} object");
  }
  const json& m = doc[field];
  if (!m.contains("rows") || !m["rows"].is_number_unsigned() ||
      !m.contains("cols") || !m["cols"].is_number_unsigned() ||
      !m.contains("data") || !m["data"].is_array()) {
    fail_field(path, field, "must be a {rows, cols, data} object");
  }
  const auto rows = m["rows"].get<std::size_t>();
  const auto cols = m["cols"].get<std::size_t>();
  std::vector<double> data;
  data.reserve(m["data"].size());
  for (const auto& entry : m["data"]) {
    if (!entry.is_number()) fail_field(path, field, "holds non-numeric data");
    data.push_back(entry.get<double>());
  }
  if (data.size() != rows * cols) {
    fail_field(path, field, "has data length inconsistent with rows*cols");
  }
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const std::exception& err) {
    throw std::runtime_error("model document '" + path + "': field '" +
                             std::string(field) + "' " + err.what());
  }
}

std::string read_string(const json& doc, const std::string& path,
                        const char* field) {
  if (!doc.contains(field) || !doc[field].is_string()) {
    fail_field(path, field, "must be a string");
  }
  return doc[field].get<std::string>();
}

LandmarkModel landmark_from_json(const json& doc, const std::string& path) {
  LandmarkModel model;
  model.task = task_from_name(read_string(doc, path, "task"));
  model.lambda1 = read_real(doc, path, "lambda1");
  model.lambda2 = read_real(doc, path, "lambda2");
  model.lambda_stage2 = read_real(doc, path, "lambda_stage2");
  model.landmarks = read_indices(doc, path, "landmarks");
  model.y_means = read_reals(doc, path, "y_means");
  model.stage2_intercepts = read_reals(doc, path, "stage2_intercepts");
  model.a_hat = read_matrix(doc, path, "a_hat");
  model.stage2_weights = read_matrix(doc, path, "stage2_weights");

  const std::size_t k = model.a_hat.rows();
  const std::size_t s = model.landmarks.size();
  if (s == 0) fail_field(path, "landmarks", "must not be empty");
  if (model.a_hat.cols() != k) fail_field(path, "a_hat", "must be square");
  for (std::size_t i = 0; i < s; ++i) {
    if (model.landmarks[i] >= k) {
      fail_field(path, "landmarks", "contains an out-of-range output index");
    }
    if (i > 0 && model.landmarks[i] <= model.landmarks[i - 1]) {
      fail_field(path, "landmarks", "must be strictly ascending");
    }
  }
  if (model.stage2_weights.cols() != s) {
    fail_field(path, "stage2_weights", "must have one column per landmark");
  }
  if (model.stage2_intercepts.size() != s) {
    fail_field(path, "stage2_intercepts", "must have one entry per landmark");
  }
  if (model.y_means.size() != k) {
    fail_field(path, "y_means", "must have one entry per output");
  }
  return model;
}

BaselineModel baseline_from_json(const json& doc, const std::string& path) {
  BaselineModel model;
  model.kind = baseline_kind_from_name(read_string(doc, path, "kind"));
  model.task = task_from_name(read_string(doc, path, "task"));
  model.lambda = read_real(doc, path, "lambda");
  if (!doc.contains("rank") || !doc["rank"].is_number_unsigned()) {
    fail_field(path, "rank", "must be a non-negative integer");
  }
  model.rank = doc["rank"].get<std::size_t>();
  model.b = read_matrix(doc, path, "b");
  model.intercepts = read_reals(doc, path, "intercepts");
  model.x_means = read_reals(doc, path, "x_means");
  model.y_means = read_reals(doc, path, "y_means");

  if (model.intercepts.size() != model.b.cols()) {
    fail_field(path, "intercepts", "must have one entry per output");
  }
  if (model.x_means.size() != model.b.rows()) {
    fail_field(path, "x_means", "must have one entry per input");
  }
  if (model.y_means.size() != model.b.cols()) {
    fail_field(path, "y_means", "must have one entry per output");
  }
  return model;
}

}  // namespace

void save_model(const std::string& path, const LandmarkModel& model) {
  std::string body;
  body.reserve(64 + 24 * (model.a_hat.values().size() +
                          model.stage2_weights.values().size()));
  body += "{\"schema_version\":" + std::to_string(kModelSchemaVersion);
  body += ",\"model\":\"landmark\"";
  body += ",\"task\":\"" + task_name(model.task) + '"';
  body += ",\"lambda1\":" + format_real(model.lambda1);
  body += ",\"lambda2\":" + format_real(model.lambda2);
  body += ",\"lambda_stage2\":" + format_real(model.lambda_stage2);
  body += ",\"landmarks\":[";
  for (std::size_t i = 0; i < model.landmarks.size(); ++i) {
    if (i != 0) body += ',';
    body += std::to_string(model.landmarks[i]);
  }
  body += "],\"y_means\":";
  append_reals_json(body, model.y_means);
  body += ",\"stage2_intercepts\":";
  append_reals_json(body, model.stage2_intercepts);
  body += ',';
  append_matrix_json(body, "a_hat", model.a_hat);
  body += ',';
  append_matrix_json(body, "stage2_weights", model.stage2_weights);
  body += "}\n";
  write_document(path, body);
}

void save_model(const std::string& path, const BaselineModel& model) {
  std::string body;
  body.reserve(64 + 24 * model.b.values().size());
  body += "{\"schema_version\":" + std::to_string(kModelSchemaVersion);
  body += ",\"model\":\"baseline\"";
  body += ",\"kind\":\"" + baseline_kind_name(model.kind) + '"';
  body += ",\"task\":\"" + task_name(model.task) + '"';
  body += ",\"lambda\":" + format_real(model.lambda);
  body += ",\"rank\":" + std::to_string(model.rank);
  body += ",\"intercepts\":";
  append_reals_json(body, model.intercepts);
  body += ",\"x_means\":";
  append_reals_json(body, model.x_means);
  body += ",\"y_means\":";
  append_reals_json(body, model.y_means);
  body += ',';
  append_matrix_json(body, "b", model.b);
  body += "}\n";
  write_document(path, body);
}

LandmarkModel load_landmark_model(const std::string& path) {
  const json doc = parse_document(path);
  check_header(doc, path, "landmark");
  return landmark_from_json(doc, path);
}

BaselineModel load_baseline_model(const std::string& path) {
  const json doc = parse_document(path);
  check_header(doc, path, "baseline");
  return baseline_from_json(doc, path);
}

AnyModel load_any_model(const std::string& path) {
  const json doc = parse_document(path);
  check_header(doc, path, "");
  if (doc["model"].get<std::string>() == "landmark") {
    return landmark_from_json(doc, path);
  }
  if (doc["model"].get<std::string>() == "baseline") {
    return baseline_from_json(doc, path);
  }
  throw std::runtime_error("model document '" + path +
                           "' has unknown model tag '" +
                           doc["model"].get<std::string>() + "'");
}

}  // namespace moplms
