#include "core/class_weights.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/text.hpp"

namespace vespa {

using jsonutil::ojson;

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(text::trim(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos)));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": not a number: \"" + s + "\"");
  }
}

void check_or_throw(const ClassWeightTable& t) {
  const auto v = validate_weights(t);
  if (!v.empty()) throw ConfigError("weight table: " + v.front());
}

}  // namespace

ClassWeightTable::ClassWeightTable(std::vector<std::string> models) : models_(std::move(models)) {
  for (auto& row : weights_) row.assign(models_.size(), 0.0);
}

std::optional<std::size_t> ClassWeightTable::model_index(std::string_view model) const {
  for (std::size_t i = 0; i < models_.size(); ++i)
    if (models_[i] == model) return i;
  return std::nullopt;
}

double ClassWeightTable::weight(QuestionClass c, std::string_view model) const {
  const auto idx = model_index(model);
  if (!idx) throw ConfigError("unknown model \"" + std::string(model) + "\" in class weight table");
  return weights_[index_of(c)][*idx];
}

void ClassWeightTable::set_weight(QuestionClass c, std::string_view model, double value) {
  const auto idx = model_index(model);
  if (!idx) throw ConfigError("unknown model \"" + std::string(model) + "\" in class weight table");
  weights_[index_of(c)][*idx] = value;
}

ClassWeightTable ClassWeightTable::select(const std::vector<std::string>& models) const {
  ClassWeightTable out(models);
  for (const auto c : kAllQuestionClasses) {
    out.set_question_count(c, question_count(c));
    for (const auto& m : models) out.set_weight(c, m, weight(c, m));
  }
  return out;
}

std::vector<std::string> validate_weights(const ClassWeightTable& table) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& m : table.models())
    if (!names.insert(m).second) out.push_back("duplicate model \"" + m + "\"");
  for (const auto c : kAllQuestionClasses) {
    if (table.question_count(c) < 0) out.push_back(std::string(to_string(c)) + ": negative question count");
    for (std::size_t m = 0; m < table.models().size(); ++m) {
      const double w = table.weight(c, m);
      if (!(w >= 0.0 && w <= 100.0))
        out.push_back(std::string(to_string(c)) + "/" + table.models()[m] + ": weight outside [0,100]");
    }
  }
  return out;
}

ClassWeightTable parse_weights_json(std::string_view json) {
  ojson root;
  try {
    root = jsonutil::parse_strict(json, "weights");
    jsonutil::reject_unknown_keys(root, "", {"models", "classes"});
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  if (!root.contains("models") || !root["models"].is_array() || !root.contains("classes") ||
      !root["classes"].is_object())
    throw ConfigError("weights: requires \"models\" list and \"classes\" object");
  std::vector<std::string> models;
  for (const auto& m : root["models"]) {
    if (!m.is_string()) throw ConfigError("weights: model names must be strings");
    models.push_back(m.get<std::string>());
  }
  ClassWeightTable table(models);
  std::set<QuestionClass> seen;
  for (const auto& [label, body] : root["classes"].items()) {
    const auto cls = parse_question_class(label);
    if (!cls) throw ConfigError("weights: unknown question class \"" + label + "\"");
    if (!seen.insert(*cls).second) throw ConfigError("weights: class \"" + label + "\" listed twice");
    const auto path = "classes." + label;
    if (!body.is_object() || !body.contains("weights") || !body["weights"].is_object())
      throw ConfigError("weights: " + path + " requires a \"weights\" object");
    for (const auto& [key, _] : body.items())
      if (key != "count" && key != "weights") throw ConfigError("weights: unknown key at " + path + "." + key);
    if (body.contains("count")) {
      if (!body["count"].is_number_integer()) throw ConfigError("weights: " + path + ".count must be an integer");
      table.set_question_count(*cls, body["count"].get<int>());
    }
    const auto& w = body["weights"];
    for (const auto& [model, value] : w.items()) {
      if (!table.has_model(model)) throw ConfigError("weights: " + path + " names unknown model \"" + model + "\"");
      if (!value.is_number()) throw ConfigError("weights: " + path + "." + model + " must be a number");
      table.set_weight(*cls, model, value.get<double>());
    }
    for (const auto& m : models)
      if (!w.contains(m)) throw ConfigError("weights: " + path + " is missing model \"" + m + "\"");
  }
  for (const auto c : kAllQuestionClasses)
    if (!seen.count(c)) throw ConfigError("weights: missing class \"" + std::string(to_string(c)) + "\"");
  check_or_throw(table);
  return table;
}

ClassWeightTable parse_weights_tsv(std::string_view tsv) {
  std::istringstream in{std::string(tsv)};
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    rows.push_back(split_tabs(line));
  }
  if (rows.empty()) throw ConfigError("weights TSV: empty");
  const auto& header = rows.front();
  if (header.size() < 3 || !text::iequals(header[0], "Class") || !text::iequals(header[1], "Question count"))
    throw ConfigError("weights TSV: header must be Class, Question count, <models...>");
  ClassWeightTable table(std::vector<std::string>(header.begin() + 2, header.end()));
  std::set<QuestionClass> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto where = "weights TSV row " + std::to_string(r + 1);
    const auto& row = rows[r];
    if (row.size() != header.size()) throw ConfigError(where + ": expected " + std::to_string(header.size()) + " cells");
    const auto cls = parse_question_class(row[0]);
    if (!cls) throw ConfigError(where + ": unknown question class \"" + row[0] + "\"");
    if (!seen.insert(*cls).second) throw ConfigError(where + ": class listed twice");
    try {
      table.set_question_count(*cls, static_cast<int>(parse_number(row[1], where)));
      for (std::size_t m = 2; m < row.size(); ++m) table.set_weight(*cls, header[m], parse_number(row[m], where));
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto c : kAllQuestionClasses)
    if (!seen.count(c)) throw ConfigError("weights TSV: missing class \"" + std::string(table_label(c)) + "\"");
  check_or_throw(table);
  return table;
}

ClassWeightTable load_weights(const std::string& path) {
  std::string src;
  try {
    src = jsonutil::read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  const auto first = src.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && src[first] == '{') return parse_weights_json(src);
  return parse_weights_tsv(src);
}

std::string serialize_weights_json(const ClassWeightTable& table) {
  ojson root;
  root["models"] = table.models();
  ojson classes = ojson::object();
  for (const auto c : kAllQuestionClasses) {
    ojson w = ojson::object();
    for (std::size_t m = 0; m < table.models().size(); ++m) w[table.models()[m]] = table.weight(c, m);
    classes[std::string(to_string(c))] = {{"count", table.question_count(c)}, {"weights", w}};
  }
  root["classes"] = classes;
  return root.dump(2);
}

std::string class_report(const ClassWeightTable& table) {
  std::ostringstream out;
  out << "Class\tQuestion count";
  for (const auto& m : table.models()) out << '\t' << m;
  out << '\n';
  for (const auto c : kAllQuestionClasses) {
    out << to_string(c) << '\t' << table.question_count(c);
    for (std::size_t m = 0; m < table.models().size(); ++m) out << '\t' << fmt2(table.weight(c, m));
    out << '\n';
  }
  return out.str();
}

ClassWeightTable calibrate_weights(const std::vector<QaEvalRecord>& eval_set,
                                   const std::vector<ModelPredictions>& predictions) {
  std::vector<std::string> models;
  for (const auto& p : predictions) models.push_back(p.model);
  ClassWeightTable table(models);
  if (!validate_weights(table).empty()) throw DataError("calibrate: duplicate model names");

  std::array<std::vector<double>, kQuestionClassCount> sums{};
  for (auto& s : sums) s.assign(models.size(), 0.0);
  std::array<int, kQuestionClassCount> counts{};

  for (const auto& rec : eval_set) {
    const auto c = index_of(classify(rec.question));
    ++counts[c];
    for (std::size_t m = 0; m < predictions.size(); ++m) {
      const auto it = predictions[m].answers.find(rec.id);
      if (it == predictions[m].answers.end())
        throw DataError("calibrate: model " + predictions[m].model + " has no prediction for question " + rec.id);
      sums[c][m] += squad_f1(it->second, rec.gold_answers);
    }
  }
  for (const auto c : kAllQuestionClasses) {
    const auto ci = index_of(c);
    table.set_question_count(c, counts[ci]);
    for (std::size_t m = 0; m < models.size(); ++m)
      table.set_weight(c, models[m], counts[ci] == 0 ? 0.0 : 100.0 * sums[ci][m] / counts[ci]);
  }
  return table;
}

std::vector<ModelPredictions> load_predictions_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataError("predictions directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no <model>.json prediction files in " + dir);
  std::vector<ModelPredictions> out;
  for (const auto& f : files) out.push_back({f.stem().string(), parse_predictions(jsonutil::read_file(f.string()))});
  return out;
}

}  // namespace vespa
