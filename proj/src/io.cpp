#include "cooccur/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cooccur::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// One CSV record, quote-aware. Returns false at end of stream.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int c;
  while ((c = in.get()) != EOF) {
    any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

void expect_header(std::istream& in, const std::vector<std::string>& expected,
                   const std::string& path) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields) || fields != expected) {
    std::string want;
    for (const auto& f : expected) {
      if (!want.empty()) want += ',';
      want += f;
    }
    throw ValidationError(path + ": expected header '" + want + "'");
  }
}

bool parse_bool01(const std::string& s, const std::string& path) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw ValidationError(path + ": boolean field must be 0 or 1, got '" + s +
                        "'");
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ValidationError(path + ": bad number '" + s + "'");
  return v;
}

uint64_t parse_u64(const json& j, const std::string& key,
                   const std::string& path) {
  if (!j.is_number_unsigned() && !j.is_number_integer())
    throw ValidationError(path + ": " + key + " must be an integer");
  if (j.is_number_integer() && j.get<int64_t>() < 0)
    throw ValidationError(path + ": " + key + " must be non-negative");
  return j.get<uint64_t>();
}

json parse_json_file(const std::string& path) {
  auto in = open_input(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

const json& require_key(const json& j, const std::string& key,
                        const std::string& path) {
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(path + ": missing key '" + key + "'");
  return *it;
}

std::set<std::string> term_set(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": term list expected");
  std::set<std::string> terms;
  for (const auto& t : j) {
    if (!t.is_string())
      throw ValidationError(path + ": terms must be strings");
    terms.insert(t.get<std::string>());
  }
  return terms;
}

LabelVector labels_from_fields(const std::vector<std::string>& fields,
                               std::size_t offset, const std::string& path) {
  LabelVector lv;
  lv.scan_id = fields[0];
  lv.atelectasis = parse_bool01(fields[offset + 0], path);
  lv.nodule = parse_bool01(fields[offset + 1], path);
  lv.emphysema = parse_bool01(fields[offset + 2], path);
  lv.effusion = parse_bool01(fields[offset + 3], path);
  lv.other_disease = parse_bool01(fields[offset + 4], path);
  lv.no_apparent_disease = parse_bool01(fields[offset + 5], path);
  lv.check();
  return lv;
}

void append_label_fields(std::string& line, const LabelVector& lv) {
  for (bool b : {lv.atelectasis, lv.nodule, lv.emphysema, lv.effusion,
                 lv.other_disease, lv.no_apparent_disease}) {
    line += ',';
    line += b ? '1' : '0';
  }
}

const std::vector<std::string> kLabelHeader = {
    "scan_id",  "atelectasis", "nodule",
    "emphysema", "effusion",   "other",
    "no_apparent_disease"};

const std::vector<std::string> kManifestHeader = {
    "scan_id",   "subject_id", "atelectasis", "nodule",
    "emphysema", "effusion",   "other",       "no_apparent_disease"};

}  // namespace

std::vector<Report> read_corpus_jsonl(const std::string& path) {
  auto in = open_input(path);
  std::vector<Report> reports;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " +
                            e.what());
    }
    Report r;
    for (auto [key, dst] : {std::pair{"subject_id", &r.subject_id},
                            {"scan_id", &r.scan_id},
                            {"text", &r.text}}) {
      const json& field = require_key(j, key, path);
      if (!field.is_string())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": '" +
                              key + "' must be a string");
      *dst = field.get<std::string>();
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_corpus_jsonl(const std::vector<Report>& reports,
                        const std::string& path) {
  auto out = open_output(path);
  for (const auto& r : reports) {
    json j{{"subject_id", r.subject_id},
           {"scan_id", r.scan_id},
           {"text", r.text}};
    out << j.dump() << '\n';
  }
  finish_output(out, path);
}

rba::RuleDictionary read_dictionary(const std::string& path) {
  const json j = parse_json_file(path);
  if (!j.is_object()) throw ValidationError(path + ": object expected");
  static const std::set<std::string> allowed = {
      "organ_terms", "disease_terms", "negation_terms",
      "other_disease_terms"};
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key))
      throw ValidationError(path + ": unknown key '" + key + "'");
  }
  rba::RuleDictionary dict;
  dict.organ_terms = term_set(require_key(j, "organ_terms", path), path);
  dict.negation_terms =
      term_set(require_key(j, "negation_terms", path), path);
  for (auto key : {"disease_terms", "other_disease_terms"}) {
    const json& groups = require_key(j, key, path);
    if (!groups.is_object())
      throw ValidationError(path + ": '" + std::string(key) +
                            "' must be an object");
    auto& dst = std::string_view(key) == "disease_terms"
                    ? dict.disease_terms
                    : dict.other_disease_terms;
    for (const auto& [name, terms] : groups.items())
      dst[name] = term_set(terms, path);
  }
  try {
    dict.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return dict;
}

void write_labels_csv(const std::vector<LabelVector>& labels,
                      const std::string& path) {
  auto out = open_output(path);
  out << "scan_id,atelectasis,nodule,emphysema,effusion,other,"
         "no_apparent_disease\n";
  for (const auto& lv : labels) {
    std::string line = csv_field(lv.scan_id);
    append_label_fields(line, lv);
    out << line << '\n';
  }
  finish_output(out, path);
}

std::vector<LabelVector> read_labels_csv(const std::string& path) {
  auto in = open_input(path);
  expect_header(in, kLabelHeader, path);
  std::vector<LabelVector> labels;
  std::vector<std::string> fields;
  while (read_csv_record(in, fields)) {
    if (fields.size() != kLabelHeader.size())
      throw ValidationError(path + ": wrong field count");
    labels.push_back(labels_from_fields(fields, 1, path));
  }
  return labels;
}

void write_manifest_csv(const cohort::Manifest& manifest,
                        const std::string& path) {
  auto out = open_output(path);
  out << "scan_id,subject_id,atelectasis,nodule,emphysema,effusion,other,"
         "no_apparent_disease\n";
  for (const auto& e : manifest.entries) {
    std::string line = csv_field(e.scan_id);
    line += ',';
    line += csv_field(e.subject_id);
    append_label_fields(line, e.labels);
    out << line << '\n';
  }
  finish_output(out, path);
}

cohort::Manifest read_manifest_csv(const std::string& path) {
  auto in = open_input(path);
  expect_header(in, kManifestHeader, path);
  cohort::Manifest manifest;
  std::vector<std::string> fields;
  while (read_csv_record(in, fields)) {
    if (fields.size() != kManifestHeader.size())
      throw ValidationError(path + ": wrong field count");
    LabelVector lv = labels_from_fields(fields, 2, path);
    manifest.entries.push_back({fields[0], fields[1], std::move(lv)});
  }
  return manifest;
}

void write_split_csv(const cohort::SplitAssignment& split,
                     const std::string& path) {
  std::vector<std::pair<std::string, cohort::Split>> rows(
      split.by_subject.begin(), split.by_subject.end());
  std::sort(rows.begin(), rows.end());
  auto out = open_output(path);
  out << "subject_id,split\n";
  for (const auto& [subject, s] : rows)
    out << csv_field(subject) << ',' << cohort::split_name(s) << '\n';
  finish_output(out, path);
}

cohort::SplitAssignment read_split_csv(const std::string& path) {
  auto in = open_input(path);
  expect_header(in, {"subject_id", "split"}, path);
  cohort::SplitAssignment assignment;
  std::vector<std::string> fields;
  while (read_csv_record(in, fields)) {
    if (fields.size() != 2)
      throw ValidationError(path + ": wrong field count");
    if (!assignment.by_subject
             .emplace(fields[0], cohort::parse_split(fields[1]))
             .second)
      throw ValidationError(path + ": duplicate subject " + fields[0]);
  }
  return assignment;
}

void write_tree_json(const cohort::CooccurrenceTree& tree,
                     const std::string& path) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json combo = json::array();
    if (node.no_apparent) {
      combo.push_back("no_apparent");
    } else {
      for (const auto& name : node.combo.sorted_names()) combo.push_back(name);
    }
    nodes.push_back(
        {{"combo", combo}, {"n", node.n}, {"percent", node.percent}});
  }
  const json j{{"N", tree.total_subjects}, {"nodes", nodes}};
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish_output(out, path);
}

cohort::CooccurrenceTree read_tree_json(const std::string& path) {
  const json j = parse_json_file(path);
  cohort::CooccurrenceTree tree;
  tree.total_subjects = parse_u64(require_key(j, "N", path), "N", path);
  const json& nodes = require_key(j, "nodes", path);
  if (!nodes.is_array())
    throw ValidationError(path + ": 'nodes' must be an array");
  for (const auto& node_json : nodes) {
    cohort::TreeNode node;
    const json& combo = require_key(node_json, "combo", path);
    if (!combo.is_array())
      throw ValidationError(path + ": 'combo' must be an array");
    for (const auto& name : combo) {
      if (!name.is_string())
        throw ValidationError(path + ": combo entries must be strings");
      if (name == "no_apparent") {
        node.no_apparent = true;
      } else {
        node.combo.set(parse_disease(name.get<std::string>()));
      }
    }
    node.n = parse_u64(require_key(node_json, "n", path), "n", path);
    const json& percent = require_key(node_json, "percent", path);
    if (!percent.is_number())
      throw ValidationError(path + ": 'percent' must be a number");
    node.percent = percent.get<double>();
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

void write_scores_csv(const std::vector<metrics::ScoreRecord>& scores,
                      const std::string& path) {
  auto out = open_output(path);
  out << "scan_id,score\n";
  for (const auto& rec : scores)
    out << csv_field(rec.scan_id) << ',' << format_double(rec.score) << '\n';
  finish_output(out, path);
}

std::vector<metrics::ScoreRecord> read_scores_csv(const std::string& path) {
  auto in = open_input(path);
  expect_header(in, {"scan_id", "score"}, path);
  std::vector<metrics::ScoreRecord> scores;
  std::vector<std::string> fields;
  while (read_csv_record(in, fields)) {
    if (fields.size() != 2)
      throw ValidationError(path + ": wrong field count");
    const double score = parse_double(fields[1], path);
    if (!std::isfinite(score) || score < 0.0 || score > 1.0)
      throw ValidationError(path + ": score for " + fields[0] +
                            " must lie in [0, 1]");
    scores.push_back({fields[0], score});
  }
  return scores;
}

void write_task_labels_csv(
    const std::unordered_map<std::string, metrics::TruthLabel>& truth,
    const std::vector<std::string>& scan_order, const std::string& path) {
  auto out = open_output(path);
  out << "scan_id,label\n";
  for (const auto& scan : scan_order) {
    auto it = truth.find(scan);
    if (it == truth.end())
      throw ValidationError("no task label for scan " + scan);
    const char* name = it->second == metrics::TruthLabel::positive
                           ? "positive"
                           : it->second == metrics::TruthLabel::negative
                                 ? "negative"
                                 : "excluded";
    out << csv_field(scan) << ',' << name << '\n';
  }
  finish_output(out, path);
}

void write_eval_csv(const std::vector<EvalRow>& rows, std::ostream& out) {
  out << "task,target,pattern,auc,ci_low,ci_high,n_pos,n_neg\n";
  for (const auto& row : rows) {
    out << csv_field(row.task) << ',' << csv_field(row.target) << ','
        << csv_field(row.pattern) << ',' << format_double(row.result.auc)
        << ',' << format_double(row.result.ci_low) << ','
        << format_double(row.result.ci_high) << ',' << row.result.n_pos
        << ',' << row.result.n_neg << '\n';
  }
}

void write_eval_csv(const std::vector<EvalRow>& rows,
                    const std::string& path) {
  auto out = open_output(path);
  write_eval_csv(rows, static_cast<std::ostream&>(out));
  finish_output(out, path);
}

simcls::PopulationSpec read_population_spec(const std::string& path) {
  const json j = parse_json_file(path);
  simcls::PopulationSpec spec;
  spec.n_subjects = parse_u64(require_key(j, "n_subjects", path),
                              "n_subjects", path);
  const json& weights = require_key(j, "combo_weights", path);
  if (!weights.is_object())
    throw ValidationError(path + ": combo_weights must be an object");
  for (const auto& [key, w] : weights.items()) {
    if (!w.is_number())
      throw ValidationError(path + ": weight for '" + key +
                            "' must be a number");
    spec.combo_weights[key] = w.get<double>();
  }
  if (j.contains("scans_per_subject"))
    spec.scans_per_subject =
        parse_u64(j["scans_per_subject"], "scans_per_subject", path);
  spec.seed = parse_u64(require_key(j, "seed", path), "seed", path);
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return spec;
}

simcls::ClassifierSpec read_classifier_spec(const std::string& path) {
  const json j = parse_json_file(path);
  simcls::ClassifierSpec spec;
  const json& weights = require_key(j, "weights", path);
  if (!weights.is_object())
    throw ValidationError(path + ": weights must be an object");
  for (const auto& [name, w] : weights.items()) {
    if (!w.is_number())
      throw ValidationError(path + ": weight for '" + name +
                            "' must be a number");
    spec.weights[name] = w.get<double>();
  }
  for (auto [key, dst] : {std::pair{"bias", &spec.bias},
                          {"noise_sd", &spec.noise_sd}}) {
    const json& field = require_key(j, key, path);
    if (!field.is_number())
      throw ValidationError(path + ": '" + key + "' must be a number");
    *dst = field.get<double>();
  }
  spec.seed = parse_u64(require_key(j, "seed", path), "seed", path);
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return spec;
}

}  // namespace cooccur::io
