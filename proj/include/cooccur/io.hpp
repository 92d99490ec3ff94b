#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "cooccur/cohort.hpp"
#include "cooccur/labels.hpp"
#include "cooccur/metrics.hpp"
#include "cooccur/rba.hpp"
#include "cooccur/simcls.hpp"

namespace cooccur::io {

// Corpus: JSON lines, one object per report:
//   {"subject_id": str, "scan_id": str, "text": str}
std::vector<Report> read_corpus_jsonl(const std::string& path);
void write_corpus_jsonl(const std::vector<Report>& reports,
                        const std::string& path);

// Dictionary JSON with keys organ_terms, disease_terms, negation_terms,
// other_disease_terms. The loader validates RuleDictionary invariants.
rba::RuleDictionary read_dictionary(const std::string& path);

// Labels CSV: scan_id,atelectasis,nodule,emphysema,effusion,other,
// no_apparent_disease with 0/1 booleans, rows in input order.
void write_labels_csv(const std::vector<LabelVector>& labels,
                      const std::string& path);
std::vector<LabelVector> read_labels_csv(const std::string& path);

// Manifest CSV: scan_id,subject_id,<label columns as above>.
void write_manifest_csv(const cohort::Manifest& manifest,
                        const std::string& path);
cohort::Manifest read_manifest_csv(const std::string& path);

// Split CSV: subject_id,split.
void write_split_csv(const cohort::SplitAssignment& split,
                     const std::string& path);
cohort::SplitAssignment read_split_csv(const std::string& path);

// Tree JSON: {"N": int, "nodes": [{"combo": [...], "n": int,
// "percent": float}, ...]}, nodes by descending n then combo key.
void write_tree_json(const cohort::CooccurrenceTree& tree,
                     const std::string& path);
cohort::CooccurrenceTree read_tree_json(const std::string& path);

// Scores CSV: scan_id,score.
void write_scores_csv(const std::vector<metrics::ScoreRecord>& scores,
                      const std::string& path);
std::vector<metrics::ScoreRecord> read_scores_csv(const std::string& path);

// Task-label CSV: scan_id,label with label in {positive,negative,excluded}.
void write_task_labels_csv(
    const std::unordered_map<std::string, metrics::TruthLabel>& truth,
    const std::vector<std::string>& scan_order, const std::string& path);

// Eval CSV: task,target,pattern,auc,ci_low,ci_high,n_pos,n_neg.
struct EvalRow {
  std::string task;
  std::string target;
  std::string pattern;
  metrics::EvalResult result;
};
void write_eval_csv(const std::vector<EvalRow>& rows, std::ostream& out);
void write_eval_csv(const std::vector<EvalRow>& rows, const std::string& path);

simcls::PopulationSpec read_population_spec(const std::string& path);
simcls::ClassifierSpec read_classifier_spec(const std::string& path);

}  // namespace cooccur::io
