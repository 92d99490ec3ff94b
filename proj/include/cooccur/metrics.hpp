#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cooccur/cohort.hpp"
#include "cooccur/labels.hpp"

namespace cooccur::metrics {

enum class TaskKind : uint8_t { MLCL, BCL, BNCL, BNNCL };

std::string_view task_kind_name(TaskKind k);
TaskKind parse_task_kind(std::string_view name);

// MLCL evaluates one-vs-rest per class; target_class is one of the four
// diseases or "no_apparent_disease". BNCL/BNNCL are fixed to nodule.
struct TaskSpec {
  TaskKind kind = TaskKind::MLCL;
  std::string target_class;

  static TaskSpec mlcl(std::string target);
  static TaskSpec bcl();
  static TaskSpec bncl();
  static TaskSpec bnncl();

  void validate() const;
};

enum class TruthLabel : uint8_t { positive, negative, excluded };

struct ScoreRecord {
  std::string scan_id;
  double score = 0.0;  // in [0, 1]
};

struct EvalResult {
  double auc = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::string subgroup;  // '+'-joined pattern, "exclusive", or ""
};

// Ground truth per scan for one of the derived classification tasks:
//   MLCL(c):  positive iff c positive; negative otherwise.
//   BCL:      positive iff any target disease; negative iff no-apparent;
//             other-disease-only scans excluded.
//   BNCL:     positive iff nodule; negative iff no-apparent; rest excluded.
//   BNNCL:    positive iff nodule; negative iff no-apparent or any other
//             target disease without nodule; other-only scans excluded.
std::unordered_map<std::string, TruthLabel> derive_task_labels(
    const cohort::Manifest& manifest, const TaskSpec& task);

// Mann-Whitney AUC: over all (positive, negative) pairs, the fraction with
// score_pos > score_neg, ties counted 0.5. Excluded scans are ignored.
// Pair counting is exact (integer win/tie tallies). Throws DegenerateClass
// when either class is empty after exclusion.
double auc(const std::vector<ScoreRecord>& scores,
           const std::unordered_map<std::string, TruthLabel>& truth);

// Stratified percentile bootstrap: resample i redraws each class with
// replacement using the stream derived from (seed, i), so the interval is
// independent of execution order. Returns the empirical 2.5/97.5
// percentiles (linear interpolation between order statistics) of the
// resampled AUCs. Degenerate resamples are skipped; more than 50% of them
// degenerate throws InsufficientResamples.
std::pair<double, double> bootstrap_ci(
    const std::vector<ScoreRecord>& scores,
    const std::unordered_map<std::string, TruthLabel>& truth,
    double level = 0.95, std::size_t resamples = 2000, uint64_t seed = 0);

// Co-occurrence-subgroup AUC: positives are the scans whose exact
// positive target-disease set equals {target} + pattern; negatives are all
// target-negative scans, shared across subgroups. pattern must not contain
// target; empty pattern means target occurring exclusively.
EvalResult stratified_eval(const std::vector<ScoreRecord>& scores,
                           const cohort::Manifest& manifest, Disease target,
                           DiseaseSet pattern, std::size_t resamples = 2000,
                           uint64_t seed = 0);

// Task-level evaluation: AUC + bootstrap CI over derive_task_labels truth.
EvalResult evaluate_task(const std::vector<ScoreRecord>& scores,
                         const cohort::Manifest& manifest,
                         const TaskSpec& task, std::size_t resamples = 2000,
                         uint64_t seed = 0);

}  // namespace cooccur::metrics
