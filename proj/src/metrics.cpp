#include "cooccur/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cooccur/parallel.hpp"
#include "cooccur/rng.hpp"

namespace cooccur::metrics {

std::string_view task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::MLCL: return "mlcl";
    case TaskKind::BCL: return "bcl";
    case TaskKind::BNCL: return "bncl";
    case TaskKind::BNNCL: return "bnncl";
  }
  return "";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "mlcl") return TaskKind::MLCL;
  if (name == "bcl") return TaskKind::BCL;
  if (name == "bncl") return TaskKind::BNCL;
  if (name == "bnncl") return TaskKind::BNNCL;
  throw ValidationError("unknown task kind: " + std::string(name));
}

TaskSpec TaskSpec::mlcl(std::string target) {
  TaskSpec t{TaskKind::MLCL, std::move(target)};
  t.validate();
  return t;
}
TaskSpec TaskSpec::bcl() { return {TaskKind::BCL, ""}; }
TaskSpec TaskSpec::bncl() { return {TaskKind::BNCL, "nodule"}; }
TaskSpec TaskSpec::bnncl() { return {TaskKind::BNNCL, "nodule"}; }

void TaskSpec::validate() const {
  switch (kind) {
    case TaskKind::MLCL: {
      if (target_class == "no_apparent_disease") return;
      parse_disease(target_class);  // throws UnknownClass
      return;
    }
    case TaskKind::BCL:
      return;
    case TaskKind::BNCL:
    case TaskKind::BNNCL:
      if (target_class != "nodule")
        throw ValidationError("nodule tasks require target_class = nodule");
      return;
  }
}

std::unordered_map<std::string, TruthLabel> derive_task_labels(
    const cohort::Manifest& manifest, const TaskSpec& task) {
  task.validate();
  std::unordered_map<std::string, TruthLabel> truth;
  truth.reserve(manifest.size());
  for (const auto& e : manifest.entries) {
    const LabelVector& lv = e.labels;
    TruthLabel label = TruthLabel::excluded;
    switch (task.kind) {
      case TaskKind::MLCL: {
        bool pos = task.target_class == "no_apparent_disease"
                       ? lv.no_apparent_disease
                       : lv.has(parse_disease(task.target_class));
        label = pos ? TruthLabel::positive : TruthLabel::negative;
        break;
      }
      case TaskKind::BCL:
        if (lv.any_target())
          label = TruthLabel::positive;
        else if (lv.no_apparent_disease)
          label = TruthLabel::negative;
        break;
      case TaskKind::BNCL:
        if (lv.nodule)
          label = TruthLabel::positive;
        else if (lv.no_apparent_disease)
          label = TruthLabel::negative;
        break;
      case TaskKind::BNNCL:
        if (lv.nodule)
          label = TruthLabel::positive;
        else if (lv.no_apparent_disease || lv.any_target())
          label = TruthLabel::negative;
        break;
    }
    truth.emplace(e.scan_id, label);
  }
  return truth;
}

namespace {

struct JoinedScores {
  std::vector<double> pos;
  std::vector<double> neg;
};

JoinedScores join(const std::vector<ScoreRecord>& scores,
                  const std::unordered_map<std::string, TruthLabel>& truth) {
  JoinedScores j;
  for (const auto& rec : scores) {
    if (!std::isfinite(rec.score))
      throw ValidationError("non-finite score for scan " + rec.scan_id);
    auto it = truth.find(rec.scan_id);
    if (it == truth.end())
      throw ValidationError("scored scan not in evaluation manifest: " +
                            rec.scan_id);
    switch (it->second) {
      case TruthLabel::positive: j.pos.push_back(rec.score); break;
      case TruthLabel::negative: j.neg.push_back(rec.score); break;
      case TruthLabel::excluded: break;
    }
  }
  return j;
}

// Exact pair counting over sorted values: wins and ties stay integral, so
// the result equals brute-force enumeration bit for bit.
double auc_of(std::vector<double> pos, std::vector<double> neg) {
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  uint64_t wins = 0, ties = 0;
  std::size_t ni = 0;
  std::size_t i = 0;
  while (i < pos.size()) {
    const double v = pos[i];
    std::size_t j = i;
    while (j < pos.size() && pos[j] == v) ++j;
    const uint64_t p_count = j - i;
    while (ni < neg.size() && neg[ni] < v) ++ni;
    std::size_t nj = ni;
    while (nj < neg.size() && neg[nj] == v) ++nj;
    wins += p_count * static_cast<uint64_t>(ni);
    ties += p_count * static_cast<uint64_t>(nj - ni);
    i = j;
  }
  const double pairs =
      static_cast<double>(pos.size()) * static_cast<double>(neg.size());
  return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) /
         pairs;
}

double percentile(const std::vector<double>& sorted, double p) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double h = static_cast<double>(m - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= m) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::pair<double, double> bootstrap_joined(const JoinedScores& joined,
                                           double level,
                                           std::size_t resamples,
                                           uint64_t seed) {
  if (resamples < 100)
    throw ValidationError("bootstrap needs at least 100 resamples");
  if (level <= 0.0 || level >= 1.0)
    throw ValidationError("confidence level must lie in (0, 1)");

  std::vector<double> estimates(resamples,
                                std::numeric_limits<double>::quiet_NaN());
  parallel_for(resamples, [&](std::size_t i) {
    rng::SplitMix64 gen(rng::derive(seed, static_cast<uint64_t>(i)));
    std::vector<double> pos(joined.pos.size());
    std::vector<double> neg(joined.neg.size());
    for (auto& v : pos) v = joined.pos[gen.bounded(joined.pos.size())];
    for (auto& v : neg) v = joined.neg[gen.bounded(joined.neg.size())];
    if (pos.empty() || neg.empty()) return;  // degenerate, left as NaN
    estimates[i] = auc_of(std::move(pos), std::move(neg));
  });

  std::vector<double> valid;
  valid.reserve(resamples);
  for (double v : estimates) {
    if (!std::isnan(v)) valid.push_back(v);
  }
  if (valid.size() * 2 < resamples)
    throw InsufficientResamples(std::to_string(resamples - valid.size()) +
                                " of " + std::to_string(resamples) +
                                " resamples degenerate");
  std::sort(valid.begin(), valid.end());
  const double alpha = (1.0 - level) / 2.0;
  return {percentile(valid, alpha), percentile(valid, 1.0 - alpha)};
}

EvalResult eval_joined(const JoinedScores& joined, std::size_t resamples,
                       uint64_t seed, std::string subgroup) {
  EvalResult r;
  r.n_pos = joined.pos.size();
  r.n_neg = joined.neg.size();
  r.subgroup = std::move(subgroup);
  if (joined.pos.empty()) throw DegenerateClass("no positive scans");
  if (joined.neg.empty()) throw DegenerateClass("no negative scans");
  r.auc = auc_of(joined.pos, joined.neg);
  std::tie(r.ci_low, r.ci_high) =
      bootstrap_joined(joined, 0.95, resamples, seed);
  return r;
}

}  // namespace

double auc(const std::vector<ScoreRecord>& scores,
           const std::unordered_map<std::string, TruthLabel>& truth) {
  JoinedScores joined = join(scores, truth);
  if (joined.pos.empty()) throw DegenerateClass("no positive scans");
  if (joined.neg.empty()) throw DegenerateClass("no negative scans");
  return auc_of(std::move(joined.pos), std::move(joined.neg));
}

std::pair<double, double> bootstrap_ci(
    const std::vector<ScoreRecord>& scores,
    const std::unordered_map<std::string, TruthLabel>& truth, double level,
    std::size_t resamples, uint64_t seed) {
  JoinedScores joined = join(scores, truth);
  if (joined.pos.empty()) throw DegenerateClass("no positive scans");
  if (joined.neg.empty()) throw DegenerateClass("no negative scans");
  return bootstrap_joined(joined, level, resamples, seed);
}

EvalResult stratified_eval(const std::vector<ScoreRecord>& scores,
                           const cohort::Manifest& manifest, Disease target,
                           DiseaseSet pattern, std::size_t resamples,
                           uint64_t seed) {
  if (pattern.contains(target))
    throw ValidationError("pattern must not contain the target disease");
  const DiseaseSet wanted = pattern.with(target);
  std::unordered_map<std::string, TruthLabel> truth;
  truth.reserve(manifest.size());
  for (const auto& e : manifest.entries) {
    TruthLabel label = TruthLabel::excluded;
    if (!e.labels.has(target)) {
      label = TruthLabel::negative;
    } else if (e.labels.positive_set() == wanted) {
      label = TruthLabel::positive;
    }
    truth.emplace(e.scan_id, label);
  }
  return eval_joined(join(scores, truth), resamples, seed,
                     pattern.empty() ? "exclusive" : pattern.joined());
}

EvalResult evaluate_task(const std::vector<ScoreRecord>& scores,
                         const cohort::Manifest& manifest,
                         const TaskSpec& task, std::size_t resamples,
                         uint64_t seed) {
  return eval_joined(join(scores, derive_task_labels(manifest, task)),
                     resamples, seed, "");
}

}  // namespace cooccur::metrics
