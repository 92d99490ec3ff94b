#include "cooccur/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cooccur/rng.hpp"

namespace cooccur::cohort {

std::map<std::string, std::size_t> Manifest::class_counts() const {
  std::map<std::string, std::size_t> counts;
  for (auto d : kDiseaseNames) counts[std::string(d)] = 0;
  counts["other"] = 0;
  counts["no_apparent_disease"] = 0;
  for (const auto& e : entries) {
    for (std::size_t i = 0; i < kNumDiseases; ++i) {
      Disease d = static_cast<Disease>(i);
      if (e.labels.has(d)) ++counts[std::string(disease_name(d))];
    }
    if (e.labels.other_disease) ++counts["other"];
    if (e.labels.no_apparent_disease) ++counts["no_apparent_disease"];
  }
  return counts;
}

std::size_t Manifest::unique_subject_count() const {
  std::unordered_set<std::string> subjects;
  for (const auto& e : entries) subjects.insert(e.subject_id);
  return subjects.size();
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "validation") return Split::validation;
  if (name == "test") return Split::test;
  throw ValidationError("unknown split: " + std::string(name));
}

Split SplitAssignment::at(const std::string& subject_id) const {
  auto it = by_subject.find(subject_id);
  if (it == by_subject.end())
    throw ValidationError("subject not in split assignment: " + subject_id);
  return it->second;
}

std::string TreeNode::key() const {
  if (no_apparent) return "no_apparent";
  return combo.joined();
}

const TreeNode* CooccurrenceTree::find(const std::string& key) const {
  for (const auto& node : nodes) {
    if (node.key() == key) return &node;
  }
  return nullptr;
}

Manifest build_manifest(
    const std::vector<LabelVector>& labels,
    const std::unordered_map<std::string, std::string>& subjects) {
  Manifest m;
  m.entries.reserve(labels.size());
  std::unordered_set<std::string> seen;
  seen.reserve(labels.size());
  for (const auto& lv : labels) {
    if (!seen.insert(lv.scan_id).second) throw DuplicateScanId(lv.scan_id);
    auto it = subjects.find(lv.scan_id);
    if (it == subjects.end()) throw MissingSubject(lv.scan_id);
    lv.check();
    m.entries.push_back({lv.scan_id, it->second, lv});
  }
  return m;
}

namespace {

// Subjects in order of first appearance, with "normal only if every scan
// is no-apparent".
struct SubjectInfo {
  std::vector<std::string> order;
  std::unordered_map<std::string, bool> all_no_apparent;
  std::unordered_map<std::string, DiseaseSet> union_positive;
};

SubjectInfo collect_subjects(const Manifest& manifest) {
  SubjectInfo info;
  for (const auto& e : manifest.entries) {
    auto [it, inserted] = info.all_no_apparent.try_emplace(
        e.subject_id, e.labels.no_apparent_disease);
    if (inserted) {
      info.order.push_back(e.subject_id);
      info.union_positive[e.subject_id] = e.labels.positive_set();
    } else {
      it->second = it->second && e.labels.no_apparent_disease;
      auto& u = info.union_positive[e.subject_id];
      u = DiseaseSet(u.mask() | e.labels.positive_set().mask());
    }
  }
  return info;
}

}  // namespace

SplitAssignment split_subjects(const Manifest& manifest,
                               const SplitFractions& fractions,
                               uint64_t seed) {
  if (manifest.empty()) throw EmptyManifest();
  const double sum = fractions.train + fractions.validation + fractions.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("split fractions must sum to 1");

  SubjectInfo info = collect_subjects(manifest);
  std::vector<std::string> normal, diseased;
  for (const auto& s : info.order) {
    (info.all_no_apparent.at(s) ? normal : diseased).push_back(s);
  }

  SplitAssignment assignment;
  assignment.seed = seed;
  auto assign_stratum = [&](std::vector<std::string>& subjects,
                            std::string_view stratum) {
    rng::SplitMix64 gen(rng::derive(seed, stratum));
    rng::shuffle(subjects, gen);
    const std::size_t k = subjects.size();
    const auto cut1 = static_cast<std::size_t>(
        std::floor(fractions.train * static_cast<double>(k)));
    const auto cut2 = static_cast<std::size_t>(std::floor(
        (fractions.train + fractions.validation) * static_cast<double>(k)));
    for (std::size_t i = 0; i < k; ++i) {
      Split s = i < cut1 ? Split::train
                         : (i < cut2 ? Split::validation : Split::test);
      assignment.by_subject.emplace(subjects[i], s);
    }
  };
  assign_stratum(normal, "normal");
  assign_stratum(diseased, "diseased");
  return assignment;
}

CooccurrenceTree build_cooccurrence_tree(const Manifest& manifest) {
  if (manifest.empty()) throw EmptyManifest();
  SubjectInfo info = collect_subjects(manifest);

  // key: no-apparent in slot 16, target combos in slots 0..15
  std::array<std::size_t, 17> tally{};
  for (const auto& s : info.order) {
    const DiseaseSet combo = info.union_positive.at(s);
    if (combo.empty() && info.all_no_apparent.at(s)) {
      ++tally[16];
    } else {
      ++tally[combo.mask()];
    }
  }

  CooccurrenceTree tree;
  tree.total_subjects = info.order.size();
  const double n_total = static_cast<double>(tree.total_subjects);
  for (std::size_t slot = 0; slot < 17; ++slot) {
    if (tally[slot] == 0) continue;
    TreeNode node;
    if (slot == 16) {
      node.no_apparent = true;
    } else {
      node.combo = DiseaseSet(static_cast<uint8_t>(slot));
    }
    node.n = tally[slot];
    node.percent = static_cast<double>(node.n) / n_total;
    tree.nodes.push_back(std::move(node));
  }
  std::sort(tree.nodes.begin(), tree.nodes.end(),
            [](const TreeNode& a, const TreeNode& b) {
              if (a.n != b.n) return a.n > b.n;
              return a.key() < b.key();
            });
  return tree;
}

}  // namespace cooccur::cohort
