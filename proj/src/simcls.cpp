#include "cooccur/simcls.hpp"

#include <cmath>

#include "cooccur/parallel.hpp"
#include "cooccur/rng.hpp"

namespace cooccur::simcls {

namespace {

struct Combo {
  DiseaseSet diseases;
  bool no_apparent = false;
};

Combo parse_combo_key(const std::string& key) {
  if (key == "no_apparent") return {{}, true};
  Combo combo;
  std::size_t start = 0;
  while (start <= key.size()) {
    const std::size_t end = key.find('+', start);
    const std::string name =
        key.substr(start, end == std::string::npos ? end : end - start);
    if (name.empty()) throw InvalidSpec("bad combination key: '" + key + "'");
    try {
      combo.diseases.set(parse_disease(name));
    } catch (const UnknownClass&) {
      throw InvalidSpec("bad combination key: '" + key + "'");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return combo;
}

LabelVector combo_labels(const Combo& combo, std::string scan_id) {
  LabelVector lv;
  lv.scan_id = std::move(scan_id);
  for (std::size_t i = 0; i < kNumDiseases; ++i) {
    Disease d = static_cast<Disease>(i);
    lv.set(d, combo.diseases.contains(d));
  }
  lv.no_apparent_disease = combo.no_apparent;
  return lv;
}

std::string padded_id(char prefix, std::size_t index, std::size_t width) {
  std::string digits = std::to_string(index + 1);
  std::string out(1, prefix);
  if (digits.size() < width) out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

}  // namespace

void PopulationSpec::validate() const {
  if (n_subjects == 0) throw InvalidSpec("n_subjects must be positive");
  if (scans_per_subject != 1)
    throw InvalidSpec("scans_per_subject is fixed to 1");
  if (combo_weights.empty()) throw InvalidSpec("combo_weights is empty");
  double sum = 0.0;
  for (const auto& [key, w] : combo_weights) {
    parse_combo_key(key);
    if (!(w >= 0.0)) throw InvalidSpec("negative weight for '" + key + "'");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidSpec("combination weights must sum to 1");
}

void ClassifierSpec::validate() const {
  if (!(noise_sd > 0.0)) throw InvalidSpec("noise_sd must be positive");
  for (const auto& [name, w] : weights) {
    parse_disease(name);
    if (!std::isfinite(w)) throw InvalidSpec("non-finite weight for " + name);
  }
  if (!std::isfinite(bias)) throw InvalidSpec("non-finite bias");
}

cohort::Manifest sample_population(const PopulationSpec& spec) {
  spec.validate();

  // std::map iteration gives the documented lexicographic CDF order.
  std::vector<std::pair<Combo, double>> cdf;
  cdf.reserve(spec.combo_weights.size());
  double acc = 0.0;
  for (const auto& [key, w] : spec.combo_weights) {
    acc += w;
    cdf.emplace_back(parse_combo_key(key), acc);
  }
  cdf.back().second = 1.0;

  const std::size_t width = std::to_string(spec.n_subjects).size();
  cohort::Manifest manifest;
  manifest.entries.resize(spec.n_subjects);
  parallel_for(spec.n_subjects, [&](std::size_t i) {
    rng::SplitMix64 gen(rng::derive(spec.seed, static_cast<uint64_t>(i)));
    const double u = gen.uniform01();
    const Combo* chosen = &cdf.back().first;
    for (const auto& [combo, bound] : cdf) {
      if (u < bound) {
        chosen = &combo;
        break;
      }
    }
    const std::string subject = padded_id('S', i, width);
    const std::string scan = padded_id('C', i, width);
    manifest.entries[i] = {scan, subject, combo_labels(*chosen, scan)};
  });
  return manifest;
}

std::vector<metrics::ScoreRecord> simulate_scores(
    const cohort::Manifest& manifest, const ClassifierSpec& clf) {
  clf.validate();
  std::array<double, kNumDiseases> weight_by_disease{};
  for (const auto& [name, w] : clf.weights) {
    weight_by_disease[static_cast<std::size_t>(parse_disease(name))] = w;
  }

  std::vector<metrics::ScoreRecord> scores(manifest.size());
  parallel_for(manifest.size(), [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    double raw = clf.bias;
    for (std::size_t d = 0; d < kNumDiseases; ++d) {
      if (e.labels.has(static_cast<Disease>(d))) raw += weight_by_disease[d];
    }
    rng::SplitMix64 gen(rng::derive(clf.seed, static_cast<uint64_t>(i)));
    raw += clf.noise_sd * gen.gaussian();
    scores[i] = {e.scan_id, 1.0 / (1.0 + std::exp(-raw))};
  });
  return scores;
}

}  // namespace cooccur::simcls
