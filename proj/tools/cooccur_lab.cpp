// cooccur-lab: command-line pipeline over the cooccur library. Every
// subcommand is a thin wrapper that reads the documented file formats,
// calls one library entry point, and writes the documented outputs.
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <algorithm>
#include <bit>
#include <iostream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "cooccur/cohort.hpp"
#include "cooccur/errors.hpp"
#include "cooccur/io.hpp"
#include "cooccur/labels.hpp"
#include "cooccur/metrics.hpp"
#include "cooccur/rba.hpp"
#include "cooccur/rng.hpp"
#include "cooccur/simcls.hpp"
#include "cooccur/volprep.hpp"

namespace {

using namespace cooccur;

// Effective-configuration echo for provenance; diagnostics only.
void note(const std::string& line) {
  std::cerr << "[cooccur-lab] " << line << '\n';
}

struct LabelArgs {
  std::string corpus, dict, out, manifest_out;
};

int run_label(const LabelArgs& a) {
  note("label corpus=" + a.corpus + " dict=" + a.dict + " out=" + a.out +
       (a.manifest_out.empty() ? "" : " manifest-out=" + a.manifest_out));
  const auto reports = io::read_corpus_jsonl(a.corpus);
  const auto dict = io::read_dictionary(a.dict);
  const auto labels = rba::label_corpus(reports, dict);
  io::write_labels_csv(labels, a.out);
  note("labeled " + std::to_string(labels.size()) + " reports");
  if (!a.manifest_out.empty()) {
    std::unordered_map<std::string, std::string> subjects;
    for (const auto& r : reports) subjects[r.scan_id] = r.subject_id;
    io::write_manifest_csv(cohort::build_manifest(labels, subjects),
                           a.manifest_out);
  }
  return 0;
}

struct CooccurArgs {
  std::string manifest, out;
};

int run_cooccur(const CooccurArgs& a) {
  note("cooccur manifest=" + a.manifest + " out=" + a.out);
  const auto manifest = io::read_manifest_csv(a.manifest);
  const auto tree = cohort::build_cooccurrence_tree(manifest);
  io::write_tree_json(tree, a.out);
  note("tree over " + std::to_string(tree.total_subjects) + " subjects, " +
       std::to_string(tree.nodes.size()) + " nodes");
  return 0;
}

struct SplitArgs {
  std::string manifest, out;
  uint64_t seed = 0;
  cohort::SplitFractions fractions;
};

int run_split(const SplitArgs& a) {
  note("split manifest=" + a.manifest + " out=" + a.out +
       " seed=" + std::to_string(a.seed));
  const auto manifest = io::read_manifest_csv(a.manifest);
  const auto split = cohort::split_subjects(manifest, a.fractions,
                                            rng::derive(a.seed, "split"));
  io::write_split_csv(split, a.out);
  return 0;
}

metrics::TaskSpec make_task(const std::string& task,
                            const std::string& target) {
  const auto kind = metrics::parse_task_kind(task);
  switch (kind) {
    case metrics::TaskKind::MLCL:
      if (target.empty())
        throw ValidationError("mlcl requires --target");
      return metrics::TaskSpec::mlcl(target);
    case metrics::TaskKind::BCL:
      if (!target.empty())
        throw ValidationError("bcl does not take a target class");
      return metrics::TaskSpec::bcl();
    case metrics::TaskKind::BNCL:
    case metrics::TaskKind::BNNCL: {
      if (!target.empty() && target != "nodule")
        throw ValidationError("nodule tasks are fixed to target nodule");
      return kind == metrics::TaskKind::BNCL ? metrics::TaskSpec::bncl()
                                             : metrics::TaskSpec::bnncl();
    }
  }
  throw ValidationError("unknown task kind");
}

struct TasksArgs {
  std::string manifest, task, target, out;
};

int run_tasks(const TasksArgs& a) {
  note("tasks manifest=" + a.manifest + " task=" + a.task +
       (a.target.empty() ? "" : " target=" + a.target) + " out=" + a.out);
  const auto manifest = io::read_manifest_csv(a.manifest);
  const auto spec = make_task(a.task, a.target);
  const auto truth = metrics::derive_task_labels(manifest, spec);
  std::vector<std::string> order;
  order.reserve(manifest.size());
  for (const auto& e : manifest.entries) order.push_back(e.scan_id);
  io::write_task_labels_csv(truth, order, a.out);
  return 0;
}

struct EvalArgs {
  std::string manifest, scores, task, target, stratify, out;
  std::string split, subset;
  uint64_t seed = 0;
  std::size_t resamples = 2000;
};

// Restricts manifest and scores to the subjects of one split.
void filter_subset(cohort::Manifest& manifest,
                   std::vector<metrics::ScoreRecord>& scores,
                   const std::string& split_path, const std::string& subset) {
  const auto split = io::read_split_csv(split_path);
  const auto wanted = cohort::parse_split(subset);
  cohort::Manifest kept;
  std::unordered_map<std::string, bool> keep_scan;
  for (const auto& e : manifest.entries) {
    const bool keep = split.at(e.subject_id) == wanted;
    keep_scan[e.scan_id] = keep;
    if (keep) kept.entries.push_back(e);
  }
  std::vector<metrics::ScoreRecord> kept_scores;
  for (const auto& rec : scores) {
    auto it = keep_scan.find(rec.scan_id);
    if (it == keep_scan.end())
      throw ValidationError("scored scan not in evaluation manifest: " +
                            rec.scan_id);
    if (it->second) kept_scores.push_back(rec);
  }
  manifest = std::move(kept);
  scores = std::move(kept_scores);
}

int run_eval(const EvalArgs& a) {
  if (a.task.empty() == a.stratify.empty())
    throw ValidationError("eval needs exactly one of --task or --stratify");
  if (a.split.empty() != a.subset.empty())
    throw ValidationError("--split and --subset must be given together");

  note("eval manifest=" + a.manifest + " scores=" + a.scores +
       (a.task.empty() ? " stratify=" + a.stratify : " task=" + a.task) +
       (a.subset.empty() ? "" : " subset=" + a.subset) +
       " seed=" + std::to_string(a.seed) +
       " resamples=" + std::to_string(a.resamples));

  auto manifest = io::read_manifest_csv(a.manifest);
  auto scores = io::read_scores_csv(a.scores);
  if (!a.split.empty()) filter_subset(manifest, scores, a.split, a.subset);
  const uint64_t seed = rng::derive(a.seed, "bootstrap");

  std::vector<io::EvalRow> rows;
  if (!a.task.empty()) {
    const auto spec = make_task(a.task, a.target);
    auto result =
        metrics::evaluate_task(scores, manifest, spec, a.resamples, seed);
    rows.push_back({a.task,
                    spec.kind == metrics::TaskKind::BCL ? "any"
                                                        : spec.target_class,
                    "", std::move(result)});
  } else {
    const Disease target = parse_disease(a.stratify);
    // subgroups ordered by pattern size, then name; skip absent ones
    std::vector<DiseaseSet> patterns;
    for (uint8_t mask = 0; mask < 16; ++mask) {
      DiseaseSet pattern(mask);
      if (!pattern.contains(target)) patterns.push_back(pattern);
    }
    std::sort(patterns.begin(), patterns.end(),
              [](const DiseaseSet& x, const DiseaseSet& y) {
                if (x.size() != y.size()) return x.size() < y.size();
                return x.joined() < y.joined();
              });
    for (const DiseaseSet& pattern : patterns) {
      const DiseaseSet wanted = pattern.with(target);
      const bool present = std::any_of(
          manifest.entries.begin(), manifest.entries.end(),
          [&](const auto& e) { return e.labels.positive_set() == wanted; });
      if (!present) continue;
      auto result = metrics::stratified_eval(scores, manifest, target,
                                             pattern, a.resamples, seed);
      const std::string subgroup = result.subgroup;
      rows.push_back({"stratified", a.stratify, subgroup, std::move(result)});
    }
    if (rows.empty())
      throw ValidationError("no " + a.stratify + "-positive scans to stratify");
  }

  if (a.out.empty()) {
    io::write_eval_csv(rows, std::cout);
  } else {
    io::write_eval_csv(rows, a.out);
  }
  return 0;
}

struct SimulateArgs {
  std::string population, classifier, manifest_out, scores_out;
  uint64_t seed = 0;
  bool seed_given = false;
};

int run_simulate(const SimulateArgs& a) {
  auto pop = io::read_population_spec(a.population);
  auto clf = io::read_classifier_spec(a.classifier);
  if (a.seed_given) {
    // flags win over config-file seeds
    pop.seed = rng::derive(a.seed, "population");
    clf.seed = rng::derive(a.seed, "classifier");
  }
  note("simulate population=" + a.population + " classifier=" + a.classifier +
       " n=" + std::to_string(pop.n_subjects) +
       " pop-seed=" + std::to_string(pop.seed) +
       " clf-seed=" + std::to_string(clf.seed));
  const auto manifest = simcls::sample_population(pop);
  io::write_manifest_csv(manifest, a.manifest_out);
  const auto scores = simcls::simulate_scores(manifest, clf);
  io::write_scores_csv(scores, a.scores_out);
  return 0;
}

struct PreprocessArgs {
  std::string in, out;
  double target_spacing = 2.0;
  bool skip_resample = false;
  bool skip_normalize = false;
};

int run_preprocess(const PreprocessArgs& a) {
  note("preprocess in=" + a.in + " out=" + a.out + " target-spacing=" +
       std::to_string(a.target_spacing) +
       (a.skip_resample ? " skip-resample" : "") +
       (a.skip_normalize ? " skip-normalize" : ""));
  auto volume = volprep::read_rvol(a.in);
  if (!a.skip_resample) volume = volprep::resample(volume, a.target_spacing);
  if (!a.skip_normalize) volume = volprep::clip_normalize(volume);
  volprep::write_rvol(volume, a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-occurrence weak-supervision toolkit"};
  app.require_subcommand(1);

  LabelArgs label_args;
  auto* label = app.add_subcommand(
      "label", "rule-based disease labels from report text");
  label->add_option("--corpus", label_args.corpus, "reports JSONL")
      ->required();
  label->add_option("--dict", label_args.dict, "rule dictionary JSON")
      ->required();
  label->add_option("--out", label_args.out, "labels CSV")->required();
  label->add_option("--manifest-out", label_args.manifest_out,
                    "also write a scan/subject manifest CSV");

  CooccurArgs cooccur_args;
  auto* cooccur = app.add_subcommand(
      "cooccur", "exact disease-combination tree over subjects");
  cooccur->add_option("--manifest", cooccur_args.manifest, "manifest CSV")
      ->required();
  cooccur->add_option("--out", cooccur_args.out, "tree JSON")->required();

  SplitArgs split_args;
  auto* split = app.add_subcommand(
      "split", "subject-level stratified train/validation/test split");
  split->add_option("--manifest", split_args.manifest, "manifest CSV")
      ->required();
  split->add_option("--out", split_args.out, "split CSV")->required();
  split->add_option("--seed", split_args.seed, "master seed");
  split->add_option("--train", split_args.fractions.train, "train fraction");
  split->add_option("--validation", split_args.fractions.validation,
                    "validation fraction");
  split->add_option("--test", split_args.fractions.test, "test fraction");

  TasksArgs tasks_args;
  auto* tasks = app.add_subcommand(
      "tasks", "per-scan ground truth for a derived task");
  tasks->add_option("--manifest", tasks_args.manifest, "manifest CSV")
      ->required();
  tasks->add_option("--task", tasks_args.task, "mlcl|bcl|bncl|bnncl")
      ->required();
  tasks->add_option("--target", tasks_args.target,
                    "target class (mlcl only)");
  tasks->add_option("--out", tasks_args.out, "task labels CSV")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand(
      "eval", "AUC with bootstrap CI, per task or per co-occurrence subgroup");
  eval->add_option("--manifest", eval_args.manifest, "manifest CSV")
      ->required();
  eval->add_option("--scores", eval_args.scores, "scores CSV")->required();
  eval->add_option("--task", eval_args.task, "mlcl|bcl|bncl|bnncl");
  eval->add_option("--target", eval_args.target, "target class (mlcl only)");
  eval->add_option("--stratify", eval_args.stratify,
                   "disease for subgroup evaluation");
  eval->add_option("--split", eval_args.split, "split CSV for filtering");
  eval->add_option("--subset", eval_args.subset,
                   "train|validation|test subset to keep");
  eval->add_option("--seed", eval_args.seed, "master seed");
  eval->add_option("--resamples", eval_args.resamples,
                   "bootstrap resamples");
  eval->add_option("--out", eval_args.out,
                   "eval CSV (standard output when omitted)");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "synthetic population and classifier scores");
  simulate->add_option("--population", sim_args.population,
                       "population spec JSON")
      ->required();
  simulate->add_option("--classifier", sim_args.classifier,
                       "classifier spec JSON")
      ->required();
  simulate->add_option("--manifest-out", sim_args.manifest_out,
                       "manifest CSV")
      ->required();
  simulate->add_option("--scores-out", sim_args.scores_out, "scores CSV")
      ->required();
  auto* sim_seed = simulate->add_option("--seed", sim_args.seed,
                                        "master seed (overrides spec seeds)");

  PreprocessArgs prep_args;
  auto* preprocess = app.add_subcommand(
      "preprocess", "resample, clip, and normalize an RVOL volume");
  preprocess->add_option("--in", prep_args.in, "input RVOL")->required();
  preprocess->add_option("--out", prep_args.out, "output RVOL")->required();
  preprocess->add_option("--target-spacing", prep_args.target_spacing,
                         "isotropic spacing in mm");
  preprocess->add_flag("--skip-resample", prep_args.skip_resample,
                       "keep the input grid");
  preprocess->add_flag("--skip-normalize", prep_args.skip_normalize,
                       "keep HU intensities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  sim_args.seed_given = sim_seed->count() > 0;

  try {
    if (label->parsed()) return run_label(label_args);
    if (cooccur->parsed()) return run_cooccur(cooccur_args);
    if (split->parsed()) return run_split(split_args);
    if (tasks->parsed()) return run_tasks(tasks_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (preprocess->parsed()) return run_preprocess(prep_args);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
