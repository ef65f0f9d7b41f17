// lidforge: curate multilingual corpora, audit contamination, train the
// char-n-gram classifier and contrastive embedder, build confusion groups,
// and run threshold-routed prediction/evaluation. One subcommand per
// pipeline stage; all randomness flows from --seed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lidforge/lidforge.hpp"

namespace fs = std::filesystem;
using namespace lidforge;

namespace {

unsigned shard_threads(std::size_t files) {
  unsigned threads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("LIDFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) threads = static_cast<unsigned>(v);
  }
  if (threads == 0) threads = 1;
  return std::min<unsigned>(threads, files == 0 ? 1 : files);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write: " + path);
  out << content;
  if (!out) throw IoFailure("write failed: " + path);
}

std::map<std::string, std::uint64_t> train_counts_of(
    const std::vector<SentenceRecord>& train) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& rec : train) ++counts[rec.lang];
  return counts;
}

struct RouterArgs {
  std::string embedder_path;
  std::string groups_path;
  std::string centroids_path;
  double threshold = 0.95;

  bool any() const {
    return !embedder_path.empty() || !groups_path.empty() ||
           !centroids_path.empty();
  }
  bool complete() const {
    return !embedder_path.empty() && !groups_path.empty() &&
           !centroids_path.empty();
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("-e,--embedder", embedder_path, "embedding model file");
    cmd->add_option("--groups", groups_path, "confusion groups JSON");
    cmd->add_option("--centroids", centroids_path, "centroid store file");
    cmd->add_option("--threshold", threshold,
                    "confidence threshold for routing")
        ->capture_default_str();
  }
};

GroupSet read_groups(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open groups file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw InvalidRecord("malformed JSON in groups file: " + path);
  return groups_from_json(j);
}

// --- curate -----------------------------------------------------------------

struct CurateArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string langmeta;
  SplitSpec spec;
};

int run_curate(const CurateArgs& args) {
  Registry registry;
  registry.load_tsv_file(args.langmeta);

  RunManifest manifest("curate");
  for (const auto& p : args.inputs) manifest.input(p);
  manifest.input(args.langmeta);
  manifest.flag("train-cap", args.spec.train_cap);
  manifest.flag("dev-cap", args.spec.dev_cap);
  manifest.flag("test-cap", args.spec.test_cap);
  manifest.seed(args.spec.seed);

  LoadStats stats;
  std::vector<SentenceRecord> records =
      load_corpora(args.inputs, shard_threads(args.inputs.size()), &stats);
  std::vector<SentenceRecord> unique = dedup(records);
  Splits splits = build_splits(unique, args.spec, registry);

  fs::create_directories(args.out_dir);
  write_jsonl((fs::path(args.out_dir) / "train.jsonl").string(), splits.train);
  write_jsonl((fs::path(args.out_dir) / "dev.jsonl").string(), splits.dev);
  write_jsonl((fs::path(args.out_dir) / "test.jsonl").string(), splits.test);

  nlohmann::json prov = nlohmann::json::object();
  for (const auto& [lang, sources] : build_provenance(splits.train))
    prov[lang] = sources;
  write_text((fs::path(args.out_dir) / "provenance.json").string(),
             prov.dump(2) + "\n");
  manifest.write((fs::path(args.out_dir) / "manifest.json").string());

  std::cerr << "read " << stats.lines << " lines, kept " << stats.kept
            << " (" << stats.dropped_empty << " empty after normalization), "
            << unique.size() << " unique\n"
            << "splits: train " << splits.train.size() << ", dev "
            << splits.dev.size() << ", test " << splits.test.size() << "\n";
  return 0;
}

// --- contam -----------------------------------------------------------------

int run_contam(const std::string& train_path,
               const std::vector<std::string>& test_specs,
               const std::string& out_dir) {
  std::map<std::string, std::vector<SentenceRecord>> test_sets;
  RunManifest manifest("contam");
  manifest.input(train_path);
  for (const auto& spec : test_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw InvalidRecord("--test expects name=path, got: " + spec);
    std::string name = spec.substr(0, eq), path = spec.substr(eq + 1);
    test_sets[name] = load_corpus(path);
    manifest.input(path);
  }

  std::vector<SentenceRecord> train = load_corpus(train_path);
  std::vector<ContaminationReport> reports = audit(test_sets, train);

  std::string csv = "dataset,sentences,contam_pct,languages,bucket_0_10,bucket_ge_10\n";
  nlohmann::json detail = nlohmann::json::object();
  for (const auto& r : reports) {
    csv += r.dataset + ',' + std::to_string(r.total) + ',' + fmt2(r.rate()) +
           ',' + std::to_string(r.languages()) + ',' +
           std::to_string(r.bucket_0_10()) + ',' +
           std::to_string(r.bucket_ge_10()) + '\n';
    nlohmann::json langs = nlohmann::json::object();
    for (const auto& [iso, lc] : r.per_language)
      langs[iso] = {{"sentences", lc.total},
                    {"contaminated", lc.contaminated},
                    {"rate", lc.rate()}};
    detail[r.dataset] = {{"sentences", r.total},
                         {"contaminated", r.contaminated},
                         {"rate", r.rate()},
                         {"languages", langs}};
  }

  fs::create_directories(out_dir);
  write_text((fs::path(out_dir) / "contamination.csv").string(), csv);
  write_text((fs::path(out_dir) / "contamination.json").string(),
             detail.dump(2) + "\n");
  manifest.write((fs::path(out_dir) / "manifest.json").string());
  std::cout << csv;
  return 0;
}

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string train_path;
  std::string dev_path;
  bool merge_dev = true;
  std::string out_path;
  ClassifierHyper hyper;
  FeatureConfig cfg;
};

int run_train(const TrainArgs& args) {
  RunManifest manifest("train");
  manifest.input(args.train_path);
  manifest.flag("dim", std::uint64_t(args.hyper.dim));
  manifest.flag("epoch", std::uint64_t(args.hyper.epochs));
  manifest.flag("lr", args.hyper.lr0);
  manifest.flag("minn", std::uint64_t(args.cfg.minn));
  manifest.flag("maxn", std::uint64_t(args.cfg.maxn));
  manifest.flag("bucket", args.cfg.bucket);
  manifest.flag("min-count", args.cfg.min_count);
  manifest.seed(args.hyper.seed);

  std::vector<SentenceRecord> records = load_corpus(args.train_path);
  if (!args.dev_path.empty() && args.merge_dev) {
    manifest.input(args.dev_path);
    std::vector<SentenceRecord> dev = load_corpus(args.dev_path);
    records.insert(records.end(), std::make_move_iterator(dev.begin()),
                   std::make_move_iterator(dev.end()));
  }

  TrainStats stats;
  ClassifierModel model =
      train_classifier<float>(records, args.hyper, args.cfg, &stats);
  save(model, args.out_path);
  manifest.write(args.out_path + ".manifest.json");

  std::cerr << "trained on " << records.size() << " examples, "
            << model.labels.size() << " labels, vocab " << model.vocab.size()
            << " (skipped " << stats.skipped_empty << " empty)\n";
  for (std::size_t e = 0; e < stats.epoch_mean_loss.size(); ++e)
    std::cerr << "epoch " << e + 1 << " mean loss "
              << fmt2(stats.epoch_mean_loss[e]) << "\n";
  return 0;
}

// --- embed-train --------------------------------------------------------------

struct EmbedTrainArgs {
  std::string corpus_path;
  std::string out_path;
  EmbedderHyper hyper;
  FeatureConfig cfg;
};

int run_embed_train(const EmbedTrainArgs& args) {
  RunManifest manifest("embed-train");
  manifest.input(args.corpus_path);
  manifest.flag("dim", std::uint64_t(args.hyper.dim));
  manifest.flag("tau", args.hyper.tau);
  manifest.flag("span-mask", std::uint64_t(args.hyper.span_mask_len));
  manifest.flag("batch-size", std::uint64_t(args.hyper.batch_size));
  manifest.flag("max-length", std::uint64_t(args.hyper.max_length));
  manifest.flag("epoch", std::uint64_t(args.hyper.epochs));
  manifest.flag("feature-dropout", args.hyper.feature_dropout);
  manifest.flag("lr", args.hyper.lr);
  manifest.seed(args.hyper.seed);

  std::vector<SentenceRecord> records = load_corpus(args.corpus_path);
  EmbedTrainStats stats;
  EmbeddingModel model =
      train_embedder<float>(records, args.hyper, args.cfg, &stats);
  save(model, args.out_path);
  manifest.write(args.out_path + ".manifest.json");

  double first = 0, last = 0;
  std::size_t k = std::min<std::size_t>(10, stats.batch_losses.size());
  for (std::size_t i = 0; i < k; ++i) {
    first += stats.batch_losses[i] / k;
    last += stats.batch_losses[stats.batch_losses.size() - 1 - i] / k;
  }
  std::cerr << "trained embedder on " << records.size() << " sentences, "
            << stats.batch_losses.size() << " batches; mean InfoNCE first "
            << k << " batches " << fmt2(first) << ", last " << k << " "
            << fmt2(last) << "\n";
  return 0;
}

// --- groups -------------------------------------------------------------------

struct GroupsArgs {
  std::string model_path;
  std::string embedder_path;
  std::string dev_path;
  std::string train_path;
  std::string out_path;
  std::string centroids_out;
  double f1_cutoff = 85.0;
  std::size_t top_k = 3;
  std::size_t centroid_cap = 1000;
  std::uint64_t seed = 0;
};

int run_groups(const GroupsArgs& args) {
  RunManifest manifest("groups");
  manifest.input(args.model_path);
  manifest.input(args.embedder_path);
  manifest.input(args.dev_path);
  manifest.input(args.train_path);
  manifest.flag("f1-cutoff", args.f1_cutoff);
  manifest.flag("top-k", std::uint64_t(args.top_k));
  manifest.flag("centroid-cap", std::uint64_t(args.centroid_cap));
  manifest.seed(args.seed);

  ClassifierModel model = load_classifier(args.model_path);
  EmbeddingModel emb = load_embedder(args.embedder_path);
  std::vector<SentenceRecord> dev = load_corpus(args.dev_path);
  std::vector<SentenceRecord> train = load_corpus(args.train_path);

  std::vector<std::string> preds, golds;
  for (const auto& rec : dev) {
    preds.push_back(predict_topk(model, rec.text, 1).front().first);
    golds.push_back(rec.lang);
  }
  EvalReport report = build_eval_report(preds, golds);
  GroupSet groups = build_confusion_groups(report, bucket(train_counts_of(train)),
                                           args.f1_cutoff, args.top_k);

  write_text(args.out_path, groups_to_json(groups).dump(2) + "\n");
  if (!groups.empty()) {
    CentroidStore centroids =
        build_centroids(emb, train, groups, args.centroid_cap, args.seed);
    save(centroids, args.centroids_out);
  } else {
    save(CentroidStore{emb.hyper.dim, {}}, args.centroids_out);
  }
  manifest.write(args.out_path + ".manifest.json");

  std::cerr << "dev macro-F1 " << fmt2(report.macro_f1) << ", "
            << groups.groups().size() << " confusion groups\n";
  for (const auto& g : groups.groups()) {
    std::cerr << "  " << g.id << ":";
    for (const auto& m : g.members) std::cerr << ' ' << m;
    std::cerr << "\n";
  }
  return 0;
}

// --- predict ------------------------------------------------------------------

int run_predict(const std::string& model_path, const RouterArgs& router,
                const std::string& input_path, const std::string& output_path) {
  if (router.any() && !router.complete())
    throw InvalidRecord(
        "routing needs all of --embedder, --groups, and --centroids");

  ClassifierModel model = load_classifier(model_path);
  std::optional<EmbeddingModel> emb;
  GroupSet groups;
  CentroidStore centroids;
  RouterConfig cfg;
  cfg.threshold = router.threshold;
  if (router.complete()) {
    emb = load_embedder(router.embedder_path);
    groups = read_groups(router.groups_path);
    centroids = load_centroids(router.centroids_path);
  }

  std::ifstream file_in;
  if (!input_path.empty()) {
    file_in.open(input_path);
    if (!file_in) throw IoFailure("cannot open input: " + input_path);
  }
  std::istream& in = input_path.empty() ? std::cin : file_in;
  std::ofstream file_out;
  if (!output_path.empty()) {
    file_out.open(output_path, std::ios::binary);
    if (!file_out) throw IoFailure("cannot open output: " + output_path);
  }
  std::ostream& out = output_path.empty() ? std::cout : file_out;

  std::string line;
  while (std::getline(in, line)) {
    std::string text = normalize(line);
    if (emb && !groups.empty()) {
      RoutedPrediction p =
          route_predict(model, *emb, groups, centroids, text, cfg);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", p.base_prob);
      out << p.label << '\t' << buf << '\n';
    } else {
      auto top = predict_topk(model, text, 1);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f",
                    static_cast<double>(top.front().second));
      out << top.front().first << '\t' << buf << '\n';
    }
  }
  return 0;
}

// --- eval ---------------------------------------------------------------------

struct EvalArgs {
  std::string model_path;
  std::string test_path;
  std::string train_path;
  std::string langmeta;
  std::string out_dir;
  RouterArgs router;
};

int run_eval(const EvalArgs& args) {
  if (args.router.any() && !args.router.complete())
    throw InvalidRecord(
        "routing needs all of --embedder, --groups, and --centroids");

  RunManifest manifest("eval");
  manifest.input(args.model_path);
  manifest.input(args.test_path);
  if (!args.train_path.empty()) manifest.input(args.train_path);
  if (!args.langmeta.empty()) manifest.input(args.langmeta);

  ClassifierModel model = load_classifier(args.model_path);
  std::vector<SentenceRecord> test = load_corpus(args.test_path);

  std::optional<EmbeddingModel> emb;
  GroupSet groups;
  CentroidStore centroids;
  RouterConfig cfg;
  cfg.threshold = args.router.threshold;
  if (args.router.complete()) {
    emb = load_embedder(args.router.embedder_path);
    groups = read_groups(args.router.groups_path);
    centroids = load_centroids(args.router.centroids_path);
  }

  std::vector<std::string> preds, golds;
  for (const auto& rec : test) {
    if (emb && !groups.empty()) {
      preds.push_back(
          route_predict(model, *emb, groups, centroids, rec.text, cfg).label);
    } else {
      preds.push_back(predict_topk(model, rec.text, 1).front().first);
    }
    golds.push_back(rec.lang);
  }
  EvalReport report = build_eval_report(preds, golds);

  fs::create_directories(args.out_dir);
  write_text((fs::path(args.out_dir) / "report.csv").string(),
             report_csv(report));
  write_text((fs::path(args.out_dir) / "report.json").string(),
             report_json(report).dump(2) + "\n");

  // Domain breakdown always works; script needs per-record scripts or the
  // registry; bucket and transfer need the train split.
  std::vector<std::string> domain_keys;
  for (const auto& rec : test)
    domain_keys.push_back(std::string(to_string(rec.domain)));
  write_text((fs::path(args.out_dir) / "breakdown_domain.csv").string(),
             breakdown_csv(breakdown(preds, golds, domain_keys)));

  Registry registry;
  if (!args.langmeta.empty()) registry.load_tsv_file(args.langmeta);
  bool scripts_ok = true;
  std::vector<std::string> script_keys;
  for (const auto& rec : test) {
    if (rec.script) {
      script_keys.push_back(std::string(to_string(*rec.script)));
    } else if (registry.contains(rec.lang)) {
      script_keys.push_back(
          std::string(to_string(registry.get(rec.lang).scripts.codes().front())));
    } else {
      scripts_ok = false;
      break;
    }
  }
  if (scripts_ok) {
    write_text((fs::path(args.out_dir) / "breakdown_script.csv").string(),
               breakdown_csv(breakdown(preds, golds, script_keys)));
  } else {
    std::cerr << "skipping script breakdown: records without script and no "
                 "--langmeta entry\n";
  }

  if (!args.train_path.empty()) {
    std::vector<SentenceRecord> train = load_corpus(args.train_path);
    auto counts = train_counts_of(train);
    std::vector<std::string> bucket_keys;
    for (const auto& rec : test) {
      auto it = counts.find(rec.lang);
      bucket_keys.push_back(std::string(
          to_string(bucket_of(it == counts.end() ? 0 : it->second))));
    }
    write_text((fs::path(args.out_dir) / "breakdown_bucket.csv").string(),
               breakdown_csv(breakdown(preds, golds, bucket_keys)));

    if (!args.langmeta.empty()) {
      bool all_registered = true;
      for (const auto& [iso, _] : counts)
        all_registered &= registry.contains(iso);
      if (all_registered) {
        TransferGrouping grouping = transfer_grouping(registry, counts);
        std::map<std::string, double> per_label_f1;
        for (const auto& [label, score] : report.per_label)
          per_label_f1[label] = score.f1;
        write_text((fs::path(args.out_dir) / "transfer.csv").string(),
                   transfer_csv(grouping, per_label_f1));
      } else {
        std::cerr << "skipping transfer report: trained languages missing "
                     "from --langmeta\n";
      }
    }
  }

  manifest.write((fs::path(args.out_dir) / "manifest.json").string());
  std::cout << "macro_f1\t" << fmt2(report.macro_f1) << "\n";
  return 0;
}

// --- sweep --------------------------------------------------------------------

struct SweepArgs {
  std::string model_path;
  std::string embedder_path;
  std::string groups_path;
  std::string centroids_path;
  std::string eval_path;
  std::string out_path;
  std::vector<double> thresholds = {0.75, 0.80, 0.85, 0.90, 0.95};
};

int run_sweep(const SweepArgs& args) {
  RunManifest manifest("sweep");
  manifest.input(args.model_path);
  manifest.input(args.embedder_path);
  manifest.input(args.groups_path);
  manifest.input(args.centroids_path);
  manifest.input(args.eval_path);

  ClassifierModel model = load_classifier(args.model_path);
  EmbeddingModel emb = load_embedder(args.embedder_path);
  GroupSet groups = read_groups(args.groups_path);
  CentroidStore centroids = load_centroids(args.centroids_path);
  std::vector<SentenceRecord> eval_set = load_corpus(args.eval_path);

  SweepTable table =
      threshold_sweep(model, emb, groups, centroids, eval_set, args.thresholds);
  std::string csv = sweep_csv(table);
  write_text(args.out_path, csv);
  manifest.write(args.out_path + ".manifest.json");
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"language identification pipeline"};
  app.require_subcommand(1);

  // curate
  CurateArgs curate;
  auto* curate_cmd = app.add_subcommand(
      "curate", "normalize, dedup, attribute domains, and build splits");
  curate_cmd->add_option("inputs", curate.inputs, "input JSONL corpora")
      ->required()
      ->expected(-1);
  curate_cmd->add_option("-o,--out", curate.out_dir, "output directory")
      ->required();
  curate_cmd->add_option("--langmeta", curate.langmeta,
                         "language metadata TSV")
      ->required();
  curate_cmd->add_option("--train-cap", curate.spec.train_cap)
      ->capture_default_str();
  curate_cmd->add_option("--dev-cap", curate.spec.dev_cap)
      ->capture_default_str();
  curate_cmd->add_option("--test-cap", curate.spec.test_cap)
      ->capture_default_str();
  curate_cmd->add_option("--seed", curate.spec.seed)->capture_default_str();

  // contam
  std::string contam_train, contam_out;
  std::vector<std::string> contam_tests;
  auto* contam_cmd =
      app.add_subcommand("contam", "4-gram containment audit of test sets");
  contam_cmd->add_option("--train", contam_train, "training split JSONL")
      ->required();
  contam_cmd->add_option("--test", contam_tests, "name=path (repeatable)")
      ->required();
  contam_cmd->add_option("-o,--out", contam_out, "output directory")
      ->required();

  // train
  TrainArgs train;
  auto* train_cmd =
      app.add_subcommand("train", "train the char-n-gram softmax classifier");
  train_cmd->add_option("train", train.train_path, "training JSONL")
      ->required();
  train_cmd->add_option("--dev", train.dev_path, "dev JSONL");
  train_cmd->add_flag("--merge-dev,!--no-merge-dev", train.merge_dev,
                      "merge dev into training (default on)");
  train_cmd->add_option("-o,--out", train.out_path, "model output path")
      ->required();
  train_cmd->add_option("--dim", train.hyper.dim)->capture_default_str();
  train_cmd->add_option("--epoch", train.hyper.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.hyper.lr0)->capture_default_str();
  train_cmd->add_option("--seed", train.hyper.seed)->capture_default_str();
  train_cmd->add_flag("--uniform-init", train.hyper.uniform_init,
                      "uniform input init instead of zeros");
  train_cmd->add_option("--minn", train.cfg.minn)->capture_default_str();
  train_cmd->add_option("--maxn", train.cfg.maxn)->capture_default_str();
  train_cmd->add_option("--word-ngrams", train.cfg.word_ngrams)
      ->capture_default_str();
  train_cmd->add_option("--bucket", train.cfg.bucket)->capture_default_str();
  train_cmd->add_option("--min-count", train.cfg.min_count)
      ->capture_default_str();

  // embed-train
  EmbedTrainArgs embed_train;
  auto* embed_cmd = app.add_subcommand(
      "embed-train", "train the contrastive sentence embedder");
  embed_cmd->add_option("corpus", embed_train.corpus_path, "corpus JSONL")
      ->required();
  embed_cmd->add_option("-o,--out", embed_train.out_path, "model output path")
      ->required();
  embed_cmd->add_option("--dim", embed_train.hyper.dim)->capture_default_str();
  embed_cmd->add_option("--tau", embed_train.hyper.tau)->capture_default_str();
  embed_cmd->add_option("--span-mask", embed_train.hyper.span_mask_len)
      ->capture_default_str();
  embed_cmd->add_option("--batch-size", embed_train.hyper.batch_size)
      ->capture_default_str();
  embed_cmd->add_option("--max-length", embed_train.hyper.max_length)
      ->capture_default_str();
  embed_cmd->add_option("--epoch", embed_train.hyper.epochs)
      ->capture_default_str();
  embed_cmd->add_option("--feature-dropout", embed_train.hyper.feature_dropout)
      ->capture_default_str();
  embed_cmd->add_option("--lr", embed_train.hyper.lr)->capture_default_str();
  embed_cmd->add_option("--seed", embed_train.hyper.seed)
      ->capture_default_str();
  embed_cmd->add_option("--minn", embed_train.cfg.minn)->capture_default_str();
  embed_cmd->add_option("--maxn", embed_train.cfg.maxn)->capture_default_str();
  embed_cmd->add_option("--bucket", embed_train.cfg.bucket)
      ->capture_default_str();
  embed_cmd->add_option("--min-count", embed_train.cfg.min_count)
      ->capture_default_str();

  // groups
  GroupsArgs groups;
  auto* groups_cmd = app.add_subcommand(
      "groups", "build confusion groups from dev errors plus centroids");
  groups_cmd->add_option("-m,--model", groups.model_path, "classifier model")
      ->required();
  groups_cmd->add_option("-e,--embedder", groups.embedder_path,
                         "embedding model")
      ->required();
  groups_cmd->add_option("--dev", groups.dev_path, "dev JSONL")->required();
  groups_cmd->add_option("--train", groups.train_path, "train JSONL")
      ->required();
  groups_cmd->add_option("-o,--out", groups.out_path, "groups JSON output")
      ->required();
  groups_cmd
      ->add_option("--centroids-out", groups.centroids_out,
                   "centroid store output")
      ->required();
  groups_cmd->add_option("--f1-cutoff", groups.f1_cutoff)
      ->capture_default_str();
  groups_cmd->add_option("--top-k", groups.top_k)->capture_default_str();
  groups_cmd->add_option("--centroid-cap", groups.centroid_cap)
      ->capture_default_str();
  groups_cmd->add_option("--seed", groups.seed)->capture_default_str();

  // predict
  std::string predict_model, predict_in, predict_out;
  RouterArgs predict_router;
  auto* predict_cmd = app.add_subcommand(
      "predict", "one iso<TAB>prob per input line (stdin by default)");
  predict_cmd->add_option("-m,--model", predict_model, "classifier model")
      ->required();
  predict_cmd->add_option("-i,--input", predict_in,
                          "input file (default stdin)");
  predict_cmd->add_option("-o,--out", predict_out,
                          "output file (default stdout)");
  predict_router.add_to(predict_cmd);

  // eval
  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval", "macro-F1 report with domain/script/bucket breakdowns");
  eval_cmd->add_option("-m,--model", eval_args.model_path, "classifier model")
      ->required();
  eval_cmd->add_option("--test", eval_args.test_path, "test JSONL")
      ->required();
  eval_cmd->add_option("--train", eval_args.train_path,
                       "train JSONL (buckets + transfer)");
  eval_cmd->add_option("--langmeta", eval_args.langmeta,
                       "language metadata TSV (scripts + transfer)");
  eval_cmd->add_option("-o,--out", eval_args.out_dir, "output directory")
      ->required();
  eval_args.router.add_to(eval_cmd);

  // sweep
  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "threshold sweep table for routed classification");
  sweep_cmd->add_option("-m,--model", sweep.model_path, "classifier model")
      ->required();
  sweep_cmd->add_option("-e,--embedder", sweep.embedder_path,
                        "embedding model")
      ->required();
  sweep_cmd->add_option("--groups", sweep.groups_path, "groups JSON")
      ->required();
  sweep_cmd->add_option("--centroids", sweep.centroids_path, "centroid store")
      ->required();
  sweep_cmd->add_option("--eval", sweep.eval_path, "evaluation JSONL")
      ->required();
  sweep_cmd->add_option("-o,--out", sweep.out_path, "CSV output path")
      ->required();
  sweep_cmd->add_option("--thresholds", sweep.thresholds,
                        "confidence thresholds")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
  }

  try {
    if (curate_cmd->parsed()) return run_curate(curate);
    if (contam_cmd->parsed())
      return run_contam(contam_train, contam_tests, contam_out);
    if (train_cmd->parsed()) return run_train(train);
    if (embed_cmd->parsed()) return run_embed_train(embed_train);
    if (groups_cmd->parsed()) return run_groups(groups);
    if (predict_cmd->parsed())
      return run_predict(predict_model, predict_router, predict_in,
                         predict_out);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
