#pragma once

// Metrics and report generation: confusion matrix, per-label P/R/F1,
// macro-F1, partition breakdowns, resource buckets, and the per-family
// anchor transfer grouping. All operations are pure functions over
// immutable inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lidforge/errors.hpp"
#include "lidforge/langmeta.hpp"

namespace lidforge {

struct LabelScore {
  double precision = 0;  // 0..100
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;  // gold count
};

struct EvalReport {
  std::vector<std::string> labels;  // sorted universe: golds U preds
  std::vector<std::vector<std::size_t>> confusion;  // [gold][pred]
  std::map<std::string, LabelScore> per_label;
  double macro_f1 = 0;  // 0..100

  std::size_t label_index(const std::string& label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label)
      throw UnknownLanguage("label not in report: " + label);
    return static_cast<std::size_t>(it - labels.begin());
  }
};

// Label universe covers predictions too, so hallucinated labels score F1 0
// instead of disappearing from the average.
inline EvalReport build_eval_report(const std::vector<std::string>& preds,
                                    const std::vector<std::string>& golds) {
  if (preds.size() != golds.size())
    throw LengthMismatch("preds/golds size mismatch: " +
                         std::to_string(preds.size()) + " vs " +
                         std::to_string(golds.size()));
  if (golds.empty()) throw EmptyInput("empty evaluation input");

  EvalReport report;
  std::set<std::string> universe(golds.begin(), golds.end());
  universe.insert(preds.begin(), preds.end());
  report.labels.assign(universe.begin(), universe.end());

  const std::size_t n_labels = report.labels.size();
  report.confusion.assign(n_labels, std::vector<std::size_t>(n_labels, 0));
  auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(report.labels.begin(), report.labels.end(), label) -
        report.labels.begin());
  };
  for (std::size_t i = 0; i < golds.size(); ++i)
    ++report.confusion[index(golds[i])][index(preds[i])];

  double f1_sum = 0;
  for (std::size_t l = 0; l < n_labels; ++l) {
    std::size_t tp = report.confusion[l][l];
    std::size_t gold_count = 0, pred_count = 0;
    for (std::size_t k = 0; k < n_labels; ++k) {
      gold_count += report.confusion[l][k];
      pred_count += report.confusion[k][l];
    }
    LabelScore score;
    score.support = gold_count;
    double p = pred_count ? static_cast<double>(tp) / pred_count : 0.0;
    double r = gold_count ? static_cast<double>(tp) / gold_count : 0.0;
    score.precision = 100.0 * p;
    score.recall = 100.0 * r;
    score.f1 = (p + r) > 0 ? 100.0 * 2 * p * r / (p + r) : 0.0;
    f1_sum += score.f1;
    report.per_label[report.labels[l]] = score;
  }
  report.macro_f1 = f1_sum / static_cast<double>(n_labels);
  return report;
}

inline double macro_f1(const std::vector<std::string>& preds,
                       const std::vector<std::string>& golds) {
  return build_eval_report(preds, golds).macro_f1;
}

// --- resource buckets --------------------------------------------------------

enum class ResourceBucket : std::uint8_t { Low, Medium, High };

inline std::string_view to_string(ResourceBucket b) {
  switch (b) {
    case ResourceBucket::Low: return "low";
    case ResourceBucket::Medium: return "medium";
    case ResourceBucket::High: return "high";
  }
  return "";
}

// low < 98; medium [98, 980]; high > 980 train sentences.
inline ResourceBucket bucket_of(std::uint64_t train_count) {
  if (train_count < 98) return ResourceBucket::Low;
  if (train_count <= 980) return ResourceBucket::Medium;
  return ResourceBucket::High;
}

inline std::map<std::string, ResourceBucket> bucket(
    const std::map<std::string, std::uint64_t>& train_counts) {
  std::map<std::string, ResourceBucket> out;
  for (const auto& [iso, count] : train_counts) out[iso] = bucket_of(count);
  return out;
}

// --- breakdowns --------------------------------------------------------------

struct BreakdownEntry {
  EvalReport report;
  std::size_t examples = 0;
};

// Partitions the (pred, gold) pairs by key and scores each partition. An
// empty key marks a missing assignment.
inline std::map<std::string, BreakdownEntry> breakdown(
    const std::vector<std::string>& preds, const std::vector<std::string>& golds,
    const std::vector<std::string>& keys) {
  if (preds.size() != golds.size() || keys.size() != preds.size())
    throw LengthMismatch("preds/golds/keys size mismatch");
  std::map<std::string, std::pair<std::vector<std::string>,
                                  std::vector<std::string>>> parts;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i].empty())
      throw MissingKey("no breakdown key for index " + std::to_string(i));
    parts[keys[i]].first.push_back(preds[i]);
    parts[keys[i]].second.push_back(golds[i]);
  }
  std::map<std::string, BreakdownEntry> out;
  for (auto& [key, pair] : parts) {
    BreakdownEntry entry;
    entry.report = build_eval_report(pair.first, pair.second);
    entry.examples = pair.first.size();
    out[key] = std::move(entry);
  }
  return out;
}

// --- transfer grouping (per-family anchors) ----------------------------------

struct TransferGrouping {
  // family -> anchor iso (largest train count, ties lexicographic)
  std::map<std::string, std::string> anchors;
  // family -> relation category -> recipient isos. Recipients of a family's
  // panel are all trained languages except that family's own anchor,
  // categorized against the anchor; unrelated-family languages land in the
  // diff_family categories.
  std::map<std::string, std::map<Relation, std::vector<std::string>>>
      recipients;
};

inline TransferGrouping transfer_grouping(
    const Registry& registry,
    const std::map<std::string, std::uint64_t>& train_counts) {
  TransferGrouping grouping;
  for (const auto& [iso, count] : train_counts) {
    const LanguageEntry& entry = registry.get(iso);
    const std::string& family = entry.family.top();
    auto it = grouping.anchors.find(family);
    if (it == grouping.anchors.end()) {
      grouping.anchors[family] = iso;
    } else {
      std::uint64_t best = train_counts.at(it->second);
      if (count > best || (count == best && iso < it->second))
        it->second = iso;
    }
  }
  for (const auto& [family, anchor] : grouping.anchors) {
    auto& panel = grouping.recipients[family];
    for (const auto& [iso, _] : train_counts) {
      if (iso == anchor) continue;
      panel[registry.relation(iso, anchor)].push_back(iso);
    }
  }
  return grouping;
}

// Quantiles with linear interpolation; input need not be sorted.
struct BoxStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::size_t count = 0;
};

inline BoxStats box_stats(std::vector<double> values) {
  BoxStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    double h = p * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  stats.min = values.front();
  stats.q1 = quantile(0.25);
  stats.median = quantile(0.5);
  stats.q3 = quantile(0.75);
  stats.max = values.back();
  return stats;
}

// --- report emission ---------------------------------------------------------

namespace detail {

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string report_csv(const EvalReport& report) {
  std::string out = "label,precision,recall,f1,support\n";
  for (const auto& label : report.labels) {
    const LabelScore& s = report.per_label.at(label);
    out += label + ',' + detail::pct(s.precision) + ',' +
           detail::pct(s.recall) + ',' + detail::pct(s.f1) + ',' +
           std::to_string(s.support) + '\n';
  }
  return out;
}

inline nlohmann::json report_json(const EvalReport& report) {
  nlohmann::json j;
  j["labels"] = report.labels;
  j["confusion"] = report.confusion;
  j["macro_f1"] = report.macro_f1;
  nlohmann::json per_label = nlohmann::json::object();
  for (const auto& [label, s] : report.per_label) {
    per_label[label] = {{"precision", s.precision},
                        {"recall", s.recall},
                        {"f1", s.f1},
                        {"support", s.support}};
  }
  j["per_label"] = per_label;
  return j;
}

inline std::string breakdown_csv(
    const std::map<std::string, BreakdownEntry>& parts) {
  std::string out = "key,macro_f1,examples\n";
  for (const auto& [key, entry] : parts)
    out += key + ',' + detail::pct(entry.report.macro_f1) + ',' +
           std::to_string(entry.examples) + '\n';
  return out;
}

// One row per (anchor family, relation category) with Figure-5-style
// box-plot statistics of the recipients' F1 scores.
inline std::string transfer_csv(
    const TransferGrouping& grouping,
    const std::map<std::string, double>& per_label_f1) {
  std::string out = "family,anchor,category,count,min,q1,median,q3,max\n";
  for (const auto& [family, panel] : grouping.recipients) {
    const std::string& anchor = grouping.anchors.at(family);
    for (const auto& [relation, isos] : panel) {
      std::vector<double> values;
      for (const auto& iso : isos) {
        auto it = per_label_f1.find(iso);
        if (it != per_label_f1.end()) values.push_back(it->second);
      }
      BoxStats stats = box_stats(values);
      out += family + ',' + anchor + ',' + std::string(to_string(relation)) +
             ',' + std::to_string(stats.count) + ',' + detail::pct(stats.min) +
             ',' + detail::pct(stats.q1) + ',' + detail::pct(stats.median) +
             ',' + detail::pct(stats.q3) + ',' + detail::pct(stats.max) + '\n';
    }
  }
  return out;
}

}  // namespace lidforge
