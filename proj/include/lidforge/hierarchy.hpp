#pragma once

// Confusion groups built from evaluation errors, plus confidence-threshold
// routing: a low-confidence base prediction whose label belongs to a group
// is re-decided by cosine against group-member embedding centroids.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lidforge/classifier.hpp"
#include "lidforge/embedder.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/eval.hpp"

namespace lidforge {

struct ConfusionGroup {
  std::string id;                    // lexicographically smallest seed
  std::vector<std::string> members;  // sorted, >= 2
};

class GroupSet {
 public:
  GroupSet() = default;
  explicit GroupSet(std::vector<ConfusionGroup> groups)
      : groups_(std::move(groups)) {
    std::sort(groups_.begin(), groups_.end(),
              [](const ConfusionGroup& a, const ConfusionGroup& b) {
                return a.id < b.id;
              });
    for (std::size_t g = 0; g < groups_.size(); ++g)
      for (const auto& m : groups_[g].members) member_to_group_[m] = g;
  }

  const std::vector<ConfusionGroup>& groups() const { return groups_; }
  bool empty() const { return groups_.empty(); }

  const ConfusionGroup* group_of(const std::string& iso) const {
    auto it = member_to_group_.find(iso);
    return it == member_to_group_.end() ? nullptr : &groups_[it->second];
  }

 private:
  std::vector<ConfusionGroup> groups_;
  std::map<std::string, std::size_t> member_to_group_;
};

// Seeds are high-resource labels under the F1 cutoff; each contributes its
// top_k most frequent wrong predictions, and groups sharing a member merge
// transitively. Singleton groups (a seed with no recorded errors) drop out.
inline GroupSet build_confusion_groups(
    const EvalReport& report,
    const std::map<std::string, ResourceBucket>& resource_buckets,
    double f1_cutoff = 85.0, std::size_t top_k = 3) {
  if (report.confusion.empty() || report.labels.empty())
    throw MissingConfusionMatrix("report has no confusion matrix");

  std::vector<std::vector<std::string>> proto_groups;
  std::vector<std::string> seeds;
  for (std::size_t l = 0; l < report.labels.size(); ++l) {
    const std::string& label = report.labels[l];
    auto bucket_it = resource_buckets.find(label);
    if (bucket_it == resource_buckets.end() ||
        bucket_it->second != ResourceBucket::High)
      continue;
    if (report.per_label.at(label).f1 >= f1_cutoff) continue;

    std::vector<std::pair<std::string, std::size_t>> errors;
    for (std::size_t p = 0; p < report.labels.size(); ++p) {
      if (p == l || report.confusion[l][p] == 0) continue;
      errors.emplace_back(report.labels[p], report.confusion[l][p]);
    }
    std::sort(errors.begin(), errors.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });

    std::vector<std::string> members{label};
    for (std::size_t k = 0; k < std::min(top_k, errors.size()); ++k)
      members.push_back(errors[k].first);
    seeds.push_back(label);
    proto_groups.push_back(std::move(members));
  }

  // Transitive merge via union-find over member sharing.
  std::vector<std::size_t> parent(proto_groups.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t g = 0; g < proto_groups.size(); ++g) {
    for (const auto& m : proto_groups[g]) {
      auto [it, inserted] = owner.emplace(m, g);
      if (!inserted) parent[find(g)] = find(it->second);
    }
  }

  std::map<std::size_t, std::pair<std::set<std::string>, std::string>> merged;
  for (std::size_t g = 0; g < proto_groups.size(); ++g) {
    auto& [members, rep] = merged[find(g)];
    members.insert(proto_groups[g].begin(), proto_groups[g].end());
    if (rep.empty() || seeds[g] < rep) rep = seeds[g];
  }

  std::vector<ConfusionGroup> groups;
  for (auto& [_, entry] : merged) {
    auto& [members, rep] = entry;
    if (members.size() < 2) continue;
    groups.push_back(
        ConfusionGroup{rep, {members.begin(), members.end()}});
  }
  return GroupSet(std::move(groups));
}

// --- groups file -------------------------------------------------------------

inline nlohmann::json groups_to_json(const GroupSet& groups) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : groups.groups())
    arr.push_back({{"id", g.id}, {"members", g.members}});
  return nlohmann::json{{"groups", arr}};
}

inline GroupSet groups_from_json(const nlohmann::json& j) {
  std::vector<ConfusionGroup> groups;
  for (const auto& g : j.at("groups")) {
    ConfusionGroup group;
    group.id = g.at("id").get<std::string>();
    group.members = g.at("members").get<std::vector<std::string>>();
    std::sort(group.members.begin(), group.members.end());
    groups.push_back(std::move(group));
  }
  return GroupSet(std::move(groups));
}

// --- centroids ----------------------------------------------------------------

struct CentroidStore {
  std::uint32_t dim = 0;
  std::map<std::string, std::vector<float>> centroids;  // unit vectors

  const std::vector<float>& get(const std::string& iso) const {
    auto it = centroids.find(iso);
    if (it == centroids.end())
      throw MissingCentroid("no centroid for group member: " + iso);
    return it->second;
  }
};

// Builds per-member centroids from each member's train split, capping the
// sample (seeded, order-free) to bound memory.
inline CentroidStore build_centroids(const EmbeddingModel& model,
                                     const std::vector<SentenceRecord>& train,
                                     const GroupSet& groups,
                                     std::size_t cap = 1000,
                                     std::uint64_t seed = 0) {
  std::map<std::string, std::vector<std::string>> texts;
  for (const auto& rec : train)
    if (groups.group_of(rec.lang) != nullptr)
      texts[rec.lang].push_back(rec.text);

  CentroidStore store;
  store.dim = model.hyper.dim;
  for (const auto& group : groups.groups()) {
    for (const auto& member : group.members) {
      auto it = texts.find(member);
      if (it == texts.end() || it->second.empty())
        throw MissingCentroid("group member has no training data: " + member);
      std::vector<std::string>& pool = it->second;
      std::sort(pool.begin(), pool.end());
      detail::Rng rng(detail::mix_seed(seed, fnv1a64(member)));
      detail::shuffle(pool, rng);
      if (pool.size() > cap) pool.resize(cap);
      store.centroids[member] = centroid(model, pool);
    }
  }
  return store;
}

inline constexpr char kCentroidMagic[4] = {'L', 'I', 'D', 'C'};
inline constexpr std::uint32_t kCentroidVersion = 1;

inline void save(const CentroidStore& store, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kCentroidMagic);
  w.u32(kCentroidVersion);
  w.u32(store.dim);
  w.u32(static_cast<std::uint32_t>(store.centroids.size()));
  for (const auto& [iso, vec] : store.centroids) {
    w.str(iso);
    w.f32s(vec.data(), vec.size());
  }
  w.close();
}

inline CentroidStore load_centroids(const std::string& path) {
  BinaryReader r(path);
  r.header(kCentroidMagic, kCentroidVersion);
  CentroidStore store;
  store.dim = r.u32();
  std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string iso = r.str();
    std::vector<float> vec(store.dim);
    r.f32s(vec.data(), vec.size());
    store.centroids[iso] = std::move(vec);
  }
  return store;
}

// --- routing -----------------------------------------------------------------

struct RouterConfig {
  double threshold = 0.95;
  std::vector<double> sweep = {0.75, 0.80, 0.85, 0.90, 0.95};
};

enum class RoutePath : std::uint8_t { Base, Routed };

struct RoutedPrediction {
  std::string label;
  std::string base_label;
  double base_prob = 0;
  RoutePath path = RoutePath::Base;
  std::optional<std::string> group_id;
};

// Nearest group centroid by cosine; ties go to the lexicographically
// smallest member (members are sorted). Embeddings and centroids are unit
// vectors, so cosine is a plain dot product.
inline std::string nearest_member(const ConfusionGroup& group,
                                  const CentroidStore& centroids,
                                  const std::vector<float>& embedding) {
  std::string best;
  float best_sim = 0;
  for (const auto& member : group.members) {
    const std::vector<float>& c = centroids.get(member);
    float sim = detail::dot(embedding.data(), c.data(), c.size());
    if (best.empty() || sim > best_sim) {
      best = member;
      best_sim = sim;
    }
  }
  return best;
}

// EmbedFn: text -> unit vector. A templated hook so tests can inject oracle
// embedders; production callers pass the trained EmbeddingModel.
template <typename EmbedFn>
RoutedPrediction route_predict_with(const ClassifierModel& base,
                                    EmbedFn&& embed_fn, const GroupSet& groups,
                                    const CentroidStore& centroids,
                                    std::string_view text,
                                    const RouterConfig& cfg) {
  auto top = predict_topk(base, text, 1);
  RoutedPrediction out;
  out.base_label = top.front().first;
  out.base_prob = static_cast<double>(top.front().second);
  out.label = out.base_label;

  if (out.base_prob >= cfg.threshold) return out;
  const ConfusionGroup* group = groups.group_of(out.base_label);
  if (group == nullptr) return out;

  std::vector<float> e = embed_fn(text);
  out.label = nearest_member(*group, centroids, e);
  out.path = RoutePath::Routed;
  out.group_id = group->id;
  return out;
}

inline RoutedPrediction route_predict(const ClassifierModel& base,
                                      const EmbeddingModel& emb,
                                      const GroupSet& groups,
                                      const CentroidStore& centroids,
                                      std::string_view text,
                                      const RouterConfig& cfg) {
  return route_predict_with(
      base, [&](std::string_view t) { return embed(emb, t); }, groups,
      centroids, text, cfg);
}

// --- threshold sweep -----------------------------------------------------------

struct SweepRow {
  std::string group_id;
  std::string language;
  double baseline_f1 = 0;
  std::vector<double> f1;     // one per threshold
  std::vector<double> delta;  // routed - baseline
};

struct SweepTable {
  std::vector<double> thresholds;
  std::vector<SweepRow> rows;          // group members, sorted
  std::vector<double> average_delta;   // mean over member languages
};

template <typename EmbedFn>
SweepTable threshold_sweep_with(const ClassifierModel& base,
                                EmbedFn&& embed_fn, const GroupSet& groups,
                                const CentroidStore& centroids,
                                const std::vector<SentenceRecord>& eval_set,
                                const std::vector<double>& thresholds) {
  SweepTable table;
  table.thresholds = thresholds;
  double max_threshold = 0;
  for (double t : thresholds) max_threshold = std::max(max_threshold, t);

  // Base pass; embeddings are computed once, only where routing can trigger.
  std::vector<std::string> golds, base_preds;
  std::vector<double> base_probs;
  std::vector<std::vector<float>> embeddings(eval_set.size());
  for (const auto& rec : eval_set) {
    auto top = predict_topk(base, rec.text, 1);
    golds.push_back(rec.lang);
    base_preds.push_back(top.front().first);
    base_probs.push_back(static_cast<double>(top.front().second));
    std::size_t i = golds.size() - 1;
    if (base_probs[i] < max_threshold &&
        groups.group_of(base_preds[i]) != nullptr)
      embeddings[i] = embed_fn(rec.text);
  }
  EvalReport base_report = build_eval_report(base_preds, golds);

  std::map<std::string, SweepRow> rows;
  for (const auto& group : groups.groups()) {
    for (const auto& member : group.members) {
      SweepRow row;
      row.group_id = group.id;
      row.language = member;
      auto it = base_report.per_label.find(member);
      row.baseline_f1 = it == base_report.per_label.end() ? 0.0 : it->second.f1;
      rows[member] = std::move(row);
    }
  }

  table.average_delta.assign(thresholds.size(), 0.0);
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    std::vector<std::string> routed = base_preds;
    for (std::size_t i = 0; i < eval_set.size(); ++i) {
      if (base_probs[i] >= thresholds[t]) continue;
      const ConfusionGroup* group = groups.group_of(base_preds[i]);
      if (group == nullptr) continue;
      routed[i] = nearest_member(*group, centroids, embeddings[i]);
    }
    EvalReport routed_report = build_eval_report(routed, golds);
    double delta_sum = 0;
    for (auto& [member, row] : rows) {
      auto it = routed_report.per_label.find(member);
      double f1 = it == routed_report.per_label.end() ? 0.0 : it->second.f1;
      row.f1.push_back(f1);
      row.delta.push_back(f1 - row.baseline_f1);
      delta_sum += f1 - row.baseline_f1;
    }
    if (!rows.empty())
      table.average_delta[t] = delta_sum / static_cast<double>(rows.size());
  }

  for (auto& [_, row] : rows) table.rows.push_back(std::move(row));
  std::sort(table.rows.begin(), table.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.group_id != b.group_id) return a.group_id < b.group_id;
              return a.language < b.language;
            });
  return table;
}

inline SweepTable threshold_sweep(const ClassifierModel& base,
                                  const EmbeddingModel& emb,
                                  const GroupSet& groups,
                                  const CentroidStore& centroids,
                                  const std::vector<SentenceRecord>& eval_set,
                                  const std::vector<double>& thresholds) {
  return threshold_sweep_with(
      base, [&](std::string_view t) { return embed(emb, t); }, groups,
      centroids, eval_set, thresholds);
}

inline std::string sweep_csv(const SweepTable& table) {
  auto pct_name = [](double t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%g", t * 100.0);
    return std::string(buf);
  };
  std::string out = "group,language,baseline_f1";
  for (double t : table.thresholds)
    out += ",f1_" + pct_name(t) + ",delta_" + pct_name(t);
  out += '\n';
  for (const auto& row : table.rows) {
    out += row.group_id + ',' + row.language + ',' +
           detail::pct(row.baseline_f1);
    for (std::size_t t = 0; t < table.thresholds.size(); ++t)
      out += ',' + detail::pct(row.f1[t]) + ',' + detail::pct(row.delta[t]);
    out += '\n';
  }
  out += "average,,";
  for (double d : table.average_delta) out += ",," + detail::pct(d);
  out += '\n';
  return out;
}

}  // namespace lidforge
