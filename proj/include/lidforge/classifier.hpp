#pragma once

// Linear bag-of-features softmax classifier over hashed char-n-gram features
// (FastText-supervised style). Single-threaded seeded SGD so that identical
// seeds give byte-identical models; inference on an immutable model is safe
// for concurrent callers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lidforge/detail/matrix.hpp"
#include "lidforge/detail/rng.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/features.hpp"
#include "lidforge/serialize.hpp"

namespace lidforge {

struct ClassifierHyper {
  std::uint32_t dim = 256;
  std::uint32_t epochs = 2;
  double lr0 = 0.8;  // decays linearly to 0 over epochs * N examples
  std::uint64_t seed = 0;
  bool uniform_init = false;  // default zero init keeps the first forward pass uniform
};

template <typename Real>
struct BasicClassifierModel {
  FeatureConfig cfg;
  ClassifierHyper hyper;
  std::vector<std::string> labels;  // sorted, duplicate-free
  Vocab vocab;
  detail::Matrix<Real> input;   // (V+B) x dim
  detail::Matrix<Real> output;  // L x dim
};

using ClassifierModel = BasicClassifierModel<float>;

namespace detail {

// h = count-weighted mean of feature embeddings; zero vector when the
// feature vector is empty (which makes the downstream softmax uniform).
template <typename Real>
std::vector<Real> compute_hidden(const Matrix<Real>& input,
                                 const FeatureVector& fv) {
  std::vector<Real> h(input.cols, Real(0));
  if (fv.total == 0) return h;
  for (const auto& [id, count] : fv.entries)
    axpy(static_cast<Real>(count), input.row(id), h.data(), input.cols);
  Real inv = Real(1) / static_cast<Real>(fv.total);
  for (auto& v : h) v *= inv;
  return h;
}

// Max-shifted, so the result is invariant under adding a constant to all
// logits.
template <typename Real>
void softmax_inplace(std::vector<Real>& logits) {
  Real max_score = *std::max_element(logits.begin(), logits.end());
  Real z = 0;
  for (auto& v : logits) {
    v = std::exp(v - max_score);
    z += v;
  }
  for (auto& v : logits) v /= z;
}

template <typename Real>
std::vector<Real> softmax_scores(const Matrix<Real>& output,
                                 const std::vector<Real>& h) {
  std::vector<Real> p(output.rows);
  for (std::size_t j = 0; j < output.rows; ++j)
    p[j] = dot(output.row(j), h.data(), output.cols);
  softmax_inplace(p);
  return p;
}

}  // namespace detail

template <typename Real>
std::vector<Real> predict_probs(const BasicClassifierModel<Real>& model,
                                const FeatureVector& fv) {
  return detail::softmax_scores(model.output,
                                detail::compute_hidden(model.input, fv));
}

// One SGD step on -log p[gold]; returns the example loss. Updates the output
// rows and every contributing input row.
template <typename Real>
Real sgd_step(BasicClassifierModel<Real>& model, const FeatureVector& fv,
              std::size_t gold, Real lr) {
  const std::size_t dim = model.input.cols;
  std::vector<Real> h = detail::compute_hidden(model.input, fv);
  std::vector<Real> p = detail::softmax_scores(model.output, h);
  Real loss = -std::log(p[gold]);

  // dh uses the pre-update output matrix.
  std::vector<Real> dh(dim, Real(0));
  for (std::size_t j = 0; j < model.output.rows; ++j) {
    Real g = p[j] - (j == gold ? Real(1) : Real(0));
    detail::axpy(g, model.output.row(j), dh.data(), dim);
  }
  for (std::size_t j = 0; j < model.output.rows; ++j) {
    Real g = p[j] - (j == gold ? Real(1) : Real(0));
    detail::axpy(-lr * g, h.data(), model.output.row(j), dim);
  }
  Real inv_n = Real(1) / static_cast<Real>(fv.total);
  for (const auto& [id, count] : fv.entries)
    detail::axpy(-lr * static_cast<Real>(count) * inv_n, dh.data(),
                 model.input.row(id), dim);
  return loss;
}

// Materialized gradients of -log p[gold]; used by the finite-difference
// oracle tests.
template <typename Real>
struct ClassifierGradients {
  Real loss;
  detail::Matrix<Real> d_output;  // L x dim
  std::vector<std::pair<std::uint64_t, std::vector<Real>>> d_input;
};

template <typename Real>
ClassifierGradients<Real> compute_gradients(
    const BasicClassifierModel<Real>& model, const FeatureVector& fv,
    std::size_t gold) {
  const std::size_t dim = model.input.cols;
  std::vector<Real> h = detail::compute_hidden(model.input, fv);
  std::vector<Real> p = detail::softmax_scores(model.output, h);

  ClassifierGradients<Real> g;
  g.loss = -std::log(p[gold]);
  g.d_output = detail::Matrix<Real>(model.output.rows, dim);
  std::vector<Real> dh(dim, Real(0));
  for (std::size_t j = 0; j < model.output.rows; ++j) {
    Real gj = p[j] - (j == gold ? Real(1) : Real(0));
    detail::axpy(gj, model.output.row(j), dh.data(), dim);
    detail::axpy(gj, h.data(), g.d_output.row(j), dim);
  }
  Real inv_n = Real(1) / static_cast<Real>(fv.total);
  for (const auto& [id, count] : fv.entries) {
    std::vector<Real> row(dim);
    for (std::size_t k = 0; k < dim; ++k)
      row[k] = static_cast<Real>(count) * inv_n * dh[k];
    g.d_input.emplace_back(id, std::move(row));
  }
  return g;
}

struct TrainStats {
  std::vector<double> epoch_mean_loss;
  std::size_t skipped_empty = 0;
};

template <typename Real = float>
BasicClassifierModel<Real> train_classifier(
    const std::vector<SentenceRecord>& train, const ClassifierHyper& hyper,
    const FeatureConfig& cfg, TrainStats* stats = nullptr) {
  BasicClassifierModel<Real> model;
  model.cfg = cfg;
  model.hyper = hyper;

  std::map<std::string, std::size_t> label_ids;
  for (const auto& rec : train) label_ids.emplace(rec.lang, 0);
  if (label_ids.size() < 2)
    throw TooFewLabels("need at least 2 distinct labels, got " +
                       std::to_string(label_ids.size()));
  for (auto& [label, id] : label_ids) {
    id = model.labels.size();
    model.labels.push_back(label);
  }

  model.vocab = build_vocab(train, cfg);

  TrainStats local;
  std::vector<FeatureVector> features;
  std::vector<std::size_t> golds;
  features.reserve(train.size());
  for (const auto& rec : train) {
    FeatureVector fv = extract(rec.text, model.vocab, cfg);
    if (fv.empty()) {
      ++local.skipped_empty;
      continue;
    }
    features.push_back(std::move(fv));
    golds.push_back(label_ids[rec.lang]);
  }
  if (features.empty()) throw EmptyCorpus("no usable training examples");

  model.input =
      detail::Matrix<Real>(model.vocab.feature_space(), hyper.dim);
  model.output = detail::Matrix<Real>(model.labels.size(), hyper.dim);
  detail::Rng rng(hyper.seed);
  if (hyper.uniform_init)
    model.input.fill_uniform(rng, -1.0 / hyper.dim, 1.0 / hyper.dim);

  const std::size_t n = features.size();
  const double total = static_cast<double>(hyper.epochs) * static_cast<double>(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::size_t processed = 0;
  for (std::uint32_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    detail::shuffle(order, rng);
    double epoch_loss = 0;
    for (std::size_t idx : order) {
      Real lr = static_cast<Real>(
          hyper.lr0 * (1.0 - static_cast<double>(processed) / total));
      epoch_loss += sgd_step(model, features[idx], golds[idx], lr);
      ++processed;
    }
    local.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  if (stats) *stats = local;
  return model;
}

// Top-k labels by probability; ties resolved by label sort order. The
// probabilities are over the full label set (sum to 1), top-k is a view.
template <typename Real>
std::vector<std::pair<std::string, Real>> predict_topk(
    const BasicClassifierModel<Real>& model, std::string_view text,
    std::size_t k) {
  FeatureVector fv = extract(text, model.vocab, model.cfg);
  std::vector<Real> p = predict_probs(model, fv);
  std::vector<std::size_t> idx(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (p[a] != p[b]) return p[a] > p[b];
    return a < b;  // labels are sorted, so index order is label order
  });
  std::vector<std::pair<std::string, Real>> out;
  for (std::size_t i = 0; i < std::min(k, idx.size()); ++i)
    out.emplace_back(model.labels[idx[i]], p[idx[i]]);
  return out;
}

// --- model file (magic LIDF, little-endian) --------------------------------

inline constexpr char kClassifierMagic[4] = {'L', 'I', 'D', 'F'};
inline constexpr std::uint32_t kClassifierVersion = 1;

namespace detail {

inline void write_feature_config(BinaryWriter& w, const FeatureConfig& cfg) {
  w.u32(cfg.minn);
  w.u32(cfg.maxn);
  w.u32(cfg.word_ngrams);
  w.u64(cfg.bucket);
  w.u64(cfg.min_count);
}

inline FeatureConfig read_feature_config(BinaryReader& r) {
  FeatureConfig cfg;
  cfg.minn = r.u32();
  cfg.maxn = r.u32();
  cfg.word_ngrams = r.u32();
  cfg.bucket = r.u64();
  cfg.min_count = r.u64();
  return cfg;
}

inline void write_vocab(BinaryWriter& w, const Vocab& vocab) {
  w.u64(vocab.size());
  for (const auto& word : vocab.words()) w.str(word);
}

inline Vocab read_vocab(BinaryReader& r, std::uint64_t bucket) {
  std::uint64_t count = r.u64();
  std::vector<std::string> words;
  words.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) words.push_back(r.str());
  return Vocab(std::move(words), bucket);
}

inline void write_matrix(BinaryWriter& w, const Matrix<float>& m) {
  w.u64(m.rows);
  w.u64(m.cols);
  w.f32s(m.data.data(), m.data.size());
}

inline Matrix<float> read_matrix(BinaryReader& r) {
  std::uint64_t rows = r.u64();
  std::uint64_t cols = r.u64();
  Matrix<float> m(rows, cols);
  r.f32s(m.data.data(), m.data.size());
  return m;
}

}  // namespace detail

inline void save(const ClassifierModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kClassifierMagic);
  w.u32(kClassifierVersion);
  detail::write_feature_config(w, model.cfg);
  w.u32(model.hyper.dim);
  w.u32(model.hyper.epochs);
  w.f64(model.hyper.lr0);
  w.u64(model.hyper.seed);
  w.u8(model.hyper.uniform_init ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(model.labels.size()));
  for (const auto& label : model.labels) w.str(label);
  detail::write_vocab(w, model.vocab);
  detail::write_matrix(w, model.input);
  detail::write_matrix(w, model.output);
  w.close();
}

inline ClassifierModel load_classifier(const std::string& path) {
  BinaryReader r(path);
  r.header(kClassifierMagic, kClassifierVersion);
  ClassifierModel model;
  model.cfg = detail::read_feature_config(r);
  model.hyper.dim = r.u32();
  model.hyper.epochs = r.u32();
  model.hyper.lr0 = r.f64();
  model.hyper.seed = r.u64();
  model.hyper.uniform_init = r.u8() != 0;
  std::uint32_t label_count = r.u32();
  for (std::uint32_t i = 0; i < label_count; ++i)
    model.labels.push_back(r.str());
  model.vocab = detail::read_vocab(r, model.cfg.bucket);
  model.input = detail::read_matrix(r);
  model.output = detail::read_matrix(r);
  return model;
}

}  // namespace lidforge
