#pragma once

// Self-contrastive sentence embedder: two stochastically augmented views of
// each sentence (span deletion + feature dropout) are pulled together by an
// InfoNCE objective against in-batch negatives. The encoder is a linear map
// over the same hashed char-n-gram feature space as the classifier.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "lidforge/detail/matrix.hpp"
#include "lidforge/detail/rng.hpp"
#include "lidforge/errors.hpp"
#include "lidforge/features.hpp"
#include "lidforge/serialize.hpp"

namespace lidforge {

struct EmbedderHyper {
  std::uint32_t dim = 256;
  double tau = 0.04;
  std::uint32_t span_mask_len = 5;
  std::uint32_t batch_size = 200;
  std::uint32_t max_length = 50;  // tokens; longer inputs are truncated
  std::uint32_t epochs = 1;
  double feature_dropout = 0.05;
  double lr = 0.05;
  std::uint64_t seed = 0;
};

template <typename Real>
struct BasicEmbeddingModel {
  FeatureConfig cfg;
  EmbedderHyper hyper;
  Vocab vocab;
  detail::Matrix<Real> encoder;  // (V+B) x dim
};

using EmbeddingModel = BasicEmbeddingModel<float>;

// Removes `len` scalars starting at scalar index `offset`.
inline std::string delete_span(std::string_view text, std::size_t offset,
                               std::size_t len) {
  std::u32string cps = utf8_decode(text);
  cps.erase(offset, len);
  return utf8_encode(cps);
}

// Each view independently deletes one uniformly positioned contiguous span
// of length min(span_mask_len, ceil(len/2)); a one-scalar input is left
// intact so both views stay non-empty.
inline std::pair<std::string, std::string> augment(std::string_view text,
                                                   std::uint32_t span_mask_len,
                                                   detail::Rng& rng) {
  std::u32string cps = utf8_decode(text);
  if (cps.empty()) throw EmptyInput("cannot augment empty text");
  const std::size_t n = cps.size();
  std::size_t span = std::min<std::size_t>(span_mask_len, (n + 1) / 2);
  if (span >= n) span = n - 1;

  auto one_view = [&] {
    if (span == 0) return utf8_encode(cps);
    std::size_t offset = static_cast<std::size_t>(rng.below(n - span + 1));
    std::u32string view = cps;
    view.erase(offset, span);
    return utf8_encode(view);
  };
  std::string a = one_view();
  std::string b = one_view();
  return {std::move(a), std::move(b)};
}

namespace detail {

// Drops each feature entry independently; falls back to the undropped
// vector when everything would vanish, preserving the non-empty contract.
inline FeatureVector apply_feature_dropout(const FeatureVector& fv,
                                           double rate, Rng& rng) {
  if (rate <= 0.0) return fv;
  FeatureVector out;
  for (const auto& entry : fv.entries) {
    if (rng.real() < rate) continue;
    out.entries.push_back(entry);
    out.total += entry.second;
  }
  if (out.empty()) return fv;
  return out;
}

template <typename Real>
Real norm2(const std::vector<Real>& v) {
  Real acc = 0;
  for (Real x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace detail

// Count-weighted mean of feature rows, unnormalized.
template <typename Real>
std::vector<Real> encode_raw(const BasicEmbeddingModel<Real>& model,
                             const FeatureVector& fv) {
  std::vector<Real> h(model.encoder.cols, Real(0));
  if (fv.total == 0) return h;
  for (const auto& [id, count] : fv.entries)
    detail::axpy(static_cast<Real>(count), model.encoder.row(id), h.data(),
                 model.encoder.cols);
  Real inv = Real(1) / static_cast<Real>(fv.total);
  for (auto& v : h) v *= inv;
  return h;
}

template <typename Real>
FeatureVector embed_features(const BasicEmbeddingModel<Real>& model,
                             std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.size() > model.hyper.max_length)
    tokens.resize(model.hyper.max_length);
  return extract_words(tokens, model.vocab, model.cfg);
}

// L2-normalized encoding; no augmentation at inference time.
template <typename Real>
std::vector<Real> embed(const BasicEmbeddingModel<Real>& model,
                        std::string_view text) {
  FeatureVector fv = embed_features(model, text);
  if (fv.empty()) throw EmptyInput("cannot embed empty input");
  std::vector<Real> h = encode_raw(model, fv);
  Real norm = detail::norm2(h);
  if (norm == Real(0)) throw EmptyInput("zero-norm encoding");
  for (auto& v : h) v /= norm;
  return h;
}

// L2-normalized arithmetic mean of precomputed unit vectors.
template <typename Real>
std::vector<Real> centroid_of(const std::vector<std::vector<Real>>& vectors) {
  if (vectors.empty()) throw EmptyGroup("centroid of empty set");
  std::vector<Real> mean(vectors.front().size(), Real(0));
  for (const auto& v : vectors)
    detail::axpy(Real(1), v.data(), mean.data(), mean.size());
  Real inv = Real(1) / static_cast<Real>(vectors.size());
  for (auto& x : mean) x *= inv;
  Real norm = detail::norm2(mean);
  if (norm == Real(0))
    throw DegenerateCentroid("member embeddings cancel to the zero vector");
  for (auto& x : mean) x /= norm;
  return mean;
}

template <typename Real>
std::vector<Real> centroid(const BasicEmbeddingModel<Real>& model,
                           const std::vector<std::string>& sentences) {
  if (sentences.empty()) throw EmptyGroup("centroid of empty group");
  std::vector<std::vector<Real>> embeddings;
  embeddings.reserve(sentences.size());
  for (const auto& s : sentences) embeddings.push_back(embed(model, s));
  return centroid_of(embeddings);
}

// --- InfoNCE ----------------------------------------------------------------

// Loss over paired views (a_i, b_i). Each pair's first view anchors one
// term; the denominator runs over the positive plus every other in-batch
// view. Cosines are computed internally, so callers may pass raw
// (unnormalized) vectors — the finite-difference oracle relies on that.
template <typename Real>
struct InfoNceResult {
  Real loss;
  std::vector<std::vector<Real>> d_views_a;
  std::vector<std::vector<Real>> d_views_b;
};

namespace detail {

template <typename Real>
InfoNceResult<Real> info_nce_impl(const std::vector<std::vector<Real>>& a,
                                  const std::vector<std::vector<Real>>& b,
                                  double tau, bool want_grad) {
  const std::size_t batch = a.size();
  if (batch < 2 || b.size() != batch)
    throw DegenerateBatch("InfoNCE needs at least 2 paired views");
  const std::size_t d = a.front().size();
  const std::size_t total = 2 * batch;

  // Flatten views: [a_0..a_{B-1}, b_0..b_{B-1}] with unit-normalized copies.
  std::vector<const std::vector<Real>*> views(total);
  for (std::size_t i = 0; i < batch; ++i) {
    views[i] = &a[i];
    views[batch + i] = &b[i];
  }
  std::vector<Real> norms(total);
  std::vector<std::vector<Real>> unit(total);
  for (std::size_t v = 0; v < total; ++v) {
    norms[v] = norm2(*views[v]);
    if (norms[v] == Real(0))
      throw EmptyInput("zero-norm vector in InfoNCE batch");
    unit[v] = *views[v];
    for (auto& x : unit[v]) x /= norms[v];
  }

  InfoNceResult<Real> result;
  result.loss = 0;
  std::vector<std::vector<Real>> d_unit;
  if (want_grad) d_unit.assign(total, std::vector<Real>(d, Real(0)));

  std::vector<Real> sims(total);
  std::vector<Real> weights(total);
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t pos = batch + i;  // b_i
    Real max_logit = -std::numeric_limits<Real>::infinity();
    for (std::size_t v = 0; v < total; ++v) {
      if (v == i) continue;
      sims[v] = dot(unit[i].data(), unit[v].data(), d);
      max_logit = std::max(max_logit, static_cast<Real>(sims[v] / tau));
    }
    Real z = 0;
    for (std::size_t v = 0; v < total; ++v) {
      if (v == i) continue;
      weights[v] = std::exp(static_cast<Real>(sims[v] / tau) - max_logit);
      z += weights[v];
    }
    result.loss += -(static_cast<Real>(sims[pos] / tau) - max_logit) +
                   std::log(z);
    if (!want_grad) continue;
    for (std::size_t v = 0; v < total; ++v) {
      if (v == i) continue;
      Real dsim = (weights[v] / z - (v == pos ? Real(1) : Real(0))) /
                  static_cast<Real>(tau);
      // d cos(u_i, u_v) w.r.t. the unit vectors.
      for (std::size_t k = 0; k < d; ++k) {
        d_unit[i][k] += dsim * (unit[v][k] - sims[v] * unit[i][k]);
        d_unit[v][k] += dsim * (unit[i][k] - sims[v] * unit[v][k]);
      }
    }
  }
  result.loss /= static_cast<Real>(batch);

  if (want_grad) {
    // Chain through the normalization u = x / |x|: the unit-sphere tangent
    // projection was already applied above, so only the 1/|x| scale remains.
    auto to_raw = [&](std::size_t v, std::vector<Real>& out) {
      out.resize(d);
      for (std::size_t k = 0; k < d; ++k)
        out[k] = d_unit[v][k] / norms[v] / static_cast<Real>(batch);
    };
    result.d_views_a.resize(batch);
    result.d_views_b.resize(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      to_raw(i, result.d_views_a[i]);
      to_raw(batch + i, result.d_views_b[i]);
    }
  }
  return result;
}

}  // namespace detail

template <typename Real>
Real info_nce(const std::vector<std::vector<Real>>& views_a,
              const std::vector<std::vector<Real>>& views_b, double tau) {
  return detail::info_nce_impl(views_a, views_b, tau, false).loss;
}

template <typename Real>
InfoNceResult<Real> info_nce_with_grad(
    const std::vector<std::vector<Real>>& views_a,
    const std::vector<std::vector<Real>>& views_b, double tau) {
  return detail::info_nce_impl(views_a, views_b, tau, true);
}

// --- training ----------------------------------------------------------------

struct EmbedTrainStats {
  std::vector<double> batch_losses;
  std::size_t skipped_empty = 0;
};

template <typename Real = float>
BasicEmbeddingModel<Real> train_embedder(
    const std::vector<SentenceRecord>& corpus, const EmbedderHyper& hyper,
    const FeatureConfig& cfg, EmbedTrainStats* stats = nullptr) {
  if (corpus.empty()) throw EmptyCorpus("empty embedder corpus");

  BasicEmbeddingModel<Real> model;
  model.cfg = cfg;
  model.hyper = hyper;
  model.vocab = build_vocab(corpus, cfg);

  detail::Rng rng(hyper.seed);
  model.encoder = detail::Matrix<Real>(model.vocab.feature_space(), hyper.dim);
  model.encoder.fill_uniform(rng, -1.0 / hyper.dim, 1.0 / hyper.dim);

  EmbedTrainStats local;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].text.empty()) {
      ++local.skipped_empty;
      continue;
    }
    usable.push_back(i);
  }

  const Real lr = static_cast<Real>(hyper.lr);
  for (std::uint32_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    detail::shuffle(usable, rng);
    for (std::size_t start = 0; start < usable.size();
         start += hyper.batch_size) {
      std::size_t end = std::min<std::size_t>(start + hyper.batch_size,
                                              usable.size());
      if (end - start < 2) break;  // a trailing singleton batch is dropped

      std::vector<FeatureVector> fvs_a, fvs_b;
      std::vector<std::vector<Real>> raw_a, raw_b;
      for (std::size_t s = start; s < end; ++s) {
        const auto& text = corpus[usable[s]].text;
        auto [view_a, view_b] = augment(text, hyper.span_mask_len, rng);
        FeatureVector fa = detail::apply_feature_dropout(
            embed_features(model, view_a), hyper.feature_dropout, rng);
        FeatureVector fb = detail::apply_feature_dropout(
            embed_features(model, view_b), hyper.feature_dropout, rng);
        raw_a.push_back(encode_raw(model, fa));
        raw_b.push_back(encode_raw(model, fb));
        fvs_a.push_back(std::move(fa));
        fvs_b.push_back(std::move(fb));
      }

      InfoNceResult<Real> grad = info_nce_with_grad(raw_a, raw_b, hyper.tau);
      local.batch_losses.push_back(static_cast<double>(grad.loss));

      auto apply = [&](const FeatureVector& fv, const std::vector<Real>& dh) {
        if (fv.total == 0) return;
        Real inv_n = Real(1) / static_cast<Real>(fv.total);
        for (const auto& [id, count] : fv.entries)
          detail::axpy(-lr * static_cast<Real>(count) * inv_n, dh.data(),
                       model.encoder.row(id), model.encoder.cols);
      };
      for (std::size_t i = 0; i < raw_a.size(); ++i) {
        apply(fvs_a[i], grad.d_views_a[i]);
        apply(fvs_b[i], grad.d_views_b[i]);
      }
    }
  }
  if (stats) *stats = local;
  return model;
}

// --- model file (magic LIDE) -------------------------------------------------

inline constexpr char kEmbedderMagic[4] = {'L', 'I', 'D', 'E'};
inline constexpr std::uint32_t kEmbedderVersion = 1;

inline void save(const EmbeddingModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kEmbedderMagic);
  w.u32(kEmbedderVersion);
  detail::write_feature_config(w, model.cfg);
  w.u32(model.hyper.dim);
  w.f64(model.hyper.tau);
  w.u32(model.hyper.span_mask_len);
  w.u32(model.hyper.batch_size);
  w.u32(model.hyper.max_length);
  w.u32(model.hyper.epochs);
  w.f64(model.hyper.feature_dropout);
  w.f64(model.hyper.lr);
  w.u64(model.hyper.seed);
  detail::write_vocab(w, model.vocab);
  detail::write_matrix(w, model.encoder);
  w.close();
}

inline EmbeddingModel load_embedder(const std::string& path) {
  BinaryReader r(path);
  r.header(kEmbedderMagic, kEmbedderVersion);
  EmbeddingModel model;
  model.cfg = detail::read_feature_config(r);
  model.hyper.dim = r.u32();
  model.hyper.tau = r.f64();
  model.hyper.span_mask_len = r.u32();
  model.hyper.batch_size = r.u32();
  model.hyper.max_length = r.u32();
  model.hyper.epochs = r.u32();
  model.hyper.feature_dropout = r.f64();
  model.hyper.lr = r.f64();
  model.hyper.seed = r.u64();
  model.vocab = detail::read_vocab(r, model.cfg.bucket);
  model.encoder = detail::read_matrix(r);
  return model;
}

}  // namespace lidforge
