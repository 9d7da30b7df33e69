#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "latcoset/enumeration.hpp"
#include "latcoset/error.hpp"
#include "latcoset/lattice.hpp"
#include "latcoset/wiretap.hpp"

namespace latcoset {

/// AWGN channel: i.i.d. N(0, sigma^2) noise per real dimension.
struct ChannelConfig {
  double sigma = 1.0;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SimResult {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / trials)
  std::uint64_t trials = 0;
};

/// Half-width of the dither window, in fundamental domains of the sparse lattice per dimension.
inline constexpr std::int64_t kDitherHalfWidth = 2;  // window of 5

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Key of the random stream for one trial: a hash of (seed, stream, trial). Streams are the
/// positions in a sigma sweep; a single-sigma run uses stream 0.
constexpr std::uint64_t trial_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL)) ^
                    (trial * 0xaef17502108ef2d9ULL));
}

/// Counter-mode generator: output k is splitmix64(key + k * golden).
class CounterStream {
 public:
  using result_type = std::uint64_t;
  explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return splitmix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Counts trials for which trial(index) returns true. Trials are split into contiguous
/// chunks, one per thread; the total does not depend on the split.
template <class Trial>
std::uint64_t count_hits(std::uint64_t trials, unsigned threads, const Trial& trial) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(trials, 1)));
  std::vector<std::uint64_t> hits(workers, 0);
  auto run = [&](unsigned w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) local += trial(t) ? 1 : 0;
    hits[w] = local;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return total;
}

inline SimResult make_result(std::uint64_t hits, std::uint64_t trials) {
  SimResult r;
  r.trials = trials;
  r.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  return r;
}

inline void validate(const ChannelConfig& cfg) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) throw Error(ErrorKind::domain_error, "sigma must be positive");
  if (cfg.trials < 1) throw Error(ErrorKind::invalid_argument, "trials must be at least 1");
}

}  // namespace detail

/// Empirical receiver error probability: send 0, add noise, decode to the nearest lattice point.
inline SimResult simulate_rep(const Lattice& lat, const ChannelConfig& cfg, std::uint64_t stream = 0) {
  detail::validate(cfg);
  const SphereDecoder decoder(lat);
  const Eigen::Index n = lat.dim();
  const auto errors = detail::count_hits(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    detail::CounterStream gen(detail::trial_key(cfg.seed, stream, t));
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = noise(gen);
    return !decoder.decode_coordinates(y).isZero();
  });
  return detail::make_result(errors, cfg.trials);
}

/// Empirical coset decision rate: random coset, random sparse-lattice dither from a window of
/// 5 fundamental domains per dimension, noise, ML coset decision.
inline SimResult simulate_coset_rate(const CosetCode& code, const ChannelConfig& cfg, std::uint64_t stream = 0) {
  detail::validate(cfg);
  const NestedPair& pair = code.pair;
  const CosetDecoder decoder(pair);
  const Eigen::Index n = pair.dim();
  const auto correct = detail::count_hits(cfg.trials, cfg.threads, [&](std::uint64_t t) {
    detail::CounterStream gen(detail::trial_key(cfg.seed, stream, t));
    std::uniform_int_distribution<std::int64_t> pick_label(0, pair.index - 1);
    std::uniform_int_distribution<std::int64_t> pick_dither(-kDitherHalfWidth, kDitherHalfWidth);
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    const std::int64_t label = pick_label(gen);
    IntVector dither(n);
    for (Eigen::Index i = 0; i < n; ++i) dither(i) = pick_dither(gen);
    Eigen::VectorXd y = coset_representative(pair, label) + pair.sparse.point(dither);
    for (Eigen::Index i = 0; i < n; ++i) y(i) += noise(gen);
    return decoder.decode(y) == label;
  });
  return detail::make_result(correct, cfg.trials);
}

/// One result per sigma; sigma i draws from stream i.
inline std::vector<SimResult> sweep(const Lattice& lat, const std::vector<double>& sigmas, ChannelConfig cfg) {
  if (sigmas.empty()) throw Error(ErrorKind::invalid_argument, "sigma list is empty");
  std::vector<SimResult> out;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    cfg.sigma = sigmas[i];
    out.push_back(simulate_rep(lat, cfg, i));
  }
  return out;
}

inline std::vector<SimResult> sweep(const CosetCode& code, const std::vector<double>& sigmas, ChannelConfig cfg) {
  if (sigmas.empty()) throw Error(ErrorKind::invalid_argument, "sigma list is empty");
  std::vector<SimResult> out;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    cfg.sigma = sigmas[i];
    out.push_back(simulate_coset_rate(code, cfg, i));
  }
  return out;
}

}  // namespace latcoset
