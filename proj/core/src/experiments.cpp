#include "rrtlab/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrtlab/coalescent.hpp"
#include "rrtlab/limit_laws.hpp"

namespace rrtlab {

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned workers,
                  const std::function<void(unsigned, std::uint64_t)>& fn) {
  if (end <= begin) return;
  workers = resolve_workers(workers);
  const std::uint64_t total = end - begin;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(4096, total / (workers * 8ull) + 1));
  if (workers == 1) {
    for (std::uint64_t i = begin; i < end; ++i) fn(0, i);
    return;
  }
  std::atomic<std::uint64_t> next{begin};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&](unsigned w) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::uint64_t start = next.fetch_add(chunk);
        if (start >= end) break;
        const std::uint64_t stop = std::min(end, start + chunk);
        for (std::uint64_t i = start; i < stop; ++i) fn(w, i);
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ConditionalDepthResult conditional_depth_experiment(const ConditionalDepthConfig& config) {
  const std::uint32_t n = config.n;
  const std::uint32_t k = config.k;
  if (n < 2) throw std::invalid_argument("conditional depth needs n >= 2");
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (config.a.size() != k || config.b.size() != k)
    throw std::invalid_argument("need one (a, b) pair per tracked vertex");

  ConditionalDepthResult out;
  std::vector<LimitParams> params;
  bool conditioned = false;
  double log2_scale = 0.0;
  for (std::uint32_t i = 0; i < k; ++i) {
    params.push_back(limit_params(config.a[i]));
    const double m = std::floor(config.a[i] * std::log2(static_cast<double>(n))) + config.b[i];
    out.thresholds.push_back(m > 0 ? static_cast<std::uint32_t>(m) : 0u);
    conditioned = conditioned || out.thresholds.back() > 0;
    log2_scale += out.thresholds.back();
  }
  const std::span<const std::uint32_t> min_degree =
      conditioned ? std::span<const std::uint32_t>(out.thresholds) : std::span<const std::uint32_t>();

  const unsigned workers = resolve_workers(config.workers);
  struct Hit {
    std::uint64_t trial;
    std::vector<std::uint32_t> depth;
  };
  std::vector<std::vector<Hit>> hits(workers);
  std::vector<TrackedCoalescent> samplers;
  for (unsigned w = 0; w < workers; ++w) samplers.emplace_back(n, k, config.mode);

  std::uint64_t done = 0;
  std::vector<Hit> kept;
  auto trial = [&](unsigned w, std::uint64_t t) {
    Rng rng = Rng::for_stream(config.seed, t);
    auto& tc = samplers[w];
    if (!tc.run(rng, min_degree)) return;
    Hit h{t, {}};
    for (Label v = 1; v <= k; ++v) h.depth.push_back(tc.depth(v));
    hits[w].push_back(std::move(h));
  };

  if (config.trials > 0) {
    parallel_for(0, config.trials, workers, trial);
    done = config.trials;
  } else {
    // Whole batches only, so the retained set depends on the seed alone.
    std::size_t found = 0;
    while (found < config.min_retained && done < config.max_trials) {
      const std::uint64_t stop = std::min(config.max_trials, done + config.batch);
      parallel_for(done, stop, workers, trial);
      done = stop;
      found = 0;
      for (const auto& v : hits) found += v.size();
    }
  }
  for (auto& v : hits) {
    kept.insert(kept.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  std::sort(kept.begin(), kept.end(), [](const Hit& x, const Hit& y) { return x.trial < y.trial; });

  out.trials = done;
  out.retained = kept.size();
  out.acceptance = done == 0 ? 0.0 : static_cast<double>(kept.size()) / static_cast<double>(done);
  out.scaled_acceptance = out.acceptance * std::exp2(log2_scale);
  out.underpowered = out.retained < config.underpowered_below;
  out.depth.assign(k, {});
  out.z.assign(k, {});
  for (const auto& h : kept) {
    for (std::uint32_t i = 0; i < k; ++i) {
      out.depth[i].push_back(h.depth[i]);
      out.z[i].push_back(normalized_depth(h.depth[i], n, params[i]));
    }
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    GofReport r;
    r.kind = GofKind::kKolmogorovSmirnov;
    r.sample_size = out.z[i].size();
    r.reference = "N(0,1)";
    r.threshold = config.ks_threshold;
    r.value = out.z[i].empty() ? 1.0 : ks_vs_normal(out.z[i]);
    out.ks.push_back(r);
  }
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = i + 1; j < k; ++j) out.correlations.push_back(correlation(out.z[i], out.z[j]));
  return out;
}

H2Result h2_negligibility_experiment(const H2Config& config) {
  if (config.n < 2) throw std::invalid_argument("h2 experiment needs n >= 2");
  if (config.vertex < 1 || config.vertex > config.k)
    throw std::invalid_argument("vertex must be one of the tracked vertices 1..k");
  if (!config.min_degree.empty() && config.min_degree.size() != config.k)
    throw std::invalid_argument("min_degree must be empty or have k entries");
  H2Result out;
  out.n = config.n;
  out.cutoff = config.cutoff != 0 ? config.cutoff : log_squared_cutoff(config.n);
  out.degenerate = out.cutoff >= config.n;
  out.threshold = config.factor * std::sqrt(std::log(static_cast<double>(config.n)));
  out.replicates = config.replicates;

  struct Row {
    bool accepted = false;
    std::uint32_t h2 = 0;
  };
  const unsigned workers = resolve_workers(config.workers);
  std::vector<TrackedCoalescent> samplers;
  for (unsigned w = 0; w < workers; ++w) samplers.emplace_back(config.n, config.k, TrackedMode::kSkip);
  std::vector<Row> rows(config.replicates);
  parallel_for(0, config.replicates, workers, [&](unsigned w, std::uint64_t r) {
    Rng rng = Rng::for_stream(config.seed, r);
    auto& tc = samplers[w];
    if (!tc.run(rng, config.min_degree)) return;
    rows[r] = {true, partial_depths(tc.record(config.vertex), out.cutoff).h2};
  });

  std::uint64_t accepted = 0;
  double sum = 0.0;
  for (const auto& row : rows) {
    if (!row.accepted) continue;
    ++accepted;
    sum += row.h2;
    if (row.h2 >= out.threshold) ++out.hits;
  }
  const double reps = static_cast<double>(config.replicates);
  out.probability = static_cast<double>(out.hits) / reps;
  out.stderr_ = std::sqrt(out.probability * (1.0 - out.probability) / reps);
  out.mean_h2 = accepted == 0 ? 0.0 : sum / static_cast<double>(accepted);
  return out;
}

TauResult tau_experiment(const TauConfig& config) {
  if (config.k < 2 || config.k > config.n) throw std::invalid_argument("tau needs 2 <= k <= n");
  TauResult out;
  const double l = std::log(static_cast<double>(config.n));
  out.log_squared = l * l;
  out.bound = 2.0 * config.k * config.k / out.log_squared;

  std::vector<Label> tracked(config.k);
  for (Label v = 1; v <= config.k; ++v) tracked[v - 1] = v;
  const unsigned workers = resolve_workers(config.workers);
  std::vector<TrackedCoalescent> samplers;
  if (!config.full_chain)
    for (unsigned w = 0; w < workers; ++w) samplers.emplace_back(config.n, config.k, TrackedMode::kSkip);

  std::vector<std::uint32_t> tau(config.replicates);
  parallel_for(0, config.replicates, workers, [&](unsigned w, std::uint64_t r) {
    Rng rng = Rng::for_stream(config.seed, r);
    if (config.full_chain) {
      const auto run = run_kingman(config.n, rng, tracked);
      tau[r] = tau_k(run.records, config.k);
    } else {
      samplers[w].run(rng);
      tau[r] = tau_k(samplers[w].records(), config.k);
    }
  });
  for (auto t : tau)
    if (static_cast<double>(t) > out.log_squared) ++out.exceed;
  const double reps = static_cast<double>(config.replicates);
  out.probability = static_cast<double>(out.exceed) / reps;
  out.stderr_ = std::sqrt(out.probability * (1.0 - out.probability) / reps);
  return out;
}

TreePassResult tree_pass(const TreePassConfig& config) {
  if (config.n == 0) throw std::invalid_argument("tree pass needs n >= 1");
  TreePassResult out;
  out.n = config.n;
  out.epsilon = epsilon_n(config.n);
  std::int32_t min_level = std::numeric_limits<std::int32_t>::max();
  for (const auto& f : config.fdds)
    if (f.size() > 0) min_level = std::min(min_level, f.min_level());
  const auto params = limit_params(1.0);

  out.replicates = run_replicates<TreeReplicate>(config.replicates, config.workers, [&](std::uint64_t r) {
    Rng rng = Rng::for_stream(config.seed, r);
    const RecursiveTree tree = grow_rrt(config.n, rng);
    const auto deg = degrees(tree);
    TreeReplicate rep;
    rep.root_degree = deg[1];
    if (!config.fdds.empty()) {
      const auto marked = high_degree_vertices(tree, deg, min_level);
      for (const auto& f : config.fdds) rep.counts.push_back(count_measures(marked, config.n, f));
    }
    auto ms = max_degree_set(deg);
    rep.max_degree = ms.degree;
    // Uniform tie order among the maximum degree vertices.
    for (std::size_t i = ms.vertices.size(); i > 1; --i)
      std::swap(ms.vertices[i - 1], ms.vertices[rng.below(i)]);
    for (Label v : ms.vertices)
      rep.argmax_z.push_back(normalized_depth(depth_of(tree, v), config.n, params));
    return rep;
  });
  return out;
}

std::vector<CountingMeasureSample> TreePassResult::samples(std::size_t fdd) const {
  std::vector<CountingMeasureSample> out;
  out.reserve(replicates.size());
  for (const auto& r : replicates) out.push_back(r.counts.at(fdd));
  return out;
}

std::vector<MeanStat> TreePassResult::mean_counts(std::size_t fdd) const {
  std::vector<MeanStat> out;
  if (replicates.empty()) return out;
  const std::size_t entries = replicates.front().counts.at(fdd).all().size();
  std::vector<double> column(replicates.size());
  for (std::size_t e = 0; e < entries; ++e) {
    for (std::size_t r = 0; r < replicates.size(); ++r)
      column[r] = static_cast<double>(replicates[r].counts[fdd].all()[e]);
    out.push_back(mean_with_error(column));
  }
  return out;
}

std::vector<double> TreePassResult::multiplicity_pmf() const {
  std::vector<double> pmf;
  for (const auto& r : replicates) {
    const std::size_t m = r.argmax_z.size();
    if (pmf.size() <= m) pmf.resize(m + 1, 0.0);
    pmf[m] += 1.0;
  }
  for (auto& p : pmf) p /= static_cast<double>(replicates.size());
  return pmf;
}

std::vector<double> TreePassResult::argmax_coordinate(std::size_t i) const {
  std::vector<double> out;
  for (const auto& r : replicates)
    if (r.argmax_z.size() > i) out.push_back(r.argmax_z[i]);
  return out;
}

double multiplicity_tv(std::span<const double> empirical, double epsilon, std::uint32_t trunc) {
  // Reference pmf up to where the remaining mass is negligible.
  const std::size_t len = std::max<std::size_t>(empirical.size(), 64);
  std::vector<double> ref(len, 0.0);
  for (std::size_t k = 1; k < len; ++k) ref[k] = m_eps_pmf(static_cast<std::uint32_t>(k), epsilon, trunc).value;
  double tail = 1.0;
  for (double p : ref) tail -= p;
  return total_variation(empirical, ref) + 0.5 * std::max(0.0, tail);
}

}  // namespace rrtlab
