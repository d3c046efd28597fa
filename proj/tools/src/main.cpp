// rrtlab command-line tool: simulate, verify, converge, limits.
//
// Exit codes: 0 success, 1 invalid configuration, 2 I/O failure,
// 3 verification failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrtlab/coalescent.hpp"
#include "rrtlab/empirical.hpp"
#include "rrtlab/experiments.hpp"
#include "rrtlab/fdd.hpp"
#include "rrtlab/gof.hpp"
#include "rrtlab/limit_laws.hpp"
#include "rrtlab/oracle.hpp"
#include "rrtlab/records.hpp"
#include "rrtlab/tree.hpp"

namespace {

using namespace rrtlab;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kConfigError = 1, kIoError = 2, kVerifyFailure = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output sink: stdout for "-", otherwise a file opened for writing.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string model = "rrt";
  std::uint32_t n = 1024;
  std::uint64_t replicates = 1;
  std::uint64_t seed = 1;
  std::vector<Label> track;
  std::string format = "csv";
  std::string out = "-";
  unsigned workers = 0;
};

struct Observation {
  std::vector<std::pair<std::string, double>> values;
};

void tree_observables(const RecursiveTree& tree, Observation& obs) {
  const auto deg = degrees(tree);
  const auto dep = depths(tree);
  const auto max = max_degree_set(deg);
  std::uint32_t height = 0;
  double depth_sum = 0.0;
  for (Label v = 1; v <= tree.size(); ++v) {
    height = std::max(height, dep[v]);
    depth_sum += dep[v];
  }
  obs.values.emplace_back("root_degree", deg[tree.root()]);
  obs.values.emplace_back("max_degree", max.degree);
  obs.values.emplace_back("max_multiplicity", static_cast<double>(max.vertices.size()));
  obs.values.emplace_back("height", height);
  obs.values.emplace_back("mean_depth", depth_sum / tree.size());
}

int cmd_simulate(const SimulateArgs& args) {
  if (args.n < 1) throw std::invalid_argument("--n must be at least 1");
  const auto format = parse_record_format(args.format);
  const bool kingman = args.model == "kingman";
  if (!kingman && args.model != "rrt") throw std::invalid_argument("--model must be rrt or kingman");
  if (!kingman && !args.track.empty()) throw std::invalid_argument("--track needs --model kingman");
  for (Label v : args.track)
    if (v < 1 || v > args.n) throw std::invalid_argument("tracked labels must lie in 1..n");

  const auto results = run_replicates<Observation>(args.replicates, args.workers, [&](std::uint64_t r) {
    auto rng = Rng::for_stream(args.seed, r);
    Observation obs;
    if (!kingman) {
      tree_observables(grow_rrt(args.n, rng), obs);
      return obs;
    }
    const auto run = run_kingman(args.n, rng, args.track);
    tree_observables(run.final_tree, obs);
    for (const auto& rec : run.records) {
      const std::string p = "vertex" + std::to_string(rec.vertex) + ".";
      obs.values.emplace_back(p + "selection_size", static_cast<double>(rec.steps.size()));
      obs.values.emplace_back(p + "degree", rec.degree());
      obs.values.emplace_back(p + "depth", rec.depth());
    }
    return obs;
  });

  Sink sink(args.out);
  RecordWriter writer(sink.stream(), format);
  for (std::uint64_t r = 0; r < results.size(); ++r)
    for (const auto& [name, value] : results[r].values) writer.write(r, args.n, args.seed, name, value);
  sink.finish();
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::uint32_t max_n = 5;
  std::string golden_dir;
};

int cmd_verify(const VerifyArgs& args) {
  if (args.max_n < 1 || args.max_n > 6) throw std::invalid_argument("--max-n must lie in 1..6");
  bool ok = true;
  auto report = [&](const std::string& line, bool good) {
    std::cout << (good ? "ok   " : "FAIL ") << line << '\n';
    ok = ok && good;
  };
  for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(args.max_n, 5); ++n) {
    const auto rep = verify_phi(n);
    std::ostringstream line;
    line << "n=" << n << " chains=" << rep.chain_count << " (expected "
         << factorial(n) * factorial(n - 1) << ") trees=" << rep.tree_count << " (expected "
         << rep.expected_trees << ") fibers=" << rep.min_fiber << ".." << rep.max_fiber
         << " (expected " << factorial(n) << ")";
    if (!rep.ok()) line << " counterexample: " << rep.counterexample;
    report(line.str(), rep.ok() && rep.chain_count == factorial(n) * factorial(n - 1));
  }
  for (std::uint32_t n = 2; n <= args.max_n; ++n) {
    for (const auto& rep : {check_degree_depth_identity(n, 1), check_relabel_identity(n),
                            check_selection_product(n), check_inclusion_exclusion(n),
                            check_tree_degree_law(n)}) {
      std::string line = rep.name + " n=" + std::to_string(n) + " checks=" + std::to_string(rep.checks);
      if (!rep.ok) line += " counterexample: " + rep.counterexample;
      report(line, rep.ok);
    }
  }
  if (!args.golden_dir.empty()) {
    const auto path = std::filesystem::path(args.golden_dir) / "oracle_laws.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << golden_document(std::min<std::uint32_t>(args.max_n, 6)) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    std::cout << "wrote " << path.string() << '\n';
  }
  return ok ? kOk : kVerifyFailure;
}

// ---------------------------------------------------------------------------
// converge

struct ConvergeArgs {
  std::string experiment;
  std::vector<std::uint32_t> n{1u << 20};
  std::optional<double> eps;
  std::vector<std::uint32_t> levels;
  std::uint64_t replicates = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::uint32_t k = 1;
  std::vector<double> a;
  std::vector<std::int32_t> b;
  std::uint64_t min_retained = 2000;
  std::string fdd;
  std::vector<std::uint32_t> exponents;
  double ks_threshold = 0.05;
  double factor = 0.5;
  std::string out;
  std::string format = "csv";
};

std::vector<std::uint32_t> schedule(const ConvergeArgs& args) {
  if (args.levels.empty()) {
    if (args.eps) throw std::invalid_argument("--eps needs --l");
    return args.n;
  }
  std::vector<std::uint32_t> ns;
  for (auto l : args.levels) {
    const auto s = subsequence_schedule(args.eps.value_or(0.0), l, l);
    ns.push_back(static_cast<std::uint32_t>(s.front()));
  }
  return ns;
}

Json gof_json(const GofReport& r) {
  return {{"kind", to_string(r.kind)},   {"value", r.value},         {"sample_size", r.sample_size},
          {"reference", r.reference},    {"threshold", r.threshold}, {"passed", r.passed()}};
}

Json converge_depth(const ConvergeArgs& args, std::uint32_t n, RecordWriter* data, bool conditioned,
                    bool& warn) {
  ConditionalDepthConfig cfg;
  cfg.n = n;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  cfg.ks_threshold = args.ks_threshold;
  if (conditioned) {
    cfg.k = args.k;
    cfg.a = args.a.empty() ? std::vector<double>(args.k, 1.0) : args.a;
    cfg.b = args.b.empty() ? std::vector<std::int32_t>(args.k, 0) : args.b;
    cfg.trials = args.replicates;
    cfg.min_retained = args.min_retained;
  } else {
    cfg.trials = args.replicates;
  }
  const auto res = conditional_depth_experiment(cfg);
  Json j{{"n", n},
         {"thresholds", res.thresholds},
         {"trials", res.trials},
         {"retained", res.retained},
         {"acceptance", res.acceptance},
         {"scaled_acceptance", res.scaled_acceptance},
         {"underpowered", res.underpowered}};
  j["ks"] = Json::array();
  for (const auto& r : res.ks) j["ks"].push_back(gof_json(r));
  j["correlations"] = res.correlations;
  if (res.underpowered) warn = true;
  if (data)
    for (std::size_t v = 0; v < res.z.size(); ++v)
      for (std::size_t s = 0; s < res.z[v].size(); ++s)
        data->write(s, n, args.seed, "z" + std::to_string(v + 1), res.z[v][s]);
  return j;
}

Json converge_tree_pass(const ConvergeArgs& args, std::uint32_t n, RecordWriter* data) {
  TreePassConfig cfg;
  cfg.n = n;
  cfg.replicates = args.replicates;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  const std::string spec = args.fdd.empty() ? (args.experiment == "moments" ? "0:(-inf,0]"
                                                                            : "-1:R,0:R,1:R,>=2:R")
                                            : args.fdd;
  const bool with_fdd = args.experiment != "max-mult" || !args.fdd.empty();
  if (with_fdd) cfg.fdds.push_back(CanonicalFdd::parse(spec));
  const auto res = tree_pass(cfg);
  const double eps = res.epsilon;
  Json j{{"n", n}, {"epsilon_n", eps}};

  if (args.experiment == "ppp" || (args.experiment == "max-mult" && with_fdd)) {
    const auto means = res.mean_counts(0);
    const auto pred = poisson_means(cfg.fdds[0], eps).poisson_means;
    j["fdd"] = cfg.fdds[0].to_string();
    j["entries"] = Json::array();
    for (std::size_t i = 0; i < means.size(); ++i) {
      const auto& e = cfg.fdds[0].entries()[i];
      j["entries"].push_back({{"level", e.level},
                              {"interval", e.interval.to_string()},
                              {"tail", e.tail},
                              {"mean", means[i].mean},
                              {"stderr", means[i].stderr_},
                              {"prediction", pred[i]}});
    }
  }
  if (args.experiment == "moments") {
    auto exps = args.exponents;
    if (exps.empty()) exps.assign(cfg.fdds[0].size(), 1);
    const auto samples = res.samples(0);
    j["fdd"] = cfg.fdds[0].to_string();
    j["exponents"] = exps;
    j["estimate"] = factorial_moment_estimate(samples, exps);
    j["prediction"] = factorial_moment_prediction(cfg.fdds[0], exps, eps);
  }
  if (args.experiment == "max-mult") {
    const auto pmf = res.multiplicity_pmf();
    j["tv"] = multiplicity_tv(pmf, eps);
    j["pmf"] = Json::array();
    for (std::uint32_t k = 1; k < pmf.size(); ++k)
      j["pmf"].push_back({{"k", k}, {"empirical", pmf[k]}, {"limit", m_eps_pmf(k, eps).value}});
    j["coordinates"] = Json::array();
    for (std::size_t i = 0;; ++i) {
      const auto z = res.argmax_coordinate(i);
      if (z.empty()) break;
      j["coordinates"].push_back({{"index", i + 1}, {"samples", z.size()}, {"ks", ks_vs_normal(z)}});
    }
  }
  if (data) {
    for (std::uint64_t r = 0; r < res.replicates.size(); ++r) {
      const auto& rep = res.replicates[r];
      data->write(r, n, args.seed, "root_degree", rep.root_degree);
      data->write(r, n, args.seed, "max_degree", rep.max_degree);
      data->write(r, n, args.seed, "max_multiplicity", static_cast<double>(rep.argmax_z.size()));
      if (!rep.counts.empty()) {
        const auto all = rep.counts[0].all();
        for (std::size_t i = 0; i < all.size(); ++i)
          data->write(r, n, args.seed, "count" + std::to_string(i), static_cast<double>(all[i]));
      }
    }
  }
  return j;
}

Json converge_h2(const ConvergeArgs& args, std::uint32_t n) {
  H2Config cfg;
  cfg.n = n;
  cfg.k = args.k;
  cfg.replicates = args.replicates;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  cfg.factor = args.factor;
  if (!args.b.empty()) {
    // With --b the conditioning thresholds are floor(a log2 n) + b.
    for (std::uint32_t i = 0; i < args.k; ++i) {
      const double a = args.a.empty() ? 0.0 : args.a.at(i);
      const auto m = static_cast<std::int64_t>(std::floor(a * floor_log2(n))) + args.b.at(i);
      cfg.min_degree.push_back(static_cast<std::uint32_t>(std::max<std::int64_t>(0, m)));
    }
  }
  const auto r = h2_negligibility_experiment(cfg);
  return {{"n", n},           {"cutoff", r.cutoff},       {"degenerate", r.degenerate},
          {"threshold", r.threshold}, {"replicates", r.replicates}, {"hits", r.hits},
          {"probability", r.probability}, {"stderr", r.stderr_}, {"mean_h2", r.mean_h2}};
}

int cmd_converge(const ConvergeArgs& args) {
  const auto ns = schedule(args);
  std::unique_ptr<Sink> sink;
  std::unique_ptr<RecordWriter> data;
  if (!args.out.empty()) {
    sink = std::make_unique<Sink>(args.out);
    data = std::make_unique<RecordWriter>(sink->stream(), parse_record_format(args.format));
  }
  bool warn = false;
  Json report{{"schema", kSchema}, {"experiment", args.experiment}, {"seed", args.seed}};
  report["results"] = Json::array();
  for (auto n : ns) {
    Json j;
    if (args.experiment == "depth-clt") {
      j = converge_depth(args, n, data.get(), false, warn);
    } else if (args.experiment == "cond-depth") {
      j = converge_depth(args, n, data.get(), true, warn);
    } else if (args.experiment == "ppp" || args.experiment == "max-mult" ||
               args.experiment == "moments") {
      j = converge_tree_pass(args, n, data.get());
    } else if (args.experiment == "h2") {
      j = converge_h2(args, n);
    } else {
      throw std::invalid_argument("unknown experiment '" + args.experiment + "'");
    }
    report["results"].push_back(j);
  }
  if (args.experiment == "h2" && report["results"].size() > 1) {
    bool trend = true;
    const auto& rs = report["results"];
    for (std::size_t i = 1; i < rs.size(); ++i) {
      const double noise = 2.0 * std::hypot(rs[i]["stderr"].get<double>(), rs[i - 1]["stderr"].get<double>());
      if (rs[i]["probability"].get<double>() > rs[i - 1]["probability"].get<double>() + noise) trend = false;
    }
    report["nonincreasing"] = trend;
  }
  report["status"] = warn ? "underpowered" : "ok";
  if (warn) std::cerr << "warning: conditioning retained too few samples\n";
  std::cout << report.dump(2) << '\n';
  if (sink) sink->finish();
  return kOk;
}

// ---------------------------------------------------------------------------
// limits

struct LimitsArgs {
  std::optional<double> mu_sigma;
  std::optional<double> meps;
  std::uint32_t k_max = 10;
  std::uint32_t trunc = 60;
  std::optional<double> intensity;
  std::string fdd;
  double eps = 0.0;
  std::vector<std::uint32_t> exponents;
  std::vector<double> intb;
};

int cmd_limits(const LimitsArgs& args) {
  bool any = false;
  auto row = [](const char* fmt, auto... v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, v...);
    std::cout << buf << '\n';
  };
  if (args.mu_sigma) {
    const auto p = limit_params(*args.mu_sigma);
    row("a=%.17g mu=%.7f sigma2=%.7f", p.a, p.mu_a, p.sigma2_a);
    any = true;
  }
  if (args.meps) {
    row("%-4s %-22s %-10s %s", "k", "P(M_eps=k)", "tail", "certified");
    for (std::uint32_t k = 1; k <= args.k_max; ++k) {
      const auto v = m_eps_pmf(k, *args.meps, args.trunc);
      row("%-4u %-22.17g %-10.3g %s", k, v.value, v.tail_bound, v.certified ? "yes" : "no");
    }
    any = true;
  }
  if (args.intensity) {
    row("x=%.17g intensity=%.17g", *args.intensity, ppp_intensity(*args.intensity));
    any = true;
  }
  if (!args.fdd.empty()) {
    const auto fdd = CanonicalFdd::parse(args.fdd);
    const auto means = poisson_means(fdd, args.eps).poisson_means;
    for (std::size_t i = 0; i < means.size(); ++i) {
      const auto& e = fdd.entries()[i];
      row("%s%d %s mean=%.17g", e.tail ? ">=" : "", e.level, e.interval.to_string().c_str(), means[i]);
    }
    if (!args.exponents.empty())
      row("factorial moment=%.17g", factorial_moment_prediction(fdd, args.exponents, args.eps));
    any = true;
  }
  if (!args.intb.empty()) {
    if (args.intb.size() != 2) throw std::invalid_argument("--intb takes x and b");
    const auto r = intb_check(args.intb[0], args.intb[1]);
    row("lhs=%.17g rhs=%.17g residual=%.3g quadrature_error=%.3g", r.lhs, r.rhs, r.residual,
        r.quadrature_error);
    any = true;
  }
  if (!any) throw std::invalid_argument("limits: nothing requested");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrtlab: random recursive trees and the Kingman coalescent"};
  app.set_config("--config", "", "read options from a TOML-like file");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "stream per-replicate observables");
  simulate->add_option("--model", sim.model, "rrt or kingman")->capture_default_str();
  simulate->add_option("--n", sim.n, "tree size")->capture_default_str();
  simulate->add_option("--replicates", sim.replicates)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--track", sim.track, "labels to track (kingman)")->delimiter(',');
  simulate->add_option("--format", sim.format, "csv or jsonl")->capture_default_str();
  simulate->add_option("--out", sim.out, "output file, - for stdout")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "0 = all cores")->capture_default_str();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "exact small-n oracle suite");
  verify->add_option("--max-n", ver.max_n, "largest n (at most 6; bijection checks stop at 5)")
      ->capture_default_str();
  verify->add_option("--golden-dir", ver.golden_dir, "write oracle_laws.json here");

  ConvergeArgs conv;
  auto* converge = app.add_subcommand("converge", "Monte Carlo convergence experiments");
  converge->add_option("experiment", conv.experiment, "depth-clt|cond-depth|ppp|max-mult|moments|h2")
      ->required()
      ->check(CLI::IsMember({"depth-clt", "cond-depth", "ppp", "max-mult", "moments", "h2"}));
  converge->add_option("--n", conv.n, "tree sizes")->delimiter(',');
  converge->add_option("--eps", conv.eps, "schedule offset in [0,1]");
  converge->add_option("--l", conv.levels, "schedule levels: n = round(2^(l+eps))")->delimiter(',');
  converge->add_option("--replicates", conv.replicates, "replicates or trials (0 = until --min-retained)")
      ->capture_default_str();
  converge->add_option("--seed", conv.seed)->capture_default_str();
  converge->add_option("--workers", conv.workers)->capture_default_str();
  converge->add_option("--k", conv.k, "tracked vertices")->capture_default_str();
  converge->add_option("--a", conv.a, "degree fractions a_i")->delimiter(',');
  converge->add_option("--b", conv.b, "degree offsets b_i")->delimiter(',');
  converge->add_option("--min-retained", conv.min_retained)->capture_default_str();
  converge->add_option("--fdd", conv.fdd, "FDD spec, e.g. \"-1:R,0:R,>=1:R\"");
  converge->add_option("--exponents", conv.exponents, "factorial moment exponents")->delimiter(',');
  converge->add_option("--ks-threshold", conv.ks_threshold)->capture_default_str();
  converge->add_option("--factor", conv.factor, "h2 event threshold factor")->capture_default_str();
  converge->add_option("--out", conv.out, "raw data records file");
  converge->add_option("--format", conv.format, "csv or jsonl")->capture_default_str();

  LimitsArgs lim;
  auto* limits = app.add_subcommand("limits", "evaluate limiting laws");
  limits->add_option("--mu-sigma", lim.mu_sigma, "print mu_a and sigma2_a");
  limits->add_option("--meps", lim.meps, "print the M_eps pmf for this eps");
  limits->add_option("--k-max", lim.k_max)->capture_default_str();
  limits->add_option("--trunc", lim.trunc)->capture_default_str();
  limits->add_option("--intensity", lim.intensity, "evaluate 2^-x ln 2");
  limits->add_option("--fdd", lim.fdd, "Poisson means for an FDD spec");
  limits->add_option("--eps", lim.eps)->capture_default_str();
  limits->add_option("--exponents", lim.exponents)->delimiter(',');
  limits->add_option("--intb", lim.intb, "x,b")->delimiter(',')->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*verify) return cmd_verify(ver);
    if (*converge) return cmd_converge(conv);
    if (*limits) return cmd_limits(lim);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
