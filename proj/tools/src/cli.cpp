#include "lrt_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <lrt/lrt.hpp>

#include "lrt_cli/synthetic.hpp"

namespace lrt::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Raised for argument combinations CLI11 cannot check; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json config_of(const CLI::App& sub) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string key = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[key] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else if (!opt->get_default_str().empty()) {
      cfg[key] = opt->get_default_str();
    }
  }
  return cfg;
}

struct Report {
  Json outputs = Json::object();
  WorkCounters counters;
  std::uint64_t wall_ns = 0;
  std::uint64_t seed = 0;
  Json extra_config = Json::object();
  int exit_code = 0;
};

PointSet load(const std::string& path, const std::string& format) {
  return format == "auto" ? load_points(path) : load_points(path, parse_format(format));
}

IndexList parse_index_list(const std::string& text) {
  IndexList out;
  std::string token;
  std::istringstream in(text);
  while (in >> std::ws && !in.eof()) {
    const int c = in.peek();
    if (c == ',') {
      in.get();
      continue;
    }
    long long v = 0;
    if (!(in >> v) || v < 0) throw UsageError("malformed index list: " + text);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

/// Accepts a thin report ({"outputs":{"indices":[...]}}), {"indices":[...]},
/// a bare JSON array, or whitespace/comma separated integers.
IndexList read_index_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) return parse_index_list(text);
  const Json* arr = &j;
  if (j.is_object()) {
    if (j.contains("outputs") && j["outputs"].contains("indices")) {
      arr = &j["outputs"]["indices"];
    } else if (j.contains("indices")) {
      arr = &j["indices"];
    } else {
      throw std::runtime_error(path + ": no indices field");
    }
  }
  if (!arr->is_array()) throw std::runtime_error(path + ": indices must be an array");
  IndexList out;
  for (const auto& v : *arr) out.push_back(v.get<std::size_t>());
  return out;
}

/// "gaussian:median" resolves eta by the median heuristic on `points`.
KernelSpec resolve_kernel(const std::string& text, const PointSet& points, Report& report) {
  if (text == "gaussian:median") {
    const double eta = median_heuristic_eta(points);
    report.extra_config["median_heuristic_eta"] = eta;
    return GaussianKernel{eta};
  }
  return parse_kernel(text);
}

bool is_compress(Algorithm a) {
  return a == Algorithm::kh_compress || a == Algorithm::kt_compress ||
         a == Algorithm::gs_compress;
}

std::size_t largest_power_of_4_at_most(std::size_t n) {
  std::size_t p = 1;
  while (p <= n / 4) p *= 4;
  return p;
}

/// Largest valid input size not exceeding n for the configuration.
std::size_t truncated_size(std::size_t n, const ThinConfig& cfg) {
  if (cfg.algorithm == Algorithm::uniform) return n;
  if (is_compress(cfg.algorithm)) return largest_power_of_4_at_most(n);
  if (cfg.algorithm == Algorithm::kh) return n - n % 2;
  const std::size_t n_out = *cfg.n_out;
  if (n_out == 0 || n < 2 * n_out) return n;
  std::size_t size = 2 * n_out;
  while (size <= n / 2) size *= 2;
  return size;
}

PointSet maybe_truncate(const PointSet& points, std::size_t target, const std::string& pad,
                        std::ostream& err) {
  if (pad != "truncate" || target >= points.size() || target == 0) return points;
  err << "warning: truncating input from " << points.size() << " to " << target << " rows\n";
  return points.head(target);
}

// ---------------------------------------------------------------- thin

struct ThinArgs {
  std::string input, format = "auto", algo = "kh", kernel = "gaussian:eta=1", pad = "none";
  double delta = 0.5;
  std::size_t n_out = 0;
  unsigned g = 0;
  std::uint64_t seed = 0;
  bool report_mmd = false;
};

void add_thin_options(CLI::App* sub, ThinArgs& a) {
  sub->add_option("--input", a.input, "point file (csv or f64le)")->required();
  sub->add_option("--format", a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  sub->add_option("--algo", a.algo, "uniform|kh|lkh|rkh|khc|ktc|gs|gsc")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "kh", "lkh", "rkh", "khc", "ktc", "gs", "gsc"}));
  sub->add_option("--delta", a.delta, "failure probability in (0,1)")->capture_default_str();
  sub->add_option("--nout", a.n_out, "output size (uniform, kh, lkh, rkh, gs)");
  sub->add_option("--g", a.g, "compression level (khc, ktc, gsc)");
  sub->add_option("--seed", a.seed, "random seed")->capture_default_str();
  sub->add_option("--kernel", a.kernel, "gaussian:eta=..|gaussian:median|linear|...")
      ->capture_default_str();
  sub->add_option("--pad", a.pad, "none|truncate")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "truncate"}));
  sub->add_flag("--report-mmd", a.report_mmd, "also report MMD to the input");
}

ThinConfig make_thin_config(const ThinArgs& a, const CLI::App& sub, std::size_t n_in) {
  ThinConfig cfg;
  cfg.algorithm = parse_algorithm(a.algo);
  cfg.delta = a.delta;
  cfg.seed = a.seed;
  const bool has_nout = sub.count("--nout") > 0;
  const bool has_g = sub.count("--g") > 0;
  if (is_compress(cfg.algorithm)) {
    if (!has_g) throw UsageError(a.algo + " requires --g");
    cfg.g = a.g;
  } else if (cfg.algorithm == Algorithm::kh) {
    cfg.n_out = has_nout ? a.n_out : n_in / 2;
  } else {
    if (!has_nout) throw UsageError(a.algo + " requires --nout");
    cfg.n_out = a.n_out;
  }
  cfg.validate();
  return cfg;
}

void run_thin(const ThinArgs& a, const CLI::App& sub, Report& r, std::ostream& err) {
  PointSet points = load(a.input, a.format);
  ThinConfig cfg = make_thin_config(a, sub, points.size());
  points = maybe_truncate(points, truncated_size(points.size(), cfg), a.pad, err);
  if (cfg.algorithm == Algorithm::kh && sub.count("--nout") == 0) cfg.n_out = points.size() / 2;
  const KernelSpec kernel = resolve_kernel(a.kernel, points, r);
  r.seed = a.seed;
  const auto start = Clock::now();
  const KernelOracle oracle(kernel, points, &r.counters);
  const Coreset c = thin(oracle, cfg);
  r.wall_ns = elapsed_ns(start);
  r.outputs["n_in"] = points.size();
  r.outputs["n_out"] = c.size();
  r.outputs["indices"] = c.indices;
  if (a.report_mmd) {
    const KernelOracle quiet(kernel, points);
    r.outputs["mmd"] = mmd_to_coreset(quiet, iota_indices(points.size()), c.indices);
  }
}

// ---------------------------------------------------------------- mmd / kms

struct CoresetArgs {
  std::string input, format = "auto", kernel = "gaussian:eta=1", indices, coreset_file, queries;
};

void add_coreset_options(CLI::App* sub, CoresetArgs& a, bool with_queries) {
  sub->add_option("--input", a.input, "point file")->required();
  sub->add_option("--format", a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  sub->add_option("--kernel", a.kernel, "kernel spec")->capture_default_str();
  auto* idx = sub->add_option("--indices", a.indices, "comma separated coreset indices");
  auto* file = sub->add_option("--coreset-file", a.coreset_file, "thin report or index list");
  idx->excludes(file);
  if (with_queries) {
    sub->add_option("--queries", a.queries, "comma separated query indices (default: all)");
  }
}

IndexList coreset_from(const CoresetArgs& a, const CLI::App& sub) {
  if (sub.count("--indices") > 0) return parse_index_list(a.indices);
  if (sub.count("--coreset-file") > 0) return read_index_file(a.coreset_file);
  throw UsageError("one of --indices or --coreset-file is required");
}

void run_mmd(const CoresetArgs& a, const CLI::App& sub, Report& r) {
  const PointSet points = load(a.input, a.format);
  const IndexList coreset = coreset_from(a, sub);
  const KernelSpec kernel = resolve_kernel(a.kernel, points, r);
  const auto start = Clock::now();
  const KernelOracle oracle(kernel, points, &r.counters);
  const double value = mmd_to_coreset(oracle, iota_indices(points.size()), coreset);
  r.wall_ns = elapsed_ns(start);
  r.outputs["n_in"] = points.size();
  r.outputs["n_out"] = coreset.size();
  r.outputs["mmd"] = value;
  r.outputs["mmd_squared"] = value * value;
}

void run_kms(const CoresetArgs& a, const CLI::App& sub, Report& r) {
  const PointSet points = load(a.input, a.format);
  const IndexList coreset = coreset_from(a, sub);
  const IndexList queries =
      sub.count("--queries") > 0 ? parse_index_list(a.queries) : iota_indices(points.size());
  const KernelSpec kernel = resolve_kernel(a.kernel, points, r);
  const auto start = Clock::now();
  const Matrix K = kernel_matrix(kernel, points);
  r.counters.kernel_evals += static_cast<std::uint64_t>(K.size());
  const InducedVectors v = induced_prob_vectors(points.size(), Coreset{coreset});
  const double value = kms(K, v.p_in, v.q_out, queries);
  r.wall_ns = elapsed_ns(start);
  r.outputs["n_in"] = points.size();
  r.outputs["n_out"] = coreset.size();
  r.outputs["num_queries"] = queries.size();
  r.outputs["kms"] = value;
}

// ---------------------------------------------------------------- spectrum / epsrank

struct SpectrumArgs {
  std::string input, format = "auto", kernel = "gaussian:eta=1";
  std::size_t top = 0;
};

void run_spectrum(const SpectrumArgs& a, Report& r) {
  const PointSet points = load(a.input, a.format);
  const KernelSpec kernel = resolve_kernel(a.kernel, points, r);
  const auto start = Clock::now();
  const Matrix K = kernel_matrix(kernel, points);
  r.counters.kernel_evals += static_cast<std::uint64_t>(K.size());
  const Spectrum s = spectrum(K);
  r.wall_ns = elapsed_ns(start);
  std::vector<double> ev = s.eigenvalues;
  if (a.top > 0 && a.top < ev.size()) ev.resize(a.top);
  r.outputs["n"] = points.size();
  r.outputs["eigenvalues"] = ev;
}

struct EpsRankArgs {
  std::string input, format = "auto";
  std::vector<double> eps{0.0};
};

void run_epsrank(const EpsRankArgs& a, Report& r) {
  const PointSet m = load(a.input, a.format);
  const auto start = Clock::now();
  Json ranks = Json::array();
  for (const double e : a.eps) {
    if (!(e >= 0.0)) throw UsageError("--eps must be nonnegative");
    ranks.push_back({{"eps", e}, {"rank", eps_rank(m.matrix(), e)}});
  }
  r.wall_ns = elapsed_ns(start);
  r.outputs["rows"] = m.size();
  r.outputs["cols"] = m.dim();
  r.outputs["ranks"] = std::move(ranks);
}

// ---------------------------------------------------------------- attn

struct AttnArgs {
  std::string queries, keys, values, format = "auto", pad = "none", method = "thinformer";
  unsigned g = 0;
  std::uint64_t seed = 0;
  bool no_error = false;
  bool emit_output = true;
};

void run_attn(const AttnArgs& a, Report& r, std::ostream& err) {
  AttentionProblem p;
  p.Q = load(a.queries, a.format).matrix();
  PointSet keys = load(a.keys, a.format);
  PointSet values = load(a.values, a.format);
  if (keys.size() != values.size()) throw std::invalid_argument("keys and values differ in rows");
  const std::size_t target = largest_power_of_4_at_most(keys.size());
  keys = maybe_truncate(keys, target, a.pad, err);
  values = values.head(keys.size());
  p.K = keys.matrix();
  p.V = values.matrix();
  r.seed = a.seed;
  RandomStream stream(a.seed);
  const auto start = Clock::now();
  AttentionApproxResult res;
  if (a.method == "thinformer") {
    res = thinformer(p, a.g, stream, &r.counters, !a.no_error);
  } else {
    validate_compress_size(p.size(), a.g);
    const std::size_t n_out = (std::size_t{1} << a.g) * (std::size_t{1} << log4_exact(p.size()));
    res = uniform_attention(p, n_out, stream, !a.no_error);
  }
  r.wall_ns = elapsed_ns(start);
  r.outputs["n"] = p.size();
  r.outputs["n_out"] = res.selected.size();
  r.outputs["selected"] = res.selected.indices;
  if (res.max_err) r.outputs["max_err"] = *res.max_err;
  if (a.emit_output) r.outputs["T_hat"] = to_json(res.T_hat);
}

// ---------------------------------------------------------------- reorder-sim

struct ReorderArgs {
  std::string loss = "ls", ordering = "lkh", features, targets, format = "auto";
  std::size_t epochs = 20, n = 256, d = 16, batch = 1;
  double alpha = 0.01, l2 = 0.0, condition = 10.0, noise = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 0;
};

void run_reorder(const ReorderArgs& a, const CLI::App& sub, Report& r) {
  SgdProblem p;
  p.loss = a.loss == "ls" ? LossKind::least_squares : LossKind::logistic;
  p.step_size = a.alpha;
  p.epochs = a.epochs;
  p.l2 = a.l2;
  p.batch_size = a.batch;
  if (sub.count("--features") > 0) {
    if (sub.count("--targets") == 0) throw UsageError("--features requires --targets");
    p.features = load(a.features, a.format).matrix();
    const PointSet t = load(a.targets, a.format);
    if (t.dim() != 1) throw std::invalid_argument("targets file must have one column");
    p.targets = t.matrix().col(0);
  } else {
    const std::uint64_t ds = sub.count("--data-seed") > 0 ? a.data_seed : a.seed;
    r.extra_config["data_seed"] = ds;
    RandomStream data(ds, 0x5eed);
    const synth::Regression reg = p.loss == LossKind::least_squares
                                      ? synth::least_squares_problem(a.n, a.d, a.condition,
                                                                     a.noise, data)
                                      : synth::logistic_problem(a.n, a.d, data);
    p.features = reg.features;
    p.targets = reg.targets;
  }
  r.seed = a.seed;
  const auto start = Clock::now();
  const SgdTrajectory t =
      run_sgd(p, a.ordering == "rr" ? Ordering::random_reshuffle : Ordering::lkh_reorder, a.seed);
  r.wall_ns = elapsed_ns(start);
  r.outputs["n"] = static_cast<std::size_t>(p.features.rows());
  r.outputs["d"] = static_cast<std::size_t>(p.features.cols());
  r.outputs["losses"] = t.losses;
  r.outputs["eps_ranks"] = t.eps_ranks;
  r.outputs["eps_values"] = t.eps_values;
  r.outputs["diverged"] = t.diverged;
  const std::size_t dd = static_cast<std::size_t>(p.features.cols());
  r.counters.flops += 4ull * a.epochs * static_cast<std::uint64_t>(p.features.rows()) * dd;
}

// ---------------------------------------------------------------- ctt

struct CttArgs {
  std::string x, y, x_embed, y_embed, format = "auto", kernel = "gaussian:eta=1";
  CttConfig cfg;
  std::size_t subsample = 0;
};

void run_ctt(const CttArgs& a, const CLI::App& sub, Report& r) {
  PointSet X = load(a.x, a.format);
  PointSet Y = load(a.y, a.format);
  KernelSpec kernel = resolve_kernel(a.kernel, vconcat(X, Y), r);
  const bool has_embed = sub.count("--x-embed") > 0 || sub.count("--y-embed") > 0;
  if (has_embed) {
    if (sub.count("--x-embed") == 0 || sub.count("--y-embed") == 0) {
      throw UsageError("--x-embed and --y-embed must be given together");
    }
    auto* deep = std::get_if<DeepKernel>(&kernel);
    if (deep == nullptr) throw UsageError("embedding files require a deep kernel");
    deep->input_dim = X.dim();
    X = hconcat(X, load(a.x_embed, a.format));
    Y = hconcat(Y, load(a.y_embed, a.format));
  } else if (std::holds_alternative<DeepKernel>(kernel)) {
    throw UsageError("a deep kernel requires --x-embed and --y-embed");
  }
  r.seed = a.cfg.seed;
  TestOutcome out;
  if (a.subsample > 0) {
    out = subsample_mmd_test(X, Y, kernel, a.subsample, a.cfg.B, a.cfg.alpha, a.cfg.seed,
                             &r.counters);
  } else {
    out = ctt_test(X, Y, kernel, a.cfg, &r.counters);
  }
  r.wall_ns = out.runtime_ns;
  r.outputs["m"] = X.size();
  r.outputs["n"] = Y.size();
  if (a.subsample == 0) {
    const CttLayout layout = ctt_layout(X.size(), Y.size(), a.cfg.s, a.cfg.g);
    r.outputs["layout"] = {{"s_m", layout.s_m},
                           {"s_n", layout.s_n},
                           {"bin_size", layout.bin_size},
                           {"n_out", layout.n_out}};
  }
  r.outputs["statistic"] = out.statistic;
  r.outputs["permuted"] = out.permuted;
  r.outputs["rank"] = out.rank;
  r.outputs["reject_prob"] = out.reject_prob;
  r.outputs["rejected"] = out.rejected;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string algo = "khc", kernel = "gaussian:eta=1";
  std::size_t n = 1024, d = 2, n_out = 0, repeats = 3;
  unsigned g = 0;
  double delta = 0.5;
  std::uint64_t seed = 0;
};

void run_bench(const BenchArgs& a, const CLI::App& sub, Report& r) {
  ThinConfig cfg;
  cfg.algorithm = parse_algorithm(a.algo);
  cfg.delta = a.delta;
  if (is_compress(cfg.algorithm)) {
    cfg.g = a.g;
  } else {
    cfg.n_out = sub.count("--nout") > 0 ? a.n_out : a.n / 2;
  }
  cfg.validate();
  if (a.repeats == 0) throw UsageError("--repeats must be positive");
  r.seed = a.seed;
  const KernelSpec kernel = parse_kernel(a.kernel);
  Json runs = Json::array();
  std::vector<std::uint64_t> times;
  const auto total = Clock::now();
  for (std::size_t rep = 0; rep < a.repeats; ++rep) {
    RandomStream data(a.seed, 0xda7a + rep);
    const PointSet points(synth::uniform_cube(a.n, a.d, data));
    cfg.seed = a.seed + rep;
    WorkCounters c;
    const auto start = Clock::now();
    const Coreset out = thin(points, kernel, cfg, &c);
    const std::uint64_t ns = elapsed_ns(start);
    times.push_back(ns);
    r.counters.kernel_evals += c.kernel_evals;
    r.counters.flops += c.flops;
    runs.push_back({{"wall_ns", ns}, {"kernel_evals", c.kernel_evals}, {"n_out", out.size()}});
  }
  r.wall_ns = elapsed_ns(total);
  std::sort(times.begin(), times.end());
  r.outputs["runs"] = std::move(runs);
  r.outputs["median_wall_ns"] = times[times.size() / 2];
}

// ---------------------------------------------------------------- validate prop21

struct Prop21Args {
  std::size_t n = 256, n_out = 64, draws = 20000, d = 2;
  double eta = 1.0, tol = 0.02;
  std::uint64_t seed = 0;
};

void run_prop21(const Prop21Args& a, Report& r) {
  if (a.n_out == 0 || a.n_out > a.n || a.n < 2) throw UsageError("need 0 < nout <= n, n >= 2");
  if (a.draws == 0) throw UsageError("--draws must be positive");
  r.seed = a.seed;
  const auto start = Clock::now();
  RandomStream data(a.seed, 1);
  const PointSet points(synth::uniform_cube(a.n, a.d, data));
  const Matrix K = kernel_matrix(GaussianKernel{a.eta}, points);
  r.counters.kernel_evals += static_cast<std::uint64_t>(K.size());
  const double expected = uniform_mmd2_expectation(K, a.n_out);
  const auto oracle = std::make_shared<const Matrix>(K);
  const KernelOracle kor(oracle);
  const IndexList all = iota_indices(a.n);
  RandomStream draws(a.seed, 2);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < a.draws; ++t) {
    const IndexList pick = thin_uniform(all, a.n_out, draws);
    const double m = mmd_to_coreset(kor, all, pick);
    sum += m * m;
    sum_sq += m * m * m * m;
  }
  const double dn = static_cast<double>(a.draws);
  const double mean = sum / dn;
  const double var = std::max(0.0, sum_sq / dn - mean * mean);
  const double rel = std::abs(mean - expected) / expected;
  r.wall_ns = elapsed_ns(start);
  r.outputs["expected_mmd2"] = expected;
  r.outputs["empirical_mmd2"] = mean;
  r.outputs["standard_error"] = std::sqrt(var / dn);
  r.outputs["relative_error"] = rel;
  r.outputs["tolerance"] = a.tol;
  r.outputs["pass"] = rel <= a.tol;
  r.exit_code = rel <= a.tol ? 0 : 1;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "lrt";
  for (const auto& a : args) s += " " + a;
  return s;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-rank thinning: distribution compression and its applications", "lrt"};
  app.require_subcommand(1);

  ThinArgs thin_a;
  auto* thin_cmd = app.add_subcommand("thin", "thin a point set to a coreset");
  add_thin_options(thin_cmd, thin_a);

  CoresetArgs mmd_a;
  auto* mmd_cmd = app.add_subcommand("mmd", "MMD between a point set and a coreset");
  add_coreset_options(mmd_cmd, mmd_a, false);

  CoresetArgs kms_a;
  auto* kms_cmd = app.add_subcommand("kms", "kernel max seminorm of a coreset");
  add_coreset_options(kms_cmd, kms_a, true);

  SpectrumArgs spec_a;
  auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of the kernel matrix");
  spec_cmd->add_option("--input", spec_a.input, "point file")->required();
  spec_cmd->add_option("--format", spec_a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  spec_cmd->add_option("--kernel", spec_a.kernel, "kernel spec")->capture_default_str();
  spec_cmd->add_option("--top", spec_a.top, "report only the largest k (0: all)")
      ->capture_default_str();

  EpsRankArgs eps_a;
  auto* eps_cmd = app.add_subcommand("epsrank", "eps-rank of a matrix");
  eps_cmd->add_option("--input", eps_a.input, "matrix file")->required();
  eps_cmd->add_option("--format", eps_a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  eps_cmd->add_option("--eps", eps_a.eps, "thresholds")->capture_default_str();

  AttnArgs attn_a;
  auto* attn_cmd = app.add_subcommand("attn", "approximate softmax attention");
  attn_cmd->add_option("--queries", attn_a.queries, "Q file")->required();
  attn_cmd->add_option("--keys", attn_a.keys, "K file")->required();
  attn_cmd->add_option("--values", attn_a.values, "V file")->required();
  attn_cmd->add_option("--format", attn_a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  attn_cmd->add_option("--g", attn_a.g, "compression level")->required();
  attn_cmd->add_option("--seed", attn_a.seed, "random seed")->capture_default_str();
  attn_cmd->add_option("--method", attn_a.method, "thinformer|uniform")
      ->capture_default_str()
      ->check(CLI::IsMember({"thinformer", "uniform"}));
  attn_cmd->add_option("--pad", attn_a.pad, "none|truncate")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "truncate"}));
  attn_cmd->add_flag("--no-error", attn_a.no_error, "skip the exact-attention error");
  attn_cmd->add_flag("!--no-output", attn_a.emit_output, "omit T_hat from the report");

  ReorderArgs re_a;
  auto* re_cmd = app.add_subcommand("reorder-sim", "SGD with random or LKH reordering");
  re_cmd->add_option("--loss", re_a.loss, "ls|logistic")
      ->capture_default_str()
      ->check(CLI::IsMember({"ls", "logistic"}));
  re_cmd->add_option("--ordering", re_a.ordering, "rr|lkh")
      ->capture_default_str()
      ->check(CLI::IsMember({"rr", "lkh"}));
  re_cmd->add_option("--epochs", re_a.epochs, "number of epochs")->capture_default_str();
  re_cmd->add_option("--alpha", re_a.alpha, "step size")->capture_default_str();
  re_cmd->add_option("--l2", re_a.l2, "l2 regularization")->capture_default_str();
  re_cmd->add_option("--batch", re_a.batch, "batch size")->capture_default_str();
  re_cmd->add_option("--seed", re_a.seed, "ordering seed")->capture_default_str();
  re_cmd->add_option("--data-seed", re_a.data_seed, "synthetic data seed (default: --seed)");
  re_cmd->add_option("--n", re_a.n, "synthetic examples")->capture_default_str();
  re_cmd->add_option("--d", re_a.d, "synthetic features")->capture_default_str();
  re_cmd->add_option("--condition", re_a.condition, "synthetic condition number")
      ->capture_default_str();
  re_cmd->add_option("--noise", re_a.noise, "synthetic target noise")->capture_default_str();
  re_cmd->add_option("--features", re_a.features, "feature file instead of synthetic data");
  re_cmd->add_option("--targets", re_a.targets, "one-column target file");
  re_cmd->add_option("--format", re_a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));

  CttArgs ctt_a;
  auto* ctt_cmd = app.add_subcommand("ctt", "Compress Then Test two-sample test");
  ctt_cmd->add_option("--x", ctt_a.x, "first sample")->required();
  ctt_cmd->add_option("--y", ctt_a.y, "second sample")->required();
  ctt_cmd->add_option("--x-embed", ctt_a.x_embed, "embedding of the first sample");
  ctt_cmd->add_option("--y-embed", ctt_a.y_embed, "embedding of the second sample");
  ctt_cmd->add_option("--format", ctt_a.format, "auto|csv|f64le")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "csv", "f64le"}));
  ctt_cmd->add_option("--kernel", ctt_a.kernel, "kernel spec")->capture_default_str();
  ctt_cmd->add_option("--s", ctt_a.cfg.s, "number of coresets")->capture_default_str();
  ctt_cmd->add_option("--g", ctt_a.cfg.g, "compression level")->capture_default_str();
  ctt_cmd->add_option("--B", ctt_a.cfg.B, "permutations")->capture_default_str();
  ctt_cmd->add_option("--alpha", ctt_a.cfg.alpha, "level")->capture_default_str();
  ctt_cmd->add_option("--delta", ctt_a.cfg.delta, "failure probability")->capture_default_str();
  ctt_cmd->add_option("--seed", ctt_a.cfg.seed, "random seed")->capture_default_str();
  ctt_cmd->add_flag("--shuffle", ctt_a.cfg.shuffle, "pre-shuffle each sample before binning");
  ctt_cmd->add_option("--subsample", ctt_a.subsample,
                      "run the subsampling baseline with this many points per sample");

  BenchArgs bench_a;
  auto* bench_cmd = app.add_subcommand("bench", "time a thinning algorithm on synthetic data");
  bench_cmd->add_option("--algo", bench_a.algo, "thinning algorithm")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "kh", "lkh", "rkh", "khc", "ktc", "gs", "gsc"}));
  bench_cmd->add_option("--n", bench_a.n, "input size")->capture_default_str();
  bench_cmd->add_option("--d", bench_a.d, "dimension")->capture_default_str();
  bench_cmd->add_option("--nout", bench_a.n_out, "output size");
  bench_cmd->add_option("--g", bench_a.g, "compression level")->capture_default_str();
  bench_cmd->add_option("--delta", bench_a.delta, "failure probability")->capture_default_str();
  bench_cmd->add_option("--kernel", bench_a.kernel, "kernel spec")->capture_default_str();
  bench_cmd->add_option("--repeats", bench_a.repeats, "repetitions")->capture_default_str();
  bench_cmd->add_option("--seed", bench_a.seed, "random seed")->capture_default_str();

  auto* val_cmd = app.add_subcommand("validate", "built-in statistical self-checks");
  val_cmd->require_subcommand(1);
  Prop21Args p21_a;
  auto* p21_cmd =
      val_cmd->add_subcommand("prop21", "uniform-subsampling MMD^2 expectation vs Monte Carlo");
  p21_cmd->add_option("--n", p21_a.n, "input size")->capture_default_str();
  p21_cmd->add_option("--nout", p21_a.n_out, "subsample size")->capture_default_str();
  p21_cmd->add_option("--d", p21_a.d, "dimension")->capture_default_str();
  p21_cmd->add_option("--draws", p21_a.draws, "Monte Carlo draws")->capture_default_str();
  p21_cmd->add_option("--eta", p21_a.eta, "gaussian bandwidth")->capture_default_str();
  p21_cmd->add_option("--tol", p21_a.tol, "relative tolerance")->capture_default_str();
  p21_cmd->add_option("--seed", p21_a.seed, "random seed")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* leaf = app.get_subcommands().front();
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  std::string name = leaf->get_name();
  if (leaf->get_parent() != &app) name = leaf->get_parent()->get_name() + " " + name;

  Report report;
  try {
    if (leaf == thin_cmd) run_thin(thin_a, *thin_cmd, report, err);
    else if (leaf == mmd_cmd) run_mmd(mmd_a, *mmd_cmd, report);
    else if (leaf == kms_cmd) run_kms(kms_a, *kms_cmd, report);
    else if (leaf == spec_cmd) run_spectrum(spec_a, report);
    else if (leaf == eps_cmd) run_epsrank(eps_a, report);
    else if (leaf == attn_cmd) run_attn(attn_a, report, err);
    else if (leaf == re_cmd) run_reorder(re_a, *re_cmd, report);
    else if (leaf == ctt_cmd) run_ctt(ctt_a, *ctt_cmd, report);
    else if (leaf == bench_cmd) run_bench(bench_a, *bench_cmd, report);
    else if (leaf == p21_cmd) run_prop21(p21_a, report);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << leaf->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  Json config = config_of(*leaf);
  for (auto& [k, v] : report.extra_config.items()) config[k] = v;
  config["threads"] = worker_count();
  Json j;
  j["command"] = join_args(args);
  j["subcommand"] = name;
  j["config"] = std::move(config);
  j["seed"] = report.seed;
  j["outputs"] = std::move(report.outputs);
  j["counters"] = {{"kernel_evals", report.counters.kernel_evals},
                   {"flops_estimate", report.counters.flops}};
  j["wall_ns"] = report.wall_ns;
  out << j.dump(2) << "\n";
  return report.exit_code;
}

}  // namespace lrt::cli
