#include "loclab/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "loclab/localiser.hpp"
#include "loclab/models.hpp"
#include "loclab/pairing.hpp"
#include "loclab/semifinite.hpp"

namespace loclab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) invalid("unknown key '" + key + "' in " + where);
}

double get_number(const json& j, const std::string& key) {
  const json& x = j.at(key);
  if (!x.is_number()) invalid("'" + key + "' must be a number");
  double v = x.get<double>();
  if (!std::isfinite(v)) invalid("'" + key + "' must be finite");
  return v;
}

Index get_integer(const json& x, const std::string& key) {
  if (!x.is_number_integer()) invalid("'" + key + "' must be an integer");
  return x.get<Index>();
}

std::vector<double> get_grid(const json& j, const std::string& key) {
  const json& x = j.at(key);
  if (!x.is_array()) invalid("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : x) {
    if (!e.is_number()) invalid("'" + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  reject_unknown(j, "config", {"schema_version", "command", "regime", "model", "parameters", "output"});
  ExperimentConfig cfg;
  if (!j.contains("schema_version")) invalid("missing schema_version");
  cfg.schema_version = static_cast<int>(get_integer(j.at("schema_version"), "schema_version"));
  if (cfg.schema_version != kSchemaVersion)
    invalid("unsupported schema_version " + std::to_string(cfg.schema_version));
  if (!j.contains("command") || !j.at("command").is_string()) invalid("missing command");
  cfg.command = j.at("command").get<std::string>();
  static const std::set<std::string> commands{"index", "sweep", "bounds", "semifinite", "asymptotic"};
  if (!commands.count(cfg.command)) invalid("unknown command '" + cfg.command + "'");
  if (j.contains("regime")) {
    if (!j.at("regime").is_string()) invalid("regime must be a string");
    cfg.regime = j.at("regime").get<std::string>();
  }
  if (cfg.regime != "empirical" && cfg.regime != "theorem") invalid("regime must be empirical or theorem");

  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, "model", {"N", "windings", "weights"});
    if (m.contains("N")) {
      cfg.N = get_integer(m.at("N"), "N");
      if (*cfg.N < 1) invalid("N must be positive");
    }
    if (m.contains("windings")) {
      if (!m.at("windings").is_array()) invalid("windings must be an array of integers");
      for (const auto& w : m.at("windings")) cfg.windings.push_back(get_integer(w, "windings"));
    }
    if (m.contains("weights")) {
      cfg.weights = get_grid(m, "weights");
      for (double w : cfg.weights)
        if (!(w > 0.0) || !std::isfinite(w)) invalid("weights must be finite and positive");
    }
  }
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    reject_unknown(p, "parameters",
                   {"eps", "delta", "t", "lambda", "t_grid", "s_grid", "kappa_grid", "lambda_grid", "samples", "seed"});
    auto positive = [&](const char* key, std::optional<double>& out) {
      if (!p.contains(key)) return;
      out = get_number(p, key);
      if (!(*out > 0.0)) invalid(std::string(key) + " must be positive");
    };
    positive("eps", cfg.eps);
    positive("delta", cfg.delta);
    positive("t", cfg.t);
    positive("lambda", cfg.lambda);
    if (cfg.t && *cfg.t < 1.0) invalid("t must be >= 1");
    if (p.contains("t_grid")) cfg.t_grid = get_grid(p, "t_grid");
    if (p.contains("s_grid")) cfg.s_grid = get_grid(p, "s_grid");
    if (p.contains("kappa_grid")) cfg.kappa_grid = get_grid(p, "kappa_grid");
    if (p.contains("lambda_grid")) cfg.lambda_grid = get_grid(p, "lambda_grid");
    for (double t : cfg.t_grid)
      if (!(t >= 1.0)) invalid("t_grid entries must be >= 1");
    for (double s : cfg.s_grid)
      if (!(s >= 0.0 && s < 1.0)) invalid("s_grid entries must lie in [0, 1)");
    for (double x : cfg.kappa_grid)
      if (!(x > 0.0)) invalid("kappa_grid entries must be positive");
    for (double x : cfg.lambda_grid)
      if (!(x > 0.0)) invalid("lambda_grid entries must be positive");
    if (p.contains("samples")) {
      cfg.samples = static_cast<int>(get_integer(p.at("samples"), "samples"));
      if (*cfg.samples < 1) invalid("samples must be positive");
    }
    if (p.contains("seed")) {
      if (!p.at("seed").is_number_unsigned()) invalid("seed must be a non-negative integer");
      cfg.seed = p.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, "output", {"dir"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) invalid("output.dir must be a string");
      cfg.out_dir = o.at("dir").get<std::string>();
    }
  }
  if (cfg.command == "semifinite") {
    if (cfg.weights.empty() || cfg.weights.size() != cfg.windings.size())
      invalid("semifinite needs model.weights and model.windings of equal, non-zero length");
  } else if (!cfg.weights.empty()) {
    invalid("model.weights is only meaningful for semifinite");
  }
  if (cfg.command == "sweep" && (cfg.kappa_grid.empty() || cfg.lambda_grid.empty()))
    invalid("sweep needs parameters.kappa_grid and parameters.lambda_grid");
  if (cfg.command == "asymptotic" && !cfg.t_grid.empty()) {
    if (cfg.t_grid.size() < 2) invalid("asymptotic t_grid needs at least two points");
    for (std::size_t i = 1; i < cfg.t_grid.size(); ++i)
      if (!(cfg.t_grid[i] > cfg.t_grid[i - 1])) invalid("asymptotic t_grid must be ascending");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["command"] = cfg.command;
  j["regime"] = cfg.regime;
  json model = json::object();
  if (cfg.N) model["N"] = *cfg.N;
  if (!cfg.windings.empty()) model["windings"] = cfg.windings;
  if (!cfg.weights.empty()) model["weights"] = cfg.weights;
  if (!model.empty()) j["model"] = model;
  json p = json::object();
  if (cfg.eps) p["eps"] = *cfg.eps;
  if (cfg.delta) p["delta"] = *cfg.delta;
  if (cfg.t) p["t"] = *cfg.t;
  if (cfg.lambda) p["lambda"] = *cfg.lambda;
  if (!cfg.t_grid.empty()) p["t_grid"] = cfg.t_grid;
  if (!cfg.s_grid.empty()) p["s_grid"] = cfg.s_grid;
  if (!cfg.kappa_grid.empty()) p["kappa_grid"] = cfg.kappa_grid;
  if (!cfg.lambda_grid.empty()) p["lambda_grid"] = cfg.lambda_grid;
  if (cfg.samples) p["samples"] = *cfg.samples;
  if (cfg.seed) p["seed"] = *cfg.seed;
  if (!p.empty()) j["parameters"] = p;
  if (cfg.out_dir) j["output"] = json{{"dir", *cfg.out_dir}};
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int resolve_threads(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("LOCALISER_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

bool RunReport::all_pass() const {
  if (error) return false;
  for (const auto& c : certificates)
    if (c.asserted && !c.pass) return false;
  return true;
}

std::string RunReport::csv() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

json RunReport::certificates_json(const ExperimentConfig& cfg) const {
  json j;
  j["toolkit_version"] = kToolkitVersion;
  j["command"] = command;
  j["config"] = to_json(cfg);
  json certs = json::array();
  for (const auto& c : certificates)
    certs.push_back({{"name", c.name},
                     {"item", c.item},
                     {"lhs", c.lhs},
                     {"relation", c.relation},
                     {"rhs", c.rhs},
                     {"pass", c.pass},
                     {"asserted", c.asserted}});
  j["certificates"] = certs;
  j["details"] = details;
  j["notes"] = notes;
  j["all_pass"] = all_pass();
  j["seconds"] = seconds;
  if (error) j["error"] = *error;
  return j;
}

int exit_code(const RunReport& report) { return report.all_pass() ? 0 : 1; }

void write_outputs(const RunReport& report, const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "report.csv", std::ios::binary);
  csv << report.csv();
  std::ofstream cj(dir / "certificates.json", std::ios::binary);
  cj << report.certificates_json(cfg).dump(2) << "\n";
}

namespace {

/// Runs body(i) for i in [0, count) on a pool; the first exception is rethrown
/// after all workers stop. Results are written by index, so order never depends on the pool.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(Index x) { return std::to_string(x); }
std::string fmt(bool b) { return b ? "true" : "false"; }

Certificate cert(std::string name, std::string item, double lhs, std::string rel, double rhs, bool pass,
                 bool asserted = true) {
  return {std::move(name), std::move(item), lhs, std::move(rel), rhs, pass, asserted};
}

bool theorem(const ExperimentConfig& cfg) { return cfg.regime == "theorem"; }

std::vector<Index> windings_or(const ExperimentConfig& cfg, std::vector<Index> fallback) {
  return cfg.windings.empty() ? fallback : cfg.windings;
}

/// Theorem-regime guard leaves room for the high-mode window of the certificates.
Index auto_truncation(const ExperimentConfig& cfg, double lambda, Index k) {
  Index guard = theorem(cfg) ? 2048 : 64;
  return static_cast<Index>(std::ceil(lambda)) + std::abs(k) + 1 + guard;
}

Index oracle_truncation(Index k) { return std::max<Index>(64, 2 * std::abs(k) + 8); }

struct Snap {
  double requested;
  double used;
  bool snapped;
};

Snap snap_lambda(double requested) {
  if (requested - std::floor(requested) == 0.5) return {requested, requested, false};
  return {requested, snap_half_integer(requested), true};
}

void note_snap(RunReport& rep, const std::string& item, const Snap& s) {
  if (!s.snapped) return;
  std::ostringstream os;
  os << item << ": lambda snapped from " << format_double(s.requested) << " to " << format_double(s.used);
  rep.notes.push_back(os.str());
}

// ---------------------------------------------------------------- index

struct IndexOutcome {
  std::vector<std::string> row;
  std::vector<Certificate> certs;
  std::optional<Snap> snap;
  json detail;
};

IndexOutcome index_point(const ExperimentConfig& cfg, Index k) {
  const bool thm = theorem(cfg);
  const double eps = cfg.eps.value_or(thm ? 0.00124 : 0.1);
  const double delta = cfg.delta.value_or(thm ? 0.00124 : 0.1);
  const double comm = static_cast<double>(std::abs(k));
  ThresholdReport thr0 = thresholds(eps, delta, comm);
  const double t = cfg.t.value_or(std::max(1.0, 1.01 * thr0.t_min));
  Snap snap = snap_lambda(cfg.lambda.value_or(1.01 * t / delta));
  const Index N = cfg.N.value_or(auto_truncation(cfg, snap.used, k));
  const std::string item = "k=" + std::to_string(k);

  IndexOutcome out;
  out.snap = snap;
  SpectralTriple model = circle_model(N, k);
  FredholmWitness w = fredholm_index_oracle(N <= 1024 ? model : circle_model(oracle_truncation(k), k));

  HalfSignatureOptions opts;
  opts.t = t;
  opts.lambda = snap.used;
  opts.certify = thm;
  opts.reduction = thm;
  opts.norm_rel_tol = thm ? 1e-6 : 1e-10;
  HalfSignatureResult r = half_signature_index(model, eps, delta, opts);

  bool match = r.index == w.index;
  out.certs.push_back(cert("half_signature_equals_oracle", item, static_cast<double>(r.index), "==",
                           static_cast<double>(w.index), match));
  out.certs.push_back(cert("oracle_chopping_invariance", item, static_cast<double>(w.index), "==",
                           static_cast<double>(w.alternate_index), w.index == w.alternate_index));

  std::string cong_sig, cong_res, cong_eq;
  if (!thm) {
    AsymptoticFrame frame = build_frame(model, t);
    SpectralDecomposition sd = spectral_decompose(model, snap.used);
    Localiser loc = build_localiser(model, 1.0 / t, snap.used);
    CongruenceResult cc = congruence_check(model, frame, sd, loc);
    out.certs.push_back(cert("congruence_signature", item, static_cast<double>(cc.sig_2p_minus_1), "==",
                             static_cast<double>(cc.sig_L), cc.equal));
    out.certs.push_back(cert("congruence_residual", item, cc.residual, "<=", 1e-9 * cc.norm_L, cc.residual_ok));
    cong_sig = fmt(cc.sig_2p_minus_1);
    cong_res = fmt(cc.residual);
    cong_eq = fmt(cc.equal);
  }

  std::string off_lhs, off_bound, off_pass, red_pass;
  if (thm) {
    out.certs.push_back(cert("window", item, eps + delta, "<", 0.0025, r.thresholds.window_ok));
    out.certs.push_back(cert("t_threshold", item, t, ">", r.thresholds.t_min, t > r.thresholds.t_min));
    out.certs.push_back(
        cert("lambda_threshold", item, r.lambda, ">", r.thresholds.lambda_min, r.lambda > r.thresholds.lambda_min));
    out.certs.push_back(cert("bandwidth", item, static_cast<double>(r.bandwidth), "<=", 4.0, r.bandwidth <= 4));
    const auto& oc = *r.offdiagonal;
    out.certs.push_back(cert("offdiagonal_certificate", item, oc.lhs, "<=", oc.bound, oc.pass));
    out.certs.push_back(cert("offdiagonal_unhalved", item, oc.lhs, "<=", oc.unhalved_bound, oc.pass_unhalved, false));
    out.certs.push_back(cert("offdiagonal_delta", item, oc.lhs, "<=", delta, oc.lhs <= delta, false));
    const auto& dr = *r.reduction;
    out.certs.push_back(cert("reduction_e_defect", item, dr.e_defect, "<", eps, dr.e_defect < eps));
    out.certs.push_back(cert("reduction_q_window", item, dr.eps_q, "<", 0.0025 - eps, dr.eps_q < 0.0025 - eps));
    out.certs.push_back(cert("reduction_p_defect", item, dr.p_defect, "<=", dr.p_bound, dr.p_defect <= dr.p_bound + 1e-10));
    out.certs.push_back(cert("reduction_m_norm_squared", item, dr.m_norm * dr.m_norm, "<=", dr.m_bound,
                             dr.m_norm * dr.m_norm <= dr.m_bound + 1e-10));
    out.certs.push_back(cert("reduction_path_defect", item, dr.path_worst, "<", 0.25, dr.path_worst < 0.25));
    off_lhs = fmt(oc.lhs);
    off_bound = fmt(oc.bound);
    off_pass = fmt(oc.pass);
    red_pass = fmt(dr.pass);
    out.detail["reduction"] = {{"e_defect", dr.e_defect}, {"p_defect", dr.p_defect}, {"q_defect", dr.q_defect},
                               {"m_norm", dr.m_norm},     {"path_worst", dr.path_worst}, {"eps", dr.eps},
                               {"eps_q", dr.eps_q}};
    out.detail["thresholds"] = {{"t_min", r.thresholds.t_min}, {"lambda_min", r.thresholds.lambda_min}};
  }
  out.detail["k"] = k;
  out.detail["N"] = N;
  out.detail["dim"] = r.dim;
  out.detail["gap"] = r.sig.gap;
  out.detail["regularized"] = r.sig.regularized;
  out.detail["oracle"] = {{"dim_ker", w.dim_ker}, {"dim_coker", w.dim_coker}, {"zero_sv", w.zero_sv},
                          {"gap_sv", w.gap_sv}};

  out.row = {"index",        cfg.regime,   fmt(k),         fmt(N),        fmt(t),         fmt(r.lambda),
             fmt(snap.snapped), fmt(eps),  fmt(delta),     fmt(r.dim),    fmt(r.bandwidth), fmt(r.sig.n_pos),
             fmt(r.sig.n_neg), fmt(r.sig.sig), fmt(r.index), fmt(w.index), fmt(match),     fmt(r.sig.gap),
             cong_sig,     cong_res,     cong_eq,        off_lhs,       off_bound,      off_pass,
             red_pass};
  return out;
}

void run_index(const ExperimentConfig& cfg, int threads, RunReport& rep) {
  rep.header = {"command", "regime", "k", "N", "t", "lambda", "lambda_snapped", "eps", "delta", "dim", "bandwidth",
                "n_pos", "n_neg", "signature", "half_signature", "oracle_index", "match", "gap",
                "congruence_sig_2p_minus_1", "congruence_residual", "congruence_equal", "offdiag_lhs",
                "offdiag_bound", "offdiag_pass", "reduction_pass"};
  std::vector<Index> ks = windings_or(cfg, {1});
  std::vector<std::optional<IndexOutcome>> outs(ks.size());
  // Theorem-scale points each hold ~1 GB; run them one at a time.
  int pool = theorem(cfg) ? 1 : threads;
  std::exception_ptr failure;
  try {
    parallel_for(ks.size(), pool, [&](std::size_t i) { outs[i] = index_point(cfg, ks[i]); });
  } catch (...) {
    failure = std::current_exception();
  }
  json points = json::array();
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (!outs[i]) continue;
    rep.rows.push_back(outs[i]->row);
    for (auto& c : outs[i]->certs) rep.certificates.push_back(c);
    if (outs[i]->snap) note_snap(rep, "k=" + std::to_string(ks[i]), *outs[i]->snap);
    points.push_back(outs[i]->detail);
  }
  rep.details["points"] = points;
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------- sweep

void run_sweep(const ExperimentConfig& cfg, int threads, RunReport& rep) {
  rep.header = {"command", "k", "N", "kappa", "lambda", "lambda_snapped", "dim", "signature", "half_signature",
                "oracle_index", "match", "gap", "status"};
  std::vector<Index> ks = windings_or(cfg, {1});
  std::vector<Snap> lambdas;
  double lambda_max = 0.0;
  for (double l : cfg.lambda_grid) {
    lambdas.push_back(snap_lambda(l));
    lambda_max = std::max(lambda_max, lambdas.back().used);
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) note_snap(rep, "lambda_grid[" + std::to_string(i) + "]", lambdas[i]);

  struct Point {
    Index k;
    double kappa;
    std::size_t li;
  };
  std::vector<Point> pts;
  for (Index k : ks)
    for (std::size_t li = 0; li < lambdas.size(); ++li)
      for (double kappa : cfg.kappa_grid) pts.push_back({k, kappa, li});

  std::vector<SpectralTriple> models;
  std::vector<Index> oracle;
  for (Index k : ks) {
    Index N = cfg.N.value_or(static_cast<Index>(std::ceil(lambda_max)) + std::abs(k) + 17);
    models.push_back(circle_model(N, k));
    oracle.push_back(fredholm_index_oracle(N <= 1024 ? models.back() : circle_model(oracle_truncation(k), k)).index);
  }
  std::vector<std::vector<std::string>> rows(pts.size());
  std::vector<char> matched(pts.size(), 0);
  parallel_for(pts.size(), threads, [&](std::size_t p) {
    const Point& pt = pts[p];
    std::size_t ki = static_cast<std::size_t>(std::find(ks.begin(), ks.end(), pt.k) - ks.begin());
    const SpectralTriple& model = models[ki];
    const Snap& lam = lambdas[pt.li];
    std::string status = "ok", sig, half, gap, match = "false", dim;
    if (!edge_guard(model.N, lam.used, pt.k)) {
      status = "edge_guard";
    } else {
      Localiser loc = build_localiser(model, pt.kappa, lam.used);
      dim = fmt(loc.dim());
      try {
        SignatureResult s = signature(loc);
        sig = fmt(s.sig);
        gap = fmt(s.gap);
        if (s.sig % 2 != 0) {
          status = "odd";
        } else {
          half = fmt(s.sig / 2);
          matched[p] = s.sig / 2 == oracle[ki];
          match = fmt(static_cast<bool>(matched[p]));
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) throw;
        status = "singular";
      }
    }
    rows[p] = {"sweep", fmt(pt.k), fmt(model.N), fmt(pt.kappa), fmt(lam.used), fmt(lam.snapped), dim, sig, half,
               fmt(oracle[ki]), match, gap, status};
  });
  rep.rows = rows;

  json region = json::array();
  for (std::size_t ki = 0; ki < ks.size(); ++ki)
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      std::vector<double> good;
      for (std::size_t p = 0; p < pts.size(); ++p)
        if (pts[p].k == ks[ki] && pts[p].li == li && matched[p]) good.push_back(pts[p].kappa);
      json entry = {{"k", ks[ki]}, {"lambda", lambdas[li].used}, {"matching_points", good.size()}};
      if (!good.empty()) {
        entry["kappa_min"] = *std::min_element(good.begin(), good.end());
        entry["kappa_max"] = *std::max_element(good.begin(), good.end());
      }
      region.push_back(entry);
    }
  rep.details["working_region"] = region;
}

// ---------------------------------------------------------------- bounds

struct BoundsRow {
  Index k;
  double t;
  std::optional<double> s;
  std::string check;
  double lhs, bound;
  bool pass, asserted;
};

void run_bounds(const ExperimentConfig& cfg, int threads, RunReport& rep) {
  rep.header = {"command", "k", "t", "s", "check", "lhs", "bound", "pass", "asserted"};
  std::vector<Index> ks = windings_or(cfg, {1, 2, 3});
  std::vector<double> ts = cfg.t_grid.empty() ? std::vector<double>{1, 2, 5, 10, 100, 1000} : cfg.t_grid;
  std::vector<double> ss = cfg.s_grid.empty() ? std::vector<double>{0, 0.25, 0.5, 0.75} : cfg.s_grid;
  const double homotopy_eps = 0.112;

  std::vector<std::pair<Index, double>> cases;
  for (Index k : ks)
    for (double t : ts) cases.emplace_back(k, t);
  std::vector<std::vector<BoundsRow>> out(cases.size());
  parallel_for(cases.size(), threads, [&](std::size_t c) {
    auto [k, t] = cases[c];
    auto& rows = out[c];
    SpectralTriple exact_model = circle_model(std::abs(k) + 1, k);
    CsCommutatorBound cs = commutator_bound_cs(exact_model, t);
    rows.push_back({k, t, {}, "commutator_c", cs.lhs_c, cs.bound, cs.lhs_c <= cs.bound + 1e-12, true});
    rows.push_back({k, t, {}, "commutator_s", cs.lhs_s, cs.bound, cs.lhs_s <= cs.bound + 1e-12, true});
    LawCheck sq = commutator_bound_sqrt_cs(exact_model, t);
    rows.push_back({k, t, {}, "commutator_sqrt_cs", sq.lhs, sq.bound, sq.pass, false});
    for (double s : ss) {
      if (s > 0.0) {
        LawCheck r = commutator_bound_resolvent(exact_model, t, s);
        rows.push_back({k, t, s, "commutator_resolvent", r.lhs, r.bound, r.pass, true});
      }
      LawCheck f = weighted_F_commutator_bound(exact_model, t, s);
      rows.push_back({k, t, s, "weighted_F", f.lhs, f.bound, f.pass, true});
    }
    SpectralTriple model = circle_model(pairing_truncation(t, k), k);
    PairRepresentative pair = build_pair(build_frame(model, t), model);
    LawCheck dl = defect_law(pair, model);
    rows.push_back({k, t, {}, "defect_law", dl.lhs, dl.bound, dl.pass, true});
    LawCheck ds = distance_law(pair, model);
    rows.push_back({k, t, {}, "distance_law", ds.lhs, ds.bound, ds.pass, true});
    double t_min = 2.0 * kDefaultR * model.comm_norm / homotopy_eps;
    if (t > t_min) {
      PairHomotopy h = pair_homotopy(pair, model);
      rows.push_back({k, t, {}, "homotopy_criterion", h.criterion, 0.25, h.valid, true});
      if (h.worst_defect >= 0.0)
        rows.push_back({k, t, {}, "homotopy_grid_defect", h.worst_defect, 0.25, h.worst_defect < 0.25, true});
    }
  });
  auto emit = [&](const BoundsRow& r) {
    rep.rows.push_back({"bounds", fmt(r.k), fmt(r.t), r.s ? fmt(*r.s) : "", r.check, fmt(r.lhs), fmt(r.bound),
                        fmt(r.pass), fmt(r.asserted)});
    std::ostringstream item;
    item << "k=" << r.k << " t=" << format_double(r.t);
    if (r.s) item << " s=" << format_double(*r.s);
    rep.certificates.push_back(cert(r.check, item.str(), r.lhs, r.check.rfind("homotopy", 0) == 0 ? "<" : "<=",
                                    r.bound, r.pass, r.asserted));
  };
  for (const auto& rows : out)
    for (const auto& r : rows) emit(r);

  double c0 = C_s_constant(0.0), want = 1.0 + 2.0 * std::numbers::pi;
  emit({0, 0.0, 0.0, "C_0", c0, want, std::abs(c0 - want) <= 1e-12, true});
  double ch = C_s_constant(0.5);
  double reflect = std::tgamma(0.25) * std::tgamma(0.75);
  emit({0, 0.0, 0.5, "gamma_reflection_quarter", reflect, std::numbers::pi * std::sqrt(2.0),
        std::abs(reflect - std::numbers::pi * std::sqrt(2.0)) <= 1e-12 * reflect, true});
  rep.details["C_half"] = ch;
  double w = epsilon_window_constant();
  emit({0, 0.0, {}, "epsilon_window_constant", w, 0.1122, std::abs(w - 0.1122) <= 5e-5, true});
  rep.notes.push_back("rows with k=0 and t=0 are constants, not model checks");
}

// ---------------------------------------------------------------- semifinite

void run_semifinite(const ExperimentConfig& cfg, int, RunReport& rep) {
  rep.header = {"command", "component", "weight", "winding", "N", "t", "lambda", "dim", "signature",
                "half_signature", "oracle_index", "weighted_value", "weighted_reference", "pass"};
  const double eps = cfg.eps.value_or(0.1), delta = cfg.delta.value_or(0.1);
  const double t = cfg.t.value_or(20.0);
  Snap snap = snap_lambda(cfg.lambda.value_or(200.5));
  note_snap(rep, "semifinite", snap);
  Index kmax = 0;
  for (Index k : cfg.windings) kmax = std::max(kmax, std::abs(k));
  const Index N = cfg.N.value_or(static_cast<Index>(std::ceil(snap.used)) + kmax + 1 + 64);
  BlockModel bm = block_model(cfg.weights, cfg.windings, N);
  SemifiniteResult sf = semifinite_half_signature(bm, eps, delta, t, snap.used);
  double reference = 0.0;
  for (Index j = 0; j < bm.size(); ++j) {
    const auto& c = bm.components[static_cast<std::size_t>(j)];
    Index orc = fredholm_index_oracle(N <= 1024 ? c.model : circle_model(oracle_truncation(c.winding), c.winding)).index;
    const auto& d = sf.details[static_cast<std::size_t>(j)];
    bool match = d.index == orc;
    reference += c.weight * static_cast<double>(orc);
    rep.rows.push_back({"semifinite", fmt(j), fmt(c.weight), fmt(c.winding), fmt(N), fmt(t), fmt(d.lambda),
                        fmt(d.dim), fmt(d.sig.sig), fmt(d.index), fmt(orc),
                        fmt(c.weight * static_cast<double>(d.index)), fmt(c.weight * static_cast<double>(orc)),
                        fmt(match)});
    rep.certificates.push_back(cert("block_half_signature_equals_oracle", "component=" + std::to_string(j),
                                    static_cast<double>(d.index), "==", static_cast<double>(orc), match));
  }
  bool ok = std::abs(sf.tau_index - reference) <= 1e-9;
  rep.rows.push_back({"semifinite", "tau", "", "", fmt(N), fmt(t), fmt(snap.used), "", "", "", "", fmt(sf.tau_index),
                      fmt(reference), fmt(ok)});
  rep.certificates.push_back(cert("tau_half_signature", "all", sf.tau_index, "==", reference, ok));

  auto samples = transfer_samples(bm, cfg.samples.value_or(8), cfg.seed.value_or(1));
  TransferReport tr = trace_transfer_check(bm, samples, t, snap.used);
  rep.certificates.push_back(cert("trace_transfer_residual", "all", tr.max_residual, "<=", 1e-12, tr.pass));
  json rank_one = json::array();
  for (const auto& s : tr.rank_one) rank_one.push_back({{"direct", s.direct}, {"via_inner", s.via_inner}, {"residual", s.residual}});
  json proj = json::array();
  for (const auto& s : tr.projections) proj.push_back({{"direct", s.direct}, {"via_k0", s.via_inner}, {"residual", s.residual}});
  rep.details["transfer"] = {{"rank_one", rank_one}, {"projections", proj}};
  rep.details["tau_P_lambda"] = sf.tau_P_lambda;
}

// ---------------------------------------------------------------- asymptotic

void run_asymptotic(const ExperimentConfig& cfg, int threads, RunReport& rep) {
  rep.header = {"command", "k", "t", "d12", "d13", "d23"};
  std::vector<Index> ks = windings_or(cfg, {1});
  std::vector<double> ts = cfg.t_grid.empty() ? std::vector<double>{1, 10, 100} : cfg.t_grid;
  std::vector<AsymptoticReport> reps(ks.size());
  parallel_for(ks.size(), threads, [&](std::size_t i) {
    reps[i] = asymptotic_equivalence_report(circle_model(std::abs(ks[i]) + 1, ks[i]), ts);
  });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& r = reps[i];
    for (const auto& row : r.rows)
      rep.rows.push_back({"asymptotic", fmt(ks[i]), fmt(row.t), fmt(row.d12), fmt(row.d13), fmt(row.d23)});
    const auto& a = r.rows.front();
    const auto& b = r.rows.back();
    std::string item = "k=" + std::to_string(ks[i]);
    rep.certificates.push_back(cert("decrease_d12", item, b.d12, "<", a.d12, r.decrease12));
    rep.certificates.push_back(cert("decrease_d13", item, b.d13, "<", a.d13, r.decrease13));
    rep.certificates.push_back(cert("decrease_d23", item, b.d23, "<", a.d23, r.decrease23));
  }
}

}  // namespace

RunReport run(const ExperimentConfig& cfg, int threads) {
  RunReport rep;
  rep.command = cfg.command;
  auto start = std::chrono::steady_clock::now();
  try {
    if (cfg.command == "index") {
      run_index(cfg, threads, rep);
    } else if (cfg.command == "sweep") {
      run_sweep(cfg, threads, rep);
    } else if (cfg.command == "bounds") {
      run_bounds(cfg, threads, rep);
    } else if (cfg.command == "semifinite") {
      run_semifinite(cfg, threads, rep);
    } else if (cfg.command == "asymptotic") {
      run_asymptotic(cfg, threads, rep);
    } else {
      invalid("unknown command '" + cfg.command + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    rep.error = e.what();
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace loclab
