#include "moelab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "moelab/capacity.hpp"
#include "moelab/certify.hpp"
#include "moelab/channels.hpp"
#include "moelab/concentration.hpp"
#include "moelab/entropy.hpp"
#include "moelab/nets.hpp"
#include "moelab/version.hpp"

namespace moelab::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// provenance block: resolved config, library version, and a tag for every
// inequality the pipeline checks
std::string csv_preamble(const std::string& command, const nlohmann::json& config,
                         const std::vector<std::string>& checks) {
  std::string out = "# moelab " + std::string(kVersion) + "\n";
  out += "# command=" + command + "\n";
  out += "# config=" + config.dump() + "\n";
  std::string tags;
  for (const auto& c : checks) tags += (tags.empty() ? "" : " ") + c;
  out += "# checks=" + tags + "\n";
  return out;
}

nlohmann::json json_report(const std::string& command, const nlohmann::json& config,
                           const std::vector<std::string>& checks) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  j["checks"] = checks;
  return j;
}

}  // namespace

std::vector<long> parse_range(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw std::invalid_argument("empty range token in '" + text + "'");
    const auto c1 = token.find(':');
    if (c1 == std::string::npos) {
      out.push_back(std::stol(token));
      continue;
    }
    const auto c2 = token.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw std::invalid_argument("range must be start:step:stop, got '" + token + "'");
    }
    const long start = std::stol(token.substr(0, c1));
    const long step = std::stol(token.substr(c1 + 1, c2 - c1 - 1));
    const long stop = std::stol(token.substr(c2 + 1));
    if (step <= 0) throw std::invalid_argument("range step must be positive");
    for (long v = start; v <= stop; v += step) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty range '" + text + "'");
  return out;
}

PipelineOutput run_moments(const MomentsConfig& cfg) {
  nlohmann::json config{{"k", cfg.ks}, {"n", cfg.ns},     {"trials", cfg.trials},
                        {"seed", cfg.seed}, {"threads", cfg.threads}, {"format", cfg.format}};
  const std::vector<std::string> checks{"second-moment-identity", "mean-bound",
                                        "median-bound"};
  PipelineOutput out;
  std::vector<MomentReport> reports;
  std::uint64_t config_index = 0;
  for (long k : cfg.ks) {
    for (long n : cfg.ns) {
      RngStream rng = RngStream(cfg.seed).substream(config_index++);
      reports.push_back(estimate_moments(static_cast<int>(k), static_cast<int>(n),
                                         cfg.trials, rng, cfg.threads));
    }
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.all_ok();
  if (cfg.format == "json") {
    nlohmann::json j = json_report("moments", config, checks);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(nlohmann::json::parse(r.to_json()));
    j["data"] = std::move(rows);
    out.data = j.dump(2) + "\n";
  } else {
    out.data = csv_preamble("moments", config, checks) + MomentReport::csv_header() + "\n";
    for (const auto& r : reports) out.data += r.csv_row() + "\n";
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = "moments: " + std::to_string(reports.size()) + " configuration(s), " +
                (ok ? "all checks passed" : "CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_tail(const TailConfig& cfg) {
  nlohmann::json config{{"k", cfg.k},       {"n", cfg.n},           {"eps", cfg.epsilons},
                        {"trials", cfg.trials}, {"seed", cfg.seed}, {"threads", cfg.threads},
                        {"format", cfg.format}};
  const std::vector<std::string> checks{"tail-bound"};
  RngStream rng(cfg.seed);
  const TailReport rep = empirical_tail(static_cast<int>(cfg.k), static_cast<int>(cfg.n),
                                        cfg.epsilons, cfg.trials, rng, cfg.threads);
  PipelineOutput out;
  if (cfg.format == "json") {
    nlohmann::json j = json_report("tail", config, checks);
    j["data"] = nlohmann::json::parse(rep.to_json());
    out.data = j.dump(2) + "\n";
  } else {
    out.data = csv_preamble("tail", config, checks) + TailReport::csv_header() + "\n" +
               rep.csv_rows();
  }
  out.exit_code = rep.all_ok() ? kOk : kViolation;
  out.summary = std::string("tail: ") + (rep.all_ok() ? "all frequencies within bound"
                                                      : "CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_bell(const BellConfig& cfg) {
  nlohmann::json config{{"l", cfg.l},     {"k", cfg.k},
                        {"n", cfg.n},     {"count", cfg.count},
                        {"seed", cfg.seed}, {"channel_in", cfg.channel_in},
                        {"channel_out", cfg.channel_out}, {"format", cfg.format}};
  const std::vector<std::string> checks{"bell-eigenvalue-bound", "bell-entropy-caps"};
  if (!cfg.channel_out.empty() && cfg.count != 1) {
    throw std::invalid_argument("bell: --channel-out requires --count 1");
  }

  struct Row {
    int idx, l, k, n;
    double lambda_max, lower, entropy, cap, maxent_cap;
    bool ok;
  };
  std::vector<Row> rows;
  const int count = cfg.channel_in.empty() ? cfg.count : 1;
  for (int i = 0; i < count; ++i) {
    StinespringChannel phi = [&] {
      if (!cfg.channel_in.empty()) return load_channel(cfg.channel_in);
      RngStream rng = RngStream(cfg.seed).substream(i);
      return random_subspace_channel(static_cast<int>(cfg.l), static_cast<int>(cfg.k),
                                     static_cast<int>(cfg.n), rng);
    }();
    if (!cfg.channel_out.empty()) save_channel(phi, cfg.channel_out);
    const int l = phi.input_dim(), k = phi.output_dim(), n = phi.env_dim();
    const DensityMatrix bo = bell_output(phi);
    Row row;
    row.idx = i;
    row.l = l;
    row.k = k;
    row.n = n;
    row.lambda_max = hermitian_eigvals(bo.matrix())[0];
    row.lower = static_cast<double>(l) / (static_cast<double>(k) * n);
    row.entropy = von_neumann_entropy(bo).nats;
    row.cap = 2.0 * std::log(static_cast<double>(k));
    row.maxent_cap = row.lower >= 1.0 / (static_cast<double>(k) * k)
                         ? max_entropy_given_lambda(std::min(1.0, row.lower), k * k).nats
                         : row.cap;
    row.ok = row.lambda_max >= row.lower - 1e-9 && row.entropy <= row.cap + 1e-9 &&
             row.entropy <= row.maxent_cap + 1e-9;
    rows.push_back(row);
  }
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.ok;

  PipelineOutput out;
  if (cfg.format == "json") {
    nlohmann::json j = json_report("bell", config, checks);
    nlohmann::json data = nlohmann::json::array();
    for (const auto& r : rows) {
      data.push_back({{"idx", r.idx},
                      {"lambda_max", r.lambda_max},
                      {"bell_projection_lower", r.lower},
                      {"entropy_nats", r.entropy},
                      {"cap_nats", r.cap},
                      {"maxent_cap_nats", r.maxent_cap},
                      {"ok", r.ok}});
    }
    j["data"] = std::move(data);
    out.data = j.dump(2) + "\n";
  } else {
    out.data = csv_preamble("bell", config, checks) +
               "idx,l,k,n,lambda_max,bell_projection_lower,entropy_nats,cap_nats,"
               "maxent_cap_nats,ok\n";
    for (const auto& r : rows) {
      out.data += std::to_string(r.idx) + "," + std::to_string(r.l) + "," +
                  std::to_string(r.k) + "," + std::to_string(r.n) + "," +
                  fmt(r.lambda_max) + "," + fmt(r.lower) + "," + fmt(r.entropy) + "," +
                  fmt(r.cap) + "," + fmt(r.maxent_cap) + "," + (r.ok ? "1" : "0") + "\n";
    }
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = "bell: " + std::to_string(rows.size()) + " channel(s), " +
                (ok ? "all checks passed" : "CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_net_certify(const NetCertifyConfig& cfg) {
  nlohmann::json config{{"l", cfg.l},
                        {"theta", cfg.theta},
                        {"samples", cfg.samples},
                        {"seed", cfg.seed},
                        {"channels", cfg.channels},
                        {"k", cfg.k},
                        {"n", cfg.n},
                        {"soundness_samples", cfg.soundness_samples},
                        {"net_out", cfg.net_out},
                        {"format", cfg.format}};
  const std::vector<std::string> checks{"net-cardinality-bound", "net-covering",
                                        "net-max-soundness"};
  RngStream master(cfg.seed);
  RngStream net_rng = master.substream(0);
  const ThetaNet net = build_theta_net(static_cast<int>(cfg.l), cfg.theta, net_rng);
  if (!cfg.net_out.empty()) save_net(net, cfg.net_out);
  const std::int64_t bound = net_cardinality_bound(static_cast<int>(cfg.l), cfg.theta);
  const auto [max_gap, covering_pass] =
      covering_check(net, cfg.samples, master.substream(1), cfg.threads);
  const bool cardinality_pass = net.size() <= bound;

  nlohmann::json soundness = nlohmann::json::array();
  bool soundness_pass = true;
  const double c_theta = correction_factor(cfg.theta);
  for (int i = 0; i < cfg.channels; ++i) {
    RngStream chan_rng = master.substream(100 + i);
    const StinespringChannel phi =
        random_subspace_channel(static_cast<int>(cfg.l), static_cast<int>(cfg.k),
                                static_cast<int>(cfg.n), chan_rng);
    const double m = net_max_f(phi, net).max_f;
    double sampled_max = 0.0;
    RngStream sample_rng = master.substream(200 + i);
    for (long s = 0; s < cfg.soundness_samples; ++s) {
      const Ket p = random_unit_vector(static_cast<int>(cfg.l), sample_rng);
      const double f =
          f_value_raw(phi.isometry() * p.amplitudes(), phi.output_dim(), phi.env_dim());
      sampled_max = std::max(sampled_max, f);
    }
    const bool ok = c_theta * m >= sampled_max;
    soundness_pass = soundness_pass && ok;
    soundness.push_back({{"channel", i},
                         {"net_max_f", m},
                         {"guarantee", c_theta * m},
                         {"sampled_max_f", sampled_max},
                         {"ok", ok}});
  }
  const bool ok = cardinality_pass && covering_pass && soundness_pass;

  PipelineOutput out;
  nlohmann::json j = json_report("net-certify", config, checks);
  j["data"] = {{"l", cfg.l},
               {"theta", cfg.theta},
               {"size", net.size()},
               {"cardinality_bound", bound},
               {"cardinality_pass", cardinality_pass},
               {"construction",
                net.construction() == NetConstruction::kDeterministicGrid
                    ? "deterministic-grid"
                    : "greedy-verified"},
               {"content_hash", net.content_hash()},
               {"covering", {{"samples", cfg.samples}, {"max_gap", max_gap}, {"pass", covering_pass}}},
               {"c_theta", c_theta},
               {"soundness", std::move(soundness)}};
  if (cfg.format == "csv") {
    out.data = csv_preamble("net-certify", config, checks) +
               "l,theta,size,cardinality_bound,max_gap,covering_pass,soundness_pass\n" +
               std::to_string(cfg.l) + "," + fmt(cfg.theta) + "," +
               std::to_string(net.size()) + "," + std::to_string(bound) + "," +
               fmt(max_gap) + "," + (covering_pass ? "1" : "0") + "," +
               (soundness_pass ? "1" : "0") + "\n";
  } else {
    out.data = j.dump(2) + "\n";
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = "net-certify: size " + std::to_string(net.size()) + " <= " +
                std::to_string(bound) + ", max gap " + fmt(max_gap) +
                (ok ? ", all checks passed" : ", CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_gap_scan(const GapScanCliConfig& cfg) {
  nlohmann::json config{{"l", cfg.ls},       {"k", cfg.ks},
                        {"n", cfg.ns},       {"theta", cfg.theta},
                        {"seeds", cfg.seeds}, {"restarts", cfg.restarts},
                        {"threads", cfg.threads}, {"format", cfg.format}};
  const std::vector<std::string> checks{"certified-lower-vs-heuristic",
                                        "gap-report-invariants"};
  GapScanConfig scan;
  for (long v : cfg.ls) scan.ls.push_back(static_cast<int>(v));
  for (long v : cfg.ks) scan.ks.push_back(static_cast<int>(v));
  for (long v : cfg.ns) scan.ns.push_back(static_cast<int>(v));
  scan.theta = cfg.theta;
  for (long s : cfg.seeds) scan.seeds.push_back(static_cast<std::uint64_t>(s));
  scan.restarts = cfg.restarts;
  scan.threads = cfg.threads;
  const auto rows = gap_scan(scan);

  bool ok = true;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    const GapReport& r = row.report;
    // certified lower bound can never exceed the heuristic upper bound
    if (r.lower.nats > r.heuristic_smin.value.nats + 1e-6) ok = false;
    if (r.certified_violation != (r.gap > kCertificationMargin)) ok = false;
  }

  PipelineOutput out;
  if (cfg.format == "json") {
    nlohmann::json j = json_report("gap-scan", config, checks);
    nlohmann::json data = nlohmann::json::array();
    for (const auto& row : rows) {
      if (!row.ok) {
        data.push_back({{"l", row.report.l},
                        {"k", row.report.k},
                        {"n", row.report.n},
                        {"seed", row.report.seed},
                        {"error", row.error}});
        continue;
      }
      const GapReport& r = row.report;
      data.push_back({{"l", r.l},
                      {"k", r.k},
                      {"n", r.n},
                      {"theta", r.theta},
                      {"seed", r.seed},
                      {"net_size", r.net_size},
                      {"net_max_f", r.net_max},
                      {"c_theta", r.c_theta},
                      {"lower_nats", r.lower.nats},
                      {"bell_upper_nats", r.bell_upper.nats},
                      {"gap_nats", r.gap},
                      {"certified", r.certified_violation},
                      {"heuristic_smin_nats", r.heuristic_smin.value.nats}});
    }
    j["data"] = std::move(data);
    out.data = j.dump(2) + "\n";
  } else {
    out.data = csv_preamble("gap-scan", config, checks) + gap_scan_csv_header() + "\n" +
               gap_scan_csv(rows);
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = "gap-scan: " + std::to_string(rows.size()) + " row(s), " +
                (ok ? "all invariants hold" : "CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_crossover(const CrossoverConfig& cfg) {
  nlohmann::json config{{"a", cfg.a},
                        {"theta", cfg.theta},
                        {"beta_zero", cfg.beta_zero},
                        {"beta", cfg.beta},
                        {"format", cfg.format}};
  const std::vector<std::string> checks{"crossover-inequality-flip"};
  const CrossoverResult r = analytic_crossover(cfg.a, cfg.theta, cfg.beta_zero, cfg.beta);
  // the defining inequality must hold at ln k* and fail at ln(k*/2)
  bool ok = true;
  if (r.finite) {
    auto holds = [&](double ln_k) {
      return cfg.a * ln_k - 2.0 * cfg.a > 2.0 * r.constant * r.constant;
    };
    ok = holds(r.ln_k_star) && !holds(r.ln_k_star - std::log(2.0));
  }
  PipelineOutput out;
  nlohmann::json j = json_report("crossover", config, checks);
  j["data"] = {{"epsilon", r.epsilon},
               {"C", r.constant},
               {"finite", r.finite},
               {"ln_k_star", r.finite ? nlohmann::json(r.ln_k_star) : nlohmann::json("inf")},
               {"k_star",
                std::isfinite(r.k_star) ? nlohmann::json(r.k_star) : nlohmann::json("inf")},
               {"flip_check", ok}};
  if (cfg.format == "csv") {
    out.data = csv_preamble("crossover", config, checks) +
               "a,theta,beta_zero,epsilon,C,finite,ln_k_star,flip_check\n" + fmt(cfg.a) +
               "," + fmt(cfg.theta) + "," + (cfg.beta_zero ? "1" : "0") + "," +
               fmt(r.epsilon) + "," + fmt(r.constant) + "," + (r.finite ? "1" : "0") +
               "," + (r.finite ? fmt(r.ln_k_star) : std::string("inf")) + "," +
               (ok ? "1" : "0") + "\n";
  } else {
    out.data = j.dump(2) + "\n";
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = "crossover: ln k* = " +
                (r.finite ? fmt(r.ln_k_star) : std::string("inf")) + ", C = " +
                fmt(r.constant);
  return out;
}

PipelineOutput run_weyl(const WeylConfig& cfg) {
  nlohmann::json config{{"l", cfg.l},     {"k", cfg.k},         {"n", cfg.n},
                        {"mode", cfg.mode}, {"restarts", cfg.restarts}, {"seed", cfg.seed},
                        {"format", cfg.format}};
  const std::vector<std::string> checks{"capacity-average-output",
                                        "capacity-identity-residual"};
  if (cfg.mode != "single" && cfg.mode != "pair") {
    throw std::invalid_argument("weyl: mode must be 'single' or 'pair'");
  }
  RngStream master(cfg.seed);
  RngStream rng1 = master.substream(0);
  RngStream rng2 = master.substream(1);
  const StinespringChannel phi = random_subspace_channel(
      static_cast<int>(cfg.l), static_cast<int>(cfg.k), static_cast<int>(cfg.n), rng1);
  const StinespringChannel omega = random_subspace_channel(
      static_cast<int>(cfg.l), static_cast<int>(cfg.k), static_cast<int>(cfg.n), rng2);
  const int m = 1;
  const int n2 = cfg.mode == "pair" ? 1 : 0;
  const ExtensionReport rep =
      verify_extension_identity(phi, omega, m, n2, cfg.restarts, master.substream(2));
  const double tol = cfg.mode == "pair" ? 1e-3 : 1e-9;
  const bool avg_ok = std::abs(rep.avg_output_entropy_nats - rep.log_output_dim) <= tol;
  const bool residual_ok = rep.identity_residual <= tol;
  const bool per_string_ok =
      std::abs(rep.per_string_entropy_nats - rep.smin_estimate_nats) <= tol;
  const bool ok = avg_ok && residual_ok && per_string_ok;

  PipelineOutput out;
  nlohmann::json j = json_report("weyl", config, checks);
  j["data"] = nlohmann::json::parse(rep.to_json());
  j["data"]["avg_ok"] = avg_ok;
  j["data"]["residual_ok"] = residual_ok;
  j["data"]["per_string_ok"] = per_string_ok;
  if (cfg.format == "csv") {
    out.data = csv_preamble("weyl", config, checks) +
               "m,n,chi_ens_nats,avg_output_entropy_nats,per_string_entropy_nats,"
               "smin_estimate_nats,identity_residual,ok\n" +
               std::to_string(rep.m) + "," + std::to_string(rep.n) + "," +
               fmt(rep.chi_ens_nats) + "," + fmt(rep.avg_output_entropy_nats) + "," +
               fmt(rep.per_string_entropy_nats) + "," + fmt(rep.smin_estimate_nats) +
               "," + fmt(rep.identity_residual) + "," + (ok ? "1" : "0") + "\n";
  } else {
    out.data = j.dump(2) + "\n";
  }
  out.exit_code = ok ? kOk : kViolation;
  out.summary = std::string("weyl ") + cfg.mode + ": chi = " + fmt(rep.chi_ens_nats) +
                (ok ? ", identities hold" : ", CONTRACT VIOLATION");
  return out;
}

PipelineOutput run_typical_bound(const TypicalBoundConfig& cfg) {
  nlohmann::json config{{"l", cfg.ls}, {"k", cfg.ks}, {"n", cfg.ns}, {"format", cfg.format}};
  const std::vector<std::string> checks{};
  PipelineOutput out;
  struct Row {
    long l, k, n;
    TypicalBound b;
  };
  std::vector<Row> rows;
  for (long l : cfg.ls) {
    for (long k : cfg.ks) {
      for (long n : cfg.ns) {
        rows.push_back({l, k, n,
                        typical_bound_rhs(static_cast<int>(l), static_cast<int>(k),
                                          static_cast<int>(n))});
      }
    }
  }
  if (cfg.format == "json") {
    nlohmann::json j = json_report("typical-bound", config, checks);
    nlohmann::json data = nlohmann::json::array();
    for (const auto& r : rows) {
      data.push_back({{"l", r.l}, {"k", r.k}, {"n", r.n}, {"value", r.b.value},
                      {"vacuous", r.b.vacuous}});
    }
    j["data"] = std::move(data);
    out.data = j.dump(2) + "\n";
  } else {
    out.data = csv_preamble("typical-bound", config, checks) + "l,k,n,value,vacuous\n";
    for (const auto& r : rows) {
      out.data += std::to_string(r.l) + "," + std::to_string(r.k) + "," +
                  std::to_string(r.n) + "," + fmt(r.b.value) + "," +
                  (r.b.vacuous ? "1" : "0") + "\n";
    }
  }
  out.exit_code = kOk;
  out.summary = "typical-bound: " + std::to_string(rows.size()) + " row(s)";
  return out;
}

namespace {

std::string default_out_path(const std::string& command, const std::string& format) {
  const char* dir = std::getenv("MOELAB_OUTPUT_DIR");
  const std::string base = dir ? std::string(dir) : std::string(".");
  return base + "/" + command + "." + (format == "json" ? "json" : "csv");
}

void write_report(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << data;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"numerical laboratory for channel entropy bounds and concentration checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may appear after the subcommand
  app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");

  std::string out_path;
  int threads = 1;
  app.add_option("--out", out_path, "output file (default: $MOELAB_OUTPUT_DIR/<command>.<ext>)");
  app.add_option("--threads", threads, "worker count (results are identical for any value)")
      ->check(CLI::PositiveNumber);

  // moments
  auto* moments = app.add_subcommand("moments", "moment estimates of the deviation function");
  std::string mk = "2", mn = "2", mformat = "csv";
  long mtrials = 20000;
  std::uint64_t mseed = 0;
  moments->add_option("--k", mk, "output dims (range syntax a:b:c or list)");
  moments->add_option("--n", mn, "environment dims");
  moments->add_option("--trials", mtrials)->check(CLI::PositiveNumber);
  moments->add_option("--seed", mseed, "master seed")->required();
  moments->add_option("--format", mformat)->check(CLI::IsMember({"csv", "json"}));

  // tail
  auto* tail = app.add_subcommand("tail", "empirical tail vs the analytic deviation bound");
  long tk = 4, tn = 64, ttrials = 100000;
  std::vector<double> teps{0.1, 0.2, 0.3};
  std::uint64_t tseed = 0;
  std::string tformat = "csv";
  tail->add_option("--k", tk)->check(CLI::PositiveNumber);
  tail->add_option("--n", tn)->check(CLI::PositiveNumber);
  tail->add_option("--eps", teps, "epsilon grid");
  tail->add_option("--trials", ttrials)->check(CLI::PositiveNumber);
  tail->add_option("--seed", tseed)->required();
  tail->add_option("--format", tformat)->check(CLI::IsMember({"csv", "json"}));

  // bell
  auto* bell = app.add_subcommand("bell", "Bell-input output spectra and entropy caps");
  long bl = 2, bk = 2, bn = 2;
  int bcount = 20;
  std::uint64_t bseed = 0;
  std::string bin, bout, bformat = "csv";
  bell->add_option("--l", bl)->check(CLI::PositiveNumber);
  bell->add_option("--k", bk)->check(CLI::PositiveNumber);
  bell->add_option("--n", bn)->check(CLI::PositiveNumber);
  bell->add_option("--count", bcount)->check(CLI::PositiveNumber);
  bell->add_option("--seed", bseed)->required();
  bell->add_option("--channel-in", bin, "analyze a serialized channel");
  bell->add_option("--channel-out", bout, "persist the sampled channel (count must be 1)");
  bell->add_option("--format", bformat)->check(CLI::IsMember({"csv", "json"}));

  // net-certify
  auto* netc = app.add_subcommand("net-certify", "build a theta-net and certify covering");
  long cl = 2, csamples = 100000, ck = 2, cn = 2, csound = 10000;
  double ctheta = 0.25;
  int cchannels = 0;
  std::uint64_t cseed = 0;
  std::string cnet_out, cformat = "json";
  netc->add_option("--l", cl)->check(CLI::PositiveNumber);
  netc->add_option("--theta", ctheta);
  netc->add_option("--samples", csamples)->check(CLI::PositiveNumber);
  netc->add_option("--seed", cseed)->required();
  netc->add_option("--channels", cchannels, "soundness channels at (k, n)");
  netc->add_option("--k", ck)->check(CLI::PositiveNumber);
  netc->add_option("--n", cn)->check(CLI::PositiveNumber);
  netc->add_option("--soundness-samples", csound)->check(CLI::PositiveNumber);
  netc->add_option("--net-out", cnet_out, "persist the net as JSON");
  netc->add_option("--format", cformat)->check(CLI::IsMember({"csv", "json"}));

  // gap-scan
  auto* scan = app.add_subcommand("gap-scan", "certified bound sweep over a dimension grid");
  std::string sl = "2", sk = "2", sn = "2", sseeds = "1", sformat = "csv";
  double stheta = 0.25;
  int srestarts = 8;
  scan->add_option("--l", sl);
  scan->add_option("--k", sk);
  scan->add_option("--n", sn);
  scan->add_option("--theta", stheta);
  scan->add_option("--seeds", sseeds, "seed list/range")->required();
  scan->add_option("--restarts", srestarts)->check(CLI::PositiveNumber);
  scan->add_option("--format", sformat)->check(CLI::IsMember({"csv", "json"}));
  bool sempty = false;
  scan->add_flag("--empty-grid", sempty, "emit an empty report");

  // crossover
  auto* cross = app.add_subcommand("crossover", "analytic crossover dimension");
  double xa = 1.0, xtheta = 0.25, xbeta = 1.0;
  bool xbeta_zero = false;
  std::string xformat = "json";
  cross->add_option("--a", xa);
  cross->add_option("--theta", xtheta);
  cross->add_flag("--beta-zero", xbeta_zero);
  cross->add_option("--beta", xbeta);
  cross->add_option("--format", xformat)->check(CLI::IsMember({"csv", "json"}));

  // weyl
  auto* weyl = app.add_subcommand("weyl", "capacity identity of the extended channel");
  long wl = 2, wk = 2, wn = 2;
  std::string wmode = "single", wformat = "json";
  int wrestarts = 12;
  std::uint64_t wseed = 0;
  weyl->add_option("--l", wl)->check(CLI::PositiveNumber);
  weyl->add_option("--k", wk)->check(CLI::PositiveNumber);
  weyl->add_option("--n", wn)->check(CLI::PositiveNumber);
  weyl->add_option("--mode", wmode)->check(CLI::IsMember({"single", "pair"}));
  weyl->add_option("--restarts", wrestarts)->check(CLI::PositiveNumber);
  weyl->add_option("--seed", wseed)->required();
  weyl->add_option("--format", wformat)->check(CLI::IsMember({"csv", "json"}));

  // typical-bound
  auto* typical = app.add_subcommand("typical-bound", "typical-subspace bound values");
  std::string yl = "2", yk = "2", yn = "100", yformat = "csv";
  typical->add_option("--l", yl);
  typical->add_option("--k", yk);
  typical->add_option("--n", yn);
  typical->add_option("--format", yformat)->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::puts(app.help().c_str());
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  }

  try {
    PipelineOutput result;
    std::string command, format;
    if (moments->parsed()) {
      MomentsConfig cfg{parse_range(mk), parse_range(mn), mtrials, mseed, threads, mformat};
      result = run_moments(cfg);
      command = "moments";
      format = mformat;
    } else if (tail->parsed()) {
      TailConfig cfg{tk, tn, teps, ttrials, tseed, threads, tformat};
      result = run_tail(cfg);
      command = "tail";
      format = tformat;
    } else if (bell->parsed()) {
      BellConfig cfg{bl, bk, bn, bcount, bseed, bin, bout, bformat};
      result = run_bell(cfg);
      command = "bell";
      format = bformat;
    } else if (netc->parsed()) {
      NetCertifyConfig cfg{cl,  ctheta, csamples, cseed,    cchannels,
                           ck,  cn,     csound,   cnet_out, threads,
                           cformat};
      result = run_net_certify(cfg);
      command = "net-certify";
      format = cformat;
    } else if (scan->parsed()) {
      GapScanCliConfig cfg;
      if (!sempty) {
        cfg.ls = parse_range(sl);
        cfg.ks = parse_range(sk);
        cfg.ns = parse_range(sn);
        cfg.seeds = parse_range(sseeds);
      }
      cfg.theta = stheta;
      cfg.restarts = srestarts;
      cfg.threads = threads;
      cfg.format = sformat;
      result = run_gap_scan(cfg);
      command = "gap-scan";
      format = sformat;
    } else if (cross->parsed()) {
      CrossoverConfig cfg{xa, xtheta, xbeta_zero, xbeta, xformat};
      result = run_crossover(cfg);
      command = "crossover";
      format = xformat;
    } else if (weyl->parsed()) {
      WeylConfig cfg{wl, wk, wn, wmode, wrestarts, wseed, wformat};
      result = run_weyl(cfg);
      command = "weyl";
      format = wformat;
    } else if (typical->parsed()) {
      TypicalBoundConfig cfg{parse_range(yl), parse_range(yk), parse_range(yn), yformat};
      result = run_typical_bound(cfg);
      command = "typical-bound";
      format = yformat;
    } else {
      std::fprintf(stderr, "configuration error: unknown command\n");
      return kConfigError;
    }
    const std::string path = out_path.empty() ? default_out_path(command, format) : out_path;
    write_report(path, result.data);
    std::printf("%s\nreport written to %s\n", result.summary.c_str(), path.c_str());
    return result.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace moelab::cli
