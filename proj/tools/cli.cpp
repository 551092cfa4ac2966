/*
 * Copyright 2026 The qgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "qgauss/cache.hpp"
#include "qgauss/entropy.hpp"
#include "qgauss/errors.hpp"
#include "qgauss/kernels.hpp"
#include "qgauss/oracle_lab.hpp"
#include "qgauss/path_norms.hpp"
#include "qgauss/quant_error.hpp"
#include "qgauss/sampling.hpp"
#include "qgauss/small_ball.hpp"

namespace qgauss::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& token) {
  if (token == "inf" || token == "Inf" || token == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidArgument, "not a number: '" + token + "'");
  }
  require(used == token.size(), ErrorCode::InvalidArgument, "not a number: '" + token + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_number(t));
  require(!out.empty(), ErrorCode::InvalidArgument, "empty list");
  return out;
}

struct ProcessOptions {
  std::string process = "fbm";
  std::string hurst;  // comma list; family-dependent default when empty
  int dim = 1;
  double beta = 1.0;
  int m = 1;
  double gamma = 1.0;
  std::string window = "1";
  int grid = 512;
  std::string norm = "sup";
  double p = 2.0;

  void add_to(CLI::App* app) {
    app->add_option("--process", process, "fbm|fbs|levy|ibm|isheet|fou|slepian|normal")->capture_default_str();
    app->add_option("--hurst", hurst, "Hurst index (comma list for the sheet)");
    app->add_option("--dim", dim, "index dimension")->capture_default_str();
    app->add_option("--beta", beta, "integration order of ibm")->capture_default_str();
    app->add_option("--m", m, "integration order of isheet")->capture_default_str();
    app->add_option("--gamma", gamma, "fou rate")->capture_default_str();
    app->add_option("--window", window, "slepian windows (comma list)")->capture_default_str();
    app->add_option("--grid", grid, "points per axis")->capture_default_str();
    app->add_option("--norm", norm, "sup|lp")->capture_default_str();
    app->add_option("--p", p, "exponent of the lp norm")->capture_default_str();
  }

  std::vector<double> replicate(const std::vector<double>& v) const {
    if (v.size() == 1 && dim > 1) return std::vector<double>(static_cast<std::size_t>(dim), v[0]);
    return v;
  }

  CovarianceKernel kernel() const {
    if (process == "fbm" || process == "fbs")
      return FractionalBrownianSheet{replicate(parse_list(hurst.empty() ? "0.5" : hurst))};
    if (process == "levy") return LevyFBM{parse_list(hurst.empty() ? "0.5" : hurst)[0], dim};
    if (process == "ibm") return IntegratedBM{beta};
    if (process == "isheet") return IntegratedSheet{m, dim};
    if (process == "fou") return FractionalOU{gamma, parse_list(hurst.empty() ? "1" : hurst)[0]};
    if (process == "slepian") return SlepianField{replicate(parse_list(window))};
    if (process == "normal") return StandardNormal1D{};
    fail(ErrorCode::InvalidArgument, "unknown process '" + process + "'");
  }

  GridSpec grid_spec() const {
    if (process == "normal") return make_grid(1, 1);
    return make_grid(dim, grid);
  }

  NormSpec norm_spec() const {
    NormSpec n;
    if (norm == "sup") n = NormSpec::sup();
    else if (norm == "lp") n = NormSpec::lp(p);
    else fail(ErrorCode::InvalidArgument, "unknown norm '" + norm + "'");
    validate_norm(n);
    return n;
  }

  json describe() const {
    const auto k = kernel();
    return {{"kernel", canonical_string(k)},
            {"grid", {{"dim", grid_spec().dim}, {"points_per_axis", grid_spec().points_per_axis}}},
            {"norm", norm_spec().to_string()}};
  }
};

struct CommonOptions {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string cache;
  std::string out;
  std::string unit = "nats";

  double rate_scale() const {
    if (unit == "nats") return 1.0;
    if (unit == "bits") return std::log(2.0);
    fail(ErrorCode::InvalidArgument, "unit must be nats or bits");
  }

  SamplingOptions sampling() const {
    SamplingOptions o;
    o.threads = threads;
    fs::path fallback;
    if (!cache.empty()) fallback = cache;
    else if (const char* home = std::getenv("HOME"); home && *home) fallback = fs::path(home) / ".cache" / "qgauss";
    const fs::path dir = cache.empty() ? ArtifactCache::default_dir(fallback) : fs::path(cache);
    if (!dir.empty()) o.cache_dir = dir;
    return o;
  }
};

void write_text(const fs::path& file, const std::string& data) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  require(bool(os), ErrorCode::InvalidArgument, "cannot write " + file.string());
  os << data;
}

void write_meta(const std::string& out, const std::string& command, json config) {
  json meta = {{"command", command}, {"config", std::move(config)}, {"version", kVersion}};
  write_text(out + ".meta.json", meta.dump(2) + "\n");
}

// Writes to `out` and its sidecar, or to stdout when no path is given.
void emit(const std::string& out, const std::string& command, const json& config, const std::string& data) {
  if (out.empty()) {
    std::cout << data;
    return;
  }
  write_text(out, data);
  write_meta(out, command, config);
}

AsymptoticLaw parse_law(const std::string& text) {
  AsymptoticLaw law;
  if (text.find('=') != std::string::npos) {
    for (const auto& kv : split(text, ',')) {
      const auto eq = kv.find('=');
      require(eq != std::string::npos, ErrorCode::InvalidArgument, "law entries look like c=1,a=2,b=0");
      const std::string key = kv.substr(0, eq);
      const double v = parse_number(kv.substr(eq + 1));
      if (key == "c") law.c = v;
      else if (key == "a") law.a = v;
      else if (key == "b") law.b = v;
      else if (key == "r") law.r = v;
      else fail(ErrorCode::InvalidArgument, "unknown law key '" + key + "'");
    }
  } else {
    std::ifstream is(text);
    require(bool(is), ErrorCode::InvalidArgument, "cannot read law file " + text);
    json j;
    try {
      is >> j;
      law.c = j.at("c").get<double>();
      law.a = j.at("a").get<double>();
      law.b = j.at("b").get<double>();
      if (j.contains("r") && !j["r"].is_null()) law.r = j["r"].get<double>();
    } catch (const json::exception& e) {
      fail(ErrorCode::InvalidArgument, std::string("malformed law file: ") + e.what());
    }
  }
  validate_law(law);
  return law;
}

json law_json(const AsymptoticLaw& law) {
  json j = {{"c", law.c}, {"a", law.a}, {"b", law.b}};
  if (law.r) j["r"] = *law.r;
  return j;
}

EntropyOrder parse_order(double v) { return std::isinf(v) ? EntropyOrder::infinity() : EntropyOrder(v); }

SmallBallTable read_table(const std::string& file) {
  std::ifstream is(file, std::ios::binary);
  require(bool(is), ErrorCode::InvalidArgument, "cannot read " + file);
  return read_small_ball_csv(is);
}

std::string csv_cell(std::optional<double> v) { return v ? fmt17(*v) : std::string(); }

// ---------------------------------------------------------------- commands

void cmd_smallball(const ProcessOptions& proc, const CommonOptions& common, const std::string& radii_text,
                   std::int64_t samples, std::uint64_t seed) {
  require(!common.out.empty(), ErrorCode::InvalidArgument, "--out is required");
  const auto radii = parse_range(radii_text);
  const auto table =
      estimate_small_ball(proc.kernel(), proc.grid_spec(), proc.norm_spec(), radii, samples, seed, common.sampling());
  std::ostringstream os;
  write_small_ball_csv(os, table);
  json config = proc.describe();
  config["radii"] = radii_text;
  config["samples"] = samples;
  config["seed"] = seed;
  emit(common.out, "smallball", config, os.str());
}

void cmd_fit(const CommonOptions& common, const std::string& in, const std::string& window_text,
             std::optional<double> forced_b, double eta) {
  const auto table = read_table(in);
  const auto w = parse_list(split(window_text, ':').size() == 2 ? window_text.substr(0, window_text.find(':')) + "," +
                                                                      window_text.substr(window_text.find(':') + 1)
                                                                : window_text);
  require(w.size() == 2 && w[0] < w[1], ErrorCode::InvalidArgument, "--window expects lo:hi");
  const FitWindow window{w[0], w[1]};
  const auto fit = fit_asymptotic(table, window, forced_b);

  json j = law_json(fit.law);
  j["forced_b"] = forced_b ? json(*forced_b) : json(nullptr);
  j["stderr"] = {{"log_c", fit.std_error(0)}, {"a", fit.std_error(1)}, {"b", forced_b ? 0.0 : fit.std_error(2)}};
  j["rows"] = fit.rows;
  j["condition_number"] = fit.condition_number;
  j["chi2"] = fit.chi2;
  if (fit.law.a > 0.0 && fit.law.c > 0.0) {
    const auto rep = ratio_condition(fit.law, {window.lo, std::min(window.hi, 0.99)}, eta);
    j["ratio_condition"] = {{"eta", eta}, {"holds", rep.holds()}, {"violations", rep.violations}};
  }
  json config = {{"in", in}, {"window", window_text}, {"eta", eta}};
  config["force_b"] = forced_b ? json(*forced_b) : json(nullptr);
  emit(common.out, "fit", config, j.dump(2) + "\n");
}

void cmd_invert(const CommonOptions& common, const std::string& in, const std::string& law_text,
                const std::string& rates_text) {
  require(!common.out.empty(), ErrorCode::InvalidArgument, "--out is required");
  require(in.empty() != law_text.empty(), ErrorCode::InvalidArgument, "give exactly one of --in or --law");
  const double scale = common.rate_scale();
  std::ostringstream os;
  os << "R,radius,method\n";
  if (!in.empty()) {
    const auto b = b_function(read_table(in));
    for (double R : parse_range(rates_text)) os << fmt17(R * scale) << ',' << fmt17(b.inverse(R * scale)) << ",TABLE\n";
  } else {
    const auto law = parse_law(law_text);
    for (double R : parse_range(rates_text))
      os << fmt17(R * scale) << ',' << fmt17(invert_asymptotic(law, R * scale)) << ",LAW\n";
  }
  json config = {{"in", in}, {"law", law_text}, {"R", rates_text}, {"unit", common.unit}};
  emit(common.out, "invert", config, os.str());
}

struct ErrorCommand {
  std::string alpha_text = "inf";
  std::string rates_text;
  double r = 1.0;
  std::string radii_text;
  std::string law_text;
  bool formula_only = false;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

void cmd_error(const ProcessOptions& proc, const CommonOptions& common, const ErrorCommand& cmd) {
  require(!common.out.empty(), ErrorCode::InvalidArgument, "--out is required");
  const Distortion rho(cmd.r);
  const double scale = common.rate_scale();
  std::vector<double> rates;
  for (double R : parse_range(cmd.rates_text)) rates.push_back(R * scale);
  const auto alphas = parse_list(cmd.alpha_text);
  for (double a : alphas) validate_query({1.0, parse_order(a), rho});
  std::optional<AsymptoticLaw> law;
  if (!cmd.law_text.empty()) law = parse_law(cmd.law_text);
  require(!cmd.formula_only || law, ErrorCode::InvalidArgument, "--formula-only needs --law");

  std::ostringstream os;
  os << "R,alpha,r,radius,method,value,stderr,bound,formula,ratio\n";
  json config = {{"alpha", cmd.alpha_text}, {"R", cmd.rates_text}, {"r", cmd.r}, {"unit", common.unit}};
  if (law) config["law"] = law_json(*law);

  if (cmd.formula_only) {
    config["formula_only"] = true;
    for (double a : alphas) {
      const EntropyOrder alpha = parse_order(a);
      for (double R : rates) {
        const double r_eff = effective_rate(alpha, R);
        const double f = asymptotic_error(*law, rho, alpha, R);
        os << fmt17(R) << ',' << fmt17(a) << ',' << fmt17(cmd.r) << ',' << fmt17(invert_asymptotic(*law, r_eff))
           << ",ASYMPTOTIC," << fmt17(f) << ",0," << fmt17(upper_bound_mass(*law, rho, r_eff)) << ',' << fmt17(f)
           << ",1\n";
      }
    }
    emit(common.out, "error", config, os.str());
    return;
  }

  const auto kernel = proc.kernel();
  const auto grid = proc.grid_spec();
  const auto norm = proc.norm_spec();
  const auto norms = sample_norms(kernel, grid, norm, cmd.samples, cmd.seed, common.sampling());
  std::vector<double> radii;
  if (!cmd.radii_text.empty()) {
    radii = parse_range(cmd.radii_text);
  } else {
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    const double a = std::log(std::max(*lo, 1e-300)), b = std::log(std::max(*hi, *lo * (1.0 + 1e-12)));
    for (int i = 0; i < 1024; ++i) radii.push_back(std::exp(a + (b - a) * i / 1023.0));
  }
  const auto table = tabulate_small_ball(norms, radii);

  for (double a : alphas) {
    const EntropyOrder alpha = parse_order(a);
    for (double R : rates) {
      const double r_eff = effective_rate(alpha, R);
      ErrorEstimate e = ball_moment_error(norms, table, rho, r_eff);
      if (!alpha.is_infinite()) e.method = ErrorMethod::UpperBound;
      const double bound = upper_bound_mass(table, rho, r_eff);
      std::optional<double> f, ratio;
      if (law) {
        f = asymptotic_error(*law, rho, alpha, R);
        ratio = e.value / *f;
      }
      os << fmt17(R) << ',' << fmt17(a) << ',' << fmt17(cmd.r) << ',' << fmt17(e.radius_used) << ','
         << to_string(e.method) << ',' << fmt17(e.value) << ',' << fmt17(e.std_error) << ',' << fmt17(bound) << ','
         << csv_cell(f) << ',' << csv_cell(ratio) << '\n';
    }
  }
  config.update(proc.describe());
  config["samples"] = cmd.samples;
  config["seed"] = cmd.seed;
  config["radii"] = cmd.radii_text.empty() ? json("auto") : json(cmd.radii_text);
  emit(common.out, "error", config, os.str());
}

void cmd_verify(const CommonOptions& common, const std::string& in, const std::string& law_text) {
  require(!common.out.empty(), ErrorCode::InvalidArgument, "--out is required");
  const auto law = parse_law(law_text);
  std::ifstream is(in, std::ios::binary);
  require(bool(is), ErrorCode::InvalidArgument, "cannot read " + in);
  std::string line;
  std::getline(is, line);
  require(line == "R,alpha,r,radius,method,value,stderr,bound,formula,ratio", ErrorCode::InvalidArgument,
          "unexpected error CSV header");

  struct Group {
    double alpha, r;
    std::vector<double> rates;
    std::vector<ErrorEstimate> estimates;
  };
  std::vector<Group> groups;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    require(cells.size() == 10, ErrorCode::InvalidArgument, "malformed error CSV row: " + line);
    const double alpha = parse_number(cells[1]), r = parse_number(cells[2]);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.alpha == alpha && g.r == r; });
    if (it == groups.end()) it = groups.insert(groups.end(), Group{alpha, r, {}, {}});
    it->rates.push_back(parse_number(cells[0]));
    it->estimates.push_back({parse_number(cells[5]), parse_number(cells[6]), parse_number(cells[3])});
  }
  require(!groups.empty(), ErrorCode::InvalidArgument, "error CSV has no rows");

  std::ostringstream os;
  os << "R,alpha,r,estimate,stderr,formula,ratio,stderr_ratio,trend\n";
  json trends = json::array();
  for (const auto& g : groups) {
    const Distortion rho(g.r);
    const EntropyOrder alpha = parse_order(g.alpha);
    const auto rep =
        ratio_report(g.rates, g.estimates, [&](double R) { return asymptotic_error(law, rho, alpha, R); });
    for (const auto& row : rep.rows)
      os << fmt17(row.R) << ',' << fmt17(g.alpha) << ',' << fmt17(g.r) << ',' << fmt17(row.estimate) << ','
         << fmt17(row.std_error) << ',' << fmt17(row.formula) << ',' << fmt17(row.ratio) << ','
         << fmt17(row.ratio_std_error) << ',' << fmt17(rep.trend) << '\n';
    trends.push_back({{"alpha", fmt17(g.alpha)}, {"r", g.r}, {"trend", rep.trend}});
  }
  emit(common.out, "verify", {{"in", in}, {"law", law_json(law)}, {"trends", trends}}, os.str());
}

struct OracleCommand {
  std::string lemma = "extreme-point";
  std::string f = "square";
  double alpha = 2.0;
  std::string x0 = "0.1";
  double A = 1.0, B = 0.0;
  int n_max = 6;
  std::string mode = "normalized";
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  int atoms = 4001;
  double half_width = 8.0;
  double mass = 0.3;
  double r = 2.0;
  int probes = 10000;
  double tolerance = 1e-9;
};

json report_json(const OracleReport& rep) {
  return {{"lemma", rep.lemma}, {"trials", rep.trials}, {"min_deficit", rep.min_deficit},
          {"tolerance", rep.tolerance}, {"pass", rep.pass}};
}

void cmd_oracle(const CommonOptions& common, const OracleCommand& cmd) {
  json config = {{"lemma", cmd.lemma}, {"seed", cmd.seed}, {"trials", cmd.trials}, {"tolerance", cmd.tolerance}};
  const LemmaFunctionParams params{cmd.A, cmd.B, cmd.alpha, 0.01};
  const auto probes = log_probe_grid(1e-9, std::exp(-std::exp(1.0)), cmd.probes);
  json out;
  if (cmd.lemma == "extreme-point" || cmd.lemma == "extreme-point-relaxed") {
    const bool relaxed = cmd.lemma == "extreme-point-relaxed" || cmd.mode == "relaxed";
    require(relaxed || cmd.mode == "normalized", ErrorCode::InvalidArgument, "--mode is normalized or relaxed");
    std::function<double(double)> f;
    if (cmd.f == "square") f = [](double x) { return x * x; };
    else if (cmd.f == "lemma") f = [params](double x) { return lemma_function(params, x); };
    else fail(ErrorCode::InvalidArgument, "--f is square or lemma");
    const double x0 = cmd.x0 == "auto" ? check_monotone_F(params, probes).x_star : parse_number(cmd.x0);
    const auto rep = oracle_extreme_point(f, cmd.alpha, x0, cmd.n_max, cmd.trials, cmd.seed,
                                          relaxed ? ExtremePointMode::Relaxed : ExtremePointMode::Normalized,
                                          common.threads, cmd.tolerance);
    out = report_json(rep);
    config.update({{"f", cmd.f}, {"alpha", cmd.alpha}, {"x0", x0}, {"n_max", cmd.n_max}});
    if (cmd.f == "lemma") config.update({{"A", cmd.A}, {"B", cmd.B}});
  } else if (cmd.lemma == "rearrangement") {
    const DiscreteGaussian1D mu(cmd.atoms, cmd.half_width);
    out = report_json(
        oracle_ball_rearrangement(mu, cmd.mass, Distortion(cmd.r), cmd.trials, cmd.seed, common.threads, cmd.tolerance));
    config.update({{"atoms", cmd.atoms}, {"half_width", cmd.half_width}, {"mass", cmd.mass}, {"r", cmd.r}});
  } else if (cmd.lemma == "monotone-F") {
    const auto rep = check_monotone_F(params, probes);
    out = {{"lemma", "monotone-F"},
           {"x_star", rep.x_star},
           {"f_increasing", rep.f_increasing},
           {"f_violations", rep.f_violations.size()},
           {"F_violations", rep.F_violations.size()},
           {"probes", rep.probes.size()},
           {"pass", rep.f_increasing && rep.x_star > 0.0}};
    config.update({{"A", cmd.A}, {"B", cmd.B}, {"alpha", cmd.alpha}, {"probes", cmd.probes}});
  } else {
    fail(ErrorCode::InvalidArgument, "unknown lemma '" + cmd.lemma + "'");
  }
  emit(common.out, "oracle", config, out.dump(2) + "\n");
}

void cmd_sample(const ProcessOptions& proc, const CommonOptions& common, std::int64_t samples, std::uint64_t seed) {
  require(!common.out.empty(), ErrorCode::InvalidArgument, "--out is required");
  const auto kernel = proc.kernel();
  const auto grid = proc.grid_spec();
  const auto ens = sample_paths(kernel, grid, samples, seed, common.sampling());
  const std::string key = "paths|" + canonical_string(kernel) + "|n=" + std::to_string(samples) +
                          "|seed=" + std::to_string(seed);
  write_binary(common.out, make_header(kernel, grid, PayloadKind::Paths, key), ens.paths);
  json config = proc.describe();
  config.erase("norm");
  config["samples"] = samples;
  config["seed"] = seed;
  write_meta(common.out, "sample", config);
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  auto parts = split(text, ':');
  bool geometric = false;
  if (!parts.empty() && parts[0] == "log") {
    geometric = true;
    parts.erase(parts.begin());
  }
  if (parts.size() == 1 && !geometric) return parse_list(parts[0]);
  require(parts.size() == 3, ErrorCode::InvalidArgument, "range must be start:end:count or log:start:end:count");
  const double a = parse_number(parts[0]), b = parse_number(parts[1]);
  const double count = parse_number(parts[2]);
  require(count >= 1 && count == std::floor(count), ErrorCode::InvalidArgument, "range count must be a positive integer");
  require(std::isfinite(a) && std::isfinite(b), ErrorCode::InvalidArgument, "range ends must be finite");
  if (geometric) require(a > 0.0 && b > 0.0, ErrorCode::InvalidArgument, "geometric range needs positive ends");
  const auto n = static_cast<int>(count);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] =
        geometric ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a);
  }
  if (n > 1) out.back() = b;
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Entropy-constrained quantization of Gaussian measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ProcessOptions proc;
  CommonOptions common;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string radii, in, law, window, rates;
  std::optional<double> forced_b;
  double eta = 0.5;
  ErrorCommand err;
  OracleCommand orc;
  std::function<void()> action;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", common.threads, "worker threads (results do not depend on it)");
    sub->add_option("--cache", common.cache, "cache directory (QGAUSS_CACHE overrides the default)");
    sub->add_option("--out", common.out, "output file");
  };

  auto* sb = app.add_subcommand("smallball", "Monte Carlo small-ball table");
  proc.add_to(sb);
  add_common(sb);
  sb->add_option("--radii", radii, "radius range")->required();
  sb->add_option("--samples", samples, "sample paths")->capture_default_str();
  sb->add_option("--seed", seed, "master seed")->capture_default_str();
  sb->callback([&] { action = [&] { cmd_smallball(proc, common, radii, samples, seed); }; });

  auto* fit = app.add_subcommand("fit", "Fit c (1/s)^a (log 1/s)^b to a small-ball table");
  add_common(fit);
  fit->add_option("--in", in, "small-ball CSV")->required();
  fit->add_option("--window", window, "radius window lo:hi")->required();
  fit->add_option("--force-b", forced_b, "hold b fixed");
  fit->add_option("--eta", eta, "shrink factor of the ratio condition")->capture_default_str();
  fit->callback([&] { action = [&] { cmd_fit(common, in, window, forced_b, eta); }; });

  auto* inv = app.add_subcommand("invert", "Radius with b(s) = R from a table or a law");
  add_common(inv);
  inv->add_option("--in", in, "small-ball CSV");
  inv->add_option("--law", law, "c=..,a=..,b=.. or a law JSON file");
  inv->add_option("--R", rates, "rate range")->required();
  inv->add_option("--unit", common.unit, "nats|bits")->capture_default_str();
  inv->callback([&] { action = [&] { cmd_invert(common, in, law, rates); }; });

  auto* er = app.add_subcommand("error", "Quantization error estimates and bounds");
  proc.add_to(er);
  add_common(er);
  er->add_option("--alpha", err.alpha_text, "entropy orders (comma list, inf allowed)")->capture_default_str();
  er->add_option("--R", err.rates_text, "rate range")->required();
  er->add_option("--r", err.r, "distortion exponent")->capture_default_str();
  er->add_option("--radii", err.radii_text, "radius grid of the internal table");
  er->add_option("--law", err.law_text, "c=..,a=..,b=.. or a law JSON file");
  er->add_flag("--formula-only", err.formula_only, "skip sampling, evaluate the law");
  er->add_option("--samples", err.samples, "sample paths")->capture_default_str();
  er->add_option("--seed", err.seed, "master seed")->capture_default_str();
  er->add_option("--unit", common.unit, "nats|bits")->capture_default_str();
  er->callback([&] { action = [&] { cmd_error(proc, common, err); }; });

  auto* orcl = app.add_subcommand("oracle", "Brute-force lemma oracles");
  add_common(orcl);
  orcl->add_option("--lemma", orc.lemma, "extreme-point|extreme-point-relaxed|rearrangement|monotone-F")
      ->capture_default_str();
  orcl->add_option("--f", orc.f, "square|lemma")->capture_default_str();
  orcl->add_option("--alpha", orc.alpha, "order alpha")->capture_default_str();
  orcl->add_option("--x0", orc.x0, "upper bound x0, or auto")->capture_default_str();
  orcl->add_option("--A", orc.A, "lemma function exponent A")->capture_default_str();
  orcl->add_option("--B", orc.B, "lemma function exponent B")->capture_default_str();
  orcl->add_option("--n-max", orc.n_max, "longest candidate vector")->capture_default_str();
  orcl->add_option("--mode", orc.mode, "normalized|relaxed")->capture_default_str();
  orcl->add_option("--trials", orc.trials, "random candidates")->capture_default_str();
  orcl->add_option("--seed", orc.seed, "master seed")->capture_default_str();
  orcl->add_option("--atoms", orc.atoms, "atoms of the discrete Gaussian")->capture_default_str();
  orcl->add_option("--half-width", orc.half_width, "support half width")->capture_default_str();
  orcl->add_option("--mass", orc.mass, "target cell mass")->capture_default_str();
  orcl->add_option("--r", orc.r, "distortion exponent")->capture_default_str();
  orcl->add_option("--probes", orc.probes, "probe count of monotone-F")->capture_default_str();
  orcl->add_option("--tolerance", orc.tolerance, "deficit tolerance")->capture_default_str();
  orcl->callback([&] { action = [&] { cmd_oracle(common, orc); }; });

  auto* ver = app.add_subcommand("verify", "Ratios of error estimates to the asymptotic formula");
  add_common(ver);
  ver->add_option("--in", in, "error CSV")->required();
  ver->add_option("--law", law, "c=..,a=..,b=.. or a law JSON file")->required();
  ver->callback([&] { action = [&] { cmd_verify(common, in, law); }; });

  auto* smp = app.add_subcommand("sample", "Write a binary path ensemble");
  proc.add_to(smp);
  add_common(smp);
  smp->add_option("--samples", samples, "sample paths")->capture_default_str();
  smp->add_option("--seed", seed, "master seed")->capture_default_str();
  smp->callback([&] { action = [&] { cmd_sample(proc, common, samples, seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    require(common.threads >= 1, ErrorCode::InvalidArgument, "--threads must be positive");
    if (action) action();
    return 0;
  } catch (const Error& e) {
    std::cerr << "qgauss: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "qgauss: " << e.what() << '\n';
    return 3;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage{"qgauss"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(storage.size()), argv.data());
}

}  // namespace qgauss::cli
