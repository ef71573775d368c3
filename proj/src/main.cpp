#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gdscap/cdc.hpp"
#include "gdscap/channel_io.hpp"
#include "gdscap/singleletter.hpp"
#include "gdscap/witness.hpp"

using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  int restarts = 32;
  double tol = 1e-9;
  std::string out;  // empty: stdout
  std::string format = "json";
};

// All numeric output carries 12 significant digits for reproducible reports.
double sig12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw gdscap::channel_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

gdscap::GdsChannel load_gds(const std::string& path, bool pad) {
  const std::string text = read_file(path);
  if (gdscap::json_text_is_gds(text)) return gdscap::gds_from_json_text(text, pad);
  gdscap::KrausChannel ch = gdscap::channel_from_json_text(text);
  const std::string name = ch.name;
  return gdscap::build_gds({std::move(ch)}, name);
}

void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& item : j.items())
      flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), rows);
  } else if (j.is_array()) {
    int idx = 0;
    for (const auto& v : j) flatten(v, prefix + "[" + std::to_string(idx++) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string render_report(const RunConfig& cfg, const ordered_json& report) {
  if (cfg.format == "csv") {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    std::string text = "field,value\n";
    for (const auto& [field, value] : rows)
      text += csv_quote(field) + "," + csv_quote(value) + "\n";
    return text;
  }
  return report.dump(2) + "\n";
}

void emit(const RunConfig& cfg, const ordered_json& report) {
  const std::string text = render_report(cfg, report);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw gdscap::channel_error("cannot open output file: " + cfg.out);
    f << text;
  }
}

ordered_json certificate_json(const gdscap::BoundCertificate& cert) {
  ordered_json j;
  j["kind"] = cert.kind;
  j["value_bits"] = sig12(cert.value_bits);
  j["feasible"] = cert.feasible;
  if (cert.kind == "C_beta")
    j["trace_s"] = sig12(cert.trace_s);
  else
    j["y"] = sig12(cert.y);
  ordered_json residuals;
  double worst = 0.0;
  for (const auto& [name, value] : cert.residuals) {
    residuals[name] = sig12(value);
    worst = std::min(worst, value);
  }
  j["worst_residual"] = sig12(worst);
  j["residuals"] = residuals;
  if (!cert.notes.empty()) j["notes"] = cert.notes;
  return j;
}

ordered_json single_letter_json(const gdscap::SingleLetterVerdict& v, bool include_states) {
  ordered_json j;
  j["qualifies"] = v.qualifies;
  j["route"] = gdscap::route_name(v.route);
  j["match_residual"] = sig12(v.match_residual);
  if (v.capacity_bits)
    j["capacity_bits"] = sig12(*v.capacity_bits);
  else
    j["capacity_bits"] = nullptr;
  ordered_json blocks = ordered_json::array();
  for (const gdscap::ChannelVerdict& b : v.per_block) {
    ordered_json jb;
    jb["predicate"] = b.predicate;
    jb["holds"] = b.holds;
    jb["residual"] = sig12(b.residual);
    blocks.push_back(jb);
  }
  j["per_block"] = blocks;
  if (include_states) {
    ordered_json states = ordered_json::array();
    for (const gdscap::ComplexVector& psi : v.matched_states) {
      ordered_json jv = ordered_json::array();
      for (Eigen::Index k = 0; k < psi.size(); ++k)
        jv.push_back({sig12(psi(k).real()), sig12(psi(k).imag())});
      states.push_back(jv);
    }
    j["matched_states"] = states;
  }
  return j;
}

// Per-block witness Y_i = |C_i^{T_B}|, y_i = ||Tr_B Y_i||_inf: feasible for any
// channel, tight enough to seed the direct-sum construction.
gdscap::TranspositionWitness default_sub_witness(const gdscap::KrausChannel& sub) {
  gdscap::TranspositionWitness w;
  const gdscap::ComplexMatrix cpt =
      gdscap::partial_transpose(gdscap::choi(sub), sub.dim_in, sub.dim_out);
  w.Y = gdscap::matrix_abs(cpt);
  w.y = gdscap::max_eigenvalue(
      gdscap::partial_trace(w.Y, sub.dim_in, sub.dim_out, gdscap::Factor::A));
  w.in_blocks = gdscap::BlockStructure({sub.dim_in});
  w.out_blocks = gdscap::BlockStructure({sub.dim_out});
  return w;
}

gdscap::BoundCertificate transposition_certificate(const gdscap::GdsChannel& g) {
  std::vector<gdscap::TranspositionWitness> subs;
  subs.reserve(std::size_t(g.block_count()));
  for (const gdscap::KrausChannel& sub : g.subchannels) subs.push_back(default_sub_witness(sub));
  const gdscap::TranspositionWitness w = gdscap::build_gds_transposition_witness(g, subs);
  return gdscap::check_transposition_witness(g, w);
}

// Uniform computational-basis ensemble on each input block; any ensemble gives
// valid P1/C1 lower bounds, and this one is exact for the depolarizing ladder.
std::vector<gdscap::Ensemble> basis_ensembles(const gdscap::GdsChannel& g) {
  std::vector<gdscap::Ensemble> ensembles(std::size_t(g.block_count()));
  for (int i = 0; i < g.block_count(); ++i) {
    const int d = g.in_blocks.sizes[i];
    gdscap::Ensemble& e = ensembles[std::size_t(i)];
    for (int b = 0; b < d; ++b) {
      gdscap::ComplexMatrix rho = gdscap::ComplexMatrix::Zero(d, d);
      rho(b, b) = 1.0;
      e.probs.push_back(1.0 / d);
      e.states.push_back(rho);
    }
  }
  return ensembles;
}

gdscap::MatchSearchConfig match_config(const RunConfig& cfg) {
  gdscap::MatchSearchConfig mc;
  mc.restarts = cfg.restarts;
  mc.base_seed = cfg.seed;
  return mc;
}

long double ladder_input_dim(int p, int n) {
  long double total = 0.0L, power = 1.0L;
  for (int i = 0; i <= n; ++i) {
    total += power;
    power *= p;
  }
  return total;
}

int cmd_validate(const RunConfig& cfg, const std::string& path, bool pad) {
  ordered_json report;
  report["command"] = "validate";
  report["input"] = path;
  try {
    const std::string text = read_file(path);
    if (gdscap::json_text_is_gds(text)) {
      const gdscap::GdsChannel g = gdscap::gds_from_json_text(text, pad);
      report["kind"] = "gds";
      report["valid"] = true;
      report["name"] = g.assembled.name;
      report["dim_in"] = g.assembled.dim_in;
      report["dim_out"] = g.assembled.dim_out;
      report["kraus_count"] = g.assembled.kraus_count();
      report["cptp_residual"] = sig12(gdscap::cptp_residual(g.assembled));
      report["blocks"] = g.block_count();
      report["in_block_dims"] = g.in_blocks.sizes;
      report["out_block_dims"] = g.out_blocks.sizes;
      ordered_json subs = ordered_json::array();
      for (const gdscap::KrausChannel& sub : g.subchannels) {
        ordered_json js;
        js["name"] = sub.name;
        js["dim_in"] = sub.dim_in;
        js["dim_out"] = sub.dim_out;
        js["kraus_count"] = sub.kraus_count();
        js["cptp_residual"] = sig12(gdscap::cptp_residual(sub));
        subs.push_back(js);
      }
      report["subchannels"] = subs;
    } else {
      const gdscap::KrausChannel ch = gdscap::channel_from_json_text(text);
      report["kind"] = "channel";
      report["valid"] = true;
      report["name"] = ch.name;
      report["dim_in"] = ch.dim_in;
      report["dim_out"] = ch.dim_out;
      report["kraus_count"] = ch.kraus_count();
      report["cptp_residual"] = sig12(gdscap::cptp_residual(ch));
    }
  } catch (const gdscap::channel_error& e) {
    report["valid"] = false;
    report["error"] = e.what();
    if (std::string(e.what()).find("Kraus counts differ") != std::string::npos)
      report["hint"] = "pass --pad to zero-pad the subchannel Kraus lists to a common count";
    emit(cfg, report);
    return 2;
  }
  emit(cfg, report);
  return 0;
}

int cmd_bounds(const RunConfig& cfg, const std::string& path, bool pad) {
  const gdscap::GdsChannel g = load_gds(path, pad);
  ordered_json report;
  report["command"] = "bounds";
  report["input"] = path;
  report["name"] = g.assembled.name;
  report["blocks"] = g.block_count();
  report["dim_in"] = g.assembled.dim_in;
  report["dim_out"] = g.assembled.dim_out;

  const gdscap::OptimizationResult opt =
      gdscap::maximize_coherent_information_gds(g, cfg.restarts, cfg.tol, cfg.seed);
  report["q1_optimizer"] = sig12(opt.value);
  report["q1_optimizer_converged"] = opt.converged;
  report["q1_optimizer_gradient_residual"] = sig12(opt.gradient_residual);

  std::vector<std::pair<gdscap::ComplexMatrix, double>> per_block_optima;
  for (const gdscap::KrausChannel& sub : g.subchannels) {
    const gdscap::GdsChannel single = gdscap::build_gds({sub}, sub.name);
    const gdscap::OptimizationResult block_opt =
        gdscap::maximize_coherent_information_gds(single, cfg.restarts, cfg.tol, cfg.seed);
    per_block_optima.emplace_back(block_opt.argument.block_states.at(0), block_opt.value);
  }
  const gdscap::Q1LowerBound lower = gdscap::q1_lower_bound_gds(g, per_block_optima);
  report["q1_lower_analytic"] = sig12(lower.value);
  report["q1_lower_analytic_detail"] = {{"analytic", sig12(lower.analytic)},
                                        {"trivial", sig12(lower.trivial)}};

  const gdscap::BoundCertificate qc = transposition_certificate(g);
  report["q_upper_certificate"] = certificate_json(qc);

  const std::vector<gdscap::Ensemble> ensembles = basis_ensembles(g);
  report["p1_lower"] = sig12(gdscap::p1_lower_bound_gds(g, ensembles));
  report["c1_lower"] = sig12(gdscap::c1_lower_bound_gds(g, ensembles));

  const gdscap::GdsVerdict deg = gdscap::gds_is_degradable(g);
  report["degradable"] = {{"holds", deg.holds}, {"residual", sig12(deg.residual)}};

  const gdscap::SingleLetterVerdict sl = gdscap::check_single_letter(g, {}, match_config(cfg));
  report["single_letter"] = single_letter_json(sl, false);

  emit(cfg, report);
  return qc.feasible ? 0 : 3;
}

int cmd_single_letter(const RunConfig& cfg, const std::string& path, bool pad) {
  const gdscap::GdsChannel g = load_gds(path, pad);
  const gdscap::SingleLetterVerdict v = gdscap::check_single_letter(g, {}, match_config(cfg));
  ordered_json report;
  report["command"] = "single-letter";
  report["input"] = path;
  report["name"] = g.assembled.name;
  report["blocks"] = g.block_count();
  report.update(single_letter_json(v, true));
  emit(cfg, report);
  return 0;
}

int cmd_cdc(const RunConfig& cfg, int p, int n, int alpha) {
  gdscap::CdcParams params;
  params.p = p;
  params.n = n;
  params.alpha = alpha;
  params.validate();

  const gdscap::CdcBounds bounds = gdscap::cdc_bounds(params);
  const gdscap::LambdaWindow window = gdscap::superadditivity_max_lambda(params);
  const double log2_d = params.effective_alpha() * std::log2(double(p));

  ordered_json report;
  report["command"] = "cdc";
  report["p"] = p;
  report["n"] = n;
  report["alpha"] = params.effective_alpha();
  if (log2_d <= 53)
    report["subchannel_dim"] = std::int64_t(std::llround(std::pow(double(p), params.effective_alpha())));
  else
    report["subchannel_dim_log2"] = sig12(log2_d);
  report["blocks"] = n + 1;
  report["q1_lower_bits"] = sig12(bounds.q1_lower_bits);
  report["q_upper_bits"] = sig12(bounds.q_upper_bits);
  report["pc_exact_bits"] = sig12(bounds.pc_exact_bits);
  report["lambda_max"] = sig12(window.lambda_max);
  report["window_certified"] = window.certified;
  report["certified"] = bounds.certified;

  const bool attempted =
      gdscap::cdc_materializable(params) && std::pow(double(p), params.effective_alpha()) <= 1024.5;
  if (attempted) {
    report["q_certificate"] = certificate_json(bounds.q_certificate);
    report["c_certificate"] = certificate_json(bounds.c_certificate);
  } else {
    report["certificates"] = "closed-form only";
  }
  emit(cfg, report);
  if (attempted && !bounds.certified) return 3;
  return 0;
}

int cmd_superadd(const RunConfig& cfg, int p, int n, double lambda) {
  gdscap::CdcParams params;
  params.p = p;
  params.n = n;
  params.validate();
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("superadd: lambda must lie in [0, 1]");

  const gdscap::CdcBounds bounds = gdscap::cdc_bounds(params);
  const gdscap::LambdaWindow window = gdscap::superadditivity_max_lambda(params);
  const long double da = ladder_input_dim(p, n);
  const double erasure_q = std::max(0.0, (1.0 - 2.0 * lambda) * double(std::log2(da)));
  const double joint_closed = (1.0 - lambda) * std::log2(double(n + 1));
  const double sum_upper = bounds.q_upper_bits + erasure_q;
  const double margin = joint_closed - sum_upper;

  ordered_json report;
  report["command"] = "superadd";
  report["p"] = p;
  report["n"] = n;
  report["lambda"] = sig12(lambda);
  report["joint_bits"] = sig12(joint_closed);
  report["q_upper_bits"] = sig12(bounds.q_upper_bits);
  report["q_upper_certified"] = bounds.certified;
  if (bounds.certified) report["q_certificate"] = certificate_json(bounds.q_certificate);
  report["erasure_dim_log2"] = sig12(double(std::log2(da)));
  report["erasure_q_bits"] = sig12(erasure_q);
  report["sum_upper_bits"] = sig12(sum_upper);
  report["margin_bits"] = sig12(margin);
  report["superadditive"] = margin > 0.0;
  report["lambda_max"] = sig12(window.lambda_max);
  report["window_certified"] = window.certified;

  // Numeric confirmation of the joint value when the tensor evaluation fits.
  const bool joint_fits = gdscap::cdc_materializable(params) && da * (da + 1) <= 4096.0L;
  if (joint_fits) {
    const double joint_numeric = gdscap::joint_coherent_information(params, lambda);
    report["joint_evaluation"] = "numeric";
    report["joint_numeric_bits"] = sig12(joint_numeric);
    report["joint_numeric_gap"] = sig12(std::abs(joint_numeric - joint_closed));
  } else {
    report["joint_evaluation"] = "closed-form only";
  }
  emit(cfg, report);
  return 0;
}

int cmd_fig1(const RunConfig& cfg, const std::string& rule_text, int n_min, int n_max) {
  static const std::regex power_rule(R"(^n\^([0-9]+)$)");
  static const std::regex constant_rule(R"(^[0-9]+$)");
  std::smatch match;
  std::function<long long(int)> raw_rule;
  if (std::regex_match(rule_text, match, power_rule)) {
    const int exponent = std::stoi(match[1].str());
    raw_rule = [exponent](int n) {
      long long v = 1;
      for (int k = 0; k < exponent; ++k) v *= n;
      return v;
    };
  } else if (std::regex_match(rule_text, constant_rule)) {
    const long long constant = std::stoll(rule_text);
    raw_rule = [constant](int) { return constant; };
  } else {
    throw std::invalid_argument("fig1: p rule must be an integer or n^k, got '" + rule_text + "'");
  }

  bool clamped = false;
  const std::function<int(int)> rule = [&raw_rule, &clamped](int n) {
    long long p = raw_rule(n);
    if (p > 1'000'000'000LL) throw std::invalid_argument("fig1: p rule overflows at n = " + std::to_string(n));
    if (p < 2) {
      clamped = true;
      p = 2;
    }
    return int(p);
  };
  const std::vector<gdscap::Fig1Row> rows = gdscap::fig1_data(rule, n_min, n_max);

  const std::string base = cfg.out.empty() ? "fig1" : cfg.out;
  const std::string full_path = base + "_full.csv";
  const std::string left_path = base + "_left.csv";
  const std::string right_path = base + "_right.csv";
  {
    std::ofstream full(full_path, std::ios::binary);
    if (!full) throw gdscap::channel_error("cannot open output file: " + full_path);
    gdscap::write_fig1_csv(rows, full);
    std::ofstream left(left_path, std::ios::binary);
    std::ofstream right(right_path, std::ios::binary);
    if (!left || !right) throw gdscap::channel_error("cannot open fig1 output files under " + base);
    left << "n,p,q_upper_bits,private_bits\n";
    right << "n,p,lambda_max\n";
    char buf[160];
    for (const gdscap::Fig1Row& row : rows) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\n", row.n, row.p, row.q_upper_bits,
                    row.private_bits);
      left << buf;
      std::snprintf(buf, sizeof(buf), "%d,%d,%.12g\n", row.n, row.p, row.lambda_max);
      right << buf;
    }
  }

  ordered_json summary;
  summary["command"] = "fig1";
  summary["p_rule"] = rule_text;
  summary["n_min"] = n_min;
  summary["n_max"] = n_max;
  summary["rows"] = rows.size();
  summary["files"] = {full_path, left_path, right_path};
  if (clamped) summary["note"] = "p rule clamped to the minimum ladder base 2 for small n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_oracle(const RunConfig& cfg, const std::string& path, bool pad) {
  const std::string text = read_file(path);
  const bool is_gds = gdscap::json_text_is_gds(text);
  gdscap::GdsChannel g = load_gds(path, pad);
  const gdscap::KrausChannel& ch = g.assembled;
  if (Eigen::Index(ch.dim_in) * ch.dim_out > 4096)
    throw std::invalid_argument("oracle: dimension guard exceeded (Choi side beyond 4096)");

  const gdscap::ComplexMatrix cpt =
      gdscap::partial_transpose(gdscap::choi(ch), ch.dim_in, ch.dim_out);
  const double estimate =
      gdscap::diamond_norm_oracle(cpt, ch.dim_in, ch.dim_out, cfg.restarts, cfg.seed);

  ordered_json report;
  report["command"] = "oracle";
  report["input"] = path;
  report["name"] = ch.name;
  report["dim_in"] = ch.dim_in;
  report["dim_out"] = ch.dim_out;
  report["diamond_norm_estimate"] = sig12(estimate);
  report["log2_estimate"] = sig12(std::log2(estimate));
  if (is_gds && g.block_count() > 1) {
    const gdscap::BoundCertificate qc = transposition_certificate(g);
    report["witness_y"] = sig12(qc.y);
    report["witness_feasible"] = qc.feasible;
    report["sandwich_ok"] = estimate <= qc.y + 1e-7;
  }
  emit(cfg, report);
  return 0;
}

bool guard_message(const std::string& text) {
  return text.find("guard exceeded") != std::string::npos ||
         text.find("too large") != std::string::npos;
}

int run_guarded(const RunConfig& cfg, const std::string& command,
                const std::function<int()>& body) {
  try {
    return body();
  } catch (const gdscap::channel_error& e) {
    ordered_json report;
    report["command"] = command;
    report["error"] = e.what();
    emit(cfg, report);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    ordered_json report;
    report["command"] = command;
    report["error"] = e.what();
    emit(cfg, report);
    std::cerr << "error: " << e.what() << "\n";
    return guard_message(e.what()) ? 4 : 2;
  } catch (const std::exception& e) {
    ordered_json report;
    report["command"] = command;
    report["error"] = e.what();
    emit(cfg, report);
    std::cerr << "error: " << e.what() << "\n";
    return guard_message(e.what()) ? 4 : 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized direct sum channel toolbox: validation, capacity bounds, "
               "witness certificates, and the depolarizing-ladder family"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "base RNG seed for optimizers and searches")
      ->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "optimizer restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "optimizer convergence tolerance")->capture_default_str();
  app.add_option("--out", cfg.out, "write the report here (fig1: base path for the CSV files)");
  app.add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::string path;
  bool pad = false;
  int p = 2, n = 1, alpha = -1, n_min = 1, n_max = 10;
  double lambda = 0.5;
  std::string p_rule = "2";

  CLI::App* validate = app.add_subcommand("validate", "check a channel or direct-sum JSON spec");
  validate->add_option("path", path, "channel or GDS JSON file")->required();
  validate->add_flag("--pad", pad, "zero-pad subchannel Kraus lists to a common count");
  validate->fallthrough();

  CLI::App* bounds = app.add_subcommand(
      "bounds", "capacity bounds, witness certificate, and predicate verdicts for a GDS spec");
  bounds->add_option("path", path, "GDS JSON file")->required();
  bounds->add_flag("--pad", pad, "zero-pad subchannel Kraus lists to a common count");
  bounds->fallthrough();

  CLI::App* single_letter =
      app.add_subcommand("single-letter", "single-letter capacity verdict for a GDS spec");
  single_letter->add_option("path", path, "GDS JSON file")->required();
  single_letter->add_flag("--pad", pad, "zero-pad subchannel Kraus lists to a common count");
  single_letter->fallthrough();

  CLI::App* cdc = app.add_subcommand(
      "cdc", "bounds and certificates for the completely-depolarizing ladder");
  cdc->add_option("--p", p, "ladder base (block dimensions p^i -> p^(alpha-i))")->required();
  cdc->add_option("--n", n, "number of blocks minus one")->required();
  cdc->add_option("--alpha", alpha, "ladder exponent (default n)");
  cdc->fallthrough();

  CLI::App* superadd = app.add_subcommand(
      "superadd", "joint coherent information of the ladder with an erasure partner");
  superadd->add_option("--p", p, "ladder base")->required();
  superadd->add_option("--n", n, "number of blocks minus one")->required();
  superadd->add_option("--lambda", lambda, "erasure probability")->required();
  superadd->fallthrough();

  CLI::App* fig1 = app.add_subcommand(
      "fig1", "capacity-versus-n tables for the ladder family (three CSV files)");
  fig1->add_option("--p-rule", p_rule, "p as a function of n: an integer or n^k")->required();
  fig1->add_option("--n-max", n_max, "largest n")->required();
  fig1->add_option("--n-min", n_min, "smallest n")->capture_default_str();
  fig1->fallthrough();

  CLI::App* oracle = app.add_subcommand(
      "oracle", "diamond-norm lower estimate of the transposed channel, against the witness cap");
  oracle->add_option("path", path, "channel or GDS JSON file")->required();
  oracle->add_flag("--pad", pad, "zero-pad subchannel Kraus lists to a common count");
  oracle->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (*validate)
    return run_guarded(cfg, "validate", [&] { return cmd_validate(cfg, path, pad); });
  if (*bounds) return run_guarded(cfg, "bounds", [&] { return cmd_bounds(cfg, path, pad); });
  if (*single_letter)
    return run_guarded(cfg, "single-letter", [&] { return cmd_single_letter(cfg, path, pad); });
  if (*cdc) return run_guarded(cfg, "cdc", [&] { return cmd_cdc(cfg, p, n, alpha); });
  if (*superadd)
    return run_guarded(cfg, "superadd", [&] { return cmd_superadd(cfg, p, n, lambda); });
  if (*fig1) return run_guarded(cfg, "fig1", [&] { return cmd_fig1(cfg, p_rule, n_min, n_max); });
  if (*oracle) return run_guarded(cfg, "oracle", [&] { return cmd_oracle(cfg, path, pad); });
  return 0;
}
