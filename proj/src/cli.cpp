// Copyright 2026 The hypercube-pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pam/evolution.hpp"
#include "pam/fkmc.hpp"
#include "pam/harness.hpp"
#include "pam/io.hpp"
#include "pam/spectral.hpp"

namespace pam {

namespace {

const char* const kListKeys[] = {"seeds", "ranks", "alpha_grid", "lemma_n", "lemma_times"};
const char* const kScalarKeys[] = {"n",          "kappa",   "alpha_mode", "tol",
                                   "evolve_tol", "krylov_dim", "threads", "output",
                                   "timestamp",  "small_n", "geometry_n", "geometry_seeds"};

Json parse_override(const std::string& key, const std::string& text) {
  const bool list = std::find_if(std::begin(kListKeys), std::end(kListKeys),
                                 [&](const char* k) { return key == k; }) != std::end(kListKeys);
  std::string body = text;
  if (list && (body.empty() || body.front() != '[')) body = "[" + body + "]";
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::exception&) {
    if (list) throw InvalidArgument("--" + key + " expects a comma separated list");
    return Json(text);
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed number '" + item + "'");
    }
  }
  return values;
}

struct Emitter {
  std::ostream& out;
  std::ostream& err;
  const ExperimentConfig& config;

  // Writes the payload to the configured file or stdout; the summary goes to
  // stdout when the payload went to a file.
  void emit(const std::string& payload, const std::string& summary) const {
    if (config.output.empty()) {
      out << payload;
      err << summary << '\n';
    } else {
      write_text_file(config.output, payload);
      out << summary << " -> " << config.output << '\n';
    }
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for the parabolic Anderson model on the hypercube", "pam"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string seed_flag, kind_flag, tail_flag, beta_flag, level_flag;
  bool no_timestamp = false;

  // Subcommand-specific parameters.
  std::string field_path, initial = "delta", times_text = "1,2,5,10", method = "automatic";
  std::string target = "total_mass";
  int rank_i = 1, rank_l = 1, start_rank = 1, x_rank = 1, y_rank = 1;
  bool want_gap = false, want_vector = false;
  double t_fk = 1.0, horizon = 0.0;
  std::int64_t samples = 100000;

  std::vector<CLI::App*> subs;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    for (const char* key : kListKeys) options[sub->get_name() + key] = sub->add_option(std::string("--") + key, values[key]);
    for (const char* key : kScalarKeys) options[sub->get_name() + key] = sub->add_option(std::string("--") + key, values[key]);
    sub->add_option("--seed", seed_flag, "single seed, replaces the seed list");
    sub->add_option("--kind", kind_flag, "potential kind");
    sub->add_option("--tail", tail_flag, "tail for custom-tail potentials");
    sub->add_option("--beta", beta_flag, "stretched-tail exponent");
    sub->add_option("--level", level_flag, "value of the constant potential");
    sub->add_flag("--no-timestamp", no_timestamp, "omit the timestamp header line");
    subs.push_back(sub);
  };

  auto* sample = app.add_subcommand("sample", "sample a potential field (JSON)");
  add_common(sample);
  auto* eig = app.add_subcommand("eig", "principal eigenpair for ranks (i, l) (JSON)");
  add_common(eig);
  eig->add_option("--field", field_path, "field JSON instead of sampling");
  eig->add_option("--i", rank_i, "peak rank");
  eig->add_option("--l", rank_l, "boundary rank");
  eig->add_flag("--gap", want_gap, "also compute the spectral gap");
  eig->add_flag("--vector", want_vector, "embed the eigenvector as base64");
  auto* evolve = app.add_subcommand("evolve", "evolve the solution and record growth (CSV)");
  add_common(evolve);
  evolve->add_option("--field", field_path, "field JSON instead of sampling");
  evolve->add_option("--initial", initial, "delta or flat")->check(CLI::IsMember({"delta", "flat"}));
  evolve->add_option("--start-rank", start_rank, "rank of y for the delta start");
  evolve->add_option("--times", times_text, "comma separated increasing times");
  evolve->add_option("--method", method, "automatic, dense or krylov")
      ->check(CLI::IsMember({"automatic", "dense", "krylov"}));
  auto* fk = app.add_subcommand("fk", "Feynman-Kac Monte Carlo estimate (JSON)");
  add_common(fk);
  fk->add_option("--field", field_path, "field JSON instead of sampling");
  fk->add_option("--target", target, "total_mass, endpoint or eigenfunction")
      ->check(CLI::IsMember({"total_mass", "endpoint", "eigenfunction"}));
  fk->add_option("--x-rank", x_rank, "rank of the start vertex x");
  fk->add_option("--y-rank", y_rank, "rank of y (start of total_mass, end of endpoint)");
  fk->add_option("--t", t_fk, "time horizon");
  fk->add_option("--samples", samples, "number of walks");
  fk->add_option("--horizon", horizon, "censoring time for eigenfunction walks (default 50/kappa)");
  fk->add_option("--i", rank_i, "peak rank for eigenfunction");
  fk->add_option("--l", rank_l, "boundary rank for eigenfunction");
  auto* growth = app.add_subcommand("sweep-growth", "growth phase sweep (CSV)");
  add_common(growth);
  auto* local = app.add_subcommand("sweep-localization", "localization sweep (CSV)");
  add_common(local);
  auto* lemmas = app.add_subcommand("check-lemmas", "spectral and geometric checks (JSON)");
  add_common(lemmas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }
  CLI::App* active = app.get_subcommands().front();

  ExperimentConfig config;
  try {
    Json j = Json::object();
    if (!config_path.empty()) j = read_json_file(config_path);
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    if (const char* env = std::getenv("PAM_SEED"); env && *env) {
      try {
        j["seeds"] = Json::array({std::stoull(env)});
      } catch (const std::exception&) {
        throw InvalidArgument("PAM_SEED must be a nonnegative integer");
      }
    }
    for (auto& [key, text] : values)
      if (options[active->get_name() + key]->count()) j[key] = parse_override(key, text);
    auto& pot = j["potential"];
    if (pot.is_string()) pot = Json{{"kind", pot.get<std::string>()}};
    if (pot.is_null()) pot = Json::object();
    if (!kind_flag.empty()) pot["kind"] = kind_flag;
    if (!tail_flag.empty()) pot["tail"] = tail_flag;
    if (!beta_flag.empty()) pot["beta"] = parse_override("beta", beta_flag);
    if (!level_flag.empty()) pot["value"] = parse_override("value", level_flag);
    if (!seed_flag.empty()) j["seeds"] = parse_override("seeds", seed_flag);
    if (no_timestamp) j["timestamp"] = false;
    config = config_from_json(j);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const Emitter emitter{out, err, config};
  const std::string name = active->get_name();
  try {
    auto load_field = [&]() {
      if (!field_path.empty()) return field_from_json(read_json_file(field_path));
      return make_field(config, config.seeds.front(), config.n);
    };

    if (name == "sample") {
      const auto field = make_field(config, config.seeds.front(), config.n);
      std::ostringstream summary;
      summary << "sample: n=" << field.n() << " seed=" << field.seed() << " kind=" << field.kind()
              << " max=" << field.value_at_rank(1);
      emitter.emit(field_to_json(field).dump() + "\n", summary.str());
      return 0;
    }
    if (name == "eig") {
      const auto field = load_field();
      SpectralOptions so;
      so.tol = config.tol;
      so.compute_gap = want_gap;
      const auto r = principal_eig(config.kappa, field, rank_i, rank_l, so);
      std::ostringstream summary;
      summary.precision(12);
      summary << "eig: lambda=" << r.lambda << " residual=" << r.residual << " peak=" << r.peak;
      if (r.gap) summary << " gap=" << *r.gap;
      emitter.emit(spectral_to_json(r, want_vector).dump(2) + "\n", summary.str());
      return 0;
    }
    if (name == "evolve") {
      const auto field = load_field();
      PropagateOptions po;
      po.tol = config.evolve_tol;
      po.krylov_dim = config.krylov_dim;
      po.method = method == "dense"    ? PropagatorMethod::dense
                  : method == "krylov" ? PropagatorMethod::krylov
                                       : PropagatorMethod::automatic;
      const auto times = parse_list(times_text);
      const Index y = field.vertex_at_rank(start_rank);
      const auto records = initial == "flat" ? solve_flat(config.kappa, field, times, {}, po)
                                             : solve_from_delta(y, config.kappa, field, times, {}, po);
      std::ostringstream csv, summary;
      write_growth_csv(csv, records, field);
      summary << "evolve: " << records.size() << " records, final log_total_mass="
              << records.back().log_total_mass;
      emitter.emit(csv.str(), summary.str());
      return 0;
    }
    if (name == "fk") {
      const auto field = load_field();
      const std::uint64_t seed = config.seeds.front();
      MCOptions mo;
      mo.threads = config.threads;
      MCEstimate est;
      if (target == "total_mass") {
        est = estimate_total_mass(field.vertex_at_rank(y_rank), t_fk, config.kappa, field, samples,
                                  seed, mo);
      } else if (target == "endpoint") {
        est = estimate_endpoint(field.vertex_at_rank(x_rank), field.vertex_at_rank(y_rank), t_fk,
                                config.kappa, field, samples, seed, mo);
      } else {
        SpectralOptions so;
        so.tol = config.tol;
        const auto r = principal_eig(config.kappa, field, rank_i, rank_l, so);
        est = estimate_eigenfunction(field.vertex_at_rank(x_rank), r.peak, r.lambda, r.boundary,
                                     config.kappa, field, samples,
                                     horizon > 0.0 ? horizon : 50.0 / config.kappa, seed, mo);
      }
      std::ostringstream summary;
      summary.precision(12);
      summary << "fk: " << est.target << " mean=" << est.mean << " std_error=" << est.std_error;
      emitter.emit(estimate_to_json(est).dump(2) + "\n", summary.str());
      return 0;
    }
    if (name == "sweep-growth") {
      const auto rows = run_phase_sweep(config);
      std::ostringstream csv, summary;
      write_sweep_csv(csv, rows, config);
      const auto errors = std::count_if(rows.begin(), rows.end(),
                                        [](const SweepRow& r) { return r.status != "ok"; });
      summary << "sweep-growth: " << rows.size() << " rows, " << errors << " error rows";
      emitter.emit(csv.str(), summary.str());
      return errors ? 1 : 0;
    }
    if (name == "sweep-localization") {
      const auto rows = run_localization_sweep(config);
      std::ostringstream csv, summary;
      write_localization_csv(csv, rows, config);
      const auto errors = std::count_if(rows.begin(), rows.end(),
                                        [](const LocalizationRow& r) { return r.status != "ok"; });
      summary << "sweep-localization: " << rows.size() << " rows, " << errors << " error rows";
      emitter.emit(csv.str(), summary.str());
      return errors ? 1 : 0;
    }
    if (name == "check-lemmas") {
      const auto report = run_lemma_checks(config);
      std::ostringstream summary;
      summary << "check-lemmas: " << report["checks"].size() << " checks, "
              << report["failed"].size() << " failed";
      if (!report["failed"].empty()) summary << " (first: " << report["failed"][0].get<std::string>() << ")";
      emitter.emit(report.dump(2) + "\n", summary.str());
      return report["passed"].get<bool>() ? 0 : 1;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace pam
