// Command-line front end. Every subcommand builds a config document
// (from --config, then AMPLE_SEED, then flags, later sources winning) and
// hands it to ample::cli::run_document.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ample/cli/config.hpp"
#include "ample/cli/run.hpp"

namespace {

using ample::cli::json;

struct Flags {
  std::string config_path;
  std::string out_path;
  std::optional<int> r;
  std::optional<std::string> a, b, omega_sq;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, threads, vectors;
  std::optional<double> epsilon;
  std::vector<int> ranks;
  std::vector<double> epsilons;
  std::optional<std::string> histogram_csv, mode;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ample::ParseError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ample::ParseError("", std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

json& object_at(json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_object()) doc[key] = json::object();
  return doc[key];
}

void apply_flags(const std::string& command, const Flags& f, json& doc) {
  if (f.r) doc["r"] = *f.r;
  if (f.a) doc["a"] = *f.a;
  if (f.b) doc["b"] = *f.b;
  if (f.omega_sq) doc["omega_sq"] = *f.omega_sq;
  if (command == "verify-lemma") {
    const bool any = f.samples || f.seed || f.restarts || f.threads || f.vectors || !f.ranks.empty() ||
                     !f.epsilons.empty() || f.histogram_csv || f.mode;
    if (!any) return;
    json& s = object_at(doc, "sweep");
    if (f.samples) s["samples"] = *f.samples;
    if (f.seed) s["seed"] = *f.seed;
    if (f.restarts) s["restarts"] = *f.restarts;
    if (f.threads) s["threads"] = *f.threads;
    if (f.vectors) s["vectors"] = *f.vectors;
    if (!f.ranks.empty()) s["r"] = f.ranks;
    if (!f.epsilons.empty()) s["epsilon"] = f.epsilons;
    if (f.histogram_csv) s["histogram_csv"] = *f.histogram_csv;
    if (f.mode) s["mode"] = *f.mode;
  } else if (command == "lagrange") {
    json& l = object_at(doc, "lagrange");
    if (f.samples) l["samples"] = *f.samples;
    if (f.seed) l["seed"] = *f.seed;
  } else if (command == "griffiths") {
    if (f.r || f.epsilon || f.seed || f.mode) {
      json& c = object_at(doc, "curvature");
      if (f.r) c["r"] = *f.r;
      if (f.epsilon) c["epsilon"] = *f.epsilon;
      if (f.seed) c["seed"] = *f.seed;
      if (f.mode) c["mode"] = *f.mode;
      doc.erase("r");
    }
    if (f.restarts) doc["restarts"] = *f.restarts;
  }
}

int execute(const std::string& command, const Flags& f) {
  ample::cli::RunOutcome outcome;
  json doc;
  try {
    doc = load_config(f.config_path);
    if (!doc.is_object()) throw ample::ParseError("", "config document must be a JSON object");
    doc["command"] = command;
    if (const char* env = std::getenv("AMPLE_SEED"); env && *env) ample::cli::apply_seed_override(doc, env);
    apply_flags(command, f, doc);
    outcome = ample::cli::run_document(doc);
  } catch (const ample::ParseError& e) {
    outcome = ample::cli::detail::error_outcome(command, nullptr, "parse-error", e.what(), e.path());
  }

  std::string out_path = f.out_path;
  if (out_path.empty() && doc.is_object() && doc.contains("output_path") && doc["output_path"].is_string())
    out_path = doc["output_path"].get<std::string>();
  const std::string text = ample::cli::render(outcome.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "ample: cannot write report to '" << out_path << "'\n";
      return ample::cli::exit_status_for("error");
    }
    out << text;
    std::cerr << "ample " << command << ": " << outcome.report["verdict"].get<std::string>() << " -> " << out_path
              << "\n";
  }
  return outcome.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ampleness criteria for vector bundles on surfaces: exact Chern-number checks and a "
               "pointwise curvature laboratory"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON config document");
    sub->add_option("--out", f.out_path, "write the JSON report here instead of stdout");
  };

  auto* check = app.add_subcommand("check", "numerical hypotheses of the rank-r criterion");
  auto* st = app.add_subcommand("st-check", "numerical hypotheses of the rank-two criterion");
  auto* nakai = app.add_subcommand("nakai", "Nakai-Moishezon necessary conditions over listed curves");
  auto* epsilon = app.add_subcommand("epsilon", "approximation parameter for the Hermitian-Einstein metric");
  auto* ce = app.add_subcommand("counterexample", "exact identities of the L + H + ... + H family");
  auto* lemma = app.add_subcommand("verify-lemma", "Monte Carlo check of the pointwise curvature inequality");
  auto* lag = app.add_subcommand("lagrange", "closed-form maximum vs projected gradient");
  auto* grif = app.add_subcommand("griffiths", "Griffiths positivity of a sampled point curvature");
  for (auto* sub : {check, st, nakai, epsilon, ce, lemma, lag, grif}) common(sub);

  epsilon->add_option("--omega-sq", f.omega_sq, "integral of omega^2 as p/q");
  ce->add_option("-r", f.r, "rank (>= 3)");
  ce->add_option("-a", f.a, "c1(L).c1(H) as p/q");
  ce->add_option("-b", f.b, "override c1(H)^2 (default (r-2)a/(r-1))");

  lemma->add_option("--samples", f.samples, "curvatures per (r, epsilon)");
  lemma->add_option("--seed", f.seed, "base seed (beats AMPLE_SEED)");
  lemma->add_option("--restarts", f.restarts, "adversarial search restarts");
  lemma->add_option("--vectors", f.vectors, "random unit vectors per curvature");
  lemma->add_option("--threads", f.threads, "worker threads (0 = all cores); never changes the report");
  lemma->add_option("--ranks", f.ranks, "ranks to sweep");
  lemma->add_option("--epsilons", f.epsilons, "epsilons to sweep");
  lemma->add_option("--histogram-csv", f.histogram_csv, "CSV export of per-sample gap histograms");
  lemma->add_option("--mode", f.mode, "random | projectively-flat");

  lag->add_option("--samples", f.samples, "random (r, mu, B) instances");
  lag->add_option("--seed", f.seed, "seed (beats AMPLE_SEED)");

  grif->add_option("-r,--rank", f.r, "rank");
  grif->add_option("--epsilon", f.epsilon, "HE defect bound");
  grif->add_option("--seed", f.seed, "sampler seed (beats AMPLE_SEED)");
  grif->add_option("--restarts", f.restarts, "search restarts");
  grif->add_option("--mode", f.mode, "random | projectively-flat");

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), f);
  return ample::cli::exit_status_for("error");
}
