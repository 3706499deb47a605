#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "gstree/cantor.hpp"
#include "gstree/checks.hpp"
#include "gstree/errors.hpp"
#include "gstree/montecarlo.hpp"
#include "gstree/report.hpp"
#include "gstree/sequence.hpp"
#include "gstree/trees.hpp"
#include "gstree/verdict.hpp"

namespace {

using nlohmann::json;
using namespace gstree;

// Fixed default seed so demo runs reproduce without flags.
constexpr std::uint64_t kDefaultSeed = 20240501;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::string subcommand;
  std::string config_path;
  std::string family = "geometric:0.5";
  std::string seq_file;
  std::string tree = "binary";
  std::string tree_file;
  int depth = 10;
  std::vector<std::int64_t> depths;
  std::int64_t replicas = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t horizon = kDefaultHorizon;
  double tol = 1e-6;
  std::string out_dir;
  std::string format = "csv";
  int workers = 1;
  std::string statistic = "level_max_abs";
  std::string field_dump;
  long walsh_k = -1;
  std::string families_filter = "*";
  bool inject_fault = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

SequenceModel parse_family(const Options& opt) {
  if (!opt.seq_file.empty()) return load_sequence_file(opt.seq_file);
  const std::string& f = opt.family;
  const auto colon = f.find(':');
  const std::string head = f.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : f.substr(colon + 1);
  if (head == "geometric") return SequenceModel::geometric(std::stod(arg));
  if (head == "power") return SequenceModel::power(std::stod(arg));
  if (head == "remark-lacunary") return SequenceModel::lacunary_pow2();
  if (head == "remark-even") return SequenceModel::even_index();
  if (head == "ones") return SequenceModel::constant_prefix(std::stol(arg));
  if (head == "spike") return SequenceModel::finite({1.0});
  if (head == "zero") return SequenceModel::finite({});
  if (head == "finite") {
    std::vector<double> v;
    for (const std::string& tok : split(arg, ',')) v.push_back(std::stod(tok));
    return SequenceModel::finite(std::move(v));
  }
  throw std::invalid_argument("unknown sequence family: " + f);
}

std::variant<DegreeProfile, TreeSpec> parse_tree(const Options& opt) {
  if (!opt.tree_file.empty()) {
    std::ifstream in(opt.tree_file);
    if (!in) throw std::invalid_argument("cannot open tree file: " + opt.tree_file);
    return TreeSpec::parse(in);
  }
  const std::string& t = opt.tree;
  if (t == "binary") return DegreeProfile::constant(2);
  if (t == "ternary") return DegreeProfile::constant(3);
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (head == "constant") return DegreeProfile::constant(std::stol(arg));
  if (head == "profile") {
    std::vector<long> q;
    for (const std::string& tok : split(arg, ',')) q.push_back(std::stol(tok));
    return DegreeProfile::from_list(std::move(q));
  }
  throw std::invalid_argument("unknown tree spec: " + t);
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ':' || c == ',' || c == '/' || c == ' ') c = '-';
  return s;
}

json options_json(const Options& opt) {
  json j;
  j["subcommand"] = opt.subcommand;
  j["family"] = opt.family;
  j["seq_file"] = opt.seq_file;
  j["tree"] = opt.tree;
  j["tree_file"] = opt.tree_file;
  j["depth"] = opt.depth;
  j["depths"] = opt.depths;
  j["replicas"] = opt.replicas;
  j["seed"] = opt.seed;
  j["horizon"] = opt.horizon;
  j["tol"] = opt.tol;
  j["out_dir"] = opt.out_dir;
  j["format"] = opt.format;
  j["workers"] = opt.workers;
  j["statistic"] = opt.statistic;
  return j;
}

void emit_manifest(const Options& opt, const std::string& stem) {
  write_file_atomic(opt.out_dir + "/" + stem + "_manifest.json",
                    manifest_json(options_json(opt).dump(), opt.seed,
                                  utc_timestamp()));
}

void print_verdict(const VerdictReport& v) {
  std::printf("decision: %s\n", to_string(v.decision));
  std::printf("criterion: %s\n", to_string(v.criterion));
  std::printf("partial sum: %.12g (status %s, tail bound %.3g)\n",
              v.evidence.value, to_string(v.evidence.status),
              v.evidence.tail_bound);
  std::printf("horizon: %lld, assumptions %s\n",
              static_cast<long long>(v.horizon), v.assumption_ok ? "ok" : "FAILED");
  if (!v.notes.empty()) std::printf("notes: %s\n", v.notes.c_str());
}

int cmd_criterion(const Options& opt) {
  const SequenceModel model = parse_family(opt);
  const auto tree = parse_tree(opt);
  const VerdictReport v =
      std::holds_alternative<DegreeProfile>(tree)
          ? boundedness_verdict(std::get<DegreeProfile>(tree), model, opt.horizon)
          : boundedness_verdict(std::get<TreeSpec>(tree), model, opt.horizon);
  print_verdict(v);
  if (model.nonnegative()) {
    const ConditionReport c = condition_report(model, opt.horizon);
    std::printf("conditions at horizon %lld:\n",
                static_cast<long long>(opt.horizon));
    std::printf("  variation sum k|a_k - a_k+1|: %-12.6g %s\n",
                c.variation.value, to_string(c.c1));
    std::printf("  series Q:                     %-12.6g %s\n", c.q.value,
                to_string(c.c2));
    std::printf("  sum a_k:                      %-12.6g %s\n", c.sum_abs.value,
                to_string(c.c3));
  }
  if (!opt.out_dir.empty()) {
    const std::string stem =
        "criterion_" + sanitize(model.describe()) + "_" + sanitize(opt.tree);
    write_file_atomic(opt.out_dir + "/" + stem + ".json", verdict_json(v));
    emit_manifest(opt, stem);
  }
  return kExitOk;
}

Statistic parse_statistic(const std::string& s) {
  if (s == "level_max_abs") return Statistic::level_max_abs;
  if (s == "level_max_signed") return Statistic::level_max_signed;
  if (s == "running_max") return Statistic::running_max;
  throw std::invalid_argument("unknown statistic: " + s);
}

int cmd_simulate(const Options& opt) {
  const SequenceModel model = parse_family(opt);
  const auto tree = parse_tree(opt);
  if (!std::holds_alternative<DegreeProfile>(tree))
    throw std::invalid_argument("simulate requires a degree profile tree");
  RunConfig config{std::get<DegreeProfile>(tree), model, opt.depth, opt.replicas,
                   opt.seed};
  config.workers = opt.workers;
  const RunStats stats = estimate_moments(config, parse_statistic(opt.statistic));
  const std::string csv = run_stats_csv(stats);
  std::fputs(csv.c_str(), stdout);
  if (!opt.out_dir.empty()) {
    std::ostringstream stem;
    stem << "simulate_" << sanitize(opt.tree) << "_" << sanitize(model.describe())
         << "_d" << opt.depth << "_r" << opt.replicas << "_s" << opt.seed;
    write_file_atomic(opt.out_dir + "/" + stem.str() + ".csv", csv);
    emit_manifest(opt, stem.str());
  }
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  CheckOptions check_opts;
  if (opt.inject_fault) check_opts.parseval_perturbation = 1e-6;
  std::vector<CheckResult> results = run_identity_checks(check_opts);

  if (opt.families_filter != "*") {
    const auto keep = split(opt.families_filter, ',');
    std::erase_if(results, [&](const CheckResult& r) {
      for (const auto& f : keep)
        if (r.name.size() > f.size() &&
            r.name.compare(r.name.size() - f.size(), f.size(), f) == 0)
          return false;
      return true;
    });
  }

  // Desk-scale property checks on top of the identity battery.
  {
    CheckResult r;
    r.name = "coupling-order/binary-in-ternary";
    const auto pairs =
        coupled_domination(DegreeProfile::constant(2), DegreeProfile::constant(3),
                           SequenceModel::geometric(0.5), 8, opt.seed, 100);
    r.pass = true;
    for (const auto& [sub, super] : pairs)
      if (sub > super) r.pass = false;
    r.detail = "pathwise M_sub <= M_super over 100 replicas";
    results.push_back(std::move(r));
  }
  {
    CheckResult r;
    r.name = "determinism/replica-streams";
    RunConfig config{DegreeProfile::constant(2), SequenceModel::geometric(0.5), 8,
                     64, opt.seed};
    config.workers = 1;
    const RunStats a = estimate_moments(config);
    config.workers = 4;
    const RunStats b = estimate_moments(config);
    r.pass = a.mean == b.mean && a.second_moment == b.second_moment &&
             a.half_width == b.half_width;
    r.detail = "worker counts 1 and 4 agree exactly";
    results.push_back(std::move(r));
  }

  int failures = 0;
  for (const CheckResult& r : results) {
    std::printf("%-45s %s%s%s\n", r.name.c_str(), r.pass ? "pass" : "FAIL: ",
                r.pass ? "" : r.detail.c_str(), "");
    if (!r.pass) ++failures;
  }
  if (results.empty())
    std::printf("warning: no checks selected by filter '%s'\n",
                opt.families_filter.c_str());
  std::printf("%zu checks, %d failures\n", results.size(), failures);
  return failures == 0 ? kExitOk : kExitViolation;
}

int cmd_cantor(const Options& opt) {
  const SequenceModel model = parse_family(opt);
  if (!model.finite_support())
    throw std::invalid_argument("cantor analysis requires a finite-support family");
  const long k = opt.walsh_k > 0 ? opt.walsh_k
                                 : std::max<long>(model.support_end() + 2, 2);
  if (k > 24) throw resource_error("walsh index K > 24 exceeds the 2^K budget");

  const ParsevalCheck p = parseval_check(model, k);
  std::printf("parseval: walsh %.12g vs direct %.12g (diff %.3g)\n", p.lhs,
              p.rhs, p.diff);
  const double blockwise = entropy_integral(model, EntropyMethod::blockwise);
  const double quadrature = entropy_integral(model, EntropyMethod::quadrature);
  std::printf("entropy integral: blockwise %.12g, quadrature %.12g\n", blockwise,
              quadrature);

  if (!opt.field_dump.empty()) {
    const auto field = simulate_walsh_series(model, k, opt.seed);
    write_field_dump(opt.field_dump, field);
    long double var = 0.0L;
    for (double v : field) var += static_cast<long double>(v) * v;
    std::printf("field dump: %zu points to %s (empirical second moment %.6g)\n",
                field.size(), opt.field_dump.c_str(),
                static_cast<double>(var / static_cast<double>(field.size())));
  }
  return kExitOk;
}

int cmd_report(const Options& opt) {
  const SequenceModel model = parse_family(opt);
  const auto tree = parse_tree(opt);
  if (!std::holds_alternative<DegreeProfile>(tree))
    throw std::invalid_argument("report requires a degree profile tree");
  std::vector<std::int64_t> depths = opt.depths;
  if (depths.empty()) depths = {8, 12, 16, 20};
  const SandwichTable table =
      sandwich_experiment(std::get<DegreeProfile>(tree), model, depths,
                          opt.replicas, opt.seed, opt.workers);
  const std::string csv = sandwich_csv(table);
  std::fputs(csv.c_str(), stdout);
  std::printf("ratio spread: [%.6g, %.6g]\n", table.min_ratio, table.max_ratio);
  if (!opt.out_dir.empty()) {
    std::ostringstream stem;
    stem << "sandwich_" << sanitize(opt.tree) << "_" << sanitize(model.describe())
         << "_r" << opt.replicas << "_s" << opt.seed;
    write_file_atomic(opt.out_dir + "/" + stem.str() + ".csv", csv);
    emit_manifest(opt, stem.str());
  }
  return kExitOk;
}

void apply_config_file(Options& opt, const CLI::App& app) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) throw std::invalid_argument("cannot open config: " + opt.config_path);
  json j = json::parse(in);
  // Flags win over config values.
  auto absent = [&](const char* flag) {
    const CLI::Option* o = app.get_option_no_throw(flag);
    return o == nullptr || o->count() == 0;
  };
  if (j.contains("family") && absent("--family")) opt.family = j["family"];
  if (j.contains("seq_file") && absent("--seq-file")) opt.seq_file = j["seq_file"];
  if (j.contains("tree") && absent("--tree")) opt.tree = j["tree"];
  if (j.contains("tree_file") && absent("--tree-file")) opt.tree_file = j["tree_file"];
  if (j.contains("depth") && absent("--depth")) opt.depth = j["depth"];
  if (j.contains("depths") && absent("--depths"))
    opt.depths = j["depths"].get<std::vector<std::int64_t>>();
  if (j.contains("replicas") && absent("--replicas")) opt.replicas = j["replicas"];
  if (j.contains("seed") && absent("--seed")) opt.seed = j["seed"];
  if (j.contains("horizon") && absent("--horizon")) opt.horizon = j["horizon"];
  if (j.contains("tol") && absent("--tol")) opt.tol = j["tol"];
  if (j.contains("out_dir") && absent("--out-dir")) opt.out_dir = j["out_dir"];
  if (j.contains("format") && absent("--format")) opt.format = j["format"];
  if (j.contains("workers") && absent("--workers")) opt.workers = j["workers"];
  if (j.contains("statistic") && absent("--statistic"))
    opt.statistic = j["statistic"];
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (const char* env = std::getenv("GSTREE_OUT_DIR")) opt.out_dir = env;

  CLI::App app{"Boundedness analysis of Gaussian random sums on rooted trees"};
  app.require_subcommand(1);

  CLI::App* sub_criterion = app.add_subcommand(
      "criterion", "Evaluate the series criterion and print a verdict");
  CLI::App* sub_simulate = app.add_subcommand(
      "simulate", "Monte Carlo estimates of boundary maxima moments");
  CLI::App* sub_verify =
      app.add_subcommand("verify", "Run the identity and property battery");
  CLI::App* sub_cantor = app.add_subcommand(
      "cantor", "Walsh expansion, Parseval check, entropy integral");
  CLI::App* sub_report =
      app.add_subcommand("report", "Sandwich-ratio table across depths");

  for (CLI::App* s :
       {sub_criterion, sub_simulate, sub_verify, sub_cantor, sub_report}) {
    s->add_option("--config", opt.config_path, "JSON config file; flags win");
    s->add_option("--family", opt.family,
                  "geometric:R | power:P | remark-lacunary | remark-even | "
                  "ones:N | spike | zero | finite:v1,v2,...");
    s->add_option("--seq-file", opt.seq_file, "one value per line");
    s->add_option("--tree", opt.tree,
                  "binary | ternary | constant:Q | profile:q1,q2,...");
    s->add_option("--tree-file", opt.tree_file, "explicit tree, one generation per line");
    s->add_option("--depth", opt.depth);
    s->add_option("--depths", opt.depths)->delimiter(',');
    s->add_option("--replicas", opt.replicas);
    s->add_option("--seed", opt.seed);
    s->add_option("--horizon", opt.horizon);
    s->add_option("--tol", opt.tol);
    s->add_option("--out-dir", opt.out_dir);
    s->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--workers", opt.workers)->check(CLI::PositiveNumber);
    s->add_option("--statistic", opt.statistic);
  }
  sub_cantor->add_option("--field-dump", opt.field_dump,
                         "write the simulated field as count + doubles");
  sub_cantor->add_option("--walsh-k", opt.walsh_k, "Walsh expansion order");
  sub_verify->add_option("--families", opt.families_filter,
                         "comma list of family names, or *");
  sub_verify->add_flag("--inject-fault", opt.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  opt.subcommand = active->get_name();
  try {
    apply_config_file(opt, *active);
    if (opt.subcommand == "criterion") return cmd_criterion(opt);
    if (opt.subcommand == "simulate") return cmd_simulate(opt);
    if (opt.subcommand == "verify") return cmd_verify(opt);
    if (opt.subcommand == "cantor") return cmd_cantor(opt);
    return cmd_report(opt);
  } catch (const resource_error& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return kExitResource;
  } catch (const consistency_error& e) {
    std::fprintf(stderr, "property violation: %s\n", e.what());
    return kExitViolation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
