#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "schreier/error.hpp"
#include "schreier/family_ops.hpp"
#include "schreier/json_io.hpp"
#include "schreier/ravg.hpp"
#include "schreier/weaknull.hpp"

using namespace schreier;

namespace {

using Table = std::vector<std::vector<std::string>>;

struct Outcome {
  Json result;
  std::string summary;
  Table csv;
  int exit = 0;
};

struct Options {
  std::string format;
  std::string out;
  std::size_t probe_limit = kDefaultProbeLimit;
  Nat bound = kDefaultEnumerationBound;

  std::string spec, engine, vector, vectors, zeta, eps, mode, position, deltas;
  std::string xi = "1", set = "naturals", k = "naturals", l = "geom:4:4";
  std::vector<std::string> sets;
  Nat n = 0, depth = 0, range = 60, heads = 3, samples = 16;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& row : t) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

Table key_values(const Json& j) {
  Table t{{"key", "value"}};
  for (const auto& [k, v] : j.items()) t.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
  return t;
}

Table measure_table(const Measure& m) {
  Table t{{"index", "weight"}};
  for (const auto& [i, w] : m.weights()) t.push_back({std::to_string(i), to_string(w)});
  return t;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---- family ----

Outcome family_enum(const Options& o, Json& cfg) {
  Json spec = load_json(o.spec);
  cfg["spec"] = spec;
  cfg["n"] = o.n;
  auto members = enumerate_restriction(family_from_json(spec, o.probe_limit), o.n, o.bound);
  Outcome r;
  Json list = Json::array();
  r.csv = {{"index", "set"}};
  for (std::size_t i = 0; i < members.size(); ++i) {
    list.push_back(to_json(members[i]));
    r.summary += members[i].str() + "\n";
    r.csv.push_back({std::to_string(i + 1), members[i].str()});
  }
  r.result = {{"count", members.size()}, {"members", list}};
  r.summary += std::to_string(members.size()) + " sets";
  return r;
}

Outcome family_check(const Options& o, Json& cfg) {
  Json spec = load_json(o.spec);
  cfg["spec"] = spec;
  cfg["n"] = o.n;
  RegularityReport rep = check_regularity(family_from_json(spec, o.probe_limit), o.n, o.bound);
  Outcome r;
  r.result = {{"hereditary", rep.hereditary},
              {"spreading", rep.spreading},
              {"members", rep.members},
              {"compactness", rep.compactness},
              {"counterexamples", rep.counterexamples}};
  r.summary = std::string("hereditary: ") + (rep.hereditary ? "yes" : "no") +
              "\nspreading: " + (rep.spreading ? "yes" : "no") + "\nmembers: " + std::to_string(rep.members);
  for (const auto& c : rep.counterexamples) r.summary += "\n" + c;
  r.csv = key_values(r.result);
  r.exit = rep.hereditary && rep.spreading ? 0 : 2;
  return r;
}

Outcome family_cb(const Options& o, Json& cfg) {
  Json spec = load_json(o.spec);
  cfg["spec"] = spec;
  Family f = family_from_json(spec, o.probe_limit);
  Outcome r;
  if (!o.position.empty()) {
    Json e = load_json(o.position);
    cfg["set"] = e;
    cfg["n"] = o.n;
    auto rank = cb_probe_rank(finset_from_json(e), f, o.n);
    r.result = {{"probe_rank", rank}};
    r.summary = std::to_string(rank);
  } else {
    CbIndex cb = cb_symbolic(f);
    r.result = {{"cb", cb.value.str()}, {"exact", cb.exact}};
    r.summary = cb.value.str() + (cb.exact ? "" : " (upper bound)");
  }
  r.csv = key_values(r.result);
  return r;
}

// ---- ravg ----

ProbBlock block_for(const Options& o, Json& cfg) {
  cfg["xi"] = o.xi;
  ProbBlock p = ProbBlock::repeated_averages(Ordinal::parse(o.xi));
  if (o.zeta.empty()) return p;
  cfg["zeta"] = o.zeta;
  return convolve(ProbBlock::repeated_averages(Ordinal::parse(o.zeta)), p);
}

Outcome ravg_measure_cmd(const Options& o, Json& cfg) {
  cfg["xi"] = o.xi;
  cfg["set"] = o.set;
  cfg["n"] = o.n;
  if (o.n == 0) throw DomainError("--n must be positive");
  AverageBlock b = repeated_average(Ordinal::parse(o.xi), LazySet::parse(o.set, o.probe_limit), o.n);
  Outcome r;
  r.result = to_json(b.measure);
  r.result["first_index"] = b.first_index;
  r.result["last_index"] = b.last_index;
  r.summary = to_json(b.measure).dump();
  r.csv = measure_table(b.measure);
  return r;
}

Outcome ravg_convolve_cmd(const Options& o, Json& cfg) {
  if (o.zeta.empty()) throw DomainError("--zeta is required");
  ProbBlock b = block_for(o, cfg);
  cfg["set"] = o.set;
  cfg["n"] = o.n;
  if (o.n == 0) throw DomainError("--n must be positive");
  Measure m = b.measure(LazySet::parse(o.set, o.probe_limit), o.n);
  Outcome r;
  r.result = to_json(m);
  r.result["block"] = b.name();
  r.summary = to_json(m).dump();
  r.csv = measure_table(m);
  return r;
}

Json issue_json(const BlockIssue& i) {
  return {{"kind", i.kind}, {"sample", i.sample}, {"r", i.r}, {"detail", i.detail}};
}

Outcome ravg_validate_cmd(const Options& o, Json& cfg) {
  ProbBlock b = block_for(o, cfg);
  std::vector<std::string> names = o.sets.empty() ? std::vector<std::string>{o.set} : o.sets;
  const std::size_t depth = o.depth == 0 ? 3 : o.depth;
  cfg["sets"] = names;
  cfg["depth"] = depth;
  std::vector<std::pair<LazySet, std::size_t>> samples;
  for (const auto& s : names) samples.emplace_back(LazySet::parse(s, o.probe_limit), depth);
  ValidationReport rep = block_validate(b, samples);
  Outcome r;
  Json v = Json::array(), u = Json::array();
  r.csv = {{"status", "kind", "sample", "r", "detail"}};
  for (const auto& i : rep.violations) {
    v.push_back(issue_json(i));
    r.csv.push_back({"violation", i.kind, i.sample, std::to_string(i.r), i.detail});
  }
  for (const auto& i : rep.unresolved) {
    u.push_back(issue_json(i));
    r.csv.push_back({"unresolved", i.kind, i.sample, std::to_string(i.r), i.detail});
  }
  r.result = {{"block", b.name()}, {"checked", rep.checked}, {"violations", v}, {"unresolved", u}, {"passed", rep.passed()}};
  r.summary = b.name() + ": checked " + std::to_string(rep.checked) + " cells, " +
              std::to_string(rep.violations.size()) + " violations, " + std::to_string(rep.unresolved.size()) +
              " unresolved";
  r.exit = !rep.violations.empty() ? 2 : !rep.unresolved.empty() ? 3 : 0;
  return r;
}

Outcome ravg_fastgrow_cmd(const Options& o, Json& cfg) {
  if (o.eps.empty()) throw DomainError("--eps is required");
  cfg["xi"] = o.xi;
  cfg["eps"] = o.eps;
  cfg["k"] = o.k;
  cfg["l"] = o.l;
  cfg["range"] = o.range;
  FastGrowReport rep = fastgrow_check(Ordinal::parse(o.xi), LazySet::parse(o.k, o.probe_limit),
                                      LazySet::parse(o.l, o.probe_limit), parse_rational(o.eps), o.range);
  Outcome r;
  r.result = {{"condition_holds", rep.condition_holds},
              {"checked_terms", rep.checked_terms},
              {"first_violation", rep.first_violation ? Json(*rep.first_violation) : Json(nullptr)},
              {"max_sum", to_string(rep.max_sum)},
              {"argmax", to_json(rep.argmax)},
              {"bound", to_string(rep.bound)},
              {"bound_holds", rep.bound_holds},
              {"passed", rep.passed()}};
  r.summary = std::string("growth condition: ") + (rep.condition_holds ? "holds" : "fails") +
              "\nmax sum: " + to_string(rep.max_sum) + " <= " + to_string(rep.bound) + ": " +
              (rep.bound_holds ? "yes" : "no");
  r.csv = key_values(r.result);
  r.exit = rep.passed() ? 0 : 2;
  return r;
}

// ---- norm ----

Outcome norm_eval_cmd(const Options& o, Json& cfg) {
  Json ej = load_json(o.engine), vj = load_json(o.vector);
  cfg["engine"] = ej;
  cfg["vector"] = vj;
  NormEngine e = engine_from_json(ej);
  NormResult res = e.norm(vector_from_json(vj, &e));
  Outcome r;
  r.result = to_json(res, e);
  r.result["engine"] = e.describe();
  r.summary = r.result["value"].get<std::string>();
  if (!res.exact) r.summary += " +- " + r.result["error_bound"].get<std::string>();
  r.summary += "\n" + r.result["certificate"].dump();
  r.csv = key_values(r.result);
  return r;
}

Outcome norm_quotient_cmd(const Options& o, Json& cfg) {
  Json ej = load_json(o.engine), vj = load_json(o.vector);
  cfg["engine"] = ej;
  cfg["vector"] = vj;
  NormEngine e = engine_from_json(ej);
  SparseVector x = vector_from_json(vj, &e);
  SparseVector q = ex_quotient_apply(e, x);
  Outcome r;
  r.result = {{"image", to_json(q)},
              {"norm", to_string(e.exact_norm(x))},
              {"base_norm", to_string(e.base().exact_norm(q))}};
  r.summary = to_json(q).dump();
  r.csv = {{"index", "value"}};
  for (const auto& [k, a] : q.entries()) r.csv.push_back({std::to_string(k), to_string(a)});
  return r;
}

// ---- certify ----

Outcome certify_cmd(const Options& o, Json& cfg) {
  const std::string mode = o.mode;
  if (mode != "spreading" && mode != "ravg" && mode != "dichotomy")
    throw DomainError("certify mode must be spreading, ravg or dichotomy");
  Json ej = load_json(o.engine);
  Json vj = o.vectors.rfind("basis:", 0) == 0 ? Json(o.vectors) : load_json(o.vectors);
  cfg["mode"] = mode;
  cfg["engine"] = ej;
  cfg["vectors"] = vj;
  cfg["xi"] = o.xi;
  NormEngine e = engine_from_json(ej);
  Instance inst = instance_from_json(e, vj);
  const Ordinal xi = Ordinal::parse(o.xi);
  Outcome r;
  if (mode == "spreading") {
    if (o.eps.empty()) throw DomainError("--eps is required");
    const Nat n = o.n == 0 ? std::min<Nat>(12, inst.size()) : o.n;
    cfg["eps"] = o.eps;
    cfg["n"] = n;
    CertReport rep = spreading_certificate(inst, xi, parse_rational(o.eps), n, o.bound);
    r.result = to_json(rep);
    r.summary = std::string(rep.passed ? "pass" : "fail") + ": worst margin " + r.result["worst_margin"].get<std::string>() +
                " on " + rep.worst_set.str();
    if (rep.first_failure) r.summary += "\nfirst failing set " + rep.first_failure->str();
    r.csv = {{"set", "signs", "margin"}};
    for (const auto& m : rep.margins) {
      std::string s;
      for (int v : m.signs) s += v > 0 ? "+" : "-";
      r.csv.push_back({m.set.str(), s, rep.exact ? to_string(m.margin) : decimal(m.margin_approx)});
    }
    r.exit = rep.passed ? 0 : 2;
  } else if (mode == "ravg") {
    NullTestOptions opt;
    if (o.depth) opt.depth = o.depth;
    opt.head_length = o.heads;
    opt.max_samples = o.samples;
    if (!o.deltas.empty()) {
      std::stringstream ss(o.deltas);
      for (std::string t; std::getline(ss, t, ',');) opt.deltas.push_back(parse_rational(t));
    }
    cfg["set"] = o.set;
    cfg["depth"] = opt.depth;
    cfg["heads"] = opt.head_length;
    cfg["samples"] = opt.max_samples;
    cfg["deltas"] = o.deltas;
    NullReport rep = ravg_null_test(inst, xi, LazySet::parse(o.set, o.probe_limit), opt);
    r.result = to_json(rep);
    r.summary = rep.passed ? "pass" : "fail";
    if (rep.first_failure)
      r.summary += " at n=" + std::to_string(rep.first_failure->n) + " on " + rep.first_failure->sample;
    r.csv = {{"sample", "n", "value", "delta", "ok"}};
    for (const auto& row : r.result["rows"])
      r.csv.push_back({row["sample"], std::to_string(row["n"].get<std::size_t>()), row["value"], row["delta"],
                       row["ok"].get<bool>() ? "true" : "false"});
    r.exit = rep.passed ? 0 : 2;
  } else {
    if (o.eps.empty()) throw DomainError("--eps is required");
    const std::size_t depth = o.depth == 0 ? 12 : o.depth;
    cfg["eps"] = o.eps;
    cfg["depth"] = depth;
    DichotomyResult d = dichotomy_search(inst, xi, parse_rational(o.eps), depth);
    r.result = to_json(d);
    r.summary = outcome_name(d.outcome);
    if (d.outcome == DichotomyResult::Outcome::certificate_i) r.summary += ": eps1 = " + to_string(d.eps1);
    if (d.outcome == DichotomyResult::Outcome::certificate_ii) r.summary += ": value = " + to_string(d.value);
    r.csv = key_values(r.result);
  }
  return r;
}

int emit(const std::string& command, const Options& o, Json cfg, const std::function<Outcome(Json&)>& run) {
  // every input that shaped the result goes into the config
  cfg["probe_limit"] = o.probe_limit;
  cfg["bound"] = o.bound;
  Json artifact;
  std::string summary;
  int exit = 0;
  Table csv;

  std::filesystem::path cache_file;
  if (const char* dir = std::getenv("SCHREIER_CACHE_DIR"); dir && *dir) {
    // @file inputs are hashed by content so edits invalidate entries
    std::ostringstream key;
    key << command << "\n" << o.spec << "\n" << o.engine << "\n" << o.vector << "\n" << o.vectors;
    for (const std::string* s : {&o.spec, &o.engine, &o.vector, &o.vectors})
      if (!s->empty() && (*s)[0] == '@') key << "\n" << load_json(*s).dump();
    key << "\n" << o.xi << "|" << o.zeta << "|" << o.eps << "|" << o.set << "|" << o.k << "|" << o.l << "|" << o.mode
        << "|" << o.position << "|" << o.deltas << "|" << o.n << "|" << o.depth << "|" << o.range << "|" << o.heads
        << "|" << o.samples << "|" << o.probe_limit << "|" << o.bound << "|" << kVersion;
    for (const auto& s : o.sets) key << "|" << s;
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key.str())));
    std::filesystem::create_directories(dir);
    cache_file = std::filesystem::path(dir) / name;
    if (std::filesystem::exists(cache_file)) {
      Json cached = load_json("@" + cache_file.string());
      artifact = cached.at("artifact");
      summary = cached.at("summary").get<std::string>();
      exit = cached.at("exit").get<int>();
      for (const auto& row : cached.at("csv")) csv.push_back(row.get<std::vector<std::string>>());
    }
  }
  if (artifact.is_null()) {
    Outcome r = run(cfg);
    artifact = {{"command", command}, {"config", cfg}, {"version", kVersion}, {"result", r.result}};
    summary = r.summary;
    exit = r.exit;
    csv = r.csv;
    if (!cache_file.empty()) {
      std::ofstream f(cache_file);
      f << Json{{"artifact", artifact}, {"summary", summary}, {"exit", exit}, {"csv", csv}}.dump() << "\n";
    }
  }

  const std::string format = o.format.empty() ? "json" : o.format;
  const std::string body =
      format == "csv" ? "# " + command + " " + kVersion + " " + artifact["config"].dump() + "\n" + render_csv(csv)
                      : artifact.dump(2) + "\n";
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw DomainError("cannot write " + o.out);
    f << body;
    std::cout << summary << "\n";
  } else if (!o.format.empty()) {
    std::cout << body;
  } else {
    std::cout << summary << "\n";
  }
  return exit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schreier families, repeated averages, norms and weak-null certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Artifact format on stdout or --out")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "Write the artifact to this file");
  app.add_option("--probe-limit", o.probe_limit, "Largest index probed in a lazy set")->check(CLI::PositiveNumber);
  app.add_option("--bound", o.bound, "Enumeration bound")->check(CLI::PositiveNumber);

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, const std::string& name, std::function<Outcome(const Options&, Json&)> fn) {
    sub->callback([&, name, fn] {
      action = [&, name, fn] { return emit(name, o, Json::object(), [&](Json& c) { return fn(o, c); }); };
    });
  };

  auto* family = app.add_subcommand("family", "Regular families");
  family->require_subcommand(1);
  auto* fenum = family->add_subcommand("enum", "Members inside {1..n}, colex order");
  fenum->add_option("--spec", o.spec, "Family JSON or @file")->required();
  fenum->add_option("--n", o.n, "Ground set size")->required();
  bind(fenum, "family enum", family_enum);
  auto* fcheck = family->add_subcommand("check", "Hereditary and spreading checks on {1..n}");
  fcheck->add_option("--spec", o.spec, "Family JSON or @file")->required();
  fcheck->add_option("--n", o.n, "Ground set size")->required();
  bind(fcheck, "family check", family_check);
  auto* fcb = family->add_subcommand("cb", "Cantor-Bendixson index, or probe rank of --set");
  fcb->add_option("--spec", o.spec, "Family JSON or @file")->required();
  auto* set_opt = fcb->add_option("--set", o.position, "Set as a JSON array");
  fcb->add_option("--n", o.n, "Largest element probed")->needs(set_opt);
  bind(fcb, "family cb", family_cb);

  auto* ravg = app.add_subcommand("ravg", "Repeated averages");
  ravg->require_subcommand(1);
  auto* rmeasure = ravg->add_subcommand("measure", "S^xi_{M,n}");
  rmeasure->add_option("--xi", o.xi, "Ordinal")->required();
  rmeasure->add_option("--set", o.set, "Lazy set, e.g. arith:3:2")->required();
  rmeasure->add_option("--n", o.n, "Block index")->required();
  bind(rmeasure, "ravg measure", ravg_measure_cmd);
  auto* rconv = ravg->add_subcommand("convolve", "Convolution S^zeta * S^xi at (M, n)");
  rconv->add_option("--xi", o.xi, "Inner ordinal")->required();
  rconv->add_option("--zeta", o.zeta, "Outer ordinal")->required();
  rconv->add_option("--set", o.set, "Lazy set")->required();
  rconv->add_option("--n", o.n, "Block index")->required();
  bind(rconv, "ravg convolve", ravg_convolve_cmd);
  auto* rval = ravg->add_subcommand("validate", "Probability block axioms");
  rval->add_option("--xi", o.xi, "Ordinal")->required();
  rval->add_option("--zeta", o.zeta, "Outer ordinal of a convolution");
  rval->add_option("--set", o.sets, "Lazy set; repeatable");
  rval->add_option("--depth", o.depth, "Blocks checked per set");
  bind(rval, "ravg validate", ravg_validate_cmd);
  auto* rfast = ravg->add_subcommand("fastgrow", "Fast-growing bound at finite scale");
  rfast->add_option("--xi", o.xi, "Ordinal")->required();
  rfast->add_option("--eps", o.eps, "Rational epsilon")->required();
  rfast->add_option("--k", o.k, "Lazy set K");
  rfast->add_option("--l", o.l, "Lazy set L");
  rfast->add_option("--range", o.range, "Admissible sets lie in [1..range]");
  bind(rfast, "ravg fastgrow", ravg_fastgrow_cmd);

  auto* norm = app.add_subcommand("norm", "Norm engines");
  norm->require_subcommand(1);
  auto* neval = norm->add_subcommand("eval", "Norm with certificate");
  neval->add_option("--engine", o.engine, "Engine JSON or @file")->required();
  neval->add_option("--vector", o.vector, "Vector JSON or @file")->required();
  bind(neval, "norm eval", norm_eval_cmd);
  auto* nquot = norm->add_subcommand("quotient", "Image under q for an ex engine");
  nquot->add_option("--engine", o.engine, "Engine JSON or @file")->required();
  nquot->add_option("--vector", o.vector, "Vector JSON or @file")->required();
  bind(nquot, "norm quotient", norm_quotient_cmd);

  auto* cert = app.add_subcommand("certify", "Weak-null certificates");
  cert->add_option("mode,--mode", o.mode, "spreading, ravg or dichotomy");
  cert->add_option("--engine", o.engine, "Engine JSON or @file")->required();
  cert->add_option("--vectors", o.vectors, "Vectors JSON, @file or basis:N")->required();
  cert->add_option("--xi", o.xi, "Ordinal");
  cert->add_option("--eps", o.eps, "Rational epsilon");
  cert->add_option("--n", o.n, "Ground set size for spreading");
  cert->add_option("--set", o.set, "Lazy set M for ravg");
  cert->add_option("--depth", o.depth, "Depth");
  cert->add_option("--deltas", o.deltas, "Comma-separated delta_n");
  cert->add_option("--heads", o.heads, "Head length for sampled N");
  cert->add_option("--samples", o.samples, "Sample cap");
  cert->callback([&] {
    action = [&] {
      if (o.mode.empty()) throw DomainError("certify needs a mode");
      return emit("certify " + o.mode, o, Json::object(), [&](Json& c) { return certify_cmd(o, c); });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    return action ? action() : 1;
  } catch (const BoundError& e) {
    std::cerr << "bound exhausted: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
