#include "hasse/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hasse/error.hpp"
#include "hasse/filtration.hpp"
#include "hasse/json_io.hpp"
#include "hasse/oracle.hpp"

namespace hasse {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string params;
  std::string in;
  std::string out;
  std::string format = "json";
  std::string strategy = "diagonal_lift";
  std::string named;
  std::uint64_t seed = 0;
  int count = 1;
  bool exhaustive = false;
  bool meta = false;
};

struct Output {
  Json json;
  CsvTable csv;
  int code = kExitPass;
};

Params parse_params(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--params expects p,f,e,h1,d1 integers, got '" + text + "'");
    }
  }
  if (v.size() != 5) throw UsageError("--params expects five integers p,f,e,h1,d1");
  Params P;
  P.spec = RingSpec::standard(v[0], v[1], v[2]);
  P.h1 = v[3];
  P.d1 = v[4];
  P.check();
  return P;
}

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot read '" + path + "'");
    buf << file.rdbuf();
  }
  return buf.str();
}

struct Loaded {
  std::vector<Instance> instances;
  bool single = false;
};

Loaded load(const Options& o, std::istream& in) {
  Loaded out;
  if (!o.in.empty()) {
    const Json j = parse_json(read_input(o.in, in));
    if (j.is_object()) {
      out.instances.push_back(instance_from_json(j));
      out.single = true;
    } else if (j.is_array()) {
      for (const Json& x : j) out.instances.push_back(instance_from_json(x));
    } else {
      throw Error(ErrorKind::Parse, "input must be an instance object or an array of instances");
    }
    return out;
  }
  GeneratorConfig cfg;
  cfg.seed = o.seed;
  cfg.count = o.count;
  if (o.count < 0) throw UsageError("--count must be non-negative");
  if (!o.named.empty() || o.strategy == "named") {
    if (o.named.empty()) throw UsageError("--strategy named needs --named <id>");
    cfg.strategy = Strategy::named;
    cfg.named_id = o.named;
  } else {
    if (o.params.empty()) throw UsageError("give --in, --params or --named");
    cfg.params = parse_params(o.params);
    cfg.strategy = parse_strategy(o.strategy);
  }
  out.instances = generate(cfg);
  return out;
}

Json witness_json(const RingTower& t, const std::vector<RingElement>& w) {
  Json out = Json::array();
  for (const RingElement& a : w) out.push_back(to_json(t.ring(a.tag), a));
  return out;
}

// Failures of the axioms, as JSON; empty when valid.
Json validation_failures(const Instance& inst) {
  const ValidationReport rep = inst.lift ? validate(*inst.lift) : validate(inst.datum);
  Json out = Json::array();
  for (const AxiomCheck& c : rep.failures()) {
    Json row{{"axiom", c.axiom}, {"i", c.i}, {"j", c.j}, {"detail", c.detail}};
    if (c.witness) row["witness"] = witness_json(*inst.datum.tower, *c.witness);
    out.push_back(std::move(row));
  }
  return out;
}

Json instance_head(const Instance& inst) { return Json{{"label", inst.label}, {"index", inst.index}}; }

std::string cell_name(const Cell& c) {
  if (c.name == "ha") return "ha";
  if (c.name == "ha_i" || c.name == "hasse") return c.name + "[" + std::to_string(c.i) + "]";
  return c.name + "[" + std::to_string(c.i) + "][" + std::to_string(c.j) + "]";
}

Output run_generate(const Options& o, std::istream& in) {
  Output r;
  r.json = Json::array();
  for (const Instance& inst : load(o, in).instances) r.json.push_back(to_json(inst));
  return r;
}

Output run_validate(const Options& o, std::istream& in) {
  Output r;
  Json rows = Json::array();
  std::size_t valid = 0;
  r.csv.header = {"instance", "index", "valid", "axiom", "i", "j", "detail"};
  const auto instances = load(o, in).instances;
  for (const Instance& inst : instances) {
    const Json failures = validation_failures(inst);
    Json row = instance_head(inst);
    row["valid"] = failures.empty();
    row["failures"] = failures;
    rows.push_back(row);
    valid += failures.empty();
    if (failures.empty()) r.csv.rows.push_back({inst.label, std::to_string(inst.index), "true", "", "", "", ""});
    for (const Json& fr : failures)
      r.csv.rows.push_back({inst.label, std::to_string(inst.index), "false", fr["axiom"].get<std::string>(),
                            fr["i"].dump(), fr["j"].dump(), fr["detail"].get<std::string>()});
  }
  r.json = Json{{"instances", rows},
                {"summary", {{"total", instances.size()}, {"valid", valid}, {"invalid", instances.size() - valid}}}};
  if (valid != instances.size()) r.code = kExitMathFailure;
  return r;
}

Output run_invariants(const Options& o, std::istream& in) {
  Output r;
  Json out = Json::array();
  r.csv.header = {"instance", "index", "name",  "i",     "j",     "scalar", "vanished", "dual_scalar",
                  "iso",      "equal", "natural_agrees", "applicable"};
  for (const Instance& inst : load(o, in).instances) {
    Json entry = instance_head(inst);
    const Json failures = validation_failures(inst);
    entry["valid"] = failures.empty();
    if (!failures.empty()) {
      entry["failures"] = failures;
      out.push_back(std::move(entry));
      r.code = kExitMathFailure;
      continue;
    }
    Json rows = Json::array();
    for (const DualityVerdict& v : all_duality_verdicts(inst.datum)) {
      const Json row = to_json(inst.datum.field(), v);
      rows.push_back(row);
      std::vector<std::string> cells{inst.label, std::to_string(inst.index)};
      for (std::size_t k = 2; k < r.csv.header.size(); ++k) {
        const Json& x = row[r.csv.header[k]];
        cells.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      }
      r.csv.rows.push_back(std::move(cells));
    }
    entry["rows"] = std::move(rows);
    out.push_back(std::move(entry));
  }
  r.json = Json{{"instances", out}};
  return r;
}

Output run_dualize(const Options& o, std::istream& in) {
  Output r;
  const Loaded loaded = load(o, in);
  r.json = Json::array();
  for (const Instance& inst : loaded.instances) {
    Instance dual{inst.label + "^D", inst.seed, inst.index, dualize(inst.datum), std::nullopt};
    if (inst.lift) dual.lift = dualize(*inst.lift);
    r.json.push_back(to_json(dual));
  }
  if (loaded.single) r.json = r.json.at(0);
  return r;
}

struct VerifyTally {
  Json rows = Json::array();
  std::size_t pass = 0, fail = 0, not_applicable = 0;
  Json failed_here = Json::array();

  void add(const Instance& inst, const std::string& check, int i, int j, const char* status,
           const std::string& detail) {
    Json row = instance_head(inst);
    row.update(Json{{"check", check}, {"i", i}, {"j", j}, {"status", status}, {"detail", detail}});
    const std::string s = status;
    if (s == "pass") ++pass;
    else if (s == "fail") ++fail, failed_here.push_back(row);
    else ++not_applicable;
    rows.push_back(std::move(row));
  }
  void add(const Instance& inst, const std::string& check, int i, int j, bool ok, const std::string& detail) {
    add(inst, check, i, j, ok ? "pass" : "fail", detail);
  }
};

std::string dims(const Flag& flag) {
  std::string s;
  for (const Submodule& m : flag.levels) s += (s.empty() ? "" : ",") + std::to_string(m.dim_k());
  return s;
}

void verify_instance(const Instance& inst, VerifyTally& t) {
  const Json failures = validation_failures(inst);
  t.add(inst, "validate", 0, 0, failures.empty(), failures.empty() ? "" : failures.dump());
  if (!failures.empty()) return;
  const DieudonneDatum& D = inst.datum;
  const int e = D.params.e(), h1 = D.params.h1, d1 = D.params.d1;
  const DieudonneDatum dual = dualize(D);

  for (int i = 0; i < D.f(); ++i) {
    const Flag ext = extended_hodge_flag(D, i), aux = hodge_aux_flag(D, i);
    bool ok = true;
    for (int j = 0; j <= e; ++j) ok = ok && static_cast<int>(ext.levels[e + j].dim_k()) == j * h1 + (e - j) * d1;
    for (int j = 0; j < e; ++j) ok = ok && static_cast<int>(aux.levels[j].dim_k()) == h1 + j * d1;
    t.add(inst, "rank_formula", i, 0, ok, "extended " + dims(ext) + "; aux " + dims(aux));
  }
  for (const DualityVerdict& v : all_duality_verdicts(D, dual)) {
    const std::string check = "duality:" + v.name;
    if (!v.applicable) {
      t.add(inst, check, v.i, v.j, "not_applicable", v.detail);
      continue;
    }
    std::ostringstream detail;
    detail << "G " << v.scalar_G << " GD " << v.scalar_GD << " iso " << v.canonical_iso << " natural "
           << (v.natural_agrees ? "agrees" : "disagrees");
    t.add(inst, check, v.i, v.j, v.equal && v.natural_agrees, detail.str());
  }
  for (int i = 0; i < D.f(); ++i) {
    if (e == 1) {
      t.add(inst, "factorization", i, 1, "not_applicable", "e = 1: no primitive factors");
      continue;
    }
    for (int j = 1; j <= e; ++j) t.add(inst, "factorization", i, j, factorization_check(D, i, j), "");
  }
  for (int i = 0; i < D.f(); ++i) {
    for (int j = 1; j < e; ++j) {
      if (!inst.lift) {
        t.add(inst, "pi_divisibility", i, j, "not_applicable",
              std::string("no lift; submodule equality on the datum: ") +
                  (pi_divisibility_holds(D, i, j) ? "holds" : "fails"));
        continue;
      }
      const PiDivisibilityReport rep = check_pi_divisibility(*inst.lift, D, i, j, inst.seed + inst.index);
      t.add(inst, "pi_divisibility", i, j, rep.ok(),
            "points " + std::to_string(rep.points_checked) + (rep.detail.empty() ? "" : "; " + rep.detail));
    }
  }
  const ProductIdentity pid = product_identity(D);
  t.add(inst, "product_identity", 0, 0, pid.holds,
        "ha " + std::to_string(pid.ha) + " sign*prod ha_i " + std::to_string(pid.product_partial) +
            " prod ha_i^[j] " + std::to_string(pid.product_pr));
}

Output run_verify(const Options& o, std::istream& in) {
  Output r;
  VerifyTally t;
  Json counterexamples = Json::array();
  const auto instances = load(o, in).instances;
  for (const Instance& inst : instances) {
    t.failed_here = Json::array();
    verify_instance(inst, t);
    if (!t.failed_here.empty())
      counterexamples.push_back(
          Json{{"seed", inst.seed}, {"index", inst.index}, {"instance", to_json(inst)}, {"failed", t.failed_here}});
  }
  r.json = Json{{"rows", t.rows},
                {"summary",
                 {{"instances", instances.size()},
                  {"checks", t.pass + t.fail + t.not_applicable},
                  {"pass", t.pass},
                  {"fail", t.fail},
                  {"not_applicable", t.not_applicable}}},
                {"counterexamples", counterexamples}};
  r.csv = json_rows_to_csv(t.rows, {"label", "index", "check", "i", "j", "status", "detail"});
  r.csv.header[0] = "instance";
  if (t.fail) r.code = kExitMathFailure;
  return r;
}

Output run_survey(const Options& o, std::istream& in) {
  Output r;
  const auto instances = load(o, in).instances;
  if (instances.empty()) throw UsageError("survey needs at least one instance");
  const Params P = instances.front().datum.params;
  std::vector<Cell> cells;
  for (const Cell& c : invariant_cells(P))
    if (c.name == "m" || c.name == "hasse" || c.name == "ha_pr") cells.push_back(c);
  struct Pattern {
    std::size_t frequency = 0;
    bool dual_agrees = true;
  };
  std::map<std::string, Pattern> seen;
  std::size_t invalid = 0;
  for (const Instance& inst : instances) {
    if (!(inst.datum.params == P)) throw UsageError("survey instances must share params");
    if (!validation_failures(inst).empty()) {
      ++invalid;
      continue;
    }
    const DieudonneDatum dual = dualize(inst.datum);
    std::string mine, theirs;
    for (const Cell& c : cells) {
      mine += invariant_section(c, inst.datum).vanished() ? '1' : '0';
      theirs += invariant_section(c, dual).vanished() ? '1' : '0';
    }
    Pattern& p = seen[mine];
    ++p.frequency;
    p.dual_agrees = p.dual_agrees && mine == theirs;
  }
  Json names = Json::array();
  for (const Cell& c : cells) names.push_back(cell_name(c));
  Json patterns = Json::array();
  r.csv.header = {"pattern", "vanishing", "frequency", "dual_agrees"};
  for (const auto& [bits, p] : seen) {
    Json vanishing = Json::array();
    std::string joined;
    for (std::size_t k = 0; k < bits.size(); ++k)
      if (bits[k] == '1') {
        vanishing.push_back(names[k]);
        joined += (joined.empty() ? "" : ";") + names[k].get<std::string>();
      }
    patterns.push_back(
        Json{{"pattern", bits}, {"vanishing", vanishing}, {"frequency", p.frequency}, {"dual_agrees", p.dual_agrees}});
    r.csv.rows.push_back({bits, joined, std::to_string(p.frequency), p.dual_agrees ? "true" : "false"});
    if (!p.dual_agrees) r.code = kExitMathFailure;
  }
  r.json = Json{{"params", to_json(P)},
                {"cells", names},
                {"instances", instances.size()},
                {"invalid", invalid},
                {"patterns", patterns}};
  if (invalid) r.code = kExitMathFailure;
  return r;
}

Output run_oracle(const Options& o, std::istream& in) {
  Output r;
  std::vector<Instance> instances;
  if (o.exhaustive) {
    if (!o.params.empty() && !(parse_params(o.params) == parse_params("2,1,2,2,1")))
      throw UsageError("--exhaustive covers params 2,1,2,2,1 only");
    std::size_t n = 0;
    for (DieudonneDatum& D : exhaustive_tiny_family())
      instances.push_back({"tiny-" + std::to_string(n), 0, n, std::move(D), std::nullopt}), ++n;
  } else {
    instances = load(o, in).instances;
  }
  Json rows = Json::array();
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_check;
  std::size_t agree = 0, disagree = 0;
  for (const Instance& inst : instances) {
    for (const OracleCheck& c : enumeration_oracle(inst.datum)) {
      Json row = instance_head(inst);
      row.update(Json{{"check", c.check}, {"i", c.i}, {"j", c.j}, {"agree", c.agree}, {"detail", c.detail}});
      rows.push_back(std::move(row));
      auto& tally = by_check[c.check.substr(0, c.check.find(':'))];
      (c.agree ? tally.first : tally.second)++;
      (c.agree ? agree : disagree)++;
    }
  }
  Json summary{{"instances", instances.size()}, {"agree", agree}, {"disagree", disagree}};
  for (const auto& [name, tally] : by_check) summary["by_check"][name] = {{"agree", tally.first}, {"disagree", tally.second}};
  r.json = Json{{"rows", rows}, {"summary", summary}};
  r.csv = json_rows_to_csv(rows, {"label", "index", "check", "i", "j", "agree", "detail"});
  r.csv.header[0] = "instance";
  if (disagree) r.code = kExitMathFailure;
  return r;
}

int exit_for(const Error& err) {
  switch (err.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Precondition:
    case ErrorKind::InvalidSpec: return kExitUsage;
    default: return kExitMathFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"hasse_forge: Dieudonne data, Hasse-type invariants and their duality checks"};
  app.require_subcommand(1, 1);
  Options o;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"generate", "Emit a stream of instances"},
      {"validate", "Check the axioms of each instance"},
      {"invariants", "Compute every invariant with its dual and canonical isomorphism"},
      {"dualize", "Write the dual instance(s)"},
      {"verify", "Run every theorem check"},
      {"survey", "Count vanishing patterns of m, hasse and ha_pr"},
      {"oracle", "Compare against exhaustive enumeration"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--params", o.params, "p,f,e,h1,d1 (standard rings)");
    sub->add_option("--seed", o.seed, "Stream seed");
    sub->add_option("--count", o.count, "Stream length");
    sub->add_option("--strategy", o.strategy, "diagonal_lift | charp_flag | named");
    sub->add_option("--named", o.named, "Named instance id");
    sub->add_option("--in", o.in, "Instance JSON (object or array); - for stdin");
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--meta", o.meta, "Add run metadata (not canonical)");
    if (std::string(name) == "oracle") sub->add_flag("--exhaustive", o.exhaustive, "Whole tiny family");
    sub->callback([&o, name = std::string(name)] { o.command = name; });
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Output result;
  try {
    const bool instance_output = o.command == "generate" || o.command == "dualize";
    if (instance_output && o.format == "csv") throw UsageError(o.command + " writes JSON only");
    if (o.command == "generate") result = run_generate(o, in);
    else if (o.command == "validate") result = run_validate(o, in);
    else if (o.command == "invariants") result = run_invariants(o, in);
    else if (o.command == "dualize") result = run_dualize(o, in);
    else if (o.command == "verify") result = run_verify(o, in);
    else if (o.command == "survey") result = run_survey(o, in);
    else result = run_oracle(o, in);
    if (o.meta && !instance_output) {
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      result.json["meta"] = {{"tool", "hasse_forge"}, {"elapsed_ms", ms}, {"size_limit", Params::size_limit()}};
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string text = o.format == "csv" ? write_csv(result.csv) : canonical_dump(result.json);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!(file << text)) {
      err << "usage: cannot write '" << o.out << "'\n";
      return kExitUsage;
    }
  }
  return result.code;
}

}  // namespace hasse
