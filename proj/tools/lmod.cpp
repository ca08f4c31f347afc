#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lightmod/corpus.hpp"
#include "lightmod/eval.hpp"
#include "lightmod/infer.hpp"
#include "lightmod/type_syntax.hpp"

using namespace lightmod;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kBranchCap = 3 };

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExprPtr load(const std::string& path) {
  try {
    return parse_expr(read_file(path));
  } catch (const parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

Predicate parse_pred(const std::string& s) {
  if (s == "true") return Predicate::True;
  if (s == "nonbot") return Predicate::DiffInfty;
  if (s == "llt") return Predicate::InftyFree;
  return Predicate::TailFinite;
}

EngineKind parse_engine(const std::string& s) {
  if (s == "ladder") return EngineKind::Ladder;
  if (s == "classes") return EngineKind::Classes;
  return EngineKind::Auto;
}

const char* engine_name(EngineKind k) {
  switch (k) {
    case EngineKind::Ladder: return "ladder";
    case EngineKind::Classes: return "classes";
    case EngineKind::Auto: return "auto";
  }
  return "?";
}

std::vector<std::string> constraint_strings(const ConstraintList& E) {
  std::vector<std::string> out;
  for (auto& c : E) out.push_back(c.str());
  return out;
}

std::string witness_string(const Assignment& w) {
  std::string s;
  for (auto& [v, x] : w) s += (s.empty() ? "" : ", ") + v + "=" + std::to_string(x);
  return s.empty() ? "-" : s;
}

json entry_json(const Entry& e) {
  json j;
  j["type"] = print_type(e.type);
  j["constraints"] = constraint_strings(e.E);
  json w = json::object();
  for (auto& [v, x] : e.witness) w[v] = x;
  j["witness"] = w;
  j["instance"] = print_type(e.instance);
  j["predicates"] = {{"nonbot", holds(Predicate::DiffInfty, e.type)},
                     {"llt", holds(Predicate::InftyFree, e.type)},
                     {"bt", holds(Predicate::TailFinite, e.type)}};
  return j;
}

void print_entries(const InferResult& r) {
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    auto& e = r.entries[i];
    std::cout << "entry " << i + 1 << ": " << print_type(e.type) << "\n"
              << "  constraints: " << str(e.E) << "\n"
              << "  witness: " << witness_string(e.witness) << "\n"
              << "  instance: " << print_type(e.instance) << "\n";
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct InferArgs {
  std::string file, pred = "true", engine = "auto";
  bool as_json = false;
  std::size_t max_branches = default_max_branches();
};

InferOptions options(const std::string& engine, std::size_t max_branches) {
  InferOptions o;
  o.engine = parse_engine(engine);
  o.max_branches = max_branches;
  return o;
}

int cmd_infer(const InferArgs& a) {
  ExprPtr e = load(a.file);
  auto t0 = std::chrono::steady_clock::now();
  InferResult r = infer(e, parse_pred(a.pred), options(a.engine, a.max_branches));
  double ms = ms_since(t0);
  bool ok = !r.entries.empty();
  if (a.as_json) {
    json j;
    j["file"] = a.file;
    j["predicate"] = a.pred;
    j["engine"] = engine_name(r.engine_used);
    j["ok"] = ok;
    j["entries"] = json::array();
    for (auto& en : r.entries) j["entries"].push_back(entry_json(en));
    j["time_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else if (!ok) {
    std::cout << "no types\n";
  } else {
    print_entries(r);
  }
  return ok ? kOk : kFailed;
}

struct CheckArgs {
  std::string file, type, engine = "auto";
  bool as_json = false;
  std::size_t max_branches = default_max_branches();
};

int cmd_check(const CheckArgs& a) {
  ExprPtr e = load(a.file);
  TypeGraph goal;
  try {
    goal = parse_type(a.type);
  } catch (const std::exception& ex) {
    std::cerr << "ill-formed goal: " << ex.what() << "\n";
    return kBadInput;
  }
  auto t0 = std::chrono::steady_clock::now();
  InferResult r = infer(e, Predicate::True, options(a.engine, a.max_branches));
  CheckResult c = check_type(r, goal);
  double ms = ms_since(t0);
  if (a.as_json) {
    json j;
    j["file"] = a.file;
    j["goal"] = print_type(goal);
    j["ok"] = c.ok;
    if (c.ok) {
      j["entry"] = entry_json(r.entries[c.entry]);
      json w = json::object();
      for (auto& [v, x] : c.witness) w[v] = x;
      j["witness"] = w;
    }
    j["time_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  } else if (c.ok) {
    std::cout << "OK via entry " << c.entry + 1 << ": " << print_type(r.entries[c.entry].type) << "\n"
              << "  witness: " << witness_string(c.witness) << "\n";
  } else {
    std::cout << "FAIL: no entry matches " << print_type(goal) << "\n";
  }
  return c.ok ? kOk : kFailed;
}

int cmd_eval(const std::string& file, std::size_t fuel) {
  ExprPtr e = load(file);
  auto r = whnf(e, fuel);
  if (!r.normal) {
    std::cout << "no weak head normal form within fuel " << fuel << "\n";
    return kFailed;
  }
  std::cout << print_expr(r.term) << "\n";
  return kOk;
}

int cmd_tree(const std::string& file, const std::string& kind, unsigned depth, std::size_t fuel,
             const std::string& format) {
  ExprPtr e = load(file);
  TreeApprox t = kind == "llt" ? levy_longo(e, depth, fuel) : bohm(e, depth, fuel);
  if (format == "json")
    std::cout << render_json(t) << "\n";
  else if (format == "indent")
    std::cout << render_indented(t);
  else
    std::cout << render_text(t) << "\n";
  return t.has_bot() ? kFailed : kOk;
}

struct CorpusRow {
  std::string name, expect;
  int entries = -1;  // -1: error
  bool ok = false;
  std::string note;
  double ms = 0;
};

// Header lines of a corpus file: "-- key: value".
std::map<std::string, std::string> header(const std::string& text) {
  std::map<std::string, std::string> h;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("-- ", 0) != 0) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(3, colon - 3), val = line.substr(colon + 1);
    if (!val.empty() && val[0] == ' ') val.erase(0, 1);
    h[key] = val;
  }
  return h;
}

CorpusRow run_file(const fs::path& path, Predicate p, const InferOptions& opt) {
  CorpusRow row;
  row.name = path.stem().string();
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::string text = read_file(path.string());
    auto h = header(text);
    row.expect = h.count("expect") ? h["expect"] : "";
    InferResult r = infer(parse_expr(text), p, opt);
    row.entries = static_cast<int>(r.entries.size());
    row.ok = !r.entries.empty();
    if (h.count("type") && row.ok) row.note = check_type(r, parse_type(h["type"])).ok ? "checks" : "check failed";
  } catch (const std::exception& ex) {
    row.note = ex.what();
  }
  row.ms = ms_since(t0);
  return row;
}

int cmd_corpus(const std::string& dir, const std::string& pred, bool as_json, bool expect, const std::string& engine,
               std::size_t max_branches) {
  std::vector<fs::path> files;
  for (auto& f : fs::directory_iterator(dir))
    if (f.path().extension() == ".lam") files.push_back(f.path());
  std::sort(files.begin(), files.end());
  Predicate p = parse_pred(pred);
  InferOptions opt = options(engine, max_branches);
  std::vector<std::future<CorpusRow>> jobs;
  for (auto& f : files) jobs.push_back(std::async(std::launch::async, run_file, f, p, opt));
  std::vector<CorpusRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  bool all_ok = true, all_expected = true;
  for (auto& r : rows) {
    all_ok = all_ok && r.ok;
    if (!r.expect.empty()) {
      bool want = r.expect == "typable";
      if (r.entries < 0 || r.ok != want || r.note == "check failed") all_expected = false;
    }
  }
  if (as_json) {
    json j = json::array();
    for (auto& r : rows)
      j.push_back({{"name", r.name}, {"expect", r.expect}, {"entries", r.entries}, {"ok", r.ok},
                   {"note", r.note}, {"time_ms", r.ms}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%-12s %-10s %-8s %-8s %9s  %s\n", "term", "expect", "entries", pred.c_str(), "ms", "note");
    for (auto& r : rows)
      std::printf("%-12s %-10s %-8s %-8s %9.1f  %s\n", r.name.c_str(), r.expect.c_str(),
                  r.entries < 0 ? "error" : std::to_string(r.entries).c_str(), r.ok ? "yes" : "no", r.ms,
                  r.note.c_str());
  }
  if (expect) return all_expected ? kOk : kFailed;
  return all_ok ? kOk : kFailed;
}

int cmd_export(const std::string& dir) {
  fs::create_directories(dir);
  for (auto& t : corpus()) {
    std::string stem = t.name;
    if (stem.back() == '\'') stem = stem.substr(0, stem.size() - 1) + "_prime";
    std::ofstream out(fs::path(dir) / (stem + ".lam"));
    out << "-- " << t.name << " = " << t.source << "\n";
    out << "-- expect: " << (t.typable ? "typable" : "untypable") << "\n";
    if (!t.type.empty()) out << "-- type: " << t.type << "\n";
    out << print_expr(t.term) << "\n";
  }
  std::cout << "wrote " << corpus().size() << " files to " << dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lmod: type inference and evaluation for a lambda calculus with a delay modality"};
  app.require_subcommand(1);
  const std::vector<std::string> preds{"true", "nonbot", "llt", "bt"};
  const std::vector<std::string> engines{"auto", "ladder", "classes"};

  InferArgs ia;
  auto* inf = app.add_subcommand("infer", "infer the types of the expression in FILE");
  inf->add_option("file", ia.file)->required();
  inf->add_option("--pred", ia.pred, "filter: true, nonbot, llt or bt")->check(CLI::IsMember(preds));
  inf->add_flag("--json", ia.as_json);
  inf->add_option("--max-branches", ia.max_branches, "leaf cap of the case ladder");
  inf->add_option("--engine", ia.engine, "auto, ladder or classes")->check(CLI::IsMember(engines));

  CheckArgs ca;
  auto* chk = app.add_subcommand("check", "check FILE against a closed type");
  chk->add_option("file", ca.file)->required();
  chk->add_option("--type", ca.type, "goal in the mu-type syntax")->required();
  chk->add_flag("--json", ca.as_json);
  chk->add_option("--max-branches", ca.max_branches);
  chk->add_option("--engine", ca.engine)->check(CLI::IsMember(engines));

  std::string ev_file;
  std::size_t ev_fuel = 10000;
  auto* ev = app.add_subcommand("eval", "weak head normal form");
  ev->add_option("file", ev_file)->required();
  ev->add_option("--fuel", ev_fuel);

  std::string tr_file, tr_kind = "llt", tr_format = "text";
  unsigned tr_depth = 5;
  std::size_t tr_fuel = 50000;
  auto* tr = app.add_subcommand("tree", "Levy-Longo or Bohm tree up to a depth");
  tr->add_option("file", tr_file)->required();
  tr->add_option("--kind", tr_kind)->check(CLI::IsMember({"llt", "bt"}));
  tr->add_option("--depth", tr_depth);
  tr->add_option("--fuel", tr_fuel);
  tr->add_option("--format", tr_format)->check(CLI::IsMember({"text", "indent", "json"}));

  std::string co_dir, co_pred = "true", co_engine = "auto", co_export;
  bool co_json = false, co_expect = false;
  std::size_t co_branches = default_max_branches();
  auto* co = app.add_subcommand("corpus", "run every .lam file of a directory");
  co->add_option("dir", co_dir);
  co->add_option("--pred", co_pred)->check(CLI::IsMember(preds));
  co->add_flag("--json", co_json);
  co->add_flag("--expect", co_expect, "exit status follows the expect headers");
  co->add_option("--engine", co_engine)->check(CLI::IsMember(engines));
  co->add_option("--max-branches", co_branches);
  co->add_option("--export", co_export, "write the built-in corpus to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*inf) return cmd_infer(ia);
    if (*chk) return cmd_check(ca);
    if (*ev) return cmd_eval(ev_file, ev_fuel);
    if (*tr) return cmd_tree(tr_file, tr_kind, tr_depth, tr_fuel, tr_format);
    if (*co) {
      if (!co_export.empty()) return cmd_export(co_export);
      if (co_dir.empty()) {
        std::cerr << "corpus: a directory is required\n";
        return kBadInput;
      }
      return cmd_corpus(co_dir, co_pred, co_json, co_expect, co_engine, co_branches);
    }
  } catch (const input_error& e) {
    std::cerr << e.what() << "\n";
    return kBadInput;
  } catch (const unbound_variable& e) {
    std::cerr << e.what() << "\n";
    return kBadInput;
  } catch (const branch_cap_exceeded& e) {
    std::cerr << e.what() << "\n";
    return kBranchCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
