#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"
#include "forge/toolchain/emit.hpp"
#include "forge/toolchain/fixtures.hpp"
#include "forge/toolchain/random.hpp"
#include "forge/toolchain/verify.hpp"
#include "forge/types/check.hpp"
#include "forge/types/lattice.hpp"

namespace forge::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_fluent(const TypeProgram& p) {
  LatticePointT pt = classify_program(p);
  return dominates(fluent_point(), pt);
}

std::string word_text(const Word& w) { return w.empty() ? "eps" : join_word(w); }

std::string tape_text(const AutomatonSpec& a, const TapeContents& t) {
  long lo = std::min(t.origin, t.head);
  long hi = std::max(t.origin + static_cast<long>(t.cells.size()) - 1, t.head);
  std::string out;
  for (long pos = lo; pos <= hi; ++pos) {
    int c = t.at(pos);
    std::string cell = c < 0 ? "_" : a.tape_alphabet.at(static_cast<std::size_t>(c));
    if (!out.empty()) out += ' ';
    out += pos == t.head ? "[" + cell + "]" : cell;
  }
  return out;
}

std::string id_text(const AutomatonSpec& a, const InstantaneousDescription& id) {
  std::string out = "consumed=" + std::to_string(id.consumed) + " state=" + a.states.at(index(id.state));
  if (a.storage == StorageKind::Tree || a.storage == StorageKind::Pushdown) {
    out += " storage=" + to_string(*a.store, id.tree);
  } else if (a.storage == StorageKind::Tape) {
    out += " tape=" + tape_text(a, id.tape);
  }
  return out;
}

json parse_json(const std::string& s) { return json::parse(s); }

json source_json(const Source& s) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) return parse_json(to_json(*p));
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) return parse_json(to_json(*a));
  return parse_json(to_json(std::get<Cfg>(s)));
}

void print_source_report(std::ostream& out, bool as_json, const Source& s) {
  if (as_json) {
    json j{{"report", "source"}, {"source", source_json(s)}};
    out << j.dump(2) << "\n";
  } else {
    out << print_source(s);
  }
}

std::string comment_block(const ConversionReport& r) {
  std::string out = "# conversion: " + r.conversion + "\n";
  out += "# source point: " + r.source_point + "\n";
  out += "# target point: " + r.target_point + "\n";
  out += "# states: " + std::to_string(r.states) + ", transitions: " + std::to_string(r.transitions) +
         ", definitions: " + std::to_string(r.definitions) + ", stack symbols: " + std::to_string(r.stack_symbols) +
         "\n";
  return out;
}

struct Globals {
  std::size_t fuel = default_fuel();
  std::size_t max_len = 8;
  std::string format = "text";
  std::uint64_t seed = 0;
  bool json() const { return format == "json"; }
};

const TypeProgram& need_program(const Source& s, std::string_view what) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) return *p;
  throw PreconditionViolation(std::string(what) + " expects a type program");
}

const AutomatonSpec& need_automaton(const Source& s, std::string_view what) {
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) return *a;
  throw PreconditionViolation(std::string(what) + " expects an automaton");
}

// ---------------------------------------------------------------- commands

int cmd_simulate(const Globals& g, const std::string& ref, const std::string& word_arg, bool trace,
                 std::ostream& out) {
  Source s = load_source(ref);
  const AutomatonSpec& a = need_automaton(s, "simulate");
  RunOptions ro;
  ro.fuel = g.fuel;
  ro.trace = trace;
  RunOutcome r;
  Word w;
  if (a.forest) {
    r = run_forest(a, parse_input_tree(word_arg), ro);
    w = {word_arg};
  } else {
    w = parse_word(word_arg, a.alphabet);
    r = run_framed(a, w, ro);
  }
  if (g.json()) {
    json j = parse_json(to_json(a, r, w));
    if (trace) {
      json steps = json::array();
      for (const auto& id : r.trace) steps.push_back(id_text(a, id));
      j["trace"] = steps;
    }
    out << j.dump(2) << "\n";
  } else {
    for (const auto& id : r.trace) out << id_text(a, id) << "\n";
    out << (a.name.empty() ? "automaton" : a.name) << " on " << word_text(w) << ": " << to_string(r) << " after "
        << r.steps << " steps";
    if (r.final_id) out << " (" << id_text(a, *r.final_id) << ")";
    out << "\n";
  }
  if (r.kind == RunOutcome::Kind::FuelExhausted) return kInconclusive;
  return r.accepted() ? kSuccess : kNegative;
}

// Verdict of one check as an exit code; ambiguity is lenient unless asked otherwise.
int check_code(const TypeProgram& p, const CheckResult& r, bool assume_unambiguous) {
  if (r.kind == CheckResult::Kind::FuelExhausted) return kInconclusive;
  if (r.kind == CheckResult::Kind::Ambiguous && !assume_unambiguous) {
    return std::find(r.types.begin(), r.types.end(), p.store->leaf()) != r.types.end() ? kSuccess : kNegative;
  }
  return r.typed() ? kSuccess : kNegative;
}

std::string check_text(const TypeProgram& p, const CheckResult& r) {
  const TermStore& store = *p.store;
  std::string out = to_string(r.kind);
  if (r.kind == CheckResult::Kind::Typed) {
    out += " " + to_string(store, r.type);
  } else if (!r.types.empty()) {
    out += " {";
    for (std::size_t i = 0; i < r.types.size(); ++i) out += (i > 0 ? ", " : "") + to_string(store, r.types[i]);
    out += "}";
  }
  if (!r.typed() && r.position > 0) out += " at call " + std::to_string(r.position);
  if (!r.message.empty() && !r.typed()) out += ": " + r.message;
  return out;
}

int cmd_typecheck(const Globals& g, const std::string& ref, const CLI::Option* word_opt, const std::string& word_arg,
                  const std::string& expr_arg, const std::string& mode_arg, bool assume_unambiguous,
                  std::ostream& out) {
  Source s = load_source(ref);
  if (auto* c = std::get_if<Cfg>(&s)) s = gnf_to_program(to_gnf(*c));
  const TypeProgram& p = need_program(s, "typecheck");
  CheckOptions co;
  co.fuel = g.fuel;
  if (!mode_arg.empty()) {
    co.mode = parse_mode(mode_arg);
    if (!co.mode) throw PreconditionViolation("unknown mode '" + mode_arg + "'");
  }
  std::vector<Expr> exprs;
  if (word_opt->count() > 0) {
    exprs.push_back(word_to_expression(p, parse_word(word_arg, p.word_alphabet())));
  } else if (!expr_arg.empty()) {
    exprs.push_back(parse_expression(p, expr_arg));
  } else {
    exprs = p.expressions;
  }
  if (exprs.empty()) throw PreconditionViolation("nothing to check: give a word, --expr, or a program with expressions");
  int code = kSuccess;
  json results = json::array();
  for (const auto& e : exprs) {
    CheckResult r = typecheck(p, e, co);
    std::string text = to_string(p, e);
    int c = check_code(p, r, assume_unambiguous);
    // a negative verdict outranks an inconclusive one
    if (c == kNegative || (c == kInconclusive && code == kSuccess)) code = c;
    if (g.json()) {
      results.push_back(parse_json(to_json(p, r, text)));
    } else {
      out << text << " : " << check_text(p, r) << "\n";
    }
  }
  if (g.json()) {
    if (results.size() == 1) {
      out << results[0].dump(2) << "\n";
    } else {
      json j{{"report", "typecheck-list"}, {"program", p.name}, {"results", results}};
      out << j.dump(2) << "\n";
    }
  }
  return code;
}

Converted<AutomatonSpec> convert_to_automaton(const std::string& from, const std::string& to, const Source& s,
                                              const std::vector<std::string>& words) {
  if (from == "tm" && to == "ta") {
    const AutomatonSpec& tm = need_automaton(s, "--from tm");
    Word w = words.empty() ? Word{} : parse_word(words.front(), tm.alphabet);
    if (words.size() > 1) throw PreconditionViolation("--from tm --to ta takes a single --word");
    return tm_to_ta(tm, w);
  }
  if (from == "ta" && to == "dyadic") return polyadic_to_dyadic(need_automaton(s, "--from ta"));
  if ((from == "rudimentary" || from == "fluent") && to == "ta") {
    return rudimentary_to_ta(need_program(s, "--from " + from));
  }
  if (from == "fluent" && to == "dpda") return fluent_to_dpda(need_program(s, "--from fluent"));
  if (from == "ta" && to == "dpda") {
    TaDpda d = ta_to_dpda(need_automaton(s, "--from ta"));
    return {std::move(d.dpda), d.report};
  }
  throw PreconditionViolation("no conversion from " + from + " to " + to);
}

int cmd_convert(const Globals& g, const std::string& from, const std::string& to, const std::string& ref,
                const std::vector<std::string>& words, std::ostream& out) {
  Source s = load_source(ref);
  Source result;
  ConversionReport report;
  if (to == "typeof-program") {
    const AutomatonSpec& a = need_automaton(s, "--to typeof-program");
    Converted<TypeProgram> c;
    if (from == "tm") {
      std::vector<Word> ws;
      for (const auto& w : words) ws.push_back(parse_word(w, a.alphabet));
      c = tm_to_typeof_program(a, ws);
    } else if (from == "ta") {
      c = ta_to_typeof_program(a);
    } else {
      throw PreconditionViolation("no conversion from " + from + " to " + to);
    }
    result = std::move(c.result);
    report = c.report;
  } else {
    auto c = convert_to_automaton(from, to, s, words);
    result = std::move(c.result);
    report = c.report;
  }
  if (g.json()) {
    json j = parse_json(to_json(report));
    j["result"] = print_source(result);
    out << j.dump(2) << "\n";
  } else {
    out << comment_block(report) << print_source(result);
  }
  return kSuccess;
}

int cmd_generate(const Globals& g, const std::string& ref, const std::string& target_arg,
                 const std::vector<std::string>& words, std::ostream& out) {
  Source s = load_source(ref);
  TypeProgram p;
  EmitTarget target = EmitTarget::Pseudo;
  if (auto* prog = std::get_if<TypeProgram>(&s)) {
    p = std::move(*prog);
  } else if (auto* a = std::get_if<AutomatonSpec>(&s)) {
    target = EmitTarget::Cpp;
    if (a->storage == StorageKind::Tape) {
      std::vector<Word> ws;
      for (const auto& w : words) ws.push_back(parse_word(w, a->alphabet));
      p = tm_to_typeof_program(*a, ws).result;
    } else if (a->storage == StorageKind::Tree) {
      p = ta_to_typeof_program(*a).result;
    } else {
      throw PreconditionViolation("generate expects a Turing machine or a tree automaton");
    }
  } else {
    p = gnf_to_program(to_gnf(std::get<Cfg>(s)));
    for (const auto& w : words) p.expressions.push_back(word_to_expression(p, parse_word(w, p.word_alphabet())));
  }
  if (!target_arg.empty()) {
    auto t = parse_target(target_arg);
    if (!t) throw PreconditionViolation("unknown target '" + target_arg + "'");
    target = *t;
  }
  std::string text = emit(p, EmitOptions{target, 2});
  if (g.json()) {
    json j{{"report", "generate"}, {"target", to_string(target)}, {"program", p.name}, {"text", text}};
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
  return kSuccess;
}

int cmd_verify(const Globals& g, const std::string& left, const std::string& right, bool table,
               bool assume_unambiguous, std::ostream& out) {
  Source l = load_source(left);
  Source r = load_source(right);
  VerifyOptions vo;
  vo.max_len = g.max_len;
  vo.fuel = g.fuel;
  vo.keep_table = table;
  vo.assume_unambiguous = assume_unambiguous;
  VerifyReport rep = verify_bisimulation(l, r, vo);
  if (g.json()) {
    out << to_json(rep) << "\n";
  } else {
    if (table) {
      for (const auto& v : rep.table) {
        out << word_text(v.word) << ": " << to_string(v.left) << " / " << to_string(v.right) << "\n";
      }
    }
    for (const auto& v : rep.mismatches) {
      out << "mismatch " << word_text(v.word) << ": " << rep.left << " " << to_string(v.left) << ", " << rep.right
          << " " << to_string(v.right) << "\n";
    }
    for (const auto& v : rep.fuel_exhausted) out << "inconclusive " << word_text(v.word) << "\n";
    out << rep.left << " vs " << rep.right << ": " << rep.words << " words up to length " << rep.max_len << ", "
        << rep.agreements << " agree (" << rep.accepted << " accepted), " << rep.mismatches.size()
        << " mismatches, " << rep.fuel_exhausted.size() << " fuel-exhausted\n";
  }
  if (!rep.ok()) return kNegative;
  return rep.fuel_exhausted.empty() ? kSuccess : kInconclusive;
}

int cmd_fixtures(const Globals& g, const std::string& name, std::ostream& out) {
  if (name.empty()) {
    if (g.json()) {
      json list = json::array();
      for (const auto& f : fixtures()) {
        list.push_back({{"name", f.name},
                        {"kind", to_string(f.kind)},
                        {"description", f.description},
                        {"claimed_point", f.claimed_point ? json(*f.claimed_point) : json(nullptr)}});
      }
      json j{{"report", "fixtures"}, {"fixtures", list}};
      out << j.dump(2) << "\n";
    } else {
      for (const auto& f : fixtures()) {
        out << f.name << std::string(f.name.size() < 18 ? 18 - f.name.size() : 1, ' ') << to_string(f.kind)
            << std::string(f.kind == FixtureKind::Automaton ? 2 : 4, ' ') << f.description << "\n";
      }
    }
    return kSuccess;
  }
  const Fixture* f = find_fixture(name);
  if (f == nullptr) throw PreconditionViolation("unknown fixture '" + name + "'");
  if (g.json()) {
    print_source_report(out, true, load_fixture(name));
  } else {
    out << f->source;
  }
  return kSuccess;
}

int cmd_classify(const Globals& g, const std::string& ref, std::ostream& out) {
  Source s = load_source(ref);
  std::string point;
  std::vector<std::string> notes;
  if (const auto* p = std::get_if<TypeProgram>(&s)) {
    point = to_string(classify_program(*p));
  } else if (const auto* a = std::get_if<AutomatonSpec>(&s)) {
    ValidationReport v = validate(*a);
    point = to_string(v.point);
    for (const auto& d : v.diagnostics) notes.push_back(d.feature + ": " + d.message);
  } else {
    const Cfg& c = std::get<Cfg>(s);
    point = is_gnf(c) ? "gnf" : "not-gnf";
  }
  if (g.json()) {
    json j{{"report", "classify"}, {"name", display_name(s)}, {"point", point}, {"diagnostics", notes}};
    out << j.dump(2) << "\n";
  } else {
    out << display_name(s) << ": " << point << "\n";
    for (const auto& n : notes) out << "  " << n << "\n";
  }
  return notes.empty() ? kSuccess : kNegative;
}

int cmd_random(const Globals& g, const std::string& kind, std::ostream& out) {
  Source s;
  if (kind == "fluent") {
    s = random_fluent_program(g.seed);
  } else if (kind == "rudimentary") {
    s = random_rudimentary_program(g.seed);
  } else if (kind == "ta") {
    s = random_restricted_ta(g.seed);
  } else {
    s = random_cfg(g.seed);
  }
  print_source_report(out, g.json(), s);
  return kSuccess;
}

}  // namespace

Source load_source(std::string_view ref) {
  constexpr std::string_view kFixture = "fixtures:";
  constexpr std::string_view kConvert = "convert(";
  if (ref.substr(0, kFixture.size()) == kFixture) return load_fixture(ref.substr(kFixture.size()));
  if (ref.substr(0, kConvert.size()) == kConvert && !ref.empty() && ref.back() == ')') {
    return default_conversion(load_source(ref.substr(kConvert.size(), ref.size() - kConvert.size() - 1)));
  }
  std::string path(ref);
  return parse_source(read_file(path), path);
}

Source default_conversion(const Source& s) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) {
    if (is_fluent(*p)) {
      try {
        return fluent_to_dpda(*p).result;
      } catch (const Error&) {
        // not deterministic enough for a DPDA; the tree automaton still works
      }
    }
    return rudimentary_to_ta(*p).result;
  }
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) {
    if (a->storage == StorageKind::Tape) {
      throw PreconditionViolation("a tape machine converts per word; use convert --from tm --to ta --word W");
    }
    if (a->storage != StorageKind::Tree) throw PreconditionViolation("convert(...) expects a tree automaton");
    try {
      return ta_to_dpda(*a).dpda;
    } catch (const Error&) {
      return polyadic_to_dyadic(*a).result;
    }
  }
  return gnf_to_program(to_gnf(std::get<Cfg>(s)));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Type-level computation toolkit: programs, automata, conversions, code generation"};
  app.name("forge");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--fuel", g.fuel, "Step budget per run or check (env FORGE_FUEL)")->capture_default_str();
  app.add_option("--max-len", g.max_len, "Longest word enumerated by verify")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for the random subcommand")->capture_default_str();

  std::string ref, ref2, word, expr, mode, from, to, target, fixture_name, random_kind;
  std::vector<std::string> words;
  bool trace = false;
  bool table = false;
  bool assume_unambiguous = false;

  auto* sim = app.add_subcommand("simulate", "Run an automaton on a word (framing added)");
  sim->add_option("automaton", ref, "Automaton reference")->required();
  sim->add_option("word", word, "Word, e.g. aabb or 'a b' (eps for the empty word)")->required();
  sim->add_flag("--trace", trace, "Print every configuration of a deterministic run");

  auto* tc = app.add_subcommand("typecheck", "Type-check a word, an expression, or the program's expressions");
  tc->add_option("program", ref, "Program reference")->required();
  CLI::Option* word_opt = tc->add_option("word", word, "Word to check as a fluent chain");
  tc->add_option("--expr", expr, "Expression to check")->excludes(word_opt);
  tc->add_option("--mode", mode, "Override the overloading mode (one-type, eventually-one, multi)");
  tc->add_flag("--assume-unambiguous", assume_unambiguous, "Treat an ambiguous result as ill-typed");

  auto* cv = app.add_subcommand("convert", "Apply one conversion and print the result");
  cv->add_option("--from", from, "Source class")->required()->check(CLI::IsMember({"tm", "ta", "fluent", "rudimentary"}));
  cv->add_option("--to", to, "Target class")->required()->check(CLI::IsMember({"ta", "dpda", "typeof-program", "dyadic"}));
  cv->add_option("input", ref, "Input reference")->required();
  cv->add_option("--word", words, "Input word(s) for Turing machine conversions");

  auto* gn = app.add_subcommand("gnf", "Convert a grammar to Greibach normal form");
  gn->add_option("grammar", ref, "Grammar reference")->required();

  auto* gen = app.add_subcommand("generate", "Emit target-language type definitions");
  gen->add_option("input", ref, "Program, grammar, Turing machine or tree automaton")->required();
  gen->add_option("--target", target, "java, cpp or pseudo (default depends on the input)");
  gen->add_option("--word", words, "Words to include as expressions (machines and grammars)");

  auto* vf = app.add_subcommand("verify", "Compare two languages on every word up to --max-len");
  vf->add_option("left", ref, "Left reference")->required();
  vf->add_option("right", ref2, "Right reference")->required();
  vf->add_flag("--table", table, "Print the verdict of every word");
  vf->add_flag("--assume-unambiguous", assume_unambiguous, "Treat ambiguous results as rejections");

  auto* fx = app.add_subcommand("fixtures", "List the built-in fixtures or print one");
  fx->add_option("name", fixture_name, "Fixture name");

  auto* cl = app.add_subcommand("classify", "Print the least lattice point of a program or automaton");
  cl->add_option("input", ref, "Input reference")->required();

  auto* rnd = app.add_subcommand("random", "Print a random instance (uses --seed)");
  rnd->add_option("kind", random_kind, "fluent, rudimentary, ta or cfg")
      ->required()
      ->check(CLI::IsMember({"fluent", "rudimentary", "ta", "cfg"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(g, ref, word, trace, out);
    if (tc->parsed()) return cmd_typecheck(g, ref, word_opt, word, expr, mode, assume_unambiguous, out);
    if (cv->parsed()) return cmd_convert(g, from, to, ref, words, out);
    if (gn->parsed()) {
      Source s = load_source(ref);
      const Cfg* c = std::get_if<Cfg>(&s);
      if (c == nullptr) throw PreconditionViolation("gnf expects a grammar");
      print_source_report(out, g.json(), to_gnf(*c));
      return kSuccess;
    }
    if (gen->parsed()) return cmd_generate(g, ref, target, words, out);
    if (vf->parsed()) return cmd_verify(g, ref, ref2, table, assume_unambiguous, out);
    if (fx->parsed()) return cmd_fixtures(g, fixture_name, out);
    if (cl->parsed()) return cmd_classify(g, ref, out);
    if (rnd->parsed()) return cmd_random(g, random_kind, out);
  } catch (const std::exception& e) {
    err << "forge: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("forge");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace forge::cli
