#include "forge/toolchain/dsl.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"

namespace forge {

namespace {

using json = nlohmann::ordered_json;

bool is_punct(const Token& t, std::string_view p) { return t.kind == Token::Kind::Punct && t.text == p; }

// Statement keywords may contain dashes (`tape-alphabet`).
std::string dashed_word(TokenCursor& in, std::string_view what) {
  Token first = in.expect_ident(what);
  std::string w = first.text;
  while (is_punct(in.peek(), "-") && in.peek().line == first.line && in.peek(1).kind == Token::Kind::Ident &&
         in.peek(1).line == first.line) {
    in.next();
    w += "-" + in.next().text;
  }
  return w;
}

std::vector<Token> rest_of_line(TokenCursor& in, std::size_t line) {
  std::vector<Token> out;
  while (!in.at_end() && in.peek().line == line) out.push_back(in.next());
  return out;
}

std::vector<std::string> ident_list(TokenCursor& in, std::size_t line) {
  std::vector<std::string> out;
  for (const Token& t : rest_of_line(in, line)) {
    if (t.kind != Token::Kind::Ident) TokenCursor::fail_at(t, "expected a name, found '" + t.text + "'");
    out.push_back(t.text);
  }
  return out;
}

struct Decl {
  std::string name;
  unsigned rank = 0;
  std::vector<std::string> params;
  Token at;
};

Decl parse_decl(TokenCursor& in, unsigned bare_rank) {
  Token name = in.expect_ident("a symbol name");
  Decl d{name.text, bare_rank, {}, name};
  if (in.peek().line == name.line && is_punct(in.peek(), "(")) {
    in.next();
    do {
      d.params.push_back(in.expect_ident("a parameter name").text);
    } while (in.accept(","));
    in.expect(")");
    d.rank = static_cast<unsigned>(d.params.size());
  } else if (in.peek().line == name.line && is_punct(in.peek(), "/")) {
    in.next();
    Token k = in.expect_ident("a rank");
    if (!std::all_of(k.text.begin(), k.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      TokenCursor::fail_at(k, "rank must be a number");
    }
    d.rank = static_cast<unsigned>(std::stoul(k.text));
  }
  return d;
}

void declare(TermStore& store, const Decl& d) {
  try {
    store.declare(d.name, d.rank, d.params);
  } catch (const Error& e) {
    TokenCursor::fail_at(d.at, e.what());
  }
}

std::string decl_text(const TermStore& store, SymbolId s) {
  std::string out = store.name(s);
  if (store.rank(s) == 0) return out;
  out += '(';
  const auto& ps = store.params(s);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i > 0) out += ", ";
    out += ps[i];
  }
  return out + ')';
}

std::string joined(const std::vector<std::string>& v, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += v[i];
  }
  return out;
}

// ------------------------------------------------------------- programs

Expr parse_pexpr(TypeProgram& p, TokenCursor& in, const std::set<std::string>& fnames) {
  Expr e;
  Token t = in.peek();
  if (t.kind == Token::Kind::Ident && fnames.count(t.text) != 0 && is_punct(in.peek(1), "(")) {
    in.next();
    in.next();
    std::vector<Expr> args;
    if (!in.accept(")")) {
      do {
        args.push_back(parse_pexpr(p, in, fnames));
      } while (in.accept(","));
      in.expect(")");
    }
    if (args.empty()) args.push_back(Expr::term(p.store->leaf()));
    e = Expr::call(t.text, std::move(args));
  } else {
    e = Expr::term(parse_term(*p.store, in));
  }
  while (is_punct(in.peek(), ".")) {
    in.next();
    Token f = in.expect_ident("a function name");
    if (fnames.count(f.text) == 0) TokenCursor::fail_at(f, "undefined function '" + f.text + "'");
    e = Expr::call(f.text, {std::move(e)});
  }
  return e;
}

std::set<std::string> function_names(const TypeProgram& p) {
  std::set<std::string> out;
  for (const auto& d : p.defs) out.insert(d.name);
  return out;
}

void parse_def(TypeProgram& p, TokenCursor& in, bool aux, const std::set<std::string>& fnames) {
  FunctionDef d;
  d.name = in.expect_ident("a function name").text;
  d.auxiliary = aux;
  in.expect(":");
  do {
    d.params.push_back(parse_term(*p.store, in));
  } while (in.accept(","));
  in.expect("->");
  if (in.accept("typeof")) {
    d.uses_typeof = true;
    d.body = parse_pexpr(p, in, fnames);
  } else {
    d.body = Expr::term(parse_term(*p.store, in));
  }
  p.defs.push_back(std::move(d));
}

// ------------------------------------------------------------ automata

StorageKind parse_storage(const Token& t) {
  if (t.text == "none") return StorageKind::None;
  if (t.text == "pushdown") return StorageKind::Pushdown;
  if (t.text == "tree") return StorageKind::Tree;
  if (t.text == "tape") return StorageKind::Tape;
  TokenCursor::fail_at(t, "unknown storage kind '" + t.text + "'");
}

const char* storage_name(StorageKind k) {
  switch (k) {
    case StorageKind::None: return "none";
    case StorageKind::Pushdown: return "pushdown";
    case StorageKind::Tree: return "tree";
    case StorageKind::Tape: return "tape";
  }
  return "none";
}

const char* bound_name(TapeBound b) {
  switch (b) {
    case TapeBound::Linear: return "linear";
    case TapeBound::Unbounded: return "unbounded";
    case TapeBound::TwoWay: return "two-way";
  }
  return "unbounded";
}

StateId state_ref(const AutomatonSpec& a, const Token& t) {
  auto s = a.find_state(t.text);
  if (!s) TokenCursor::fail_at(t, "undeclared state '" + t.text + "'");
  return *s;
}

int tape_ref(const AutomatonSpec& a, const Token& t) {
  auto s = a.find_tape_symbol(t.text);
  if (!s) TokenCursor::fail_at(t, "undeclared tape symbol '" + t.text + "'");
  return *s;
}

StorageRewrite parse_rewrite(AutomatonSpec& a, TokenCursor& in, bool multi) {
  TermStore& store = *a.store;
  switch (a.storage) {
    case StorageKind::None:
      in.fail("automata without storage take no rules");
    case StorageKind::Tape: {
      TapeRule r;
      Token read = in.expect_ident("a tape symbol or '_'");
      if (read.text == "_") {
        r.move = TapeRule::Move::Extend;
        r.read = -1;
      } else {
        r.read = tape_ref(a, read);
      }
      in.expect("->");
      r.write = tape_ref(a, in.expect_ident("a tape symbol"));
      if (r.move != TapeRule::Move::Extend) {
        if (in.accept("+")) {
          r.move = TapeRule::Move::Right;
        } else if (in.accept("-")) {
          r.move = TapeRule::Move::Left;
        } else {
          in.fail("tape rules end in '+' or '-'");
        }
      }
      return r;
    }
    case StorageKind::Pushdown:
    case StorageKind::Tree:
      break;
  }
  Token at = in.peek();
  if (multi) {
    MultiRewriteRule m;
    if (in.peek().kind != Token::Kind::Arrow) {
      do {
        m.lhs.push_back(parse_term(store, in));
      } while (in.accept(","));
    }
    in.expect("->");
    m.rhs = parse_term(store, in);
    if (m.lhs.size() == 1) {
      RewriteRule r{m.lhs[0], m.rhs};
      if (!is_valid(store, r)) TokenCursor::fail_at(at, "rule mentions variables absent from its left-hand side");
      return r;
    }
    if (!is_valid(store, m)) TokenCursor::fail_at(at, "rule mentions variables absent from its left-hand side");
    return m;
  }
  RewriteRule r;
  if (at.kind == Token::Kind::Ident && at.text == "_") {
    in.next();
    r.from_bottom = true;
    r.lhs = store.leaf();
  } else {
    r.lhs = parse_term(store, in);
  }
  in.expect("->");
  r.rhs = parse_term(store, in);
  if (!is_valid(store, r)) TokenCursor::fail_at(at, "rule mentions variables absent from its left-hand side");
  return r;
}

std::string rewrite_text(const AutomatonSpec& a, const StorageRewrite& rw) {
  if (const auto* r = std::get_if<RewriteRule>(&rw)) return to_string(*a.store, *r);
  if (const auto* m = std::get_if<MultiRewriteRule>(&rw)) return to_string(*a.store, *m);
  if (const auto* t = std::get_if<TapeRule>(&rw)) {
    const auto& g = a.tape_alphabet;
    std::string w = g.at(static_cast<std::size_t>(t->write));
    switch (t->move) {
      case TapeRule::Move::Extend: return "_ -> " + w;
      case TapeRule::Move::Right: return g.at(static_cast<std::size_t>(t->read)) + " -> " + w + "+";
      case TapeRule::Move::Left: return g.at(static_cast<std::size_t>(t->read)) + " -> " + w + "-";
    }
  }
  return {};
}

template <typename Point, typename Apply>
std::optional<Point> parse_point(std::string_view text, std::size_t fields, Apply apply) {
  std::string s;
  for (char c : text) {
    if (c != '<' && c != '>' && c != ' ' && c != '\t') s += c;
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    parts.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != fields) return std::nullopt;
  Point p{};
  for (std::size_t i = 0; i < fields; ++i) {
    bool found = false;
    // Reuse the printer's vocabulary: try each value of field i.
    for (int v = 0; v < 8 && !found; ++v) {
      Point probe{};
      if (!apply(probe, i, v)) break;
      std::string printed = to_string(probe);
      std::vector<std::string> names;
      std::string cur;
      for (char c : printed) {
        if (c == '<' || c == '>' || c == ' ') continue;
        if (c == ',') {
          names.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      names.push_back(cur);
      if (names[i] == parts[i]) {
        apply(p, i, v);
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return p;
}

std::string tokens_text(const std::vector<Token>& toks) {
  std::string out;
  for (const auto& t : toks) {
    out += t.text;
    if (t.text == ",") out += ' ';
  }
  return out;
}

// -------------------------------------------------------------- grammars

bool grammar_symbol_ok(const Token& t) { return t.kind == Token::Kind::Ident; }

}  // namespace

// ================================================================ programs

TypeProgram parse_program(std::string_view text) {
  auto toks = tokenize(text);
  if (toks.size() <= 1) throw SyntaxError("empty program", 1, 1);
  std::set<std::string> fnames;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if ((toks[i].text == "fn" || toks[i].text == "aux") && toks[i].kind == Token::Kind::Ident &&
        toks[i + 1].kind == Token::Kind::Ident) {
      fnames.insert(toks[i + 1].text);
    }
  }
  TokenCursor in(std::move(toks));
  TypeProgram p;
  bool unit_seen = false;
  while (!in.at_end()) {
    Token kwtok = in.peek();
    std::string kw = dashed_word(in, "a statement");
    if (kw == "program") {
      p.name = dashed_word(in, "a program name");
    } else if (kw == "mode") {
      Token m = in.peek();
      auto mode = parse_mode(dashed_word(in, "a mode"));
      if (!mode) TokenCursor::fail_at(m, "unknown mode");
      p.mode = *mode;
    } else if (kw == "style") {
      Token s = in.expect_ident("decltype or auto");
      if (s.text == "decltype") {
        p.typeof_style = TypeofStyle::Decltype;
      } else if (s.text == "auto") {
        p.typeof_style = TypeofStyle::Auto;
      } else {
        TokenCursor::fail_at(s, "unknown style '" + s.text + "'");
      }
    } else if (kw == "type") {
      Decl d = parse_decl(in, 0);
      if (d.name == "eps") TokenCursor::fail_at(d.at, "the unit is declared with 'unit'");
      declare(*p.store, d);
      p.type_order.push_back(d.name);
      if (in.peek().line == d.at.line && in.accept("extern")) p.external_types.push_back(d.name);
    } else if (kw == "unit") {
      Token u = in.expect_ident("the unit's name");
      if (unit_seen) TokenCursor::fail_at(u, "unit declared twice");
      unit_seen = true;
      p.unit_name = u.text;
      p.type_order.push_back("eps");
    } else if (kw == "alphabet") {
      p.alphabet = ident_list(in, kwtok.line);
    } else if (kw == "prefix") {
      p.framing.prefix = ident_list(in, kwtok.line);
    } else if (kw == "suffix") {
      p.framing.suffix = ident_list(in, kwtok.line);
    } else if (kw == "fn" || kw == "aux") {
      parse_def(p, in, kw == "aux", fnames);
    } else if (kw == "expr") {
      p.expressions.push_back(parse_pexpr(p, in, fnames));
    } else if (kw == "result") {
      p.result_type = parse_term(*p.store, in);
    } else {
      TokenCursor::fail_at(kwtok, "unknown statement '" + kw + "'");
    }
  }
  if (!unit_seen) p.type_order.insert(p.type_order.begin(), "eps");
  check_well_formed(p);
  return p;
}

Expr parse_expression(const TypeProgram& p, std::string_view text) {
  TokenCursor in(tokenize(text));
  if (in.at_end()) throw SyntaxError("empty expression", 1, 1);
  // Parsing may intern new terms; the store is shared and append-only.
  TypeProgram& mut = const_cast<TypeProgram&>(p);
  Expr e = parse_pexpr(mut, in, function_names(p));
  if (!in.at_end()) in.fail("unexpected '" + in.peek().text + "' after expression");
  return e;
}

std::string to_string(const TypeProgram& p, const Expr& e) {
  if (!e.is_call()) return to_string(*p.store, e.leaf);
  if (e.args.size() == 1) return to_string(p, e.args[0]) + "." + e.callee;
  std::string out = e.callee + "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(p, e.args[i]);
  }
  return out + ")";
}

std::string print_program(const TypeProgram& p) {
  const TermStore& store = *p.store;
  std::string out;
  if (!p.name.empty()) out += "program " + p.name + "\n";
  out += std::string("mode ") + to_string(p.mode) + "\n";
  if (p.typeof_style == TypeofStyle::Auto) out += "style auto\n";
  std::vector<std::string> order = p.type_order;
  for (SymbolId s : store.symbols()) {
    if (std::find(order.begin(), order.end(), store.name(s)) == order.end()) order.push_back(store.name(s));
  }
  if (std::find(order.begin(), order.end(), "eps") == order.end()) order.insert(order.begin(), "eps");
  for (const auto& n : order) {
    if (n == "eps") {
      out += "unit " + p.unit_name + "\n";
      continue;
    }
    out += "type " + decl_text(store, store.symbol(n));
    if (p.is_external(n)) out += " extern";
    out += "\n";
  }
  if (!p.alphabet.empty()) out += "alphabet " + joined(p.alphabet) + "\n";
  if (!p.framing.prefix.empty()) out += "prefix " + joined(p.framing.prefix) + "\n";
  if (!p.framing.suffix.empty()) out += "suffix " + joined(p.framing.suffix) + "\n";
  if (p.result_type) out += "result " + to_string(store, *p.result_type) + "\n";
  for (const auto& d : p.defs) {
    out += d.auxiliary ? "aux " : "fn ";
    out += d.name + " : ";
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i > 0) out += ", ";
      out += to_string(store, d.params[i]);
    }
    out += " -> ";
    out += d.uses_typeof ? "typeof " + to_string(p, d.body) : to_string(store, d.body.leaf);
    out += "\n";
  }
  for (const auto& e : p.expressions) out += "expr " + to_string(p, e) + "\n";
  return out;
}

// ================================================================ automata

AutomatonSpec parse_automaton(std::string_view text) {
  auto toks = tokenize(text);
  if (toks.size() <= 1) throw SyntaxError("empty automaton", 1, 1);
  TokenCursor in(std::move(toks));
  AutomatonSpec a;
  a.initial_tree = a.store->leaf();
  bool have_states = false;
  while (!in.at_end()) {
    Token kwtok = in.peek();
    std::string kw = dashed_word(in, "a statement");
    if (kw == "automaton") {
      a.name = dashed_word(in, "an automaton name");
    } else if (kw == "storage") {
      a.storage = parse_storage(in.expect_ident("a storage kind"));
    } else if (kw == "tape-bound") {
      Token b = in.peek();
      std::string v = dashed_word(in, "a tape bound");
      if (v == "linear") {
        a.tape_bound = TapeBound::Linear;
      } else if (v == "unbounded") {
        a.tape_bound = TapeBound::Unbounded;
      } else if (v == "two-way") {
        a.tape_bound = TapeBound::TwoWay;
      } else {
        TokenCursor::fail_at(b, "unknown tape bound '" + v + "'");
      }
    } else if (kw == "tape-preload") {
      Token v = in.expect_ident("on or off");
      if (v.text != "on" && v.text != "off") TokenCursor::fail_at(v, "expected on or off");
      a.tape_preload = v.text == "on";
    } else if (kw == "forest") {
      a.forest = true;
    } else if (kw == "deterministic-at-end") {
      a.deterministic_at_end = true;
    } else if (kw == "states") {
      for (const auto& s : ident_list(in, kwtok.line)) a.add_state(s);
      have_states = true;
    } else if (kw == "initial") {
      a.initial = state_ref(a, in.expect_ident("a state"));
    } else if (kw == "accepting") {
      for (const Token& t : rest_of_line(in, kwtok.line)) a.accepting[index(state_ref(a, t))] = true;
    } else if (kw == "alphabet") {
      while (!in.at_end() && in.peek().line == kwtok.line) {
        Decl d = parse_decl(in, 0);
        if (a.find_letter(d.name)) TokenCursor::fail_at(d.at, "letter '" + d.name + "' declared twice");
        a.add_letter(d.name, d.rank);
      }
    } else if (kw == "prefix") {
      a.framing.prefix = ident_list(in, kwtok.line);
    } else if (kw == "suffix") {
      a.framing.suffix = ident_list(in, kwtok.line);
    } else if (kw == "stack-alphabet") {
      for (const Token& t : rest_of_line(in, kwtok.line)) {
        if (t.kind != Token::Kind::Ident) TokenCursor::fail_at(t, "expected a stack symbol");
        if (t.text != "eps") declare(*a.store, Decl{t.text, 1, {}, t});
        a.storage_order.push_back(t.text);
      }
    } else if (kw == "tree-alphabet") {
      while (!in.at_end() && in.peek().line == kwtok.line) {
        if (in.peek().text == "eps") {
          in.next();
          a.storage_order.push_back("eps");
          continue;
        }
        Decl d = parse_decl(in, 0);
        declare(*a.store, d);
        a.storage_order.push_back(d.name);
      }
    } else if (kw == "tape-alphabet") {
      a.tape_alphabet = ident_list(in, kwtok.line);
    } else if (kw == "blank") {
      a.blank = tape_ref(a, in.expect_ident("a tape symbol"));
    } else if (kw == "initial-storage") {
      a.initial_tree = parse_term(*a.store, in);
    } else if (kw == "initial-tape") {
      for (const Token& t : rest_of_line(in, kwtok.line)) a.initial_tape.push_back(tape_ref(a, t));
    } else if (kw == "point") {
      auto pt = parse_point_a(tokens_text(rest_of_line(in, kwtok.line)));
      if (!pt) TokenCursor::fail_at(kwtok, "malformed lattice point");
      a.declared = pt;
    } else if (kw == "delta") {
      in.expect(":");
      in.expect("on");
      Token lt = in.expect_ident("a letter");
      auto letter = a.find_letter(lt.text);
      if (!letter) TokenCursor::fail_at(lt, "undeclared letter '" + lt.text + "'");
      ConsumingItem item;
      item.letter = *letter;
      if (in.accept("in")) item.from = state_ref(a, in.expect_ident("a state"));
      if (in.accept("children")) {
        do {
          item.children.push_back(state_ref(a, in.expect_ident("a state")));
        } while (in.accept(","));
      }
      if (in.accept("rule")) item.rewrite = parse_rewrite(a, in, a.forest);
      in.expect("goto");
      item.to = state_ref(a, in.expect_ident("a state"));
      a.delta.push_back(std::move(item));
    } else if (kw == "epsilon") {
      in.expect(":");
      in.expect("in");
      EpsilonItem item;
      item.from = state_ref(a, in.expect_ident("a state"));
      if (in.accept("rule")) item.rewrite = parse_rewrite(a, in, false);
      in.expect("goto");
      item.to = state_ref(a, in.expect_ident("a state"));
      a.epsilon.push_back(std::move(item));
    } else {
      TokenCursor::fail_at(kwtok, "unknown statement '" + kw + "'");
    }
  }
  if (!have_states) throw SyntaxError("automaton declares no states", 1, 1);
  return a;
}

std::string print_automaton(const AutomatonSpec& a) {
  const TermStore& store = *a.store;
  std::string out;
  if (!a.name.empty()) out += "automaton " + a.name + "\n";
  out += std::string("storage ") + storage_name(a.storage) + "\n";
  if (a.storage == StorageKind::Tape) {
    out += std::string("tape-bound ") + bound_name(a.tape_bound) + "\n";
    if (!a.tape_preload) out += "tape-preload off\n";
  }
  if (a.forest) out += "forest\n";
  out += "states " + joined(a.states) + "\n";
  out += "initial " + a.states.at(index(a.initial)) + "\n";
  std::vector<std::string> acc;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.accepting[i]) acc.push_back(a.states[i]);
  }
  out += "accepting" + (acc.empty() ? std::string() : " " + joined(acc)) + "\n";
  if (!a.alphabet.empty()) {
    out += "alphabet";
    for (std::size_t i = 0; i < a.alphabet.size(); ++i) {
      out += " " + a.alphabet[i];
      if (a.forest) out += "/" + std::to_string(a.letter_ranks.at(i));
    }
    out += "\n";
  }
  if (!a.framing.prefix.empty()) out += "prefix " + joined(a.framing.prefix) + "\n";
  if (!a.framing.suffix.empty()) out += "suffix " + joined(a.framing.suffix) + "\n";
  if (a.storage == StorageKind::Pushdown || a.storage == StorageKind::Tree) {
    std::vector<std::string> order = a.storage_order;
    for (SymbolId s : store.symbols()) {
      if (std::find(order.begin(), order.end(), store.name(s)) == order.end()) order.push_back(store.name(s));
    }
    if (!order.empty()) {
      std::vector<std::string> items;
      for (const auto& n : order) {
        if (n == "eps" || a.storage == StorageKind::Pushdown) {
          items.push_back(n);
        } else {
          items.push_back(decl_text(store, store.symbol(n)));
        }
      }
      out += (a.storage == StorageKind::Pushdown ? "stack-alphabet " : "tree-alphabet ") + joined(items) + "\n";
    }
    if (!store.is_leaf(a.initial_tree)) out += "initial-storage " + to_string(store, a.initial_tree) + "\n";
  }
  if (a.storage == StorageKind::Tape) {
    out += "tape-alphabet " + joined(a.tape_alphabet) + "\n";
    if (a.blank) out += "blank " + a.tape_alphabet.at(static_cast<std::size_t>(*a.blank)) + "\n";
    if (!a.initial_tape.empty()) {
      std::vector<std::string> cells;
      for (int c : a.initial_tape) cells.push_back(a.tape_alphabet.at(static_cast<std::size_t>(c)));
      out += "initial-tape " + joined(cells) + "\n";
    }
  }
  if (a.declared) out += "point " + to_string(*a.declared) + "\n";
  if (a.deterministic_at_end) out += "deterministic-at-end\n";
  for (const auto& it : a.delta) {
    out += "delta: on " + a.alphabet.at(it.letter);
    if (!a.forest) out += " in " + a.states.at(index(it.from));
    if (!it.children.empty()) {
      std::vector<std::string> kids;
      for (StateId c : it.children) kids.push_back(a.states.at(index(c)));
      out += " children " + joined(kids, ", ");
    }
    if (!std::holds_alternative<std::monostate>(it.rewrite)) out += " rule " + rewrite_text(a, it.rewrite);
    out += " goto " + a.states.at(index(it.to)) + "\n";
  }
  for (const auto& it : a.epsilon) {
    out += "epsilon: in " + a.states.at(index(it.from));
    if (!std::holds_alternative<std::monostate>(it.rewrite)) out += " rule " + rewrite_text(a, it.rewrite);
    out += " goto " + a.states.at(index(it.to)) + "\n";
  }
  return out;
}

std::optional<LatticePointT> parse_point_t(std::string_view text) {
  return parse_point<LatticePointT>(text, 6, [](LatticePointT& p, std::size_t i, int v) {
    static const int limits[] = {4, 3, 2, 2, 3, 3};
    if (v >= limits[i]) return false;
    switch (i) {
      case 0: p.c1 = static_cast<ArgArity>(v); break;
      case 1: p.c2 = static_cast<PatternDepth>(v); break;
      case 2: p.c3 = static_cast<PatternMultiplicity>(v); break;
      case 3: p.c4 = static_cast<FunctionArity>(v); break;
      case 4: p.c5 = static_cast<TypeofFeature>(v); break;
      default: p.c6 = static_cast<OverloadMode>(v); break;
    }
    return true;
  });
}

std::optional<LatticePointA> parse_point_a(std::string_view text) {
  return parse_point<LatticePointA>(text, 7, [](LatticePointA& p, std::size_t i, int v) {
    static const int limits[] = {2, 5, 2, 2, 2, 2, 2};
    if (v >= limits[i]) return false;
    switch (i) {
      case 0: p.states = static_cast<StatesFeature>(v); break;
      case 1: p.storage = static_cast<StorageFeature>(v); break;
      case 2: p.recognizer = static_cast<RecognizerFeature>(v); break;
      case 3: p.epsilon = static_cast<EpsilonFeature>(v); break;
      case 4: p.determinism = static_cast<DeterminismFeature>(v); break;
      case 5: p.multiplicity = static_cast<MultiplicityFeature>(v); break;
      default: p.depth = static_cast<DepthFeature>(v); break;
    }
    return true;
  });
}

// ================================================================ grammars

Cfg parse_grammar(std::string_view text) {
  auto toks = tokenize(text);
  if (toks.size() <= 1) throw SyntaxError("empty grammar", 1, 1);
  TokenCursor in(std::move(toks));
  Cfg g;
  std::vector<std::string> declared_terminals;
  bool terminals_given = false;
  std::vector<std::pair<Token, std::vector<std::string>>> raw;
  std::vector<std::string> lhs_order;
  auto note_var = [&](const std::string& v) {
    if (std::find(lhs_order.begin(), lhs_order.end(), v) == lhs_order.end()) lhs_order.push_back(v);
  };
  while (!in.at_end()) {
    Token head = in.expect_ident("a variable or statement");
    if (head.text == "start" && in.peek().kind == Token::Kind::Ident) {
      g.start = in.next().text;
      in.expect(";");
      continue;
    }
    if ((head.text == "terminals" || head.text == "variables") && in.peek().kind != Token::Kind::Arrow) {
      std::vector<std::string> names;
      while (!in.accept(";")) {
        const Token& t = in.next();
        if (!grammar_symbol_ok(t)) TokenCursor::fail_at(t, "expected a name");
        names.push_back(t.text);
      }
      if (head.text == "terminals") {
        declared_terminals = names;
        terminals_given = true;
      } else {
        for (const auto& n : names) note_var(n);
      }
      continue;
    }
    in.expect("->");
    note_var(head.text);
    for (;;) {
      std::vector<std::string> rhs;
      while (in.peek().kind == Token::Kind::Ident) {
        std::string s = in.next().text;
        if (s != "eps") rhs.push_back(s);
      }
      raw.emplace_back(head, std::move(rhs));
      if (in.accept("|")) continue;
      in.expect(";");
      break;
    }
  }
  if (g.start.empty()) throw SyntaxError("grammar has no 'start' statement", 1, 1);
  note_var(g.start);
  // start first
  g.variables.push_back(g.start);
  for (const auto& v : lhs_order) {
    if (v != g.start) g.variables.push_back(v);
  }
  g.terminals = declared_terminals;
  for (auto& [head, rhs] : raw) {
    for (const auto& s : rhs) {
      if (g.is_variable(s) || g.is_terminal(s)) continue;
      if (terminals_given) TokenCursor::fail_at(head, "undeclared terminal '" + s + "'");
      g.terminals.push_back(s);
    }
    g.rules.push_back(Production{head.text, rhs});
  }
  g.check();
  return g;
}

std::string print_grammar(const Cfg& g) {
  std::string out = "start " + g.start + ";\n";
  out += "terminals" + (g.terminals.empty() ? std::string() : " " + joined(g.terminals)) + ";\n";
  out += "variables " + joined(g.variables) + ";\n";
  for (const auto& v : g.variables) {
    std::vector<std::string> alts;
    for (const auto& r : g.rules) {
      if (r.lhs == v) alts.push_back(joined(r.rhs));
    }
    if (alts.empty()) continue;
    out += v + " ->";
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (i > 0) out += " |";
      if (!alts[i].empty()) out += " " + alts[i];
    }
    out += ";\n";
  }
  return out;
}

// ================================================================ JSON

std::string to_json(const TypeProgram& p) {
  const TermStore& store = *p.store;
  json j;
  j["kind"] = "program";
  j["name"] = p.name;
  j["mode"] = to_string(p.mode);
  j["style"] = p.typeof_style == TypeofStyle::Auto ? "auto" : "decltype";
  j["unit"] = p.unit_name;
  json types = json::array();
  for (const auto& n : p.type_order) {
    if (n == "eps") {
      types.push_back({{"unit", true}});
      continue;
    }
    SymbolId s = store.symbol(n);
    types.push_back({{"name", n}, {"params", store.params(s)}, {"extern", p.is_external(n)}});
  }
  j["types"] = types;
  j["alphabet"] = p.alphabet;
  j["prefix"] = p.framing.prefix;
  j["suffix"] = p.framing.suffix;
  j["result"] = p.result_type ? json(to_string(store, *p.result_type)) : json(nullptr);
  json defs = json::array();
  for (const auto& d : p.defs) {
    json params = json::array();
    for (Term t : d.params) params.push_back(to_string(store, t));
    defs.push_back({{"kind", d.auxiliary ? "aux" : "fn"},
                    {"name", d.name},
                    {"params", params},
                    {"typeof", d.uses_typeof},
                    {"body", d.uses_typeof ? to_string(p, d.body) : to_string(store, d.body.leaf)}});
  }
  j["defs"] = defs;
  json exprs = json::array();
  for (const auto& e : p.expressions) exprs.push_back(to_string(p, e));
  j["expressions"] = exprs;
  return j.dump(2);
}

std::string to_json(const AutomatonSpec& a) {
  const TermStore& store = *a.store;
  json j;
  j["kind"] = "automaton";
  j["name"] = a.name;
  j["storage"] = storage_name(a.storage);
  j["tape_bound"] = bound_name(a.tape_bound);
  j["tape_preload"] = a.tape_preload;
  j["forest"] = a.forest;
  j["states"] = a.states;
  j["initial"] = a.states.at(index(a.initial));
  json acc = json::array();
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.accepting[i]) acc.push_back(a.states[i]);
  }
  j["accepting"] = acc;
  json letters = json::array();
  for (std::size_t i = 0; i < a.alphabet.size(); ++i) {
    letters.push_back({{"name", a.alphabet[i]}, {"rank", a.forest ? a.letter_ranks.at(i) : 0u}});
  }
  j["alphabet"] = letters;
  j["prefix"] = a.framing.prefix;
  j["suffix"] = a.framing.suffix;
  json symbols = json::array();
  for (const auto& n : a.storage_order) {
    if (n == "eps") {
      symbols.push_back({{"unit", true}});
    } else {
      SymbolId s = store.symbol(n);
      symbols.push_back({{"name", n}, {"params", store.params(s)}});
    }
  }
  j["storage_alphabet"] = symbols;
  j["tape_alphabet"] = a.tape_alphabet;
  j["blank"] = a.blank ? json(a.tape_alphabet.at(static_cast<std::size_t>(*a.blank))) : json(nullptr);
  j["initial_storage"] = to_string(store, a.initial_tree);
  json tape = json::array();
  for (int c : a.initial_tape) tape.push_back(a.tape_alphabet.at(static_cast<std::size_t>(c)));
  j["initial_tape"] = tape;
  j["point"] = a.declared ? json(to_string(*a.declared)) : json(nullptr);
  j["deterministic_at_end"] = a.deterministic_at_end;
  json delta = json::array();
  for (const auto& it : a.delta) {
    json item{{"on", a.alphabet.at(it.letter)}};
    if (!a.forest) item["in"] = a.states.at(index(it.from));
    json kids = json::array();
    for (StateId c : it.children) kids.push_back(a.states.at(index(c)));
    item["children"] = kids;
    item["rule"] = std::holds_alternative<std::monostate>(it.rewrite) ? json(nullptr) : json(rewrite_text(a, it.rewrite));
    item["goto"] = a.states.at(index(it.to));
    delta.push_back(item);
  }
  j["delta"] = delta;
  json eps = json::array();
  for (const auto& it : a.epsilon) {
    eps.push_back({{"in", a.states.at(index(it.from))},
                   {"rule", std::holds_alternative<std::monostate>(it.rewrite) ? json(nullptr)
                                                                               : json(rewrite_text(a, it.rewrite))},
                   {"goto", a.states.at(index(it.to))}});
  }
  j["epsilon"] = eps;
  return j.dump(2);
}

std::string to_json(const Cfg& g) {
  json j;
  j["kind"] = "grammar";
  j["start"] = g.start;
  j["terminals"] = g.terminals;
  j["variables"] = g.variables;
  json rules = json::array();
  for (const auto& r : g.rules) rules.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}});
  j["rules"] = rules;
  return j.dump(2);
}

namespace {

std::vector<std::string> str_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (j.contains(key) && j[key].is_array()) {
    for (const auto& v : j[key]) out.push_back(v.get<std::string>());
  }
  return out;
}

std::string str(const json& j, const char* key, std::string fallback = {}) {
  return j.contains(key) && j[key].is_string() ? j[key].get<std::string>() : fallback;
}

std::string decl_from_json(const json& t) {
  std::string out = t.at("name").get<std::string>();
  auto ps = str_list(t, "params");
  if (!ps.empty()) out += "(" + joined(ps, ", ") + ")";
  return out;
}

// The JSON mirror goes through the DSL so both share one validator.
std::string program_text_from_json(const json& j) {
  std::string out;
  if (!str(j, "name").empty()) out += "program " + str(j, "name") + "\n";
  out += "mode " + str(j, "mode", "one-type") + "\n";
  out += "style " + str(j, "style", "decltype") + "\n";
  bool unit = false;
  for (const auto& t : j.value("types", json::array())) {
    if (t.contains("unit")) {
      out += "unit " + str(j, "unit", "E") + "\n";
      unit = true;
      continue;
    }
    out += "type " + decl_from_json(t) + (t.value("extern", false) ? " extern" : "") + "\n";
  }
  if (!unit) out += "unit " + str(j, "unit", "E") + "\n";
  for (const char* k : {"alphabet", "prefix", "suffix"}) {
    auto v = str_list(j, k);
    if (!v.empty()) out += std::string(k) + " " + joined(v) + "\n";
  }
  if (!str(j, "result").empty()) out += "result " + str(j, "result") + "\n";
  for (const auto& d : j.value("defs", json::array())) {
    out += str(d, "kind", "fn") + " " + d.at("name").get<std::string>() + " : " + joined(str_list(d, "params"), ", ") +
           " -> " + (d.value("typeof", false) ? "typeof " : "") + d.at("body").get<std::string>() + "\n";
  }
  for (const auto& e : j.value("expressions", json::array())) out += "expr " + e.get<std::string>() + "\n";
  return out;
}

std::string automaton_text_from_json(const json& j) {
  std::string out;
  if (!str(j, "name").empty()) out += "automaton " + str(j, "name") + "\n";
  std::string storage = str(j, "storage", "none");
  out += "storage " + storage + "\n";
  if (storage == "tape") {
    out += "tape-bound " + str(j, "tape_bound", "unbounded") + "\n";
    if (!j.value("tape_preload", true)) out += "tape-preload off\n";
  }
  bool forest = j.value("forest", false);
  if (forest) out += "forest\n";
  out += "states " + joined(str_list(j, "states")) + "\n";
  out += "initial " + str(j, "initial") + "\n";
  out += "accepting " + joined(str_list(j, "accepting")) + "\n";
  std::vector<std::string> letters;
  for (const auto& l : j.value("alphabet", json::array())) {
    if (l.is_string()) {
      letters.push_back(l.get<std::string>());
    } else {
      letters.push_back(l.at("name").get<std::string>() + (forest ? "/" + std::to_string(l.value("rank", 0)) : ""));
    }
  }
  if (!letters.empty()) out += "alphabet " + joined(letters) + "\n";
  for (const char* k : {"prefix", "suffix"}) {
    auto v = str_list(j, k);
    if (!v.empty()) out += std::string(k) + " " + joined(v) + "\n";
  }
  std::vector<std::string> syms;
  for (const auto& s : j.value("storage_alphabet", json::array())) {
    if (s.contains("unit")) {
      syms.push_back("eps");
    } else {
      syms.push_back(storage == "pushdown" ? s.at("name").get<std::string>() : decl_from_json(s));
    }
  }
  if (!syms.empty()) out += (storage == "pushdown" ? "stack-alphabet " : "tree-alphabet ") + joined(syms) + "\n";
  auto tape = str_list(j, "tape_alphabet");
  if (!tape.empty()) out += "tape-alphabet " + joined(tape) + "\n";
  if (!str(j, "blank").empty()) out += "blank " + str(j, "blank") + "\n";
  std::string init = str(j, "initial_storage", "eps");
  if (init != "eps") out += "initial-storage " + init + "\n";
  auto cells = str_list(j, "initial_tape");
  if (!cells.empty()) out += "initial-tape " + joined(cells) + "\n";
  if (!str(j, "point").empty()) out += "point " + str(j, "point") + "\n";
  if (j.value("deterministic_at_end", false)) out += "deterministic-at-end\n";
  for (const auto& it : j.value("delta", json::array())) {
    out += "delta: on " + it.at("on").get<std::string>();
    if (!str(it, "in").empty()) out += " in " + str(it, "in");
    auto kids = str_list(it, "children");
    if (!kids.empty()) out += " children " + joined(kids, ", ");
    if (!str(it, "rule").empty()) out += " rule " + str(it, "rule");
    out += " goto " + it.at("goto").get<std::string>() + "\n";
  }
  for (const auto& it : j.value("epsilon", json::array())) {
    out += "epsilon: in " + it.at("in").get<std::string>();
    if (!str(it, "rule").empty()) out += " rule " + str(it, "rule");
    out += " goto " + it.at("goto").get<std::string>() + "\n";
  }
  return out;
}

std::string grammar_text_from_json(const json& j) {
  std::string out = "start " + str(j, "start") + ";\n";
  out += "terminals " + joined(str_list(j, "terminals")) + ";\n";
  auto vars = str_list(j, "variables");
  if (!vars.empty()) out += "variables " + joined(vars) + ";\n";
  for (const auto& r : j.value("rules", json::array())) {
    out += r.at("lhs").get<std::string>() + " -> " + joined(str_list(r, "rhs")) + ";\n";
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

Source parse_source(std::string_view text, std::string_view hint) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw SyntaxError(std::string("invalid JSON: ") + e.what(), 1, 1);
    }
    std::string kind = str(j, "kind");
    try {
      if (kind == "program") return parse_program(program_text_from_json(j));
      if (kind == "automaton") return parse_automaton(automaton_text_from_json(j));
      if (kind == "grammar") return parse_grammar(grammar_text_from_json(j));
    } catch (const json::exception& e) {
      throw SyntaxError(std::string("malformed JSON document: ") + e.what(), 1, 1);
    }
    throw SyntaxError("JSON document needs \"kind\": program, automaton or grammar", 1, 1);
  }
  if (ends_with(hint, ".typ")) return parse_program(text);
  if (ends_with(hint, ".aut")) return parse_automaton(text);
  if (ends_with(hint, ".cfg")) return parse_grammar(text);
  // Sniff the first statement.
  auto toks = tokenize(text);
  if (toks.size() <= 1) throw SyntaxError("empty input", 1, 1);
  static const std::set<std::string> automaton_words = {"automaton", "storage", "states", "forest"};
  static const std::set<std::string> grammar_words = {"start", "terminals", "variables"};
  for (const auto& t : toks) {
    if (t.kind != Token::Kind::Ident) continue;
    if (automaton_words.count(t.text) != 0) return parse_automaton(text);
    if (grammar_words.count(t.text) != 0) return parse_grammar(text);
    break;
  }
  return parse_program(text);
}

std::string print_source(const Source& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeProgram>) {
          return print_program(v);
        } else if constexpr (std::is_same_v<T, AutomatonSpec>) {
          return print_automaton(v);
        } else {
          return print_grammar(v);
        }
      },
      s);
}

}  // namespace forge
