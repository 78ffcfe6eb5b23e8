#include "forge/automata/run.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <unordered_set>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"

namespace forge {

namespace {

constexpr std::uint32_t kUnknownLetter = std::numeric_limits<std::uint32_t>::max();

struct IdHash {
  std::size_t operator()(const InstantaneousDescription& id) const noexcept {
    std::size_t h = id.consumed * 1000003u;
    h ^= static_cast<std::size_t>(id.state) * 7919u + (h << 6) + (h >> 2);
    h ^= id.tree.id + 0x9e3779b9u + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(id.tape.head) + (h << 6) + (h >> 2);
    for (int c : id.tape.cells) h ^= static_cast<std::size_t>(c + 2) + 0x9e3779b9u + (h << 6) + (h >> 2);
    return h;
  }
};

// Applies a storage rewrite; false when it does not apply or the head leaves the tape.
bool apply_storage(const AutomatonSpec& spec, const StorageRewrite& rw, InstantaneousDescription& id,
                   std::size_t input_len) {
  TermStore& store = *spec.store;
  if (std::holds_alternative<std::monostate>(rw)) return true;
  if (const auto* r = std::get_if<RewriteRule>(&rw)) {
    auto out = apply_rewrite(store, *r, id.tree);
    if (!out) return false;
    id.tree = *out;
    return true;
  }
  if (const auto* m = std::get_if<MultiRewriteRule>(&rw)) {
    if (m->lhs.size() != 1) return false;
    auto out = apply_multi_rewrite(store, *m, std::span<const Term>(&id.tree, 1));
    if (!out) return false;
    id.tree = *out;
    return true;
  }
  const auto& t = std::get<TapeRule>(rw);
  TapeContents& tape = id.tape;
  int raw = tape.read();
  if (t.move == TapeRule::Move::Extend) {
    if (raw != -1 || t.read != -1) return false;
    tape.write(t.write);
    return true;
  }
  int seen = raw == -1 && spec.blank ? *spec.blank : raw;
  if (t.read == -1 ? raw != -1 : seen != t.read) return false;
  tape.write(t.write);
  tape.head += t.move == TapeRule::Move::Right ? 1 : -1;
  switch (spec.tape_bound) {
    case TapeBound::Linear:
      if (tape.head < 0 || tape.head > static_cast<long>(input_len)) return false;
      break;
    case TapeBound::Unbounded:
      if (tape.head < 0) return false;
      break;
    case TapeBound::TwoWay:
      break;
  }
  tape.trim();
  return true;
}

}  // namespace

std::size_t default_fuel() {
  if (const char* env = std::getenv("FORGE_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultFuel;
}

int TapeContents::at(long pos) const {
  long i = pos - origin;
  if (i < 0 || i >= static_cast<long>(cells.size())) return -1;
  return cells[static_cast<std::size_t>(i)];
}

void TapeContents::write(int symbol) {
  if (cells.empty()) {
    origin = head;
    cells.push_back(symbol);
    return;
  }
  long i = head - origin;
  if (i < 0) {
    cells.insert(cells.begin(), static_cast<std::size_t>(-i), -1);
    origin = head;
    i = 0;
  } else if (i >= static_cast<long>(cells.size())) {
    cells.resize(static_cast<std::size_t>(i) + 1, -1);
  }
  cells[static_cast<std::size_t>(i)] = symbol;
}

void TapeContents::trim() {
  while (!cells.empty() && cells.back() == -1) cells.pop_back();
  std::size_t lead = 0;
  while (lead < cells.size() && cells[lead] == -1) ++lead;
  if (lead > 0) {
    cells.erase(cells.begin(), cells.begin() + static_cast<long>(lead));
    origin += static_cast<long>(lead);
  }
  if (cells.empty()) origin = 0;
}

std::string to_string(const RunOutcome& r) {
  switch (r.kind) {
    case RunOutcome::Kind::Accept:
      return "accept";
    case RunOutcome::Kind::FuelExhausted:
      return r.reason == RunOutcome::Reason::ConfigCap ? "fuel-exhausted (configuration cap)" : "fuel-exhausted";
    case RunOutcome::Kind::Reject:
      break;
  }
  switch (r.reason) {
    case RunOutcome::Reason::Hang: return "reject (hang)";
    case RunOutcome::Reason::NonAcceptingState: return "reject (non-accepting state)";
    default: return "reject";
  }
}

std::vector<std::uint32_t> encode_word(const AutomatonSpec& spec, const Word& w) {
  std::vector<std::uint32_t> out;
  out.reserve(w.size());
  for (const auto& l : w) out.push_back(spec.find_letter(l).value_or(kUnknownLetter));
  return out;
}

InstantaneousDescription initial_id(const AutomatonSpec& spec, std::span<const std::uint32_t> input) {
  InstantaneousDescription id;
  id.state = spec.initial;
  id.tree = spec.storage == StorageKind::Tree || spec.storage == StorageKind::Pushdown ? spec.initial_tree
                                                                                       : spec.store->leaf();
  if (spec.storage == StorageKind::Tape) {
    for (std::size_t i = 0; i < spec.initial_tape.size(); ++i) {
      id.tape.head = static_cast<long>(i);
      id.tape.write(spec.initial_tape[i]);
    }
    if (spec.tape_preload) {
      for (std::size_t i = 0; i < input.size(); ++i) {
        id.tape.head = static_cast<long>(i);
        int sym = -1;
        if (input[i] != kUnknownLetter) {
          sym = spec.find_tape_symbol(spec.alphabet[input[i]]).value_or(-1);
        }
        if (sym < 0) throw PreconditionViolation("input letter is not a tape symbol");
        id.tape.write(sym);
      }
      id.consumed = input.size();
    }
    id.tape.head = 0;
    id.tape.trim();
  }
  return id;
}

std::vector<InstantaneousDescription> epsilon_successors(const AutomatonSpec& spec,
                                                         const InstantaneousDescription& id,
                                                         std::span<const std::uint32_t> input) {
  std::vector<InstantaneousDescription> out;
  for (const auto& it : spec.epsilon) {
    if (it.from != id.state) continue;
    InstantaneousDescription next = id;
    if (!apply_storage(spec, it.rewrite, next, input.size())) continue;
    next.state = it.to;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<InstantaneousDescription> step(const AutomatonSpec& spec, const InstantaneousDescription& id,
                                           std::span<const std::uint32_t> input) {
  std::vector<InstantaneousDescription> out;
  if (id.consumed < input.size()) {
    std::uint32_t letter = input[id.consumed];
    for (const auto& it : spec.delta) {
      if (it.letter != letter || it.from != id.state) continue;
      InstantaneousDescription next = id;
      if (!apply_storage(spec, it.rewrite, next, input.size())) continue;
      next.consumed += 1;
      next.state = it.to;
      out.push_back(std::move(next));
    }
  }
  auto eps = epsilon_successors(spec, id, input);
  out.insert(out.end(), std::make_move_iterator(eps.begin()), std::make_move_iterator(eps.end()));
  return out;
}

namespace {

bool accepting_end(const AutomatonSpec& spec, const InstantaneousDescription& id, std::size_t n, bool has_eps) {
  return id.consumed == n && spec.is_accepting(id.state) && !has_eps;
}

RunOutcome breadth_first(const AutomatonSpec& spec, std::span<const std::uint32_t> input,
                         std::vector<InstantaneousDescription> frontier, std::size_t steps_used,
                         const RunOptions& opts) {
  RunOutcome out;
  out.steps = steps_used;
  std::unordered_set<InstantaneousDescription, IdHash> seen(frontier.begin(), frontier.end());
  std::deque<InstantaneousDescription> queue(frontier.begin(), frontier.end());
  bool any_full = false;
  while (!queue.empty()) {
    InstantaneousDescription id = std::move(queue.front());
    queue.pop_front();
    auto succ = step(spec, id, input);
    bool has_eps = std::any_of(succ.begin(), succ.end(), [&](const auto& s) { return s.consumed == id.consumed; });
    if (id.consumed == input.size()) any_full = true;
    if (accepting_end(spec, id, input.size(), has_eps)) {
      out.kind = RunOutcome::Kind::Accept;
      out.final_id = id;
      return out;
    }
    for (auto& s : succ) {
      if (++out.steps > opts.fuel) {
        out.kind = RunOutcome::Kind::FuelExhausted;
        return out;
      }
      if (seen.insert(s).second) {
        if (seen.size() > opts.config_cap) {
          out.kind = RunOutcome::Kind::FuelExhausted;
          out.reason = RunOutcome::Reason::ConfigCap;
          return out;
        }
        queue.push_back(std::move(s));
      }
    }
  }
  out.kind = RunOutcome::Kind::Reject;
  out.reason = any_full ? RunOutcome::Reason::NonAcceptingState : RunOutcome::Reason::Hang;
  return out;
}

}  // namespace

RunOutcome run(const AutomatonSpec& spec, const Word& input, const RunOptions& opts) {
  if (spec.forest) throw PreconditionViolation("forest automata run on input trees");
  auto letters = encode_word(spec, input);
  RunOutcome out;
  InstantaneousDescription id = initial_id(spec, letters);
  if (opts.trace) out.trace.push_back(id);
  for (;;) {
    auto succ = step(spec, id, letters);
    if (succ.size() > 1) {
      auto res = breadth_first(spec, letters, std::move(succ), out.steps + 1, opts);
      res.trace = std::move(out.trace);
      return res;
    }
    if (succ.empty()) {
      out.final_id = id;
      if (accepting_end(spec, id, letters.size(), false)) {
        out.kind = RunOutcome::Kind::Accept;
      } else {
        out.kind = RunOutcome::Kind::Reject;
        out.reason = id.consumed < letters.size() ? RunOutcome::Reason::Hang : RunOutcome::Reason::NonAcceptingState;
      }
      return out;
    }
    if (++out.steps > opts.fuel) {
      out.kind = RunOutcome::Kind::FuelExhausted;
      out.final_id = id;
      return out;
    }
    id = std::move(succ.front());
    if (opts.trace) out.trace.push_back(id);
  }
}

RunOutcome run_framed(const AutomatonSpec& spec, const Word& w, const RunOptions& opts) {
  return run(spec, spec.framing.apply(w), opts);
}

InputTree parse_input_tree(std::string_view text) {
  TokenCursor in(tokenize(text));
  auto parse = [&](auto& self) -> InputTree {
    InputTree t;
    t.letter = in.expect_ident("letter").text;
    if (in.accept("(")) {
      if (!in.accept(")")) {
        do {
          t.children.push_back(self(self));
        } while (in.accept(","));
        in.expect(")");
      }
    }
    return t;
  };
  InputTree t = parse(parse);
  if (!in.at_end()) in.fail("trailing input after tree");
  return t;
}

namespace {

struct ForestConfig {
  StateId state;
  Term tree;
  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

struct ForestRun {
  const AutomatonSpec& spec;
  const RunOptions& opts;
  std::size_t steps = 0;
  bool exhausted = false;

  bool spend() {
    if (++steps > opts.fuel) exhausted = true;
    return !exhausted;
  }

  void add(std::vector<ForestConfig>& set, ForestConfig c) {
    if (std::find(set.begin(), set.end(), c) == set.end()) set.push_back(c);
    if (set.size() > opts.config_cap) exhausted = true;
  }

  void close_epsilon(std::vector<ForestConfig>& set) {
    for (std::size_t i = 0; i < set.size() && !exhausted; ++i) {
      for (const auto& it : spec.epsilon) {
        if (it.from != set[i].state) continue;
        InstantaneousDescription id;
        id.state = set[i].state;
        id.tree = set[i].tree;
        if (!apply_storage(spec, it.rewrite, id, 0)) continue;
        if (!spend()) return;
        add(set, ForestConfig{it.to, id.tree});
      }
    }
  }

  std::vector<ForestConfig> visit(const InputTree& node) {
    std::vector<std::vector<ForestConfig>> kids;
    for (const auto& c : node.children) {
      kids.push_back(visit(c));
      if (exhausted) return {};
    }
    std::vector<ForestConfig> out;
    auto letter = spec.find_letter(node.letter);
    if (!letter) return out;
    for (const auto& it : spec.delta) {
      if (it.letter != *letter || it.children.size() != kids.size()) continue;
      // Cartesian product over children configurations in the required states.
      std::vector<std::size_t> pick(kids.size(), 0);
      std::vector<std::vector<ForestConfig>> options(kids.size());
      bool possible = true;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (const auto& c : kids[i]) {
          if (c.state == it.children[i]) options[i].push_back(c);
        }
        possible = possible && !options[i].empty();
      }
      if (!possible) continue;
      for (;;) {
        std::vector<Term> trees;
        for (std::size_t i = 0; i < kids.size(); ++i) trees.push_back(options[i][pick[i]].tree);
        std::optional<Term> res;
        if (const auto* m = std::get_if<MultiRewriteRule>(&it.rewrite)) {
          if (m->lhs.size() == trees.size()) res = apply_multi_rewrite(*spec.store, *m, trees);
        } else if (const auto* r = std::get_if<RewriteRule>(&it.rewrite); r && trees.size() == 1) {
          res = apply_rewrite(*spec.store, *r, trees[0]);
        } else if (std::holds_alternative<std::monostate>(it.rewrite)) {
          res = spec.store->leaf();
        }
        if (!spend()) return {};
        if (res) add(out, ForestConfig{it.to, *res});
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    close_epsilon(out);
    return out;
  }
};

}  // namespace

RunOutcome run_forest(const AutomatonSpec& spec, const InputTree& input, const RunOptions& opts) {
  if (!spec.forest) throw PreconditionViolation("word automata run on words");
  ForestRun fr{spec, opts};
  auto configs = fr.visit(input);
  RunOutcome out;
  out.steps = fr.steps;
  if (fr.exhausted) {
    out.kind = RunOutcome::Kind::FuelExhausted;
    return out;
  }
  for (const auto& c : configs) {
    if (!spec.is_accepting(c.state)) continue;
    InstantaneousDescription id;
    id.state = c.state;
    id.tree = c.tree;
    if (epsilon_successors(spec, id, {}).empty()) {
      out.kind = RunOutcome::Kind::Accept;
      out.final_id = id;
      return out;
    }
  }
  out.kind = RunOutcome::Kind::Reject;
  out.reason = configs.empty() ? RunOutcome::Reason::Hang : RunOutcome::Reason::NonAcceptingState;
  return out;
}

EnumerationResult enumerate_accepted(const AutomatonSpec& spec, std::size_t max_len, const RunOptions& opts) {
  if (spec.forest) throw PreconditionViolation("enumeration needs a word automaton");
  EnumerationResult res;
  for (const auto& w : all_words(spec.word_alphabet(), max_len)) {
    auto r = run_framed(spec, w, opts);
    if (r.kind == RunOutcome::Kind::Accept) res.accepted.push_back(w);
    if (r.kind == RunOutcome::Kind::FuelExhausted) res.fuel_exhausted.push_back(w);
  }
  return res;
}

}  // namespace forge
