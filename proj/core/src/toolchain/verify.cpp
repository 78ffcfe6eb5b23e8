#include "forge/toolchain/verify.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"

namespace forge {

using json = nlohmann::ordered_json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "accept";
    case Verdict::Reject: return "reject";
    case Verdict::FuelExhausted: return "fuel-exhausted";
  }
  return "reject";
}

Verdict membership(const Source& s, const Word& w, const MembershipOptions& opts) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) {
    CheckOptions co;
    co.fuel = opts.fuel;
    co.mode = opts.mode;
    auto r = check_word(*p, w, co);
    if (r.kind == CheckResult::Kind::FuelExhausted) return Verdict::FuelExhausted;
    if (r.kind == CheckResult::Kind::Ambiguous && !opts.assume_unambiguous) {
      bool has_unit = std::find(r.types.begin(), r.types.end(), p->store->leaf()) != r.types.end();
      return has_unit ? Verdict::Accept : Verdict::Reject;
    }
    return r.typed() ? Verdict::Accept : Verdict::Reject;
  }
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) {
    RunOptions ro;
    ro.fuel = opts.fuel;
    auto r = run_framed(*a, w, ro);
    if (r.kind == RunOutcome::Kind::FuelExhausted) return Verdict::FuelExhausted;
    return r.kind == RunOutcome::Kind::Accept ? Verdict::Accept : Verdict::Reject;
  }
  return cyk_membership(std::get<Cfg>(s), w) ? Verdict::Accept : Verdict::Reject;
}

std::vector<std::string> word_alphabet(const Source& s) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) return p->word_alphabet();
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) return a->word_alphabet();
  return std::get<Cfg>(s).terminals;
}

std::string display_name(const Source& s) {
  if (const auto* p = std::get_if<TypeProgram>(&s)) return p->name.empty() ? "program" : p->name;
  if (const auto* a = std::get_if<AutomatonSpec>(&s)) return a->name.empty() ? "automaton" : a->name;
  return "grammar";
}

VerifyReport verify_bisimulation(const Source& left, const Source& right, const VerifyOptions& opts) {
  auto la = word_alphabet(left);
  auto ra = word_alphabet(right);
  std::set<std::string> ls(la.begin(), la.end());
  std::set<std::string> rs(ra.begin(), ra.end());
  if (ls != rs) {
    throw AlphabetMismatch("alphabets differ: {" + join_word(la, ",") + "} vs {" + join_word(ra, ",") + "}");
  }
  VerifyReport rep;
  rep.left = display_name(left);
  rep.right = display_name(right);
  rep.max_len = opts.max_len;
  MembershipOptions mo;
  mo.fuel = opts.fuel;
  mo.assume_unambiguous = opts.assume_unambiguous;
  for (const auto& w : all_words(la, opts.max_len)) {
    WordVerdict v{w, membership(left, w, mo), membership(right, w, mo)};
    ++rep.words;
    if (v.left == Verdict::FuelExhausted || v.right == Verdict::FuelExhausted) {
      rep.fuel_exhausted.push_back(v);
    } else if (v.left != v.right) {
      rep.mismatches.push_back(v);
    } else {
      ++rep.agreements;
      if (v.left == Verdict::Accept) ++rep.accepted;
    }
    if (opts.keep_table) rep.table.push_back(std::move(v));
  }
  return rep;
}

namespace {

json verdict_rows(const std::vector<WordVerdict>& rows) {
  json out = json::array();
  for (const auto& v : rows) {
    out.push_back({{"word", join_word(v.word)}, {"left", to_string(v.left)}, {"right", to_string(v.right)}});
  }
  return out;
}

}  // namespace

std::string to_json(const VerifyReport& r) {
  json j{{"report", "verify"},
         {"left", r.left},
         {"right", r.right},
         {"max_len", r.max_len},
         {"ok", r.ok()},
         {"totals",
          {{"words", r.words},
           {"agreements", r.agreements},
           {"accepted", r.accepted},
           {"mismatches", r.mismatches.size()},
           {"fuel_exhausted", r.fuel_exhausted.size()}}},
         {"mismatches", verdict_rows(r.mismatches)},
         {"fuel_exhausted", verdict_rows(r.fuel_exhausted)},
         {"table", verdict_rows(r.table)}};
  return j.dump(2);
}

std::string to_json(const ConversionReport& r) {
  json j{{"report", "conversion"},
         {"conversion", r.conversion},
         {"source_point", r.source_point},
         {"target_point", r.target_point},
         {"states", r.states},
         {"transitions", r.transitions},
         {"definitions", r.definitions},
         {"stack_symbols", r.stack_symbols}};
  return j.dump(2);
}

std::string to_json(const AutomatonSpec& spec, const RunOutcome& r, const Word& w) {
  json j{{"report", "simulate"},
         {"automaton", spec.name},
         {"word", join_word(w)},
         {"outcome", to_string(r)},
         {"steps", r.steps}};
  if (r.final_id) {
    j["final_state"] = spec.states.at(index(r.final_id->state));
    if (spec.storage == StorageKind::Tree || spec.storage == StorageKind::Pushdown) {
      j["final_storage"] = to_string(*spec.store, r.final_id->tree);
    }
  }
  return j.dump(2);
}

std::string to_json(const TypeProgram& p, const CheckResult& r, const std::string& expression) {
  json types = json::array();
  for (Term t : r.types) types.push_back(to_string(*p.store, t));
  json j{{"report", "typecheck"},
         {"program", p.name},
         {"expression", expression},
         {"verdict", to_string(r.kind)},
         {"type", r.kind == CheckResult::Kind::Typed ? json(to_string(*p.store, r.type)) : json(nullptr)},
         {"types", types},
         {"position", r.position},
         {"applications", r.applications},
         {"message", r.message}};
  return j.dump(2);
}

}  // namespace forge
