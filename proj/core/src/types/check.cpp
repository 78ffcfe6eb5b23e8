#include "forge/types/check.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"

namespace forge {

const char* to_string(CheckResult::Kind k) {
  switch (k) {
    case CheckResult::Kind::Typed: return "typed";
    case CheckResult::Kind::TypedSet: return "typed-set";
    case CheckResult::Kind::ErrorType: return "error-type";
    case CheckResult::Kind::Ambiguous: return "ambiguous";
    case CheckResult::Kind::IllTyped: return "ill-typed";
    case CheckResult::Kind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

namespace {

Expr substitute_leaves(TermStore& store, const Expr& e, const Substitution& s) {
  if (!e.is_call()) return Expr::term(apply_substitution(store, e.leaf, s));
  Expr out = Expr::call(e.callee, {});
  out.args.reserve(e.args.size());
  for (const auto& a : e.args) out.args.push_back(substitute_leaves(store, a, s));
  return out;
}

}  // namespace

Application apply_function(TermStore& store, const FunctionDef& def, std::span<const Term> args) {
  Application app;
  if (args.size() != def.params.size()) return app;
  Substitution s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!match_into(store, def.params[i], args[i], s)) return app;
  }
  if (!def.uses_typeof) {
    app.kind = Application::Kind::Direct;
    app.type = apply_substitution(store, def.body.leaf, s);
    return app;
  }
  app.kind = Application::Kind::Pending;
  app.pending = substitute_leaves(store, def.body, s);
  return app;
}

namespace {

class Checker {
 public:
  enum class Status { Ok, IllTyped, ErrorType, Fuel };

  struct Eval {
    Status status = Status::Ok;
    std::vector<Term> types;
    std::string message;
  };

  Checker(const TypeProgram& p, const CheckOptions& o)
      : p_(p), store_(*p.store), opts_(o), mode_(o.mode.value_or(p.mode)) {
    for (std::size_t i = 0; i < p.defs.size(); ++i) by_name_[p.defs[i].name].push_back(i);
    if (o.erasure_lint) {
      for (auto& n : erasure_conflicts(p)) erased_.insert(n);
    }
  }

  std::size_t applications() const { return applications_; }
  std::size_t failed_at() const { return failed_at_; }
  const std::vector<Term>& offending() const { return offending_; }

  // `top` marks nodes of the checked expression itself (they carry positions).
  Eval eval(const Expr& e, bool top) {
    if (!e.is_call()) return Eval{Status::Ok, {e.leaf}, {}};
    std::vector<std::vector<Term>> arg_sets;
    for (const auto& a : e.args) {
      Eval sub = eval(a, top);
      if (sub.status != Status::Ok) return sub;
      arg_sets.push_back(std::move(sub.types));
    }
    std::size_t pos = top ? ++position_ : 0;
    Eval res = call(e.callee, arg_sets);
    if (top && res.status != Status::Ok && failed_at_ == 0) failed_at_ = pos;
    if (top && res.status == Status::Ok && res.types.empty()) {
      if (failed_at_ == 0) failed_at_ = pos;
      res.status = Status::IllTyped;
      res.message = "no definition of '" + e.callee + "' applies";
    }
    return res;
  }

 private:
  using Key = std::pair<std::string, std::vector<Term>>;

  bool for_each_combo(const std::vector<std::vector<Term>>& sets, const std::function<bool(std::vector<Term>&)>& f) {
    for (const auto& s : sets) {
      if (s.empty()) return true;
    }
    std::vector<std::size_t> pick(sets.size(), 0);
    std::vector<Term> combo(sets.size());
    for (;;) {
      for (std::size_t i = 0; i < sets.size(); ++i) combo[i] = sets[i][pick[i]];
      if (!f(combo)) return false;
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == sets[k].size()) pick[k++] = 0;
      if (k == pick.size()) return true;
    }
  }

  Eval call(const std::string& name, const std::vector<std::vector<Term>>& arg_sets) {
    Eval res;
    if (erased_.count(name) != 0) {
      res.status = Status::ErrorType;
      res.message = "'" + name + "' is ambiguous after type erasure";
      return res;
    }
    std::deque<Key> work;
    std::set<Key> seen;
    auto push = [&](const std::string& f, std::vector<Term>& args) {
      Key k{f, args};
      if (seen.insert(k).second) work.push_back(std::move(k));
      return seen.size() <= opts_.type_cap * 4;
    };
    if (!for_each_combo(arg_sets, [&](std::vector<Term>& c) { return push(name, c); })) return fuel("argument set cap");

    while (!work.empty()) {
      Key k = std::move(work.front());
      work.pop_front();
      if (++applications_ > opts_.fuel) return fuel("fuel exhausted");
      auto it = by_name_.find(k.first);
      if (it == by_name_.end()) continue;
      for (std::size_t di : it->second) {
        const FunctionDef& def = p_.defs[di];
        Application app = apply_function(store_, def, k.second);
        if (app.kind == Application::Kind::NoMatch) continue;
        if (app.kind == Application::Kind::Direct || !app.pending.is_call()) {
          Term t = app.kind == Application::Kind::Direct ? app.type : app.pending.leaf;
          if (std::find(res.types.begin(), res.types.end(), t) == res.types.end()) res.types.push_back(t);
          if (res.types.size() > opts_.type_cap) return fuel("type set cap");
          continue;
        }
        // Tail position of a typeof clause: evaluate arguments, then queue the call.
        std::vector<std::vector<Term>> sets;
        for (const auto& a : app.pending.args) {
          Eval sub = eval(a, false);
          if (sub.status == Status::IllTyped) {
            sets.clear();
            sets.emplace_back();
            break;
          }
          if (sub.status != Status::Ok) return sub;
          if (sub.types.empty()) {
            sets.clear();
            sets.emplace_back();
            break;
          }
          sets.push_back(std::move(sub.types));
        }
        if (!for_each_combo(sets, [&](std::vector<Term>& c) { return push(app.pending.callee, c); })) {
          return fuel("type set cap");
        }
      }
    }
    if (mode_ == OverloadMode::OneType && res.types.size() > 1) {
      offending_ = res.types;
      res.status = Status::ErrorType;
      res.message = "'" + name + "' yields " + std::to_string(res.types.size()) + " distinct types";
    }
    return res;
  }

  Eval fuel(const char* why) { return Eval{Status::Fuel, {}, why}; }

  const TypeProgram& p_;
  TermStore& store_;
  const CheckOptions& opts_;
  OverloadMode mode_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
  std::set<std::string> erased_;
  std::size_t applications_ = 0;
  std::size_t position_ = 0;
  std::size_t failed_at_ = 0;
  std::vector<Term> offending_;
};

CheckResult finish(const Checker& c, Checker::Eval ev, OverloadMode mode) {
  CheckResult r;
  r.applications = c.applications();
  r.message = ev.message;
  switch (ev.status) {
    case Checker::Status::Fuel:
      r.kind = CheckResult::Kind::FuelExhausted;
      return r;
    case Checker::Status::ErrorType:
      r.kind = CheckResult::Kind::ErrorType;
      r.position = c.failed_at();
      r.types = c.offending();
      return r;
    case Checker::Status::IllTyped:
      r.kind = CheckResult::Kind::IllTyped;
      r.position = c.failed_at();
      return r;
    case Checker::Status::Ok:
      break;
  }
  if (ev.types.empty()) {
    r.kind = CheckResult::Kind::IllTyped;
    r.position = c.failed_at();
    return r;
  }
  if (ev.types.size() == 1) {
    r.kind = CheckResult::Kind::Typed;
    r.type = ev.types.front();
    return r;
  }
  r.types = std::move(ev.types);
  r.kind = mode == OverloadMode::MultipleTypes ? CheckResult::Kind::TypedSet : CheckResult::Kind::Ambiguous;
  return r;
}

}  // namespace

CheckResult resolve_typeof(const TypeProgram& p, const Expr& pseudo, const CheckOptions& opts) {
  Checker c(p, opts);
  auto ev = c.eval(pseudo, true);
  return finish(c, std::move(ev), opts.mode.value_or(p.mode));
}

CheckResult typecheck(const TypeProgram& p, const Expr& e, const CheckOptions& opts) {
  CheckResult r = resolve_typeof(p, e, opts);
  if (!p.result_type || r.kind == CheckResult::Kind::FuelExhausted) return r;
  Term want = *p.result_type;
  bool fits = false;
  if (r.kind == CheckResult::Kind::Typed) {
    fits = r.type == want;
  } else if (r.kind == CheckResult::Kind::TypedSet || r.kind == CheckResult::Kind::Ambiguous) {
    // the expected type picks one member of the set
    fits = std::find(r.types.begin(), r.types.end(), want) != r.types.end();
  } else {
    return r;
  }
  if (fits) {
    r.kind = CheckResult::Kind::Typed;
    r.type = want;
    r.types.clear();
    return r;
  }
  std::string got = r.kind == CheckResult::Kind::Typed ? to_string(*p.store, r.type) : "an overload set";
  r.message = "expression has type " + got + " where " + to_string(*p.store, want) + " is required";
  r.kind = CheckResult::Kind::IllTyped;
  r.types.clear();
  r.position = 0;
  return r;
}

Expr word_to_expression(const TypeProgram& p, const Word& w) {
  Expr e = Expr::term(p.store->leaf());
  for (const auto& letter : p.framing.apply(w)) e = Expr::call(letter, {std::move(e)});
  return e;
}

Word expression_to_word(const TypeProgram& p, const Expr& e) {
  Word rev;
  const Expr* cur = &e;
  while (cur->is_call()) {
    if (cur->args.size() != 1) throw PreconditionViolation("expression is not a chain of unary calls");
    rev.push_back(cur->callee);
    cur = &cur->args.front();
  }
  Word w(rev.rbegin(), rev.rend());
  const auto& pre = p.framing.prefix;
  const auto& suf = p.framing.suffix;
  if (w.size() >= pre.size() + suf.size() && std::equal(pre.begin(), pre.end(), w.begin()) &&
      std::equal(suf.rbegin(), suf.rend(), w.rbegin())) {
    w.erase(w.end() - static_cast<long>(suf.size()), w.end());
    w.erase(w.begin(), w.begin() + static_cast<long>(pre.size()));
  }
  return w;
}

CheckResult check_word(const TypeProgram& p, const Word& w, const CheckOptions& opts) {
  return typecheck(p, word_to_expression(p, w), opts);
}

std::vector<std::string> erasure_conflicts(const TypeProgram& p) {
  const TermStore& store = *p.store;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.defs.size(); ++i) {
    for (std::size_t j = i + 1; j < p.defs.size(); ++j) {
      const auto& a = p.defs[i];
      const auto& b = p.defs[j];
      if (a.name != b.name || a.params.size() != 1 || b.params.size() != 1) continue;
      Term ta = a.params[0];
      Term tb = b.params[0];
      if (!store.is_apply(ta) || !store.is_apply(tb) || store.head(ta) != store.head(tb) || ta == tb) continue;
      if (std::find(out.begin(), out.end(), a.name) == out.end()) out.push_back(a.name);
    }
  }
  return out;
}

}  // namespace forge
