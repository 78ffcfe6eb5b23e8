#include "forge/toolchain/emit.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "forge/error.hpp"
#include "forge/term/term.hpp"
#include "forge/types/lattice.hpp"

namespace forge {

std::optional<EmitTarget> parse_target(std::string_view s) {
  if (s == "java" || s == "java-syntax") return EmitTarget::Java;
  if (s == "cpp" || s == "c++" || s == "cpp-syntax") return EmitTarget::Cpp;
  if (s == "pseudo" || s == "pseudo-syntax") return EmitTarget::Pseudo;
  return std::nullopt;
}

const char* to_string(EmitTarget t) {
  switch (t) {
    case EmitTarget::Java: return "java-syntax";
    case EmitTarget::Cpp: return "cpp-syntax";
    case EmitTarget::Pseudo: return "pseudo-syntax";
  }
  return "pseudo-syntax";
}

std::map<std::string, std::string> mangling(const TypeProgram& p, EmitTarget t) {
  std::map<std::string, std::string> out;
  if (t == EmitTarget::Pseudo) return out;
  std::set<std::string> names;
  const TermStore& store = *p.store;
  for (SymbolId s : store.symbols()) names.insert(store.name(s));
  for (const auto& d : p.defs) names.insert(d.name);
  names.insert(p.unit_name);
  std::set<std::string> taken = names;
  for (const auto& n : names) {
    if (n.find('$') == std::string::npos) continue;
    std::string m;
    for (char c : n) m += c == '$' ? std::string("S_") : std::string(1, c);
    while (taken.count(m) != 0) m += "_";
    taken.insert(m);
    out[n] = m;
  }
  return out;
}

namespace {

class Emitter {
 public:
  Emitter(const TypeProgram& p, const EmitOptions& o)
      : p_(p), o_(o), s_(*p.store), names_(mangling(p, o.target)), pad_(static_cast<std::size_t>(o.indent), ' ') {
    for (const auto& d : p_.defs) primary_.insert(d.auxiliary ? std::string() : d.name);
  }

  std::string run() {
    switch (o_.target) {
      case EmitTarget::Java: return java();
      case EmitTarget::Cpp: return cpp();
      case EmitTarget::Pseudo: return pseudo();
    }
    return {};
  }

 private:
  std::string nm(const std::string& n) const {
    auto it = names_.find(n);
    return it == names_.end() ? n : it->second;
  }

  std::string header(const char* comment) const {
    std::string out = std::string(comment) + " forge " + to_string(o_.target);
    if (!p_.name.empty()) out += ": " + p_.name;
    out += "\n" + std::string(comment) + " mangling:";
    if (names_.empty()) out += " none";
    bool first = true;
    for (const auto& [from, to] : names_) {
      out += (first ? " " : ", ") + from + " -> " + to;
      first = false;
    }
    return out + "\n";
  }

  std::string type(Term t) {
    switch (s_.kind(t)) {
      case NodeKind::Leaf:
        unit_used_ = true;
        return nm(p_.unit_name);
      case NodeKind::Var:
        return s_.var_name(s_.var_of(t));
      case NodeKind::Apply:
        break;
    }
    std::string out = nm(s_.name(s_.head(t)));
    auto kids = s_.children(t);
    if (kids.empty()) return out;
    if (o_.target == EmitTarget::Pseudo && kids.size() == 1 && s_.is_leaf(kids[0])) return out;
    out += '<';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i > 0) out += ", ";
      out += type(kids[i]);
    }
    return out + '>';
  }

  std::vector<std::string> vars_of(const FunctionDef& d) const {
    std::vector<std::string> out;
    auto add = [&](Term t) {
      for (VarId v : variables_of(s_, t)) {
        const std::string& n = s_.var_name(v);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
      }
    };
    for (Term t : d.params) add(t);
    return out;
  }

  bool nullary(const FunctionDef& d) const {
    return !d.auxiliary && d.params.size() == 1 && s_.is_leaf(d.params[0]);
  }

  // Method placement: one parameter whose root children are distinct
  // variables (the pseudo target also admits unit children).
  bool method_shape(const FunctionDef& d) const {
    if (d.params.size() != 1) return false;
    Term t = d.params[0];
    if (o_.target == EmitTarget::Pseudo && s_.is_leaf(t)) return true;
    if (!s_.is_apply(t)) return false;
    std::set<VarId> seen;
    for (Term c : s_.children(t)) {
      if (s_.is_var(c)) {
        if (!seen.insert(s_.var_of(c)).second) return false;
      } else if (!(o_.target == EmitTarget::Pseudo && s_.is_leaf(c))) {
        return false;
      }
    }
    return true;
  }

  std::set<std::string> method_functions() const {
    std::set<std::string> out;
    if (o_.target == EmitTarget::Cpp) return out;
    if (o_.target == EmitTarget::Java && classify_program(p_).c2 != PatternDepth::Shallow) return out;
    std::map<std::string, bool> all;
    for (const auto& d : p_.defs) {
      bool ok = method_shape(d) && (o_.target == EmitTarget::Pseudo || !d.uses_typeof);
      auto [it, fresh] = all.emplace(d.name, ok);
      if (!fresh) it->second = it->second && ok;
    }
    for (const auto& [n, ok] : all) {
      if (ok) out.insert(n);
    }
    return out;
  }

  // Renames a method's pattern variables to its interface's parameters.
  Term method_return(const FunctionDef& d, Term body) {
    Term pat = d.params[0];
    if (!s_.is_apply(pat)) return body;
    SymbolId root = s_.head(pat);
    const auto& params = s_.params(root);
    Substitution sub;
    TermStore& store = *p_.store;
    auto kids = s_.children(pat);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (s_.is_var(kids[i])) sub.bind(s_.var_of(kids[i]), store.var(params[i]));
    }
    return apply_substitution(store, body, sub);
  }

  std::string value_cpp(const Expr& e) {
    if (!e.is_call()) return type(e.leaf) + "()";
    if (e.args.size() == 1 && !e.args[0].is_call() && s_.is_leaf(e.args[0].leaf) && primary_.count(e.callee) != 0) {
      return nm(e.callee) + "()";
    }
    std::string out = nm(e.callee) + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += value_cpp(e.args[i]);
    }
    return out + ")";
  }

  std::string value_java(const Expr& e, const std::set<std::string>& methods) {
    if (!e.is_call()) {
      if (s_.is_leaf(e.leaf)) return o_.target == EmitTarget::Pseudo ? "new " + type(e.leaf) + "()" : "null";
      return o_.target == EmitTarget::Pseudo ? "new " + type(e.leaf) + "()" : "((" + type(e.leaf) + ") null)";
    }
    if (methods.count(e.callee) != 0 && e.args.size() == 1) {
      return value_java(e.args[0], methods) + "." + nm(e.callee) + "()";
    }
    if (e.args.size() == 1 && !e.args[0].is_call() && s_.is_leaf(e.args[0].leaf) && primary_.count(e.callee) != 0) {
      return nm(e.callee) + "()";
    }
    std::string out = nm(e.callee) + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += value_java(e.args[i], methods);
    }
    return out + ")";
  }

  std::string params_java(const FunctionDef& d) {
    if (nullary(d)) return "";
    std::string out;
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i > 0) out += ", ";
      out += type(d.params[i]) + (d.params.size() == 1 ? " e" : " e" + std::to_string(i + 1));
    }
    return out;
  }

  std::string generics_java(const FunctionDef& d) const {
    auto vs = vars_of(d);
    if (vs.empty()) return "";
    std::string out = "<";
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i > 0 ? ", " : "") + vs[i];
    return out + "> ";
  }

  std::string interface_head(SymbolId sym, bool with_params) const {
    std::string out = "interface " + nm(s_.name(sym));
    const auto& ps = s_.params(sym);
    if (with_params && !ps.empty()) {
      out += "<";
      for (std::size_t i = 0; i < ps.size(); ++i) out += (i > 0 ? ", " : "") + ps[i];
      out += ">";
    }
    return out;
  }

  std::string java() {
    if (p_.mode != OverloadMode::OneType) {
      throw UnsupportedFeature(std::string("java-syntax cannot express ") + to_string(p_.mode) +
                               " overloading: every subexpression must have one type");
    }
    for (const auto& d : p_.defs) {
      if (d.uses_typeof) throw UnsupportedFeature("java-syntax has no typeof (function '" + d.name + "')");
    }
    return object_style("//", true);
  }

  std::string pseudo() { return object_style("//", false); }

  // Java and pseudo share the interface-plus-statics layout.
  std::string object_style(const char* comment, bool java) {
    auto methods = method_functions();
    std::map<std::string, std::vector<std::string>> members;  // root symbol ("eps" for the unit)
    std::map<std::string, bool> generic;                       // interface has a non-ground method pattern
    std::vector<std::string> statics;
    for (const auto& d : p_.defs) {
      bool as_method = methods.count(d.name) != 0;
      std::string ret;
      if (d.uses_typeof) {
        ret = "typeof(" + value_java(d.body, methods) + ")";
      } else {
        Term body = as_method ? method_return(d, d.body.leaf) : d.body.leaf;
        ret = s_.is_leaf(body) ? "void" : type(body);
      }
      if (as_method) {
        Term pat = d.params[0];
        std::string root = s_.is_leaf(pat) ? std::string("eps") : s_.name(s_.head(pat));
        members[root].push_back(ret + " " + nm(d.name) + "();");
        generic[root] = generic[root] || !s_.ground(pat);
        continue;
      }
      std::string line = "static " + generics_java(d) + ret + " " + nm(d.name) + "(" + params_java(d) + ")";
      if (java) {
        line += ret == "void" ? " {}" : " { return null; }";
      } else {
        line += ";";
      }
      statics.push_back(line);
    }
    std::vector<std::string> exprs;
    for (const auto& e : p_.expressions) exprs.push_back(value_java(e, methods) + ";");

    std::string body;
    for (const auto& n : p_.type_order) {
      if (p_.is_external(n)) continue;
      std::string head;
      if (n == "eps") {
        if (!unit_used_ && members.count("eps") == 0) continue;
        head = "interface " + nm(p_.unit_name);
      } else {
        SymbolId sym = s_.symbol(n);
        bool with_params = java || members.count(n) == 0 || generic[n];
        head = interface_head(sym, with_params);
      }
      auto it = members.find(n);
      if (it == members.end()) {
        body += head + " {}\n";
        continue;
      }
      body += head + " {\n";
      for (const auto& m : it->second) body += pad_ + m + "\n";
      body += "}\n";
    }
    for (const auto& s : statics) body += s + "\n";
    if (!exprs.empty()) {
      if (java) {
        body += "static {\n";
        for (const auto& e : exprs) body += pad_ + e + "\n";
        body += "}\n";
      } else {
        for (const auto& e : exprs) body += e + "\n";
      }
    }
    return header(comment) + body;
  }

  std::string cpp() {
    if (p_.mode != OverloadMode::OneType) {
      throw UnsupportedFeature(std::string("cpp-syntax cannot express ") + to_string(p_.mode) +
                               " overloading: every subexpression must have one type");
    }
    bool any_typeof = std::any_of(p_.defs.begin(), p_.defs.end(), [](const FunctionDef& d) { return d.uses_typeof; });
    std::vector<std::string> fns;
    for (const auto& d : p_.defs) {
      std::string line;
      auto vs = vars_of(d);
      if (!vs.empty()) {
        line += "template<";
        for (std::size_t i = 0; i < vs.size(); ++i) line += (i > 0 ? ", typename " : "typename ") + vs[i];
        line += "> ";
      }
      std::string params;
      if (!nullary(d)) {
        for (std::size_t i = 0; i < d.params.size(); ++i) params += (i > 0 ? ", " : "") + type(d.params[i]);
      }
      if (!d.uses_typeof) {
        line += type(d.body.leaf) + " " + nm(d.name) + "(" + params + ") {}";
      } else if (p_.typeof_style == TypeofStyle::Decltype) {
        line += "typeof(" + value_cpp(d.body) + ") " + nm(d.name) + "(" + params + ") {}";
      } else {
        line += "auto " + nm(d.name) + "(" + params + ") { return " + value_cpp(d.body) + "; }";
      }
      fns.push_back(line);
    }
    std::vector<std::string> exprs;
    for (std::size_t i = 0; i < p_.expressions.size(); ++i) {
      std::string v = value_cpp(p_.expressions[i]);
      exprs.push_back(nm(p_.unit_name) + " w" + std::to_string(i + 1) + "=" + v + ";");
    }
    if (!exprs.empty()) unit_used_ = true;

    std::string out = header("//");
    if (any_typeof && p_.typeof_style == TypeofStyle::Decltype) out += "#define typeof decltype\n";
    for (const auto& n : p_.type_order) {
      if (p_.is_external(n)) continue;
      if (n == "eps") {
        if (unit_used_) out += "struct " + nm(p_.unit_name) + " {};\n";
        continue;
      }
      SymbolId sym = s_.symbol(n);
      const auto& ps = s_.params(sym);
      if (!ps.empty()) {
        out += "template<";
        for (std::size_t i = 0; i < ps.size(); ++i) out += (i > 0 ? ", typename " : "typename ") + ps[i];
        out += "> ";
      }
      out += "struct " + nm(n) + " {};\n";
    }
    for (const auto& f : fns) out += f + "\n";
    if (!exprs.empty()) {
      out += "int main() {\n";
      for (const auto& e : exprs) out += pad_ + e + "\n";
      out += "}\n";
    }
    return out;
  }

  const TypeProgram& p_;
  EmitOptions o_;
  const TermStore& s_;
  std::map<std::string, std::string> names_;
  std::string pad_;
  std::set<std::string> primary_;
  bool unit_used_ = false;
};

}  // namespace

std::string emit(const TypeProgram& p, const EmitOptions& opts) {
  check_well_formed(p);
  return Emitter(p, opts).run();
}

std::vector<std::string> normalize_source(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$'; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
    } else if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (text.substr(i, 2) == "/*") {
      std::size_t end = text.find("*/", i + 2);
      i = end == std::string_view::npos ? text.size() : end + 2;
    } else if (ident(c)) {
      std::size_t j = i;
      while (j < text.size() && ident(text[j])) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

bool same_source(std::string_view a, std::string_view b) { return normalize_source(a) == normalize_source(b); }

}  // namespace forge
