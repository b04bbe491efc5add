#include "spi/lts.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "spi/evaluation.hpp"

namespace spi {

std::string to_string(const Label& l) {
  switch (l.kind) {
    case LabelKind::Tau: return "tau";
    case LabelKind::In: return "in " + l.chan.str();
    case LabelKind::Out: return "out " + l.chan.str();
  }
  return "?";
}

// --- agents ----------------------------------------------------------------------

Agent Agent::proc(Process p) {
  Agent a;
  a.kind_ = AgentKind::Proc;
  a.body_ = std::move(p);
  return a;
}

Agent Agent::abstraction(Variable x, Process body) {
  Agent a;
  a.kind_ = AgentKind::Abstraction;
  a.var_ = x;
  a.body_ = std::move(body);
  return a;
}

Agent Agent::concretion(std::vector<Name> bound, Message msg, Process body) {
  Agent a;
  a.kind_ = AgentKind::Concretion;
  a.bound_ = std::move(bound);
  a.msg_ = std::move(msg);
  a.body_ = std::move(body);
  return a;
}

std::set<Name> Agent::free_names() const {
  std::set<Name> out = spi::free_names(body_);
  if (kind_ == AgentKind::Concretion) {
    collect_names(msg_, out);
    for (const auto& m : bound_) out.erase(m);
  }
  return out;
}

std::strong_ordering operator<=>(const Agent& a, const Agent& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.var_ <=> b.var_; c != 0) return c;
  if (auto c = a.bound_ <=> b.bound_; c != 0) return c;
  if (a.kind_ == AgentKind::Concretion)
    if (auto c = a.msg_ <=> b.msg_; c != 0) return c;
  return a.body_ <=> b.body_;
}

namespace {

void names_in_order(const Term& t, std::vector<Name>& out) {
  switch (t.kind()) {
    case TermKind::Name:
      if (std::find(out.begin(), out.end(), t.as_name()) == out.end()) out.push_back(t.as_name());
      return;
    case TermKind::Var: return;
    case TermKind::Pair:
    case TermKind::Enc:
    case TermKind::Dec:
      names_in_order(t.first(), out);
      names_in_order(t.second(), out);
      return;
    case TermKind::Proj1:
    case TermKind::Proj2: names_in_order(t.arg(), out); return;
  }
}

Variable fresh_var(const std::set<Variable>& avoid, const std::string& hint) {
  for (std::size_t i = 1;; ++i) {
    Variable v(hint + std::to_string(i));
    if (!avoid.contains(v)) return v;
  }
}

// Renames the names `from[i]` to `to[i]` simultaneously in a concretion.
void rename_binders(std::vector<Name>& bound, Message& msg, Process& body, const std::vector<Name>& from,
                    const std::vector<Name>& to) {
  std::set<Name> avoid = names_of(msg);
  collect_names(msg, avoid);
  for (const auto& n : all_names(body)) avoid.insert(n);
  avoid.insert(from.begin(), from.end());
  avoid.insert(to.begin(), to.end());
  std::vector<Name> temps;
  for (std::size_t i = 0; i < from.size(); ++i) {
    Name t = fresh_name(avoid, "_q");
    avoid.insert(t);
    temps.push_back(t);
    msg = substitute_name(msg, from[i], Term::name(t));
    body = rename_name(body, from[i], t);
  }
  for (std::size_t i = 0; i < from.size(); ++i) {
    msg = substitute_name(msg, temps[i], Term::name(to[i]));
    body = rename_name(body, temps[i], to[i]);
  }
  for (auto& m : bound)
    for (std::size_t i = 0; i < from.size(); ++i)
      if (m == from[i]) {
        m = to[i];
        break;
      }
}

}  // namespace

Agent Agent::canonical() const {
  switch (kind_) {
    case AgentKind::Proc: return proc(normalize(body_));
    case AgentKind::Abstraction: {
      Variable a("_a");
      Process body = var_ == a ? body_ : substitute(body_, var_, Term::var(a));
      return abstraction(a, normalize(body));
    }
    case AgentKind::Concretion: {
      std::vector<Name> order;
      names_in_order(msg_, order);
      std::vector<Name> from, to;
      for (const auto& n : order)
        if (std::find(bound_.begin(), bound_.end(), n) != bound_.end()) from.push_back(n);
      Process body = body_;
      for (const auto& n : bound_)
        if (std::find(from.begin(), from.end(), n) == from.end()) body = Process::restrict(n, body);
      for (std::size_t i = 0; i < from.size(); ++i) to.emplace_back("_c" + std::to_string(i));
      std::vector<Name> bound = from;
      Message msg = msg_;
      rename_binders(bound, msg, body, from, to);
      return concretion(std::move(bound), std::move(msg), normalize(body));
    }
  }
  return *this;
}

std::string to_string(const Agent& a) {
  std::ostringstream os;
  switch (a.kind()) {
    case AgentKind::Proc: os << a.body(); break;
    case AgentKind::Abstraction: os << '(' << a.var() << ')' << a.body(); break;
    case AgentKind::Concretion:
      if (!a.bound().empty()) {
        os << "(new";
        for (std::size_t i = 0; i < a.bound().size(); ++i) os << (i ? ", " : " ") << a.bound()[i];
        os << ')';
      }
      os << '<' << a.message() << "> " << a.body();
      break;
  }
  return os.str();
}

Agent restrict_agent(const Name& n, const Agent& a) {
  switch (a.kind()) {
    case AgentKind::Proc: return Agent::proc(Process::restrict(n, a.body()));
    case AgentKind::Abstraction: return Agent::abstraction(a.var(), Process::restrict(n, a.body()));
    case AgentKind::Concretion: {
      const auto& bound = a.bound();
      if (std::find(bound.begin(), bound.end(), n) != bound.end()) return a;
      if (names_of(a.message()).contains(n)) {
        std::vector<Name> extended{n};
        extended.insert(extended.end(), bound.begin(), bound.end());
        return Agent::concretion(std::move(extended), a.message(), a.body());
      }
      return Agent::concretion(bound, a.message(), Process::restrict(n, a.body()));
    }
  }
  return a;
}

Agent parallel_agent(const Process& r, const Agent& a) {
  switch (a.kind()) {
    case AgentKind::Proc: return Agent::proc(Process::par(r, a.body()));
    case AgentKind::Abstraction: {
      std::set<Variable> rv = free_vars(r);
      if (!rv.contains(a.var())) return Agent::abstraction(a.var(), Process::par(r, a.body()));
      std::set<Variable> avoid = rv;
      for (const auto& v : free_vars(a.body())) avoid.insert(v);
      Variable y = fresh_var(avoid, a.var().str());
      return Agent::abstraction(y, Process::par(r, substitute(a.body(), a.var(), Term::var(y))));
    }
    case AgentKind::Concretion: {
      std::set<Name> rn = free_names(r);
      std::vector<Name> from, to;
      std::set<Name> avoid = rn;
      collect_names(a.message(), avoid);
      for (const auto& n : all_names(a.body())) avoid.insert(n);
      avoid.insert(a.bound().begin(), a.bound().end());
      for (const auto& m : a.bound()) {
        if (!rn.contains(m)) continue;
        Name fresh = fresh_name(avoid, m.str());
        avoid.insert(fresh);
        from.push_back(m);
        to.push_back(fresh);
      }
      std::vector<Name> bound = a.bound();
      Message msg = a.message();
      Process body = a.body();
      if (!from.empty()) rename_binders(bound, msg, body, from, to);
      return Agent::concretion(std::move(bound), std::move(msg), Process::par(r, body));
    }
  }
  return a;
}

// --- reduction ---------------------------------------------------------------------

namespace {

bool guard_fires(const Formula& f, const CongruencePlugin& plugin) {
  EvalResult r = eval_formula(f, plugin);
  return r.kind() == EvalResult::Kind::Truth && r.truth_value();
}

void one_step(const Process& p, const CongruencePlugin& plugin, std::vector<Process>& out) {
  switch (p.kind()) {
    case ProcKind::Par:
    case ProcKind::Sum: {
      auto rebuild = [&](Process l, Process r) {
        return p.kind() == ProcKind::Par ? Process::par(std::move(l), std::move(r))
                                         : Process::sum(std::move(l), std::move(r));
      };
      std::vector<Process> left, right;
      one_step(p.left(), plugin, left);
      one_step(p.right(), plugin, right);
      for (auto& l : left) out.push_back(rebuild(l, p.right()));
      for (auto& r : right) out.push_back(rebuild(p.left(), r));
      return;
    }
    case ProcKind::Restrict: {
      std::vector<Process> inner;
      one_step(p.body(), plugin, inner);
      for (auto& b : inner) out.push_back(Process::restrict(p.name(), b));
      return;
    }
    case ProcKind::Guard:
      if (guard_fires(p.formula(), plugin)) out.push_back(p.body());
      return;
    case ProcKind::Let:
      if (auto v = evaluate(p.term(), plugin)) out.push_back(substitute(p.body(), p.var(), *v));
      return;
    case ProcKind::Bang: throw ReplicationError();
    default: return;
  }
}

// Rebuilds a node only when one of its children changed.
Process rebuild(const Process& p, Process body) {
  if (body == p.body()) return p;
  switch (p.kind()) {
    case ProcKind::Input: return Process::input(p.chan(), p.var(), std::move(body));
    case ProcKind::Output: return Process::output(p.chan(), p.payload(), std::move(body));
    case ProcKind::Restrict: return Process::restrict(p.name(), std::move(body));
    case ProcKind::Guard: return Process::guard(p.formula(), std::move(body));
    case ProcKind::Let: return Process::let_in(p.var(), p.term(), std::move(body));
    default: return p;
  }
}

Process rebuild(const Process& p, Process l, Process r) {
  if (l == p.left() && r == p.right()) return p;
  return p.kind() == ProcKind::Par ? Process::par(std::move(l), std::move(r)) : Process::sum(std::move(l), std::move(r));
}

bool ground(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::Not: return ground(f.operand());
    case FormulaKind::And: return ground(f.left()) && ground(f.right());
    case FormulaKind::Eq: return f.lhs().is_ground() && f.rhs().is_ground();
  }
  return false;
}

Process fire_all(const Process& p, const CongruencePlugin& plugin) {
  switch (p.kind()) {
    case ProcKind::Par:
    case ProcKind::Sum: return rebuild(p, fire_all(p.left(), plugin), fire_all(p.right(), plugin));
    case ProcKind::Restrict: return rebuild(p, fire_all(p.body(), plugin));
    case ProcKind::Guard:
      return guard_fires(p.formula(), plugin) ? fire_all(p.body(), plugin) : p;
    case ProcKind::Let:
      if (auto v = evaluate(p.term(), plugin)) return fire_all(substitute(p.body(), p.var(), *v), plugin);
      return p;
    case ProcKind::Bang: throw ReplicationError();
    default: return p;
  }
}

// Ground guards, lets and outputs that can never fire are replaced by 0;
// the transitions of the state are unchanged.
Process drop_dead(const Process& p, const CongruencePlugin& plugin) {
  switch (p.kind()) {
    case ProcKind::Nil: return p;
    case ProcKind::Input: return rebuild(p, drop_dead(p.body(), plugin));
    case ProcKind::Output:
      if (p.payload().is_ground() && !evaluate(p.payload(), plugin)) return Process::nil();
      return rebuild(p, drop_dead(p.body(), plugin));
    case ProcKind::Par:
    case ProcKind::Sum: return rebuild(p, drop_dead(p.left(), plugin), drop_dead(p.right(), plugin));
    case ProcKind::Restrict: return rebuild(p, drop_dead(p.body(), plugin));
    case ProcKind::Guard:
      if (ground(p.formula()) && !guard_fires(p.formula(), plugin)) return Process::nil();
      return rebuild(p, drop_dead(p.body(), plugin));
    case ProcKind::Let:
      if (p.term().is_ground() && !evaluate(p.term(), plugin)) return Process::nil();
      return rebuild(p, drop_dead(p.body(), plugin));
    case ProcKind::Bang: throw ReplicationError();
  }
  return p;
}

}  // namespace

std::vector<Process> reduce(const Process& p, const CongruencePlugin& plugin) {
  std::vector<Process> raw;
  one_step(p, plugin, raw);
  std::vector<Process> out;
  for (const auto& r : raw) out.push_back(normalize(r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Process reduce_fully(const Process& p, const CongruencePlugin& plugin) {
  return normalize(drop_dead(fire_all(p, plugin), plugin));
}

Process apply(const Agent& abstraction, const Message& m, const CongruencePlugin& plugin) {
  return reduce_fully(substitute(abstraction.body(), abstraction.var(), m), plugin);
}

// --- transitions ---------------------------------------------------------------------

namespace {

Process interact(const Agent& abs, const Agent& conc) {
  std::vector<Name> bound = conc.bound();
  Message msg = conc.message();
  Process body = conc.body();
  std::set<Name> clash = free_names(abs.body());
  std::vector<Name> from, to;
  std::set<Name> avoid = clash;
  collect_names(msg, avoid);
  for (const auto& n : all_names(body)) avoid.insert(n);
  avoid.insert(bound.begin(), bound.end());
  for (const auto& m : bound) {
    if (!clash.contains(m)) continue;
    Name fresh = fresh_name(avoid, m.str());
    avoid.insert(fresh);
    from.push_back(m);
    to.push_back(fresh);
  }
  if (!from.empty()) rename_binders(bound, msg, body, from, to);
  Process out = Process::par(substitute(abs.body(), abs.var(), msg), body);
  for (std::size_t i = bound.size(); i-- > 0;) out = Process::restrict(bound[i], out);
  return out;
}

std::vector<Transition> raw_step(const Process& p, const CongruencePlugin& plugin) {
  switch (p.kind()) {
    case ProcKind::Nil: return {};
    case ProcKind::Input:
      if (!p.chan().is_name()) return {};
      return {{Label::in(p.chan().as_name()), Agent::abstraction(p.var(), p.body())}};
    case ProcKind::Output: {
      if (!p.chan().is_name()) return {};
      auto m = evaluate(p.payload(), plugin);
      if (!m) return {};
      return {{Label::out(p.chan().as_name()), Agent::concretion({}, *m, p.body())}};
    }
    case ProcKind::Sum: {
      auto out = raw_step(p.left(), plugin);
      auto right = raw_step(p.right(), plugin);
      out.insert(out.end(), right.begin(), right.end());
      return out;
    }
    case ProcKind::Par: {
      auto left = raw_step(p.left(), plugin);
      auto right = raw_step(p.right(), plugin);
      std::vector<Transition> out;
      for (const auto& t : left) out.push_back({t.label, parallel_agent(p.right(), t.agent)});
      for (const auto& t : right) out.push_back({t.label, parallel_agent(p.left(), t.agent)});
      for (const auto& l : left)
        for (const auto& r : right) {
          if (l.label.kind == LabelKind::Tau || r.label.kind == LabelKind::Tau) continue;
          if (l.label.chan != r.label.chan || l.label.kind == r.label.kind) continue;
          const auto& abs = l.label.kind == LabelKind::In ? l.agent : r.agent;
          const auto& conc = l.label.kind == LabelKind::In ? r.agent : l.agent;
          out.push_back({Label::tau(), Agent::proc(interact(abs, conc))});
        }
      return out;
    }
    case ProcKind::Restrict: {
      std::vector<Transition> out;
      for (const auto& t : raw_step(p.body(), plugin)) {
        if (t.label.kind != LabelKind::Tau && t.label.chan == p.name()) continue;
        out.push_back({t.label, restrict_agent(p.name(), t.agent)});
      }
      return out;
    }
    case ProcKind::Guard:
      if (!guard_fires(p.formula(), plugin)) return {};
      return raw_step(p.body(), plugin);
    case ProcKind::Let: {
      auto v = evaluate(p.term(), plugin);
      if (!v) return {};
      return raw_step(substitute(p.body(), p.var(), *v), plugin);
    }
    case ProcKind::Bang: throw ReplicationError();
  }
  return {};
}

}  // namespace

const std::vector<Transition>& TransitionSystem::step(const Process& state) {
  if (auto it = steps_.find(state); it != steps_.end()) return it->second;
  std::vector<Transition> out;
  for (auto& t : raw_step(state, plugin_)) {
    Agent canon = t.agent.kind() == AgentKind::Proc ? Agent::proc(reduce_fully(t.agent.body(), plugin_))
                                                     : t.agent.canonical();
    out.push_back({t.label, std::move(canon)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return steps_.emplace(state, std::move(out)).first->second;
}

const std::vector<Process>& TransitionSystem::weak_tau(const Process& state) {
  if (auto it = closures_.find(state); it != closures_.end()) return it->second;
  std::vector<Process> order{state};
  std::unordered_set<Process, ProcessHash> seen{state};
  for (std::size_t i = 0; i < order.size(); ++i) {
    Process cur = order[i];
    for (const auto& t : step(cur)) {
      if (t.label.kind != LabelKind::Tau) continue;
      if (seen.insert(t.agent.body()).second) order.push_back(t.agent.body());
    }
  }
  return closures_.emplace(state, std::move(order)).first->second;
}

std::vector<Agent> TransitionSystem::weak_step(const Process& state, const Label& l) {
  std::vector<Agent> out;
  std::vector<Process> closure = weak_tau(state);
  for (const auto& q : closure)
    for (const auto& t : step(q))
      if (t.label == l) out.push_back(t.agent);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Transition> step(const Process& p, const CongruencePlugin& plugin) {
  TransitionSystem ts(plugin);
  return ts.step(ts.prepare(p));
}

std::vector<Process> weak_tau(const Process& p, const CongruencePlugin& plugin) {
  TransitionSystem ts(plugin);
  return ts.weak_tau(ts.prepare(p));
}

std::vector<Agent> weak_step(const Process& p, const Label& l, const CongruencePlugin& plugin) {
  TransitionSystem ts(plugin);
  return ts.weak_step(ts.prepare(p), l);
}

}  // namespace spi
