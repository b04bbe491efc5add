#pragma once

#include <compare>
#include <string>
#include <unordered_map>
#include <vector>

#include "spi/congruence.hpp"
#include "spi/process.hpp"

namespace spi {

enum class LabelKind : std::uint8_t { Tau, In, Out };

/// τ, a (input on a) or ā (output on a).
struct Label {
  LabelKind kind = LabelKind::Tau;
  Name chan;

  static Label tau() { return {}; }
  static Label in(Name a) { return {LabelKind::In, a}; }
  static Label out(Name a) { return {LabelKind::Out, a}; }

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (a.kind == LabelKind::Tau) return std::strong_ordering::equal;
    return a.chan <=> b.chan;
  }
};

/// "tau", "in a", "out a".
std::string to_string(const Label& l);

enum class AgentKind : std::uint8_t { Proc, Abstraction, Concretion };

/// A process, an abstraction (x)P or a concretion (ν m⃗)⟨M⟩P.
class Agent {
 public:
  static Agent proc(Process p);
  static Agent abstraction(Variable x, Process body);
  static Agent concretion(std::vector<Name> bound, Message msg, Process body);

  AgentKind kind() const { return kind_; }
  const Process& body() const { return body_; }
  const Variable& var() const { return var_; }             // abstraction
  const std::vector<Name>& bound() const { return bound_; } // concretion
  const Message& message() const { return msg_; }          // concretion

  /// Free names, excluding the bound names of a concretion.
  std::set<Name> free_names() const;

  /// Representative of the α-class: the abstraction parameter becomes `_a`,
  /// concretion binders become `_c0, _c1, ...` by first occurrence in the
  /// message, and bodies are normalized.
  Agent canonical() const;

  friend bool operator==(const Agent&, const Agent&) = default;
  friend std::strong_ordering operator<=>(const Agent& a, const Agent& b);

 private:
  AgentKind kind_ = AgentKind::Proc;
  Process body_;
  Variable var_;
  std::vector<Name> bound_;
  Message msg_;
};

std::string to_string(const Agent& a);

struct Transition {
  Label label;
  Agent agent;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// (νn)A, by the extended restriction equations.
Agent restrict_agent(const Name& n, const Agent& a);
/// R | A, α-converting A's binders away from R first.
Agent parallel_agent(const Process& r, const Agent& a);

/// One-step reducts: each fires a single top-level guard or let.
std::vector<Process> reduce(const Process& p, const CongruencePlugin& plugin);
/// Fires every enabled top-level guard and let, repeatedly, and normalizes.
/// The result is the state transitions are computed from.
Process reduce_fully(const Process& p, const CongruencePlugin& plugin);

/// Instantiates an abstraction with a message and prepares the result.
Process apply(const Agent& abstraction, const Message& m, const CongruencePlugin& plugin);

/// Labelled transitions of closed finite processes, cached per state.
///
/// States are the results of reduce_fully; every process returned is one.
/// Agents in results are canonical and sorted, so outputs are deterministic.
class TransitionSystem {
 public:
  explicit TransitionSystem(const CongruencePlugin& plugin) : plugin_(plugin) {}

  const CongruencePlugin& plugin() const { return plugin_; }

  Process prepare(const Process& p) const { return reduce_fully(p, plugin_); }

  /// Strong commitments of a prepared state.
  const std::vector<Transition>& step(const Process& state);
  /// Every state reachable by zero or more τ steps, in BFS order.
  const std::vector<Process>& weak_tau(const Process& state);
  /// Agents reachable by ⟹ followed by one l-step, deduplicated.
  std::vector<Agent> weak_step(const Process& state, const Label& l);

  std::size_t states_seen() const { return steps_.size(); }

 private:
  const CongruencePlugin& plugin_;
  std::unordered_map<Process, std::vector<Transition>, ProcessHash> steps_;
  std::unordered_map<Process, std::vector<Process>, ProcessHash> closures_;
};

/// Strong commitments of p (prepared first).
std::vector<Transition> step(const Process& p, const CongruencePlugin& plugin);
std::vector<Process> weak_tau(const Process& p, const CongruencePlugin& plugin);
std::vector<Agent> weak_step(const Process& p, const Label& l, const CongruencePlugin& plugin);

}  // namespace spi
