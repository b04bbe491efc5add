#include "spi/evaluation.hpp"

namespace spi {
namespace {

// Evaluates to a (not necessarily canonical) message.
std::optional<Message> raw_eval(const Term& t, const CongruencePlugin& plugin) {
  switch (t.kind()) {
    case TermKind::Name: return t;
    case TermKind::Var: return std::nullopt;
    case TermKind::Pair: {
      auto a = raw_eval(t.first(), plugin);
      if (!a) return std::nullopt;
      auto b = raw_eval(t.second(), plugin);
      if (!b) return std::nullopt;
      return Term::pair(std::move(*a), std::move(*b));
    }
    case TermKind::Enc: {
      auto payload = raw_eval(t.payload(), plugin);
      if (!payload) return std::nullopt;
      auto key = raw_eval(t.key(), plugin);
      if (!key || !key->is_name()) return std::nullopt;
      return Term::enc(std::move(*payload), std::move(*key));
    }
    case TermKind::Dec: {
      auto key = raw_eval(t.key(), plugin);
      if (!key || !key->is_name()) return std::nullopt;
      auto cipher = raw_eval(t.payload(), plugin);
      if (!cipher) return std::nullopt;
      return plugin.decrypt(*cipher, key->as_name());
    }
    case TermKind::Proj1:
    case TermKind::Proj2: {
      auto v = raw_eval(t.arg(), plugin);
      if (!v) return std::nullopt;
      Message c = plugin.canonical(*v);
      if (!c.is_pair()) return std::nullopt;
      return t.kind() == TermKind::Proj1 ? c.first() : c.second();
    }
  }
  return std::nullopt;
}

std::optional<bool> eval_bool(const Formula& f, const CongruencePlugin& plugin) {
  switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::Not: {
      auto v = eval_bool(f.operand(), plugin);
      if (!v) return std::nullopt;
      return !*v;
    }
    case FormulaKind::And: {
      auto a = eval_bool(f.left(), plugin);
      if (!a) return std::nullopt;
      auto b = eval_bool(f.right(), plugin);
      if (!b) return std::nullopt;
      return *a && *b;
    }
    case FormulaKind::Eq: {
      auto a = raw_eval(f.lhs(), plugin);
      if (!a) return std::nullopt;
      auto b = raw_eval(f.rhs(), plugin);
      if (!b) return std::nullopt;
      return plugin.equiv(*a, *b);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Message> evaluate(const Term& t, const CongruencePlugin& plugin) {
  if (!t.is_ground()) return std::nullopt;
  auto v = raw_eval(t, plugin);
  if (!v) return std::nullopt;
  return plugin.canonical(*v);
}

EvalResult eval_term(const Term& t, const CongruencePlugin& plugin) {
  auto v = evaluate(t, plugin);
  return v ? EvalResult::value(std::move(*v)) : EvalResult::undefined();
}

EvalResult eval_formula(const Formula& f, const CongruencePlugin& plugin) {
  if (!free_vars(f).empty()) return EvalResult::undefined();
  auto v = eval_bool(f, plugin);
  return v ? EvalResult::truth(*v) : EvalResult::undefined();
}

}  // namespace spi
