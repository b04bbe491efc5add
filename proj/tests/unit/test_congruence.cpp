#include <functional>
#include <deque>

#include "doctest.h"
#include "broken_congruence.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "spi/congruence.hpp"

using namespace spi;
using spi::test::T;

namespace {

const CongruencePlugin& dflt = default_congruence();
const CongruencePlugin& comm = commutative_congruence();

// Every message reachable from m by swapping two adjacent encryption keys
// at any position, in either direction.
std::set<Message> commutation_class(const Message& m) {
  std::function<std::vector<Message>(const Message&)> neighbours = [&](const Message& x) {
    std::vector<Message> out;
    if (x.is_pair()) {
      for (const auto& l : neighbours(x.first())) out.push_back(Term::pair(l, x.second()));
      for (const auto& r : neighbours(x.second())) out.push_back(Term::pair(x.first(), r));
    } else if (x.is_enc()) {
      if (x.payload().is_enc())
        out.push_back(Term::enc(Term::enc(x.payload().payload(), x.key()), x.payload().key()));
      for (const auto& p : neighbours(x.payload())) out.push_back(Term::enc(p, x.key()));
    }
    return out;
  };
  std::set<Message> seen{m};
  std::deque<Message> todo{m};
  while (!todo.empty()) {
    Message x = todo.front();
    todo.pop_front();
    for (const auto& n : neighbours(x))
      if (seen.insert(n).second) todo.push_back(n);
  }
  return seen;
}

}  // namespace

TEST_CASE("equiv") {
  CHECK(equiv(dflt, T("enc(a, k)"), T("enc(a, k)")));
  CHECK_FALSE(equiv(dflt, T("enc(a, k)"), T("enc(a, j)")));
  CHECK(equiv(comm, T("enc(enc(a, k), j)"), T("enc(enc(a, j), k)")));
  CHECK_FALSE(equiv(dflt, T("enc(enc(a, k), j)"), T("enc(enc(a, j), k)")));
}

TEST_CASE("canonical") {
  CHECK(canonical(dflt, T("(a, b)")) == T("(a, b)"));
  CHECK(canonical(comm, T("enc(enc(a, k), j)")) == T("enc(enc(a, j), k)"));
  CHECK(canonical(comm, T("(enc(enc(a, k), j), b)")) == T("(enc(enc(a, j), k), b)"));
}

TEST_CASE("commutative canonical forms agree with the closure of the axiom") {
  gen::Rng rng(3);
  auto pool = gen::names({"a", "j", "k"});
  for (int i = 0; i < 200; ++i) {
    Message m = gen::message(rng, pool, 4);
    auto cls = commutation_class(m);
    Message c = comm.canonical(m);
    CHECK(cls.contains(c));
    for (const auto& x : cls) CHECK(comm.canonical(x) == c);
  }
  auto cls = commutation_class(T("enc(enc(a, k), j)"));
  CHECK(cls == std::set<Message>{T("enc(enc(a, k), j)"), T("enc(enc(a, j), k)")});
}

TEST_CASE("decrypt") {
  CHECK(decrypt(dflt, T("enc(a, k)"), Name("k")) == T("a"));
  CHECK_FALSE(decrypt(dflt, T("enc(a, k)"), Name("j")).has_value());
  CHECK(decrypt(comm, T("enc(enc(a, k), j)"), Name("k")) == T("enc(a, j)"));
  CHECK(decrypt(comm, T("enc(enc(a, k), j)"), Name("j")) == T("enc(a, k)"));
  CHECK_FALSE(decrypt(comm, T("enc(enc(a, k), j)"), Name("a")).has_value());
}

TEST_CASE("congruence properties on random messages") {
  gen::Rng rng(17);
  auto pool = gen::names({"a", "b", "k"});
  for (const CongruencePlugin* plugin : {&dflt, &comm}) {
    for (int i = 0; i < 300; ++i) {
      Message m = gen::message(rng, pool, 4), n = gen::message(rng, pool, 4), o = gen::message(rng, pool, 2);
      Name k = rng.pick(pool);
      CHECK(plugin->canonical(plugin->canonical(m)) == plugin->canonical(m));
      CHECK(plugin->equiv(m, m));
      CHECK(plugin->equiv(m, n) == plugin->equiv(n, m));
      if (plugin->equiv(m, n)) {
        CHECK(plugin->equiv(Term::pair(m, o), Term::pair(n, o)));
        CHECK(plugin->equiv(Term::enc(m, Term::name(k)), Term::enc(n, Term::name(k))));
      }
      auto back = plugin->decrypt(Term::enc(m, Term::name(k)), k);
      REQUIRE(back.has_value());
      CHECK(plugin->equiv(*back, m));
      CHECK(ds(plugin->canonical(m)) == ds(m));
      Term b = Term::name("b9");
      CHECK(plugin->equiv(m, n) == plugin->equiv(substitute_name(m, Name("a"), b), substitute_name(n, Name("a"), b)));
    }
  }
}

TEST_CASE("check_coherence") {
  for (const CongruencePlugin* plugin : {&dflt, &comm}) {
    auto reports = check_coherence(*plugin, 1000, 4, 7);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
      CHECK(r.passed());
      CHECK(r.samples_tested > 0);
    }
  }
  test::BrokenCongruence broken;
  auto reports = check_coherence(broken, 1000, 4, 7);
  bool caught = false;
  for (const auto& r : reports)
    if (r.condition == CoherenceCondition::DeterministicDecryption && !r.passed()) caught = true;
  CHECK(caught);
}

TEST_CASE("congruence_by_id") {
  CHECK(congruence_by_id("default").id() == "default");
  CHECK(congruence_by_id("commutative").id() == "commutative");
  CHECK_THROWS_AS(congruence_by_id("xor"), std::invalid_argument);
}
