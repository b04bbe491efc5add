#include "doctest.h"
#include "oracle.hpp"
#include "spi/frontend.hpp"

using namespace spi;
using namespace spi::oracle;

namespace {

const CongruencePlugin& dflt = default_congruence();

Message nm(const char* s) { return Term::name(s); }

PairSet ids(std::initializer_list<const char*> names) {
  PairSet out;
  for (auto n : names) out.emplace(nm(n), nm(n));
  return out;
}

}  // namespace

TEST_CASE("all_messages over one name") {
  Universe u{{Name("a")}, 0};
  CHECK(all_messages(u, dflt) == std::set<Message>{nm("a")});
  u.depth = 1;
  CHECK(all_messages(u, dflt) ==
        std::set<Message>{nm("a"), Term::pair(nm("a"), nm("a")), Term::enc(nm("a"), nm("a"))});
  u.depth = 2;
  // 1 + 2 + (3 * 3 - 1 pairs + 2 ciphers)
  CHECK(all_messages(u, dflt).size() == 13);
}

TEST_CASE("oracle hedge operations on small cases") {
  PairSet h{{Term::enc(nm("a"), nm("k")), Term::enc(nm("b"), nm("j"))}, {nm("k"), nm("j")}};
  PairSet irr = irreducible(h, dflt);
  CHECK(irr == PairSet{{nm("k"), nm("j")}, {nm("a"), nm("b")}});
  CHECK(consistent(PairSet{{nm("a"), nm("a")}, {nm("k"), nm("j")}}, dflt));
  CHECK_FALSE(consistent(PairSet{{nm("a"), nm("b")}, {nm("a"), nm("c")}}, dflt));
  CHECK_FALSE(consistent(h, dflt));
  CHECK(homologous(ids({"a"}), 2, dflt).size() == 13);
  CHECK(homologous(PairSet{{nm("a"), nm("b")}}, 1, dflt) ==
        PairSet{{nm("a"), nm("b")},
                {Term::pair(nm("a"), nm("a")), Term::pair(nm("b"), nm("b"))},
                {Term::enc(nm("a"), nm("a")), Term::enc(nm("b"), nm("b"))}});
}

TEST_CASE("naive bisimulation on the worked examples") {
  CHECK(naive_d_bisim(ids({"a"}), Process::nil(), Process::nil(), 1, dflt));
  Process p = parse_process("a(x).[x = enc(a, a)] a<a>.0");
  Process q = parse_process("a(x).0");
  CHECK_FALSE(naive_d_bisim(ids({"a"}), p, q, 2, dflt));
  CHECK(naive_d_bisim(ids({"a"}), p, p, 2, dflt));

  Process s1 = parse_process("new k.a<enc(m1, k)>.0");
  Process s2 = parse_process("new k.a<enc(m2, k)>.0");
  CHECK(naive_d_bisim(ids({"a", "m1", "m2"}), s1, s2, 1, dflt));

  Process l1 = parse_process("new k.a<k>.a<enc(a, k)>.0");
  Process l2 = parse_process("new k.a<k>.a<enc(b, k)>.0");
  CHECK_FALSE(naive_d_bisim(ids({"a", "b"}), l1, l2, 1, dflt));
}

TEST_CASE("double encryption depends on the theory") {
  Process p = parse_process("new j.a<enc(enc(a, k), j)>.0");
  Process q = parse_process("new j.a<enc(enc(a, j), k)>.0");
  CHECK_FALSE(naive_d_bisim(ids({"a", "k"}), p, q, 1, dflt));
  CHECK(naive_d_bisim(ids({"a", "k"}), p, q, 1, commutative_congruence()));
}
