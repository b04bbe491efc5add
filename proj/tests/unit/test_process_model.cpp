#include <regex>

#include "doctest.h"
#include "generators.hpp"
#include "helpers.hpp"
#include "spi/process.hpp"

using namespace spi;
using spi::test::P;
using spi::test::T;

TEST_CASE("free names and variables") {
  CHECK(free_names(P("new k. a<enc(m, k)>.0")) == std::set<Name>{Name("a"), Name("m")});
  CHECK(free_vars(P("a(x). a<x>.0")).empty());
  CHECK(free_names(Process::nil()).empty());
  Process open = Process::output(T("a"), Term::var("y"), Process::nil());
  CHECK(free_vars(open) == std::set<Variable>{Variable("y")});
  CHECK_FALSE(is_closed(open));
}

TEST_CASE("is_finite") {
  CHECK_FALSE(is_finite(Process::bang(Process::nil())));
  CHECK(is_finite(P("0 | a(x).0")));
  CHECK_FALSE(is_finite(P("new k. !a<k>.0")));
  CHECK_THROWS_AS(normalize(P("!0")), ReplicationError);
  CHECK_THROWS_AS(analysis_depth(P("!0")), ReplicationError);
}

TEST_CASE("normalize") {
  Process q = P("a(x). b<x>.0");
  CHECK(normalize(Process::par(Process::nil(), q)) == normalize(q));
  CHECK(normalize(P("a<a>.0 + b<b>.0")) == normalize(P("b<b>.0 + a<a>.0")));
  CHECK(normalize(P("new m. new n. a<(m, n)>.0")) == normalize(P("new n. new m. a<(m, n)>.0")));
  CHECK(normalize(P("a(x). a<x>.0")) == normalize(P("a(y). a<y>.0")));
  CHECK(normalize(P("new k. a<k>.0")) == normalize(P("new j. a<j>.0")));
  CHECK(normalize(P("(a<a>.0 | b<b>.0) | c<c>.0")) == normalize(P("a<a>.0 | (b<b>.0 | c<c>.0)")));
  CHECK(normalize(P("new k. (a<k>.0 | b<b>.0)")) == normalize(P("(new k. a<k>.0) | b<b>.0")));
  CHECK(normalize(P("new k. 0")) == Process::nil());
  CHECK(normalize(P("a<a>.0")) != normalize(P("a<b>.0")));
  CHECK(normalize(P("a<a>.0 | a<a>.0")) != normalize(P("a<a>.0")));
}

TEST_CASE("analysis_depth") {
  CHECK(analysis_depth(Process::nil()) == 0);
  CHECK(analysis_depth(P("a(x). [x = enc(a, a)] a<a>.0")) == 1);
  Process let = Process::let_in(Variable("x"), Term::proj1(Term::var("y")), Process::nil());
  CHECK(analysis_depth(let) == 1);
  CHECK(analysis_depth(P("a(x). let y = dec(x, k) in let z = fst(y) in [z = a] 0")) == 2);
}

TEST_CASE("process properties on random processes") {
  gen::Rng rng(41);
  gen::ProcessShape shape;
  shape.destructors = true;
  for (int i = 0; i < 300; ++i) {
    Process p = gen::process(rng, shape);
    Process q = gen::process(rng, shape);
    Process n = normalize(p);
    CHECK(normalize(n) == n);
    CHECK(free_names(n) == free_names(p));
    CHECK(analysis_depth(Process::par(p, q)) == analysis_depth(p) + analysis_depth(q));
    // generated binders are spelled xN and kN
    std::string text = std::regex_replace(to_string(p), std::regex("\\bx([0-9]+)"), "v$1");
    text = std::regex_replace(text, std::regex("\\bk([0-9]+)"), "r$1");
    Process renamed = parse_process(text);
    if (text != to_string(p)) CHECK(renamed != p);
    CHECK(normalize(renamed) == n);
    CHECK(analysis_depth(n) == analysis_depth(p));
  }
}

TEST_CASE("alpha-renaming binders leaves the normal form unchanged") {
  Process p = P("new k. a(x). let y = dec(x, k) in (b<y>.0 | new j. a<enc(y, j)>.0)");
  Process q = P("new k2. a(z). let w = dec(z, k2) in (b<w>.0 | new i. a<enc(w, i)>.0)");
  CHECK(normalize(p) == normalize(q));
  CHECK(analysis_depth(p) == analysis_depth(q));
}
