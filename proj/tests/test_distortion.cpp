#include <limits>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "sctk/distortion.hpp"
#include "sctk/errors.hpp"

using namespace sctk;

namespace {
  Alphabet abc() {
    return Alphabet({"a", "b", "c"});
  }
  Word w(char const* s) {
    return parse_word(s, abc());
  }
  LabelledGraph cyc(char const* s) {
    return cycle_graph(w(s), abc());
  }

  // Is x a factor of u^k for large k?
  bool is_ray_factor(Word const& x, Word const& u) {
    Word big;
    while (big.size() < x.size() + 2 * u.size()) {
      big.insert(big.end(), u.begin(), u.end());
    }
    return std::search(big.begin(), big.end(), x.begin(), x.end()) != big.end();
  }

  // Longest reduced walk whose label is a factor of w^k or w^-k; nullopt
  // when walks reach `cap` steps.
  std::optional<std::size_t> brute_c0(LabelledGraph const& g, Word const& x,
                                      std::size_t cap) {
    std::size_t best = 0;
    bool        hit  = false;
    auto        xinv = inverse(x);
    std::function<void(std::uint32_t, Word&, std::optional<Dart>)> dfs
        = [&](std::uint32_t v, Word& label, std::optional<Dart> last) {
            best = std::max(best, label.size());
            if (label.size() == cap) {
              hit = true;
              return;
            }
            for (Dart d : g.darts_at(v)) {
              if (last && d == dart_reverse(*last)) {
                continue;
              }
              label.push_back(g.label(d));
              if (is_ray_factor(label, x) || is_ray_factor(label, xinv)) {
                dfs(g.target(d), label, d);
              }
              label.pop_back();
              if (hit) {
                return;
              }
            }
          };
    for (std::uint32_t v = 0; v < g.num_vertices() && !hit; ++v) {
      Word label;
      dfs(v, label, std::nullopt);
    }
    if (hit) {
      return std::nullopt;
    }
    return best;
  }

  Word random_root(std::mt19937_64& rng, std::size_t len, std::uint32_t gens) {
    while (true) {
      auto x = oracle::random_cyclically_reduced(rng, len, gens);
      if (!is_proper_power(x)) {
        return x;
      }
    }
  }
}  // namespace

TEST_CASE("ray scan examples") {
  auto g = cyc("a a a a a a a b");
  auto s = subword_ray_scan(g, w("a"));
  CHECK(s.bounded);
  CHECK(s.c0 == 7);
  CHECK(path_label(g, s.longest.path) == power(w("a"), 7));
  s = subword_ray_scan(g, w("a b"));
  CHECK(s.bounded);
  CHECK(s.c0 == 3);

  auto h = cyc("a b c");
  s      = subword_ray_scan(h, w("b c a"));
  REQUIRE_FALSE(s.bounded);
  REQUIRE(s.closed);
  CHECK(is_closed(h, s.closed->path));
  CHECK(s.closed->path.darts.size() % 3 == 0);

  CHECK_THROWS_AS(subword_ray_scan(g, w("a b a b")), Error);
  CHECK_THROWS_AS(subword_ray_scan(g, w("a b A")), Error);
  CHECK_THROWS_AS(subword_ray_scan(g, Word{}), Error);
}

TEST_CASE("ray scan matches a pruned walk search") {
  std::mt19937_64 rng(31);
  int             unbounded = 0;
  for (int t = 0; t < 120; ++t) {
    LabelledGraph g;
    if (t % 3 == 0) {
      std::vector<Word> ws{oracle::random_cyclically_reduced(rng, 3 + rng() % 8, 2)};
      g = oracle::disjoint_cycles(ws, Alphabet({"a", "b"}));
      if (!validate_reduced(g).reduced) {
        continue;
      }
    } else {
      g = oracle::random_reduced_graph(rng, 2 + rng() % 8, 2 + rng() % 19, 2);
    }
    auto x   = random_root(rng, 1 + rng() % 6, 2);
    auto s   = subword_ray_scan(g, x);
    auto cap = 2 * g.num_vertices() * x.size() + 2;
    auto b   = brute_c0(g, x, cap);
    if (s.bounded) {
      REQUIRE(b);
      CHECK(s.c0 == *b);
      CHECK(s.longest.path.darts.size() == s.c0);
    } else {
      ++unbounded;
      CHECK_FALSE(b);
      auto lab = path_label(g, s.closed->path);
      CHECK(is_closed(g, s.closed->path));
      CHECK((is_ray_factor(lab, x) || is_ray_factor(lab, inverse(x))));
    }
  }
  CHECK(unbounded > 0);
}

TEST_CASE("periods") {
  auto g = cyc("a b a b a b");
  PathSpec p{0, {g.darts_at(0)[0]}};
  p.darts.push_back(*g.step(1, w("b")[0]));
  auto phi = detect_period(g, p);
  REQUIRE(phi);
  CHECK(phi->vertex_map[0] == 2);

  auto h = cyc("a a b");
  CHECK(oracle::automorphism_count(h) == 1);
  for (auto const& c : find_occurrences(w("a"), h)) {
    CHECK_FALSE(detect_period(h, c));
  }
  PathSpec loop{0, {}};
  CHECK_THROWS_AS(detect_period(h, loop), Error);
}

TEST_CASE("case classification on a^7 b") {
  auto g = cyc("a a a a a a a b");
  auto c = classify_case(g, w("a"));
  CHECK(c.tag == DistortionCase::Case2b);
  CHECK(c.c0 == 7u);
  CHECK(c.coefficient == Rational(1, 7));
  CHECK(c.hausdorff == 43u);
  REQUIRE(c.witnesses.size() == 1);
  CHECK(c.witnesses[0].overlap_length == 7);
  // a^7 b is not Gr'(1/6): the audits must fail and the certificate says so
  CHECK_FALSE(c.small_cancellation);
  CHECK_FALSE(c.witnesses[0].all_hold());
  CHECK(c.downgraded);
  CHECK_THROWS_AS(classify_case(g, w("a"), {true}), Error);

  auto d = classify_case(g, w("a b"));
  CHECK(d.tag == DistortionCase::Case2a);
  CHECK(d.c0 == 3u);
  CHECK(d.coefficient == Rational(1, 3));
  CHECK(d.hausdorff == 20u);
  CHECK(d.witnesses.empty());

  auto e = classify_case(cyc("a b"), w("b a"));
  CHECK(e.tag == DistortionCase::Case1);
  CHECK(e.finite_order);
  CHECK_FALSE(e.c0);
  CHECK_FALSE(e.coefficient);

  auto j = nlohmann::json::parse(certificate_json(c, g));
  CHECK(j["case"] == "Case2b");
  CHECK(j["coefficient"] == "1/7");
  CHECK(j["hausdorff"] == 43);
  CHECK(certificate_json(c, g) == certificate_json(classify_case(g, w("a")), g));
}

TEST_CASE("a consistent Case2b fixture") {
  // one relator, C'(1/6): its overlap with the ray of w is w followed by the
  // first two letters of w again
  auto g = cyc("c b C a c c c b c b A A A B");
  auto x = w("c b C a c c");
  auto c = classify_case(g, x, {true});
  CHECK(c.small_cancellation);
  CHECK(c.tag == DistortionCase::Case2b);
  CHECK(c.c0 == 8u);
  REQUIRE(c.witnesses.size() == 1);
  CHECK(c.witnesses[0].overlap_length == 8);
  CHECK(c.witnesses[0].all_hold());
  CHECK_FALSE(c.downgraded);
  CHECK(c.coefficient == Rational(1, 8));
  CHECK(c.hausdorff == 6 * 8 + 6u);

  auto sigma = sigma_path(g, x);
  auto len   = sigma.path.darts.size();
  CHECK(len > x.size());
  CHECK(len < 2 * x.size());
  CHECK(is_ray_factor(path_label(g, sigma.path), x));

  // uniqueness by brute force: every occurrence of a conjugate of w is an
  // automorphic image of exactly one subpath of sigma
  // automorphisms of a connected cycle graph are among its rotations
  std::vector<std::vector<std::uint32_t>> auts;
  auto const n = static_cast<std::uint32_t>(g.num_vertices());
  for (std::uint32_t k = 0; k < n; ++k) {
    bool ok = true;
    for (std::uint32_t e = 0; e < g.num_edges() && ok; ++e) {
      auto const& x = g.edge(e);
      ok = false;
      for (std::uint32_t f = 0; f < g.num_edges(); ++f) {
        auto const& y = g.edge(f);
        ok = ok || (y.source == (x.source + k) % n && y.target == (x.target + k) % n
                    && y.label == x.label);
      }
    }
    if (ok) {
      std::vector<std::uint32_t> psi(n);
      for (std::uint32_t v = 0; v < n; ++v) {
        psi[v] = (v + k) % n;
      }
      auts.push_back(psi);
    }
  }
  CHECK(auts.size() == 1);
  auto vs   = path_vertices(g, sigma.path);
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (auto const& occ : find_occurrences(rotate(x, k), g)) {
      int images = 0;
      for (std::size_t t = 0; t + x.size() <= len; ++t) {
        auto sub = subpath(g, sigma.path, t, x.size());
        if (path_label(g, sub) != rotate(x, k)) {
          continue;
        }
        for (auto const& psi : auts) {
          if (psi[occ.start] == vs[t]) {
            ++images;
            break;
          }
        }
      }
      CHECK(images == 1);
    }
  }

  CHECK_THROWS_AS(sigma_path(cyc("a a a a a a a b"), w("a b")), Error);
  try {
    sigma_path(cyc("a a a a a a a b"), w("a"));
    FAIL("expected an assertion failure");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::AssertionFailed);
  }
}

TEST_CASE("case tags ignore rotation and inversion of w") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 80; ++t) {
    auto g = oracle::random_reduced_graph(rng, 2 + rng() % 6, 2 + rng() % 10, 2);
    auto x = random_root(rng, 1 + rng() % 5, 2);
    auto c = classify_case(g, x);
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (auto const& y : {rotate(x, k), inverse(rotate(x, k))}) {
        auto d = classify_case(g, y);
        CHECK(d.tag == c.tag);
        CHECK(d.c0 == c.c0);
        CHECK(d.coefficient == c.coefficient);
      }
    }
  }
}

TEST_CASE("distorted family relators") {
  auto al = Alphabet({"a", "b"});
  auto r1 = distorted_relator(7, 1);
  std::vector<std::uint64_t> bexp;
  for (auto const& run : r1.runs()) {
    if (run.letter.gen == 1) {
      bexp.push_back(run.count);
    }
  }
  CHECK(bexp == std::vector<std::uint64_t>{15, 17, 19, 21, 23, 25, 27, 2});

  for (std::uint64_t p = 2; p <= 9; ++p) {
    for (std::uint64_t n = 1; n <= 5; ++n) {
      auto x = distorted_relator(p, n).expand();
      CHECK(x.size() == (p + 1) + 2 * n * p * p + p * p + (std::uint64_t{1} << n));
      auto as = std::count(x.begin(), x.end(), Letter{0, false});
      CHECK(static_cast<std::uint64_t>(as) == p + 1);
    }
  }
  auto x1 = r1.expand();
  CHECK(symmetrized_closure({x1}).size() == 2 * x1.size());
  CHECK(oracle::rotations_and_inverses(x1).size() == 2 * x1.size());

  auto fam = gen_distorted_family(7, 30);
  CHECK(fam.relators.size() == 30);
  CHECK(fam.relators[29].length() == 8 + 2 * 30 * 49 + 49 + (std::uint64_t{1} << 30));
  CHECK_THROWS_AS(gen_distorted_family(1, 3), Error);
  CHECK_THROWS_AS(gen_distorted_family(7, 0), Error);
}

TEST_CASE("short witnesses") {
  for (std::uint64_t p = 2; p <= 9; ++p) {
    for (std::uint64_t n = 1; n <= 10; ++n) {
      auto u = short_witness(p, n).inverse();
      auto r = distorted_relator(p, n);
      RunWord joined = u;
      joined.push_back(Letter{1, false}, std::uint64_t{1} << n);
      CHECK(joined.expand() == r.expand());
      CHECK(u.length() == (p + 1) + 2 * n * p * p + p * p);
    }
  }
  CHECK(short_witness(7, 3).length() == 351);
  double prev = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 1; n <= 20; ++n) {
    double ratio = double(short_witness(7, n).length()) / double(std::uint64_t{1} << n);
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("free product combination") {
  auto fam = gen_distorted_family(7, 3);
  Alphabet cd({"c", "d"});
  RunPresentation other{cd, {parse_run_word("c^7 d", cd)}};
  auto both = combine_free_product(fam, other);
  CHECK(both.alphabet.names() == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(both.relators.size() == 4);
  auto v1 = check_c_classical(fam, 7), v2 = check_c_classical(other, 7);
  auto vu = check_c_classical(both, 7);
  CHECK(vu.pass == (v1.pass && v2.pass));
  CHECK(vu.pass);
  auto m = std::min(*v1.min_pieces, v2.min_pieces.value_or(UINT64_MAX));
  CHECK(vu.min_pieces == m);

  auto same = combine_free_product(fam, fam);
  CHECK(same.alphabet.names() == std::vector<std::string>{"a", "b", "a_2", "b_2"});
  CHECK(format_word(same.relators[3], same.alphabet).rfind("a_2 b_2^", 0) == 0);
  auto empty = combine_free_product(fam, RunPresentation{});
  CHECK(empty.alphabet == fam.alphabet);
  CHECK(empty.relators == fam.relators);
}
