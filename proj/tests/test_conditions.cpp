#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "sctk/conditions.hpp"
#include "sctk/distortion.hpp"
#include "sctk/errors.hpp"

using namespace sctk;

namespace {
  Alphabet ab() {
    return Alphabet({"a", "b"});
  }

  // Letters of generator `gen` in the cyclic slice of w.
  std::uint64_t count_gen(RunWord const& w, std::uint64_t offset, std::uint64_t len,
                          std::uint32_t gen) {
    std::uint64_t pos = 0, hits = 0;
    // walk the runs twice to cover the wrap-around
    for (int lap = 0; lap < 2; ++lap) {
      for (auto const& r : w.runs()) {
        std::uint64_t lo = std::max(pos, offset), hi = std::min(pos + r.count, offset + len);
        if (lo < hi && r.letter.gen == gen) {
          hits += hi - lo;
        }
        pos += r.count;
      }
    }
    return hits;
  }

  // Cyclic rotations of cycle c with their oracle walk form.
  oracle::Walk cyclic_walk(LabelledGraph const& g, PathSpec const& c, std::size_t i,
                           std::size_t len) {
    auto p = subpath(g, c, i, len);
    return {path_vertices(g, p), p.darts};
  }
}  // namespace

TEST_CASE("rationals") {
  CHECK(parse_rational("1/6") == Rational(1, 6));
  CHECK(parse_rational("2/12") == Rational(1, 6));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(format_rational(Rational(2, 4)) == "1/2");
  CHECK_THROWS_AS(parse_rational("0.5"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("commutator: C(4) holds, C(6) fails with four pieces") {
  auto al  = ab();
  auto rel = RunPresentation{al, {parse_run_word("a b A B", al)}};
  auto cp  = classical_pieces(rel);

  auto c4 = check_c_classical(cp, al, 4);
  CHECK(c4.pass);
  CHECK(c4.min_pieces == 4u);

  auto c6 = check_c_classical(cp, al, 6);
  CHECK_FALSE(c6.pass);
  CHECK(c6.pieces.size() == 4);
  CHECK(revalidate(c6, cp));
  // the brute-force count agrees
  oracle::ClassicalOracle brute({parse_word("a b A B", al)});
  CHECK(brute.min_pieces(0) == 4);

  // same verdicts through Γ_R and the graph checker
  auto       gr = gamma_R(symmetrized_closure({parse_word("a b A B", al)}), al);
  PieceIndex idx(gr.graph);
  auto       g6 = check_gr(idx, 6, true);
  CHECK_FALSE(g6.pass);
  CHECK(g6.pieces.size() == 4);
  CHECK(revalidate(g6, idx));
  CHECK(check_gr(idx, 4, true).pass);

  // a tampered witness no longer revalidates
  auto bad = c6;
  bad.pieces.pop_back();
  CHECK_FALSE(revalidate(bad, cp));
  bad = g6;
  bad.pieces[0].length += 1;
  CHECK_FALSE(revalidate(bad, idx));
}

TEST_CASE("vacuous passes") {
  Alphabet abcd({"a", "b", "c", "d"});
  auto     p = RunPresentation{abcd, {parse_run_word("a^7 b", abcd), parse_run_word("c^7 d", abcd)}};
  for (std::uint64_t n : {2u, 6u, 100u}) {
    auto r = check_c_classical(p, n);
    CHECK(r.pass);
    CHECK_FALSE(r.min_pieces);  // neither relator decomposes: b and d lie on no piece
  }
  auto cyc = cycle_graph(parse_word("a b", ab()), ab());
  for (std::uint64_t n : {1u, 2u, 50u}) {
    CHECK(check_gr(cyc, n, true).pass);
    CHECK(check_gr(cyc, n, false).pass);
  }
  CHECK(check_grprime(cyc, Rational(1, 100), true).pass);
  CHECK_THROWS_AS(check_c_classical(RunPresentation{ab(), {RunWord{}}}, 6), Error);
}

TEST_CASE("differences hexagon") {
  auto       g = parse_graph(fixture::read_text("data/differences.g"));
  PieceIndex idx(g);
  CHECK(validate_reduced(g).reduced);
  for (Dart d = 0; d < g.num_darts(); ++d) {
    CHECK(idx.max_piece(d, true) <= 1);  // every essential piece has length <= 1
  }
  auto r6 = check_gr(idx, 6, true);
  CHECK(r6.pass);
  CHECK(r6.min_pieces == 6u);
  CHECK(r6.scope.find("simple-cycle scope") != std::string::npos);
  auto r7 = check_gr(idx, 7, true);
  CHECK_FALSE(r7.pass);
  CHECK(revalidate(r7, idx));
  // a single edge piece already reaches |γ|/6
  auto rp = check_grprime(idx, Rational(1, 6), true);
  CHECK_FALSE(rp.pass);
  CHECK(rp.pieces.size() == 1);
  CHECK(rp.pieces[0].length == 1);
  CHECK(revalidate(rp, idx));
  CHECK(check_grprime(idx, Rational(1, 5), true).pass);
}

TEST_CASE("graph checks agree with brute force on random graphs") {
  std::mt19937_64 rng(21);
  int             cycles_seen = 0;
  for (int t = 0; t < 60; ++t) {
    auto g = oracle::random_reduced_graph(rng, 2 + rng() % 4, 2 + rng() % 6, 2);
    PieceIndex          idx(g);
    oracle::PieceOracle brute(g);
    for (bool ess : {true, false}) {
      std::optional<std::uint64_t>                    min_pieces;
      std::optional<std::pair<std::uint64_t, std::uint64_t>> longest;
      bool                                            small = true;
      for (auto const& c : simple_cycles(g)) {
        auto L = c.darts.size();
        if (L > 6) {
          small = false;
          break;
        }
        ++cycles_seen;
        auto m = oracle::dp_min_cover(L, true, [&](std::size_t i, std::size_t len) {
          return brute.is_piece(cyclic_walk(g, c, i, len), ess);
        });
        if (m != UINT64_MAX && (!min_pieces || m < *min_pieces)) {
          min_pieces = m;
        }
        for (std::size_t i = 0; i < L; ++i) {
          std::uint64_t e = 0;
          while (e < L && brute.is_piece(cyclic_walk(g, c, i, e + 1), ess)) {
            ++e;
          }
          if (e > 0 && (!longest || e * longest->second > longest->first * L)) {
            longest = std::pair<std::uint64_t, std::uint64_t>{e, L};
          }
        }
      }
      if (!small) {
        continue;
      }
      auto gr = check_gr(idx, 4, ess);
      CHECK(gr.min_pieces == min_pieces);
      CHECK(gr.pass == (!min_pieces || *min_pieces >= 4));
      auto gp = check_grprime(idx, Rational(1, 3), ess);
      if (longest) {
        REQUIRE(gp.longest_piece);
        CHECK(gp.longest_piece->first * longest->second
              == longest->first * gp.longest_piece->second);
      } else {
        CHECK_FALSE(gp.longest_piece);
      }
      if (!gr.pass) {
        CHECK(revalidate(gr, idx));
      }
      if (!gp.pass) {
        CHECK(revalidate(gp, idx));
      }
    }
  }
  CHECK(cycles_seen > 50);
}

TEST_CASE("Gr'(1/(n-1)) implies Gr(n)") {
  std::mt19937_64 rng(22);
  int             both = 0;
  for (int t = 0; t < 150; ++t) {
    LabelledGraph g;
    if (t % 2 == 0) {
      g = oracle::random_reduced_graph(rng, 3 + rng() % 6, 3 + rng() % 8, 3);
    } else {
      std::vector<Word> ws;
      for (int k = 0; k < 3; ++k) {
        auto x = oracle::random_cyclically_reduced(rng, 4 + rng() % 12, 3);
        if (!is_proper_power(x)) {
          ws.push_back(x);
        }
      }
      g = oracle::disjoint_cycles(ws, Alphabet({"a", "b", "c"}));
      if (!validate_reduced(g).reduced) {
        continue;
      }
    }
    PieceIndex idx(g);
    for (std::uint64_t n = 3; n <= 8; ++n) {
      for (bool ess : {true, false}) {
        auto prime = check_grprime(idx, Rational(1, static_cast<std::int64_t>(n - 1)), ess);
        if (prime.pass) {
          ++both;
          CHECK(check_gr(idx, n, ess).pass);
        }
      }
    }
  }
  CHECK(both > 20);
}

TEST_CASE("verdicts are invariant under relabelling and isomorphism") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::random_reduced_graph(rng, 3 + rng() % 5, 3 + rng() % 8, 3);
    std::vector<std::uint32_t> vperm(g.num_vertices()), lperm(3);
    std::iota(vperm.begin(), vperm.end(), 0);
    std::iota(lperm.begin(), lperm.end(), 0);
    std::shuffle(vperm.begin(), vperm.end(), rng);
    std::shuffle(lperm.begin(), lperm.end(), rng);
    LabelledGraph h(Alphabet({"x", "y", "z"}));
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      h.add_vertex();
    }
    std::vector<std::uint32_t> eorder(g.num_edges());
    std::iota(eorder.begin(), eorder.end(), 0);
    std::shuffle(eorder.begin(), eorder.end(), rng);
    for (auto e : eorder) {
      auto const& x = g.edge(e);
      h.add_edge(vperm[x.source], vperm[x.target], lperm[x.label]);
    }
    PieceIndex gi(g), hi(h);
    for (std::uint64_t n : {3u, 4u, 6u}) {
      auto a = check_gr(gi, n, true), b = check_gr(hi, n, true);
      CHECK(a.pass == b.pass);
      CHECK(a.min_pieces == b.min_pieces);
      CHECK(a.cycles_checked == b.cycles_checked);
    }
    for (auto lam : {Rational(1, 6), Rational(1, 3)}) {
      auto a = check_grprime(gi, lam, true), b = check_grprime(hi, lam, true);
      CHECK(a.pass == b.pass);
      CHECK(a.longest_piece == b.longest_piece);
    }
  }
}

TEST_CASE("classical checks agree with the brute-force oracle") {
  std::mt19937_64 rng(24);
  auto            al = Alphabet({"a", "b", "c"});
  for (int t = 0; t < 120; ++t) {
    std::vector<Word> classes;
    std::set<Word>    reps;
    int               k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      auto x = oracle::random_cyclically_reduced(rng, 2 + rng() % 9, t % 2 ? 2 : 3);
      if (reps.insert(class_representative(x)).second) {
        classes.push_back(x);
      }
    }
    RunPresentation p{al, {}};
    for (auto const& x : classes) {
      p.relators.emplace_back(x);
    }
    oracle::ClassicalOracle brute(classes);
    auto                    cn = check_c_classical(p, 6);
    std::optional<std::uint64_t> expect;
    std::uint64_t                best_len = 0, best_cyc = 1;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto m = brute.min_pieces(c);
      if (m != UINT64_MAX && (!expect || m < *expect)) {
        expect = m;
      }
      auto lp = brute.longest_piece(c);
      if (lp * best_cyc > best_len * classes[c].size()) {
        best_len = lp;
        best_cyc = classes[c].size();
      }
    }
    CHECK(cn.min_pieces == expect);
    if (!cn.pass) {
      CHECK(revalidate(cn, classical_pieces(p)));
    }
    auto cq = check_cprime_classical(p, Rational(1, 6));
    if (best_len == 0) {
      CHECK_FALSE(cq.longest_piece);
    } else {
      REQUIRE(cq.longest_piece);
      CHECK(cq.longest_piece->first * best_cyc == best_len * cq.longest_piece->second);
    }
    CHECK(cq.pass == (6 * best_len < best_cyc));
    if (!cq.pass) {
      CHECK(revalidate(cq, classical_pieces(p)));
    }
  }
}

TEST_CASE("C'(1/6) on (ab)^30 a b^2 by direct measurement") {
  auto al = ab();
  Word r;
  for (int i = 0; i < 30; ++i) {
    r.push_back({0, false});
    r.push_back({1, false});
  }
  r.push_back({0, false});
  r.push_back({1, false});
  r.push_back({1, false});
  oracle::ClassicalOracle brute({r});
  auto                    longest = brute.longest_piece(0);
  auto rep = check_cprime_classical(RunPresentation{al, {RunWord(r)}}, Rational(1, 6));
  REQUIRE(rep.longest_piece);
  CHECK(rep.longest_piece->first == longest);
  CHECK(rep.longest_piece->second == 63);
  CHECK(rep.pass == (6 * longest < 63));
  CHECK_FALSE(rep.pass);
}

TEST_CASE("distorted family: C(p) with at most one a per piece") {
  for (std::uint64_t p = 7; p <= 12; ++p) {
    for (std::uint64_t N = 1; N <= 5; ++N) {
      auto fam = gen_distorted_family(p, N);
      auto cp  = classical_pieces(fam);
      auto rep = check_c_classical(cp, fam.alphabet, p);
      rep.truncation = N;
      CHECK(rep.pass);
      REQUIRE(rep.min_pieces);
      CHECK(*rep.min_pieces >= p + 1);
      for (std::size_t c = 0; c < cp.num_classes(); ++c) {
        for (auto const& mp : cp.maximal_pieces(c, true)) {
          REQUIRE(mp.length != kUnbounded);
          auto w = mp.orientation == 0 ? cp.class_word(c) : cp.class_word(c).inverse();
          CHECK(count_gen(w, mp.offset, mp.length, 0) <= 1);
        }
      }
    }
  }
}

TEST_CASE("distorted family agrees with the explicit Γ_R") {
  auto fam = gen_distorted_family(7, 2);
  auto ex  = expand(fam);
  auto gr  = gamma_R(symmetrized_closure(ex.relators), ex.alphabet);
  PieceIndex idx(gr.graph);
  auto       via_graph = check_gr(idx, 7, true);
  auto       via_runs  = check_c_classical(fam, 7);
  CHECK(via_graph.pass == via_runs.pass);
  CHECK(via_graph.min_pieces == via_runs.min_pieces);
  auto pg = check_grprime(idx, Rational(1, 6), true);
  auto pr = check_cprime_classical(fam, Rational(1, 6));
  CHECK(pg.pass == pr.pass);
  CHECK(pg.longest_piece == pr.longest_piece);
}

TEST_CASE("distorted family fails C'(1/6) at N = 8 with a b-block witness") {
  auto fam = gen_distorted_family(7, 8);
  auto cp  = classical_pieces(fam);
  auto rep = check_cprime_classical(fam, Rational(1, 6), 8);
  CHECK_FALSE(rep.pass);
  CHECK(rep.truncation == 8u);
  CHECK(revalidate(rep, cp));

  auto all = cprime_violations(cp, fam.alphabet, Rational(1, 6));
  std::vector<ConditionReport> blocks;
  for (auto const& v : all) {
    CHECK(revalidate(v, cp));
    if (v.piece_labels[0].find('a') == std::string::npos) {
      blocks.push_back(v);
    }
  }
  REQUIRE_FALSE(blocks.empty());
  // b^255 inside the block b^256 of r_8, against |r_8| = 8 + 2*8*49 + 49 + 256
  CHECK(blocks[0].pieces[0].length == 255);
  CHECK(blocks[0].cycle_length == 1097);
  CHECK(blocks[0].piece_labels[0] == "b^255");
}

TEST_CASE("reports serialise") {
  auto al  = ab();
  auto rep = check_c_classical(RunPresentation{al, {parse_run_word("a b A B", al)}}, 6);
  auto txt = report_text(rep);
  CHECK(txt.find("verdict: fail") != std::string::npos);
  CHECK(txt.find("witness") != std::string::npos);
  auto js = nlohmann::json::parse(report_json(rep));
  CHECK(js["verdict"] == "fail");
  CHECK(js["witness"]["pieces"].size() == 4);
  CHECK(report_json(rep) == report_json(check_c_classical(
                                RunPresentation{al, {parse_run_word("a b A B", al)}}, 6)));
}

TEST_CASE("exhaustive mode widens the scope") {
  auto g = parse_graph(fixture::read_text("data/differences.g"));
  CheckOptions opts;
  opts.exhaustive_max_len = 12;
  auto r = check_gr(g, 6, true, opts);
  CHECK(r.scope.find("closed reduced paths up to length 12") != std::string::npos);
  CHECK(r.cycles_checked > check_gr(g, 6, true).cycles_checked);
  CHECK(r.pass);
}
