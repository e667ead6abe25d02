#include <optional>
#include <random>
#include <set>

#include "doctest.h"
#include "sctk/completion.hpp"
#include "sctk/distortion.hpp"
#include "sctk/errors.hpp"
#include "sctk/witness.hpp"

using namespace sctk;

namespace {

  // 16 relators prod_{j<12} a b^{f(k,j)} with every cyclically consecutive
  // pair (f_j, f_{j+1}) used once overall. A piece then holds at most two
  // letters a, so each relator needs at least six pieces.
  RunPresentation pair_family(std::size_t count) {
    std::mt19937                             rng(7);
    std::set<std::pair<unsigned, unsigned>>  used;
    RunPresentation                          p;
    p.alphabet = Alphabet({"a", "b"});
    while (p.relators.size() < count) {
      std::vector<unsigned> f(12);
      for (auto& v : f) {
        v = 1 + rng() % 24;
      }
      std::set<std::pair<unsigned, unsigned>> mine;
      bool                                    ok = true;
      for (std::size_t j = 0; j < f.size() && ok; ++j) {
        auto pr = std::make_pair(f[j], f[(j + 1) % f.size()]);
        ok      = !used.count(pr) && mine.insert(pr).second;
      }
      if (!ok) {
        continue;
      }
      used.insert(mine.begin(), mine.end());
      RunWord w;
      for (auto v : f) {
        w.push_back(Letter{0, false});
        w.push_back(Letter{1, false}, v);
      }
      p.relators.push_back(w);
    }
    return p;
  }

  // Brute force on expanded words: the longest piece starting at each
  // position of each class word, against every other position of every
  // relator and inverse.
  struct BrutePieces {
    std::vector<Word>                       words;
    std::vector<std::vector<std::size_t>>   longest;

    explicit BrutePieces(ClassicalPieces const& cp) {
      for (std::size_t c = 0; c < cp.num_classes(); ++c) {
        words.push_back(cp.class_word(c).expand());
      }
      std::vector<Word> all = words;
      for (auto const& w : words) {
        all.push_back(inverse(w));
      }
      for (std::size_t c = 0; c < words.size(); ++c) {
        auto const& w = words[c];
        longest.emplace_back(w.size(), 0);
        for (std::size_t i = 0; i < w.size(); ++i) {
          for (std::size_t r = 0; r < all.size(); ++r) {
            for (std::size_t j = 0; j < all[r].size(); ++j) {
              if (r == c && j == i) {
                continue;
              }
              std::size_t l = 0;
              while (l < w.size() && l < all[r].size()
                     && w[(i + l) % w.size()] == all[r][(j + l) % all[r].size()]) {
                ++l;
              }
              longest[c][i] = std::max(longest[c][i], l);
            }
          }
        }
      }
    }

    // pieces needed along the forward arc from x to y (greedy is optimal
    // since subwords of pieces are pieces); SIZE_MAX if some letter is on
    // no piece
    std::size_t forward(std::size_t c, std::size_t x, std::size_t y) const {
      auto const  L = words[c].size();
      std::size_t d = (y + L - x) % L, at = 0, n = 0;
      while (at < d) {
        auto step = longest[c][(x + at) % L];
        if (step == 0) {
          return SIZE_MAX;
        }
        at += step;
        ++n;
      }
      return n;
    }

    // the backward arc from x to y is the forward arc from y to x reversed,
    // and pieces are closed under inversion
    std::size_t distance(std::size_t c, std::size_t x, std::size_t y) const {
      return std::min(forward(c, x, y), forward(c, y, x));
    }
  };

  // Cycles over Z = <a>, Z = <b> alternating blocks a^{1+i}, b^{1+j},
  // i, j < 18. Each pair of matchings M_d, M_{d+2} of K_{18,18}, where M_d
  // joins i to i + d, splits into two cycles of nine a-blocks and nine
  // b-blocks, so every adjacent (a, b) length pair occurs once overall.
  // Truncated sheets allow one letter past any junction, so a piece can
  // still hold a whole block, but never two adjacent whole blocks: it spans
  // at most three of the eighteen junctions and a cycle needs six pieces.
  LabelledGraph alternating_cycles(std::size_t count) {
    constexpr unsigned n = 18;
    LabelledGraph      g(Alphabet({"a", "b"}));
    auto               block = [&](std::uint32_t v, std::uint32_t label, unsigned len,
                     std::optional<std::uint32_t> end) {
      for (unsigned j = 0; j < len; ++j) {
        auto w = (end && j + 1 == len) ? *end : g.add_vertex();
        g.add_edge(v, w, label);
        v = w;
      }
      return v;
    };
    std::size_t made = 0;
    for (unsigned d : {0u, 1u, 4u, 5u, 8u, 9u, 12u, 13u}) {
      for (unsigned start : {0u, 1u}) {
        if (made++ == count) {
          return g;
        }
        auto first = g.add_vertex("c" + std::to_string(made - 1));
        auto v     = first;
        auto i     = start;
        for (unsigned step = 0; step < n / 2; ++step) {
          auto j = (i + d) % n;
          v      = block(v, 0, 1 + i, std::nullopt);
          i      = (j + n - d - 2) % n;  // back along M_{d+2}
          v      = block(v, 1, 1 + j, step + 1 == n / 2 ? std::optional(first) : std::nullopt);
        }
      }
    }
    return g;
  }

  std::vector<FactorSpec> two_lines() {
    return {infinite_cyclic_factor("A", "a", 1), infinite_cyclic_factor("B", "b", 1)};
  }

}  // namespace

TEST_CASE("classical selection on a small C(6) family agrees with brute force") {
  auto p  = pair_family(16);
  auto in = prepare_classical(p);
  REQUIRE(in.pieces.num_classes() == 16);
  REQUIRE(check_c_classical(in.pieces, in.reduced.alphabet, 6).pass);

  auto pkg = select_witnesses_classical(in);
  REQUIRE(pkg.tuples.size() == 16);
  CHECK(verify_package(pkg, in).ok);

  BrutePieces brute(in.pieces);
  std::set<std::uint32_t> classes;
  for (std::size_t k = 0; k < 16; ++k) {
    auto const& t = pkg.tuples[k];
    classes.insert(t.component);
    CHECK(brute.distance(t.component, t.x, t.y) >= 3);
    if (k != 0 && k != 8) {
      auto const& prev = pkg.tuples[k - 1];
      auto const& wy   = brute.words[prev.component];
      auto const& wx   = brute.words[t.component];
      std::set<Letter> sy{wy[prev.y], wy[(prev.y + wy.size() - 1) % wy.size()].inverse()};
      std::set<Letter> sx{wx[t.x], wx[(t.x + wx.size() - 1) % wx.size()].inverse()};
      for (auto l : sx) {
        CHECK(sy.count(l) == 0);
      }
    }
  }
  CHECK(classes.size() == 16);

  // the same input yields the same package
  CHECK(select_witnesses_classical(in).tuples == pkg.tuples);
}

TEST_CASE("classical W-sets: two arcs per block, 256 words each") {
  auto p   = pair_family(16);
  auto in  = prepare_classical(p);
  auto pkg = select_witnesses_classical(in);
  build_w_sets_classical(pkg, in);
  CHECK(pkg.W1.size() == 256);
  CHECK(pkg.W2.size() == 256);
  CHECK(verify_package(pkg, in).ok);

  auto a1 = *pkg.alphabet.find(kAlpha1);
  auto a2 = *pkg.alphabet.find(kAlpha2);
  // rebuild every word from expanded arcs
  std::set<Word> want1, want2;
  for (unsigned mask = 0; mask < 256; ++mask) {
    for (int half = 0; half < 2; ++half) {
      Word w{Letter{half == 0 ? a1 : a2, true}};
      for (unsigned j = 0; j < 8; ++j) {
        auto const& t = pkg.tuples[8 * half + j];
        auto        c = in.pieces.class_word(t.component).expand();
        auto const  L = c.size();
        Word        arc;
        if ((mask >> j) & 1) {
          for (auto q = t.y; q != t.x; q = (q + 1) % L) {
            arc.push_back(c[q]);
          }
          arc = inverse(arc);
        } else {
          for (auto q = t.x; q != t.y; q = (q + 1) % L) {
            arc.push_back(c[q]);
          }
        }
        if (!w.empty() && !arc.empty()) {
          CHECK(w.back() != arc.front().inverse());
        }
        w.insert(w.end(), arc.begin(), arc.end());
      }
      (half == 0 ? want1 : want2).insert(w);
    }
  }
  std::set<Word> got1, got2;
  for (auto const& w : pkg.W1) {
    got1.insert(w.expand());
  }
  for (auto const& w : pkg.W2) {
    got2.insert(w.expand());
  }
  CHECK(got1 == want1);
  CHECK(got2 == want2);

  auto ext = extended_presentation(in.reduced, pkg);
  CHECK(ext.alphabet.size() == in.reduced.alphabet.size() + 2);
  REQUIRE(ext.relators.size() == in.reduced.relators.size() + 512);
  for (std::size_t i = 0; i < in.reduced.relators.size(); ++i) {
    CHECK(ext.relators[i] == in.reduced.relators[i]);
  }
}

TEST_CASE("distorted family p = 7, N = 30") {
  auto p  = gen_distorted_family(7, 30);
  auto in = prepare_classical(p);
  REQUIRE(in.pieces.num_classes() == 30);
  auto pkg = select_witnesses_classical(in);
  REQUIRE(pkg.tuples.size() == 16);
  auto check = verify_package(pkg, in);
  CHECK(check.ok);
  for (auto const& f : check.failures) {
    MESSAGE(f);
  }

  build_w_sets_classical(pkg, in);
  CHECK(pkg.W1.size() == 256);
  CHECK(pkg.W2.size() == 256);
  CHECK(verify_package(pkg, in).ok);
  for (auto const& w : pkg.W1) {
    CHECK(w.runs().front().letter == Letter{*pkg.alphabet.find(kAlpha1), true});
  }

  auto ext = extended_presentation(p, pkg);
  CHECK(ext.alphabet.size() == 4);
  CHECK(ext.relators.size() == 30 + 512);
  CHECK(std::equal(p.relators.begin(), p.relators.end(), ext.relators.begin()));
}

TEST_CASE("classical errors") {
  CHECK_THROWS_WITH_AS(select_witnesses_classical(gen_distorted_family(7, 15)),
                       doctest::Contains("15"), Error);
  try {
    select_witnesses_classical(gen_distorted_family(7, 15));
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::InsufficientRelators);
  }

  // sixteen commutators: enough classes, but C(6) fails
  RunPresentation comm;
  for (int i = 0; i < 16; ++i) {
    auto x = comm.alphabet.add("x" + std::to_string(i));
    auto y = comm.alphabet.add("y" + std::to_string(i));
    RunWord w;
    w.push_back(Letter{x, false});
    w.push_back(Letter{y, false});
    w.push_back(Letter{x, true});
    w.push_back(Letter{y, true});
    comm.relators.push_back(w);
  }
  try {
    select_witnesses_classical(comm);
    FAIL("expected NotSmallCancellation");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::NotSmallCancellation);
  }

  // a tiny node budget runs out
  WitnessOptions tight;
  tight.node_budget = 3;
  try {
    select_witnesses_classical(pair_family(16), tight);
    FAIL("expected Budget");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::Budget);
  }

  // alpha1 already taken
  auto p = pair_family(16);
  p.alphabet = Alphabet({"a", "alpha1"});
  auto in  = prepare_classical(p);
  auto pkg = select_witnesses_classical(in);
  try {
    build_w_sets_classical(pkg, in);
    FAIL("expected SymbolClash");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::SymbolClash);
  }
}

TEST_CASE("Tietze pass drops a relator with a private generator") {
  auto p = pair_family(16);
  auto z = p.alphabet.add("z");
  auto r = p.relators[0];
  r.push_back(Letter{z, false});
  p.relators.push_back(r);
  auto in = prepare_classical(p);
  CHECK(in.pieces.num_classes() == 16);
  CHECK(in.reduced.alphabet.size() == 2);
}

TEST_CASE("piece balls agree with path enumeration") {
  auto g   = alternating_cycles(2);
  auto c   = build_completion(g, two_lines());
  PieceIndex idx(c.graph);
  auto const& h = c.graph;
  // brute force: grow sets of endpoints of piece paths by extending paths
  // one dart at a time while they stay pieces
  auto reach1 = [&](std::uint32_t x) {
    std::set<std::uint32_t>  out{x};
    std::vector<PathSpec>    stack{PathSpec{x, {}}};
    while (!stack.empty()) {
      auto p = stack.back();
      stack.pop_back();
      auto end = path_end(h, p);
      for (Dart d : h.darts_at(end)) {
        if (!p.darts.empty() && d == dart_reverse(p.darts.back())) {
          continue;
        }
        auto q = p;
        q.darts.push_back(d);
        if (q.darts.size() <= h.num_vertices() && idx.is_piece(q, true)) {
          out.insert(h.target(d));
          stack.push_back(q);
        }
      }
    }
    return out;
  };
  for (std::uint32_t x : {0u, 5u, 17u, 40u}) {
    std::set<std::uint32_t> want{x};
    for (auto v : reach1(x)) {
      auto r = reach1(v);
      want.insert(r.begin(), r.end());
    }
    auto ball = piece_ball(idx, x, 2);
    std::set<std::uint32_t> got;
    for (std::uint32_t v = 0; v < ball.size(); ++v) {
      if (ball[v]) {
        got.insert(v);
      }
    }
    CHECK(got == want);
  }
}

TEST_CASE("graphical selection on sixteen alternating cycles") {
  auto c = build_completion(alternating_cycles(16), two_lines());
  REQUIRE(check_gr_star(c, 6, true).pass);
  CHECK(qualifying_components(c).size() == 16);

  auto pkg = select_witnesses_graphical(c);
  REQUIRE(pkg.tuples.size() == 16);
  auto check = verify_package(pkg, c);
  CHECK(check.ok);
  for (auto const& f : check.failures) {
    MESSAGE(f);
  }
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(is_interior(c, static_cast<std::uint32_t>(pkg.tuples[k].y)));
  }

  build_w_sets_graphical(pkg, c);
  // each block is one of the two arcs of the component cycle
  CHECK(pkg.W1.size() == 256);
  CHECK(pkg.W2.size() == 256);
  CHECK(verify_package(pkg, c).ok);
}

TEST_CASE("graphical errors") {
  auto c15 = build_completion(alternating_cycles(15), two_lines());
  try {
    select_witnesses_graphical(c15);
    FAIL("expected InsufficientComponents");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::InsufficientComponents);
  }

  // trees only: no component qualifies
  LabelledGraph trees(Alphabet({"a", "b"}));
  for (int i = 0; i < 20; ++i) {
    auto u = trees.add_vertex(), v = trees.add_vertex(), w = trees.add_vertex();
    trees.add_edge(u, v, 0);
    trees.add_edge(v, w, 1);
  }
  auto ct = build_completion(trees, two_lines());
  CHECK(qualifying_components(ct).empty());
  try {
    select_witnesses_graphical(ct);
    FAIL("expected InsufficientComponents");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::InsufficientComponents);
  }

  // short cycles a b a^-1 b^-1 fail Gr*(6)
  LabelledGraph sq(Alphabet({"a", "b"}));
  auto v0 = sq.add_vertex(), v1 = sq.add_vertex(), v2 = sq.add_vertex(), v3 = sq.add_vertex();
  sq.add_edge(v0, v1, 0);
  sq.add_edge(v1, v2, 1);
  sq.add_edge(v3, v2, 0);
  sq.add_edge(v0, v3, 1);
  try {
    select_witnesses_graphical(build_completion(sq, two_lines()));
    FAIL("expected NotSmallCancellation");
  } catch (Error const& e) {
    CHECK(e.code() == ErrorCode::NotSmallCancellation);
  }
}

TEST_CASE("package serialisation") {
  auto in  = prepare_classical(pair_family(16));
  auto pkg = select_witnesses_classical(in);
  build_w_sets_classical(pkg, in);
  auto text = package_text(pkg);
  CHECK(text.find("mode: classical") != std::string::npos);
  CHECK(text.find("tuple 16:") != std::string::npos);
  CHECK(text.find("|W1| = 256") != std::string::npos);
  auto json = package_json(pkg);
  CHECK(json.find("\"alpha1^-1 ") != std::string::npos);
}
