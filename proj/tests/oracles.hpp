#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the data types, and favour obviousness over speed.

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "sctk/graph.hpp"
#include "sctk/words.hpp"

namespace oracle {

  using namespace sctk;

  inline Word random_word(std::mt19937_64& rng, std::size_t len, std::uint32_t gens) {
    Word w;
    while (w.size() < len) {
      Letter l{static_cast<std::uint32_t>(rng() % gens), rng() % 2 == 1};
      w.push_back(l);
    }
    return w;
  }

  inline Word random_cyclically_reduced(std::mt19937_64& rng, std::size_t len,
                                        std::uint32_t gens) {
    while (true) {
      Word w;
      while (w.size() < len) {
        Letter l{static_cast<std::uint32_t>(rng() % gens), rng() % 2 == 1};
        if (!w.empty() && w.back() == l.inverse()) {
          continue;
        }
        w.push_back(l);
      }
      if (len <= 1 || w.front() != w.back().inverse()) {
        return w;
      }
    }
  }

  // Every rotation of w and of its inverse.
  inline std::set<Word> rotations_and_inverses(Word const& w) {
    std::set<Word> out;
    Word           inv;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      inv.push_back(it->inverse());
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
      Word a(w.begin() + k, w.end());
      a.insert(a.end(), w.begin(), w.begin() + k);
      out.insert(a);
      Word b(inv.begin() + k, inv.end());
      b.insert(b.end(), inv.begin(), inv.begin() + k);
      out.insert(b);
    }
    return out;
  }

  // Smallest period p dividing |w| with w = u^(|w|/p).
  inline std::size_t smallest_period(Word const& w) {
    for (std::size_t p = 1; p <= w.size(); ++p) {
      if (w.size() % p != 0) {
        continue;
      }
      bool ok = true;
      for (std::size_t i = p; i < w.size() && ok; ++i) {
        ok = w[i] == w[i - p];
      }
      if (ok) {
        return p;
      }
    }
    return w.size();
  }

  // Random reduced labelled graph: edges are rejected when they would give
  // a vertex two darts with the same signed label.
  inline LabelledGraph random_reduced_graph(std::mt19937_64& rng,
                                            std::uint32_t    vertices,
                                            std::uint32_t    edges,
                                            std::uint32_t    gens) {
    Alphabet al;
    for (std::uint32_t i = 0; i < gens; ++i) {
      al.add(std::string(1, static_cast<char>('a' + i)));
    }
    LabelledGraph g(al);
    for (std::uint32_t v = 0; v < vertices; ++v) {
      g.add_vertex();
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> out_used, in_used;
    for (std::uint32_t tries = 0; g.num_edges() < edges && tries < 50 * edges;
         ++tries) {
      auto s = static_cast<std::uint32_t>(rng() % vertices);
      auto t = static_cast<std::uint32_t>(rng() % vertices);
      auto l = static_cast<std::uint32_t>(rng() % gens);
      if (out_used.count({s, l}) || in_used.count({t, l})) {
        continue;
      }
      out_used.insert({s, l});
      in_used.insert({t, l});
      g.add_edge(s, t, l);
    }
    return g;
  }

  // All vertex permutations that are label-preserving automorphisms, each
  // paired with the number of ways to permute parallel edges.
  inline std::vector<std::vector<std::uint32_t>>
  automorphism_vertex_maps(LabelledGraph const& g) {
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, int> mult;
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& x = g.edge(e);
      ++mult[{x.source, x.target, x.label}];
    }
    std::vector<std::uint32_t> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::uint32_t>> out;
    do {
      bool ok = true;
      for (auto const& [k, m] : mult) {
        auto [s, t, l] = k;
        auto it        = mult.find({perm[s], perm[t], l});
        if (it == mult.end() || it->second != m) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.push_back(perm);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  inline std::uint64_t automorphism_count(LabelledGraph const& g) {
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, int> mult;
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& x = g.edge(e);
      ++mult[{x.source, x.target, x.label}];
    }
    std::uint64_t edge_factor = 1;
    for (auto const& [k, m] : mult) {
      for (int i = 2; i <= m; ++i) {
        edge_factor *= static_cast<std::uint64_t>(i);
      }
    }
    return automorphism_vertex_maps(g).size() * edge_factor;
  }

  // Simple cycles as edge sets: connected subsets where every touched vertex
  // has degree two (a loop counts twice).
  inline std::set<std::set<std::uint32_t>> simple_cycle_edge_sets(LabelledGraph const& g) {
    std::set<std::set<std::uint32_t>> out;
    auto const m = g.num_edges();
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
      std::map<std::uint32_t, int> deg;
      std::set<std::uint32_t>      es;
      for (std::uint32_t e = 0; e < m; ++e) {
        if (mask >> e & 1) {
          es.insert(e);
          ++deg[g.edge(e).source];
          ++deg[g.edge(e).target];
        }
      }
      bool ok = std::all_of(deg.begin(), deg.end(),
                            [](auto const& kv) { return kv.second == 2; });
      if (!ok) {
        continue;
      }
      // connectivity over the chosen edges
      std::set<std::uint32_t> seen{deg.begin()->first};
      bool                    grew = true;
      while (grew) {
        grew = false;
        for (auto e : es) {
          auto s = g.edge(e).source, t = g.edge(e).target;
          if (seen.count(s) != seen.count(t)) {
            seen.insert(s);
            seen.insert(t);
            grew = true;
          }
        }
      }
      if (seen.size() == deg.size()) {
        out.insert(es);
      }
    }
    return out;
  }

  // A walk as its vertex sequence and dart sequence.
  struct Walk {
    std::vector<std::uint32_t> vertices;
    std::vector<Dart>          darts;
  };

  // Every non-backtracking walk with exactly len steps.
  inline std::vector<Walk> reduced_walks(LabelledGraph const& g, std::size_t len) {
    std::vector<Walk> out;
    std::vector<Walk> frontier;
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      frontier.push_back({{v}, {}});
    }
    for (std::size_t k = 0; k < len; ++k) {
      std::vector<Walk> next;
      for (auto const& w : frontier) {
        for (Dart d : g.darts_at(w.vertices.back())) {
          if (!w.darts.empty() && d == dart_reverse(w.darts.back())) {
            continue;
          }
          auto x = w;
          x.darts.push_back(d);
          x.vertices.push_back(g.target(d));
          next.push_back(std::move(x));
        }
      }
      frontier = std::move(next);
    }
    return frontier;
  }

  inline Word walk_label(LabelledGraph const& g, Walk const& w) {
    Word out;
    for (Dart d : w.darts) {
      out.push_back(g.label(d));
    }
    return out;
  }

  // Double-occurrence piece test over an explicit list of same-length walks.
  // Essential pieces need a second walk that no automorphism carries onto
  // the first one, vertex by vertex.
  struct PieceOracle {
    LabelledGraph const&                    g;
    std::vector<std::vector<std::uint32_t>> auts;

    explicit PieceOracle(LabelledGraph const& graph)
        : g(graph), auts(automorphism_vertex_maps(graph)) {}

    bool related(Walk const& a, Walk const& b) const {
      for (auto const& psi : auts) {
        bool ok = true;
        for (std::size_t i = 0; i < a.vertices.size() && ok; ++i) {
          ok = psi[a.vertices[i]] == b.vertices[i];
        }
        for (std::size_t i = 0; i < a.darts.size() && ok; ++i) {
          // same label and endpoints determine the image edge in a reduced graph
          ok = g.label(a.darts[i]) == g.label(b.darts[i]);
        }
        if (ok) {
          return true;
        }
      }
      return false;
    }

    bool is_piece(Walk const& p, bool essential) const {
      auto const& group = walks_by_label(p.darts.size())[walk_label(g, p)];
      for (auto const& q : group) {
        if (q.vertices == p.vertices && q.darts == p.darts) {
          continue;
        }
        if (!essential || !related(p, q)) {
          return true;
        }
      }
      return false;
    }

    // All walks of a length, backtracking allowed, grouped by label.
    std::map<Word, std::vector<Walk>>& walks_by_label(std::size_t len) const {
      auto it = cache.find(len);
      if (it == cache.end()) {
        std::vector<Walk> frontier;
        for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
          frontier.push_back({{v}, {}});
        }
        for (std::size_t k = 0; k < len; ++k) {
          std::vector<Walk> next;
          for (auto const& w : frontier) {
            for (Dart d : g.darts_at(w.vertices.back())) {
              auto x = w;
              x.darts.push_back(d);
              x.vertices.push_back(g.target(d));
              next.push_back(std::move(x));
            }
          }
          frontier = std::move(next);
        }
        std::map<Word, std::vector<Walk>> grouped;
        for (auto& w : frontier) {
          grouped[walk_label(g, w)].push_back(std::move(w));
        }
        it = cache.emplace(len, std::move(grouped)).first;
      }
      return it->second;
    }

    mutable std::map<std::size_t, std::map<Word, std::vector<Walk>>> cache;
  };

  // Fewest intervals covering [0, n) when `ok(i, len)` says whether the
  // window of length len at i is allowed; cyclic windows when closed.
  template <typename F>
  std::uint64_t dp_min_cover(std::size_t n, bool closed, F ok) {
    std::uint64_t const inf  = UINT64_MAX;
    std::uint64_t       best = inf;
    for (std::size_t r = 0; r < (closed ? n : 1); ++r) {
      std::vector<std::uint64_t> dp(n + 1, inf);
      dp[0] = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (dp[i] == inf) {
          continue;
        }
        for (std::size_t len = 1; i + len <= n; ++len) {
          if (ok((r + i) % n, len)) {
            dp[i + len] = std::min(dp[i + len], dp[i] + 1);
          }
        }
      }
      best = std::min(best, dp[n]);
    }
    return best;
  }

  // Disjoint union of cycle graphs, one per word.
  inline LabelledGraph disjoint_cycles(std::vector<Word> const& ws, Alphabet const& al) {
    LabelledGraph g(al);
    for (auto const& x : ws) {
      auto first = static_cast<std::uint32_t>(g.num_vertices());
      auto n     = static_cast<std::uint32_t>(x.size());
      for (std::uint32_t i = 0; i < n; ++i) {
        g.add_vertex();
      }
      for (std::uint32_t i = 0; i < n; ++i) {
        auto a = first + i, b = first + (i + 1) % n;
        if (x[i].inv) {
          g.add_edge(b, a, x[i].gen);
        } else {
          g.add_edge(a, b, x[i].gen);
        }
      }
    }
    return g;
  }

  // Classical pieces straight from the definition: a subword read at two
  // positions (class, direction, offset) of the cyclic relators that are not
  // the same position up to a rotation by the relator's period.
  struct ClassicalOracle {
    std::vector<Word>        words[2];
    std::vector<std::size_t> periods;

    explicit ClassicalOracle(std::vector<Word> const& classes) {
      for (auto const& w : classes) {
        words[0].push_back(w);
        words[1].push_back(inverse(w));
        periods.push_back(smallest_period(w));
      }
    }

    Word read(std::size_t c, int o, std::size_t i, std::size_t len) const {
      auto const& w = words[o][c];
      Word        out;
      for (std::size_t k = 0; k < len; ++k) {
        out.push_back(w[(i + k) % w.size()]);
      }
      return out;
    }

    bool is_piece(std::size_t c, std::size_t i, std::size_t len) const {
      auto u = read(c, 0, i, len);
      for (std::size_t c2 = 0; c2 < words[0].size(); ++c2) {
        auto n = words[0][c2].size();
        for (int o = 0; o < 2; ++o) {
          for (std::size_t j = 0; j < n; ++j) {
            bool same = c2 == c && o == 0 && (j + n - i % n) % periods[c] == 0;
            if (!same && read(c2, o, j, len) == u) {
              return true;
            }
          }
        }
      }
      return false;
    }

    // Longest piece on class c, capped at its length.
    std::size_t longest_piece(std::size_t c) const {
      std::size_t best = 0, n = words[0][c].size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t len = best + 1; len <= n && is_piece(c, i, len); ++len) {
          best = len;
        }
      }
      return best;
    }

    std::uint64_t min_pieces(std::size_t c) const {
      return dp_min_cover(words[0][c].size(), true,
                          [&](std::size_t i, std::size_t len) { return is_piece(c, i, len); });
    }
  };

  // Todd-Coxeter enumeration of the cosets of the trivial subgroup. Letters
  // are column indices 2*gen + inv. The table is nullopt when more than
  // max_cosets cosets are defined.
  struct CosetTable {
    std::size_t                   ngens = 0;
    std::vector<std::vector<int>> rows;  // live cosets only, renumbered

    std::size_t order() const {
      return rows.size();
    }
    int trace(std::vector<int> const& w, int from = 0) const {
      for (int x : w) {
        from = rows[from][x];
      }
      return from;
    }
  };

  inline std::optional<CosetTable> enumerate_cosets(std::size_t ngens,
                                                    std::vector<std::vector<int>> const& rels,
                                                    std::size_t max_cosets) {
    std::size_t const             cols = 2 * ngens;
    std::vector<std::vector<int>> T{std::vector<int>(cols, -1)};
    std::vector<int>              p{0};
    auto rep = [&](int c) {
      int r = c;
      while (p[r] != r) {
        r = p[r];
      }
      while (p[c] != r) {
        int n = p[c];
        p[c]  = r;
        c     = n;
      }
      return r;
    };
    std::vector<int> q;
    auto merge = [&](int k, int l) {
      k = rep(k);
      l = rep(l);
      if (k == l) {
        return;
      }
      if (k > l) {
        std::swap(k, l);
      }
      p[l] = k;
      q.push_back(l);
    };
    auto coincidence = [&](int a, int b) {
      q.clear();
      merge(a, b);
      for (std::size_t i = 0; i < q.size(); ++i) {
        int g = q[i];
        for (std::size_t x = 0; x < cols; ++x) {
          int d = T[g][x];
          if (d < 0) {
            continue;
          }
          T[d][x ^ 1] = -1;
          int mu = rep(g), nu = rep(d);
          if (T[mu][x] >= 0) {
            merge(nu, T[mu][x]);
          } else if (T[nu][x ^ 1] >= 0) {
            merge(mu, T[nu][x ^ 1]);
          } else {
            T[mu][x]     = nu;
            T[nu][x ^ 1] = mu;
          }
        }
      }
    };
    bool overflow = false;
    auto define   = [&](int c, std::size_t x) {
      if (T.size() >= max_cosets) {
        overflow = true;
        return;
      }
      int n = static_cast<int>(T.size());
      T.emplace_back(cols, -1);
      p.push_back(n);
      T[c][x]     = n;
      T[n][x ^ 1] = c;
    };
    auto scan_and_fill = [&](int a, std::vector<int> const& w) {
      int f = a, b = a;
      int i = 0, j = static_cast<int>(w.size()) - 1;
      while (!overflow) {
        while (i <= j && T[f][w[i]] >= 0) {
          f = T[f][w[i++]];
        }
        if (i > j) {
          if (f != b) {
            coincidence(f, b);
          }
          return;
        }
        while (j >= i && T[b][w[j] ^ 1] >= 0) {
          b = T[b][w[j--] ^ 1];
        }
        if (j < i) {
          coincidence(f, b);
          return;
        }
        if (i == j) {
          T[f][w[i]]     = b;
          T[b][w[i] ^ 1] = f;
          return;
        }
        define(f, static_cast<std::size_t>(w[i]));
      }
    };
    for (std::size_t a = 0; a < T.size() && !overflow; ++a) {
      int ai = static_cast<int>(a);
      for (auto const& r : rels) {
        if (p[ai] != ai) {
          break;
        }
        scan_and_fill(ai, r);
      }
      for (std::size_t x = 0; x < cols && p[ai] == ai && !overflow; ++x) {
        if (T[ai][x] < 0) {
          define(ai, x);
        }
      }
    }
    if (overflow) {
      return std::nullopt;
    }
    CosetTable out;
    out.ngens = ngens;
    std::vector<int> id(T.size(), -1);
    for (std::size_t c = 0; c < T.size(); ++c) {
      if (p[c] == static_cast<int>(c)) {
        id[c] = static_cast<int>(out.rows.size());
        out.rows.emplace_back();
      }
    }
    for (std::size_t c = 0; c < T.size(); ++c) {
      if (id[c] >= 0) {
        for (std::size_t x = 0; x < cols; ++x) {
          out.rows[id[c]].push_back(id[rep(T[c][x])]);
        }
      }
    }
    return out;
  }

  // Which vertices of a graph with Cayley sheets glued along its edges are
  // joined by a walk whose label is trivial in the free product. Computed
  // as a least fixpoint: Q[f][g](x, y) holds when some walk x -> y has a
  // label equal to g in factor f. Such walks are single edges, products of
  // two of them, or extended on either side by a trivially labelled walk.
  struct FactorTable {
    std::vector<std::vector<int>> mul;
    int                           identity = 0;
    int inverse(int x) const {
      for (std::size_t y = 0; y < mul.size(); ++y) {
        if (mul[x][y] == identity) {
          return static_cast<int>(y);
        }
      }
      return -1;
    }
  };

  struct LabelledStep {
    std::size_t from, to, factor;
    int         element;
  };

  inline std::vector<std::vector<bool>> trivial_walk_relation(
      std::size_t n, std::vector<FactorTable> const& fs,
      std::vector<LabelledStep> const& edges) {
    constexpr std::size_t Max = 256;
    using Row = std::bitset<Max>;
    using Rel = std::vector<Row>;
    if (n > Max) {
      throw std::runtime_error("trivial_walk_relation: too many vertices");
    }
    auto compose = [&](Rel const& a, Rel const& b) {
      Rel c(n);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (a[x][y]) {
            c[x] |= b[y];
          }
        }
      }
      return c;
    };
    auto absorb = [&](Rel& into, Rel const& from) {
      bool changed = false;
      for (std::size_t x = 0; x < n; ++x) {
        auto before = into[x];
        into[x] |= from[x];
        changed |= into[x] != before;
      }
      return changed;
    };
    Rel R(n);
    for (std::size_t x = 0; x < n; ++x) {
      R[x][x] = true;
    }
    std::vector<std::vector<Rel>> Q(fs.size());
    for (std::size_t f = 0; f < fs.size(); ++f) {
      Q[f].assign(fs[f].mul.size(), Rel(n));
    }
    for (auto const& e : edges) {
      Q[e.factor][e.element][e.from][e.to] = true;
      Q[e.factor][fs[e.factor].inverse(e.element)][e.to][e.from] = true;
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t f = 0; f < fs.size(); ++f) {
        changed |= absorb(R, Q[f][fs[f].identity]);
      }
      changed |= absorb(R, compose(R, R));
      for (std::size_t f = 0; f < fs.size(); ++f) {
        auto& Qf = Q[f];
        changed |= absorb(Qf[fs[f].identity], R);
        for (std::size_t g = 0; g < Qf.size(); ++g) {
          changed |= absorb(Qf[g], compose(R, Qf[g]));
          changed |= absorb(Qf[g], compose(Qf[g], R));
          for (std::size_t h = 0; h < Qf.size(); ++h) {
            changed |= absorb(Qf[fs[f].mul[g][h]], compose(Qf[g], Qf[h]));
          }
        }
      }
    }
    std::vector<std::vector<bool>> out(n, std::vector<bool>(n));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        out[x][y] = R[x][y];
      }
    }
    return out;
  }

}  // namespace oracle
