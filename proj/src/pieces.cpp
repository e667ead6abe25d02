#include "sctk/pieces.hpp"

#include <algorithm>      // for sort, max, min
#include <unordered_map>  // for unordered_map

#include "sctk/errors.hpp"

namespace sctk {

  namespace {

    std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
      return a > kUnbounded - b ? kUnbounded : a + b;
    }

  }  // namespace

  // PieceIndex ----------------------------------------------------------------

  PieceIndex::PieceIndex(LabelledGraph g, std::uint64_t budget)
      : _graph(std::move(g)) {
    auto verdict = validate_reduced(_graph);
    if (!verdict.reduced) {
      fail(ErrorCode::Precondition,
           "graph is not reduced at vertex " + _graph.vertex_name(verdict.vertex));
    }
    _aut = automorphism_group(_graph, budget);
    _by_label.resize(2 * _graph.alphabet().size());
    for (Dart d = 0; d < _graph.num_darts(); ++d) {
      _by_label[_graph.label(d).code()].push_back(d);
    }
  }

  std::uint64_t PieceIndex::extent(PathSpec const& p, std::size_t i,
                                   bool essential, std::uint64_t cap) const {
    std::size_t const n      = p.darts.size();
    bool const        closed = n > 0 && is_closed(_graph, p);
    if (n == 0 || (!closed && i >= n)) {
      return 0;
    }
    bool unbounded_cap = false;
    if (!closed) {
      cap = std::min<std::uint64_t>(cap, n - i);
    } else {
      // a partner that survives this long repeats a (position, vertex) state
      std::uint64_t loop = std::uint64_t(n) * (_graph.num_vertices() + 1);
      if (cap > loop) {
        cap           = loop;
        unbounded_cap = true;
      }
    }
    if (cap == 0) {
      return 0;
    }
    Dart const                 first = p.darts[i % n];
    auto const                 u     = _graph.origin(first);
    std::vector<std::uint32_t> partners;
    for (Dart d : _by_label[_graph.label(first).code()]) {
      auto v = _graph.origin(d);
      if (v == u || (essential && same_orbit(u, v))) {
        continue;
      }
      partners.push_back(_graph.target(d));
    }
    if (partners.empty()) {
      return 0;
    }
    std::uint64_t k = 1;
    std::vector<std::uint32_t> next;
    while (k < cap) {
      Letter l = _graph.label(p.darts[(i + k) % n]);
      next.clear();
      for (auto v : partners) {
        if (auto d = _graph.step(v, l)) {
          next.push_back(_graph.target(*d));
        }
      }
      if (next.empty()) {
        return k;
      }
      partners.swap(next);
      ++k;
    }
    return unbounded_cap ? kUnbounded : k;
  }

  bool PieceIndex::is_piece(PathSpec const& p, bool essential) const {
    if (p.darts.empty()) {
      for (std::uint32_t v = 0; v < _graph.num_vertices(); ++v) {
        if (v != p.start && !(essential && same_orbit(v, p.start))) {
          return true;
        }
      }
      return false;
    }
    return extent(p, 0, essential, p.darts.size()) == p.darts.size();
  }

  std::uint64_t PieceIndex::max_piece(Dart d, bool essential) const {
    if (_max_piece[0].empty() && _graph.num_darts() > 0) {
      build_tables();
    }
    return _max_piece[essential ? 1 : 0][d];
  }

  // Longest walks in the labelled fiber product, one state per pair of
  // equally labelled darts with distinct origins (or distinct orbits).
  void PieceIndex::build_tables() const {
    auto const nd = static_cast<std::uint64_t>(_graph.num_darts());
    for (int ess = 0; ess < 2; ++ess) {
      std::unordered_map<std::uint64_t, std::uint64_t> memo;
      std::unordered_map<std::uint64_t, char>          state;  // 1 open, 2 done
      auto admissible = [&](Dart a, Dart b) {
        auto u = _graph.origin(a), v = _graph.origin(b);
        return u != v && !(ess && same_orbit(u, v));
      };
      // iterative depth-first evaluation
      auto solve = [&](std::uint64_t root) {
        struct Frame {
          std::uint64_t key;
          std::size_t   next_a = 0, next_b = 0;
          std::uint64_t best   = 1;
        };
        std::vector<Frame> stack{{root}};
        state[root] = 1;
        while (!stack.empty()) {
          auto& f  = stack.back();
          Dart  a  = static_cast<Dart>(f.key / nd);
          Dart  b  = static_cast<Dart>(f.key % nd);
          auto  ta = _graph.target(a), tb = _graph.target(b);
          auto const& da = _graph.darts_at(ta);
          auto const& db = _graph.darts_at(tb);
          bool pushed = false;
          while (f.next_a < da.size() && !pushed) {
            Dart ea = da[f.next_a];
            if (_graph.label(ea) == _graph.label(a).inverse()
                || f.next_b >= db.size()) {
              ++f.next_a;
              f.next_b = 0;
              continue;
            }
            Dart eb = db[f.next_b++];
            if (_graph.label(eb) != _graph.label(ea)) {
              continue;
            }
            std::uint64_t key = ea * nd + eb;
            auto          st  = state.find(key);
            if (st == state.end()) {
              state[key] = 1;
              stack.push_back({key});
              pushed = true;
            } else if (st->second == 1) {
              f.best = kUnbounded;
            } else {
              f.best = std::max(f.best, sat_add(memo[key], 1));
            }
          }
          if (pushed) {
            continue;
          }
          auto key = f.key;
          auto val = f.best;
          memo[key]  = val;
          state[key] = 2;
          stack.pop_back();
          if (!stack.empty()) {
            auto& parent = stack.back();
            parent.best  = std::max(parent.best, sat_add(val, 1));
          }
        }
      };
      auto& table = _max_piece[ess];
      table.assign(nd, 0);
      for (Dart a = 0; a < nd; ++a) {
        for (Dart b : _by_label[_graph.label(a).code()]) {
          if (!admissible(a, b)) {
            continue;
          }
          std::uint64_t key = a * nd + b;
          if (state.find(key) == state.end()) {
            solve(key);
          }
          table[a] = std::max(table[a], memo[key]);
        }
      }
    }
  }

  // Decompositions -------------------------------------------------------------

  Decomposition min_piece_decomposition(PathSpec const&   p,
                                        PieceIndex const& idx,
                                        bool              essential) {
    auto const&       g = idx.graph();
    std::size_t const n = p.darts.size();
    Decomposition     best;
    if (n == 0) {
      return best;
    }
    bool const                 closed = is_closed(g, p);
    std::vector<std::uint64_t> ext(n);
    for (std::size_t i = 0; i < n; ++i) {
      ext[i] = idx.extent(p, i, essential, n);
      if (ext[i] == 0) {
        fail(ErrorCode::NotDecomposable,
             "edge e" + std::to_string(dart_edge(p.darts[i])) + " at step "
                 + std::to_string(i) + " lies on no piece");
      }
    }
    std::size_t const rotations = closed ? n : 1;
    best.count                  = kUnbounded;
    for (std::size_t r = 0; r < rotations; ++r) {
      Decomposition cur;
      cur.rotation      = r;
      std::uint64_t pos = 0;
      while (pos < n && cur.count < best.count) {
        auto e = std::min<std::uint64_t>(ext[(r + pos) % n], n - pos);
        cur.segments.push_back({pos, e});
        pos += e;
        ++cur.count;
      }
      if (pos >= n && cur.count < best.count) {
        best = std::move(cur);
      }
    }
    return best;
  }

  std::optional<std::uint64_t> piece_distance(PieceIndex const& idx,
                                              std::uint32_t     x,
                                              std::uint32_t     y,
                                              bool              essential) {
    auto const& g = idx.graph();
    if (x == y) {
      return 0;
    }
    // walk once around the cycle component through x
    auto comp = g.components();
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      if (comp[v] == comp[x] && g.darts_at(v).size() != 2) {
        fail(ErrorCode::Precondition, "vertex " + g.vertex_name(x)
                                          + " does not lie on a cycle component");
      }
    }
    if (comp[y] != comp[x]) {
      fail(ErrorCode::Precondition, "vertices lie on different components");
    }
    PathSpec cycle{x, {}};
    Dart     d = g.darts_at(x)[0];
    while (true) {
      cycle.darts.push_back(d);
      auto v = g.target(d);
      if (v == x) {
        break;
      }
      auto const& ds = g.darts_at(v);
      d              = ds[0] == dart_reverse(d) ? ds[1] : ds[0];
    }
    std::size_t k = 0;
    while (path_vertices(g, cycle)[k] != y) {
      ++k;
    }
    auto count = [&](PathSpec const& arc) -> std::optional<std::uint64_t> {
      std::uint64_t pieces = 0;
      for (std::size_t pos = 0; pos < arc.darts.size();) {
        auto e = idx.extent(arc, pos, essential);
        if (e == 0) {
          return std::nullopt;
        }
        pos += e;
        ++pieces;
      }
      return pieces;
    };
    PathSpec arc1 = cycle;
    arc1.darts.resize(k);
    PathSpec arc2 = reverse_path(g, subpath(g, cycle, k, cycle.darts.size() - k));
    auto     a    = count(arc1);
    auto     b    = count(arc2);
    if (a && b) {
      return std::min(*a, *b);
    }
    return a ? a : b;
  }

  std::vector<Letter> support(LabelledGraph const& g, std::uint32_t v) {
    std::vector<Letter> out;
    for (Dart d : g.darts_at(v)) {
      out.push_back(g.label(d));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // ClassicalPieces ------------------------------------------------------------

  namespace {

    struct CyclicRuns {
      std::uint64_t    shift = 0;
      bool             single_letter = false;
      std::vector<Run> runs;
    };

    // Run sequence of a cyclic word, starting at a run boundary.
    CyclicRuns cyclic_runs(RunWord const& w) {
      CyclicRuns out;
      auto const& rs = w.runs();
      if (rs.size() == 1) {
        out.single_letter = true;
        out.runs          = rs;
        return out;
      }
      if (rs.front().letter == rs.back().letter) {
        out.shift = rs.front().count;
        out.runs.assign(rs.begin() + 1, rs.end());
        out.runs.back().count += rs.front().count;
      } else {
        out.runs = rs;
      }
      return out;
    }

    bool cyclically_equal(std::vector<Run> const& a, std::vector<Run> const& b) {
      if (a.size() != b.size()) {
        return false;
      }
      for (std::size_t r = 0; r < a.size(); ++r) {
        bool same = true;
        for (std::size_t i = 0; i < a.size() && same; ++i) {
          same = a[i] == b[(i + r) % b.size()];
        }
        if (same) {
          return true;
        }
      }
      return false;
    }

    std::size_t period_in_runs(std::vector<Run> const& rs) {
      std::size_t k = rs.size();
      for (std::size_t p = 1; p < k; ++p) {
        if (k % p != 0) {
          continue;
        }
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
          ok = rs[i] == rs[(i + p) % k];
        }
        if (ok) {
          return p;
        }
      }
      return k;
    }

  }  // namespace

  ClassicalPieces::ClassicalPieces(std::vector<RunWord> const& relators) {
    std::vector<CyclicRuns> seen;
    for (std::size_t i = 0; i < relators.size(); ++i) {
      auto const& w = relators[i];
      if (w.empty() || !is_cyclically_reduced(w)) {
        fail(ErrorCode::Precondition,
             "relator " + std::to_string(i) + " is not cyclically reduced");
      }
      auto fwd = cyclic_runs(w);
      auto bwd = cyclic_runs(w.inverse());
      bool dup = false;
      for (std::size_t c = 0; c < _classes.size() && !dup; ++c) {
        auto const& other = _classes[c].word;
        if (other.length() != w.length()) {
          continue;
        }
        auto const& o = seen[c];
        dup = cyclically_equal(o.runs, fwd.runs) || cyclically_equal(o.runs, bwd.runs);
      }
      if (dup) {
        continue;
      }
      seen.push_back(fwd);
      Class cls;
      cls.word   = w;
      cls.source = i;
      for (int o = 0; o < 2; ++o) {
        auto  cr        = o == 0 ? fwd : bwd;
        auto& s         = cls.strands[o];
        s.shift         = cr.shift;
        s.single_letter = cr.single_letter;
        s.period_runs   = cr.single_letter ? 1 : period_in_runs(cr.runs);
        std::uint64_t at = 0;
        for (auto const& r : cr.runs) {
          RunInfo info;
          info.letter = r.letter;
          info.count  = r.count;
          info.start  = at;
          at += r.count;
          s.runs.push_back(std::move(info));
        }
      }
      _classes.push_back(std::move(cls));
    }

    // common length of the words that follow two runs
    auto tail = [&](Strand const& s1, std::size_t p, Strand const& s2,
                    std::size_t q) -> std::uint64_t {
      if (s2.single_letter) {
        return 0;
      }
      std::size_t   k1 = s1.runs.size(), k2 = s2.runs.size();
      std::uint64_t acc = 0;
      for (std::size_t j = 1; j <= k1 + k2; ++j) {
        auto const& a = s1.runs[(p + j) % k1];
        auto const& b = s2.runs[(q + j) % k2];
        if (a.letter != b.letter) {
          return acc;
        }
        if (a.count != b.count) {
          return sat_add(acc, std::min(a.count, b.count));
        }
        acc = sat_add(acc, a.count);
      }
      return kUnbounded;
    };

    for (std::size_t c1 = 0; c1 < _classes.size(); ++c1) {
      for (int o1 = 0; o1 < 2; ++o1) {
        auto& s1 = _classes[c1].strands[o1];
        for (std::size_t p = 0; p < s1.runs.size(); ++p) {
          auto& info = s1.runs[p];
          for (std::size_t c2 = 0; c2 < _classes.size(); ++c2) {
            for (int o2 = 0; o2 < 2; ++o2) {
              auto const& s2 = _classes[c2].strands[o2];
              bool const  same_strand = c1 == c2 && o1 == o2;
              for (std::size_t q = 0; q < s2.runs.size(); ++q) {
                if (s2.runs[q].letter != info.letter || (same_strand && q == p)) {
                  continue;
                }
                Partner pt{s2.single_letter ? kUnbounded : s2.runs[q].count,
                           s1.single_letter ? 0 : tail(s1, p, s2, q)};
                info.partners[0].push_back(pt);
                bool shifted = same_strand && (q + s1.runs.size() - p)
                                                      % s1.period_runs
                                                  == 0;
                if (!shifted) {
                  info.partners[1].push_back(pt);
                }
              }
            }
          }
          for (int e = 0; e < 2; ++e) {
            auto& ps = info.partners[e];
            std::sort(ps.begin(), ps.end(), [](auto const& a, auto const& b) {
              return a.len < b.len || (a.len == b.len && a.tail < b.tail);
            });
            info.suffix_tail[e].assign(ps.size(), 0);
            info.prefix_len[e].assign(ps.size(), 0);
            for (std::size_t i = ps.size(); i-- > 0;) {
              info.suffix_tail[e][i] = std::max(
                  ps[i].tail, i + 1 < ps.size() ? info.suffix_tail[e][i + 1] : 0);
            }
            for (std::size_t i = 0; i < ps.size(); ++i) {
              info.prefix_len[e][i]
                  = std::max(ps[i].len, i > 0 ? info.prefix_len[e][i - 1] : 0);
            }
          }
        }
      }
    }
  }

  std::uint64_t ClassicalPieces::run_extent(Strand const& s, std::size_t run,
                                            std::uint64_t ahead,
                                            bool          essential) const {
    auto const& info = s.runs[run];
    int const   e    = essential ? 1 : 0;
    auto const& ps   = info.partners[e];
    if (s.single_letter) {
      std::uint64_t best = ps.empty() ? 0 : info.prefix_len[e].back();
      if (!essential && info.count >= 2) {
        best = kUnbounded;
      }
      return best;
    }
    std::uint64_t best = ahead < info.count ? ahead : info.count - 1;
    auto          it   = std::lower_bound(
        ps.begin(), ps.end(), ahead,
        [](Partner const& pt, std::uint64_t v) { return pt.len < v; });
    auto i = static_cast<std::size_t>(it - ps.begin());
    if (i < ps.size()) {
      best = std::max(best, sat_add(ahead, info.suffix_tail[e][i]));
    }
    if (i > 0) {
      best = std::max(best, info.prefix_len[e][i - 1]);
    }
    return best;
  }

  std::pair<std::size_t, std::uint64_t>
  ClassicalPieces::locate(Strand const& s, std::uint64_t offset) const {
    auto it = std::upper_bound(
        s.runs.begin(), s.runs.end(), offset,
        [](std::uint64_t v, RunInfo const& r) { return v < r.start; });
    auto run = static_cast<std::size_t>(it - s.runs.begin()) - 1;
    return {run, s.runs[run].start + s.runs[run].count - offset};
  }

  std::uint64_t ClassicalPieces::extent(std::size_t cls, int orientation,
                                        std::uint64_t offset, bool essential,
                                        std::uint64_t cap) const {
    auto const&   c = _classes.at(cls);
    auto const&   s = c.strands[orientation];
    std::uint64_t L = c.word.length();
    std::uint64_t t = (offset % L + L - s.shift % L) % L;
    auto [run, ahead] = locate(s, t);
    return std::min(cap, run_extent(s, run, ahead, essential));
  }

  std::optional<std::uint64_t>
  ClassicalPieces::greedy(std::size_t cls, int orientation, std::uint64_t offset,
                          std::uint64_t len, bool essential, std::uint64_t limit,
                          std::vector<Segment>* out) const {
    std::uint64_t const L     = length(cls);
    std::uint64_t       pos   = 0;
    std::uint64_t       count = 0;
    while (pos < len) {
      auto e = extent(cls, orientation, (offset + pos) % L, essential, len - pos);
      if (e == 0) {
        return std::nullopt;
      }
      if (out) {
        out->push_back({pos, e});
      }
      pos += e;
      if (++count > limit) {
        return count;
      }
    }
    return count;
  }

  std::vector<std::uint64_t>
  ClassicalPieces::candidate_starts(std::size_t cls, bool essential) const {
    auto const&                s = _classes[cls].strands[0];
    std::uint64_t const        L = length(cls);
    std::vector<std::uint64_t> out;
    if (s.single_letter) {
      return {0};
    }
    int const e = essential ? 1 : 0;
    for (auto const& r : s.runs) {
      auto add = [&](std::uint64_t ahead) {
        if (ahead >= 1 && ahead <= r.count) {
          out.push_back((r.start + r.count - ahead + s.shift) % L);
        }
      };
      add(r.count);
      add(r.count - 1);
      for (auto const& pt : r.partners[e]) {
        if (pt.len >= r.count) {
          break;
        }
        add(pt.len);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Every optimal cyclic cover can have its pieces moved back to points where
  // the end of the maximal piece jumps; those are the candidate starts.
  Decomposition ClassicalPieces::decompose(std::size_t cls, bool essential) const {
    std::uint64_t const L = length(cls);
    auto const          starts = candidate_starts(cls, essential);
    for (auto st : starts) {
      if (extent(cls, 0, st, essential, 1) == 0) {
        fail(ErrorCode::NotDecomposable,
             "letter " + std::to_string(st) + " of relator class "
                 + std::to_string(cls) + " lies on no piece");
      }
    }
    Decomposition best;
    best.count = kUnbounded;
    for (auto st : starts) {
      auto n = greedy(cls, 0, st, L, essential,
                      best.count == kUnbounded ? kUnbounded : best.count - 1);
      if (n && *n < best.count) {
        best.count    = *n;
        best.rotation = st;
      }
    }
    greedy(cls, 0, best.rotation, L, essential, kUnbounded, &best.segments);
    return best;
  }

  std::optional<std::uint64_t> ClassicalPieces::distance(std::size_t   cls,
                                                         std::uint64_t x,
                                                         std::uint64_t y,
                                                         bool essential) const {
    std::uint64_t const L = length(cls);
    x %= L;
    y %= L;
    if (x == y) {
      return 0;
    }
    auto a = greedy(cls, 0, x, (y + L - x) % L, essential);
    auto b = greedy(cls, 1, (L - x) % L, (x + L - y) % L, essential);
    if (a && b) {
      return std::min(*a, *b);
    }
    return a ? a : b;
  }

  std::vector<MaximalPiece> ClassicalPieces::maximal_pieces(std::size_t cls,
                                                            bool essential) const {
    std::vector<MaximalPiece> out;
    auto const&               c = _classes.at(cls);
    std::uint64_t const       L = c.word.length();
    int const                 e = essential ? 1 : 0;
    for (int o = 0; o < 2; ++o) {
      auto const& s = c.strands[o];
      for (std::size_t ri = 0; ri < s.runs.size(); ++ri) {
        auto const&                r = s.runs[ri];
        std::vector<std::uint64_t> aheads{r.count};
        if (!s.single_letter) {
          aheads.push_back(r.count - 1);
          for (auto const& pt : r.partners[e]) {
            if (pt.len < r.count) {
              aheads.push_back(pt.len);
            }
          }
        }
        std::sort(aheads.begin(), aheads.end());
        aheads.erase(std::unique(aheads.begin(), aheads.end()), aheads.end());
        for (auto ahead : aheads) {
          if (ahead == 0) {
            continue;
          }
          auto len = run_extent(s, ri, ahead, essential);
          if (len == 0) {
            continue;
          }
          out.push_back({cls, o, (r.start + r.count - ahead + s.shift) % L, len});
        }
      }
    }
    return out;
  }

  std::uint64_t ClassicalPieces::max_piece_length(std::size_t cls,
                                                  bool        essential) const {
    std::uint64_t best = 0;
    for (auto const& mp : maximal_pieces(cls, essential)) {
      best = std::max(best, std::min(mp.length, length(cls)));
    }
    return best;
  }

}  // namespace sctk
