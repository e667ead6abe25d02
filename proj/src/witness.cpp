#include "sctk/witness.hpp"

#include <algorithm>   // for sort, unique, find
#include <functional>  // for function
#include <optional>    // for optional
#include <tuple>       // for tuple
#include <map>         // for map
#include <set>         // for set
#include <sstream>     // for ostringstream

#include "json.hpp"
#include "sctk/conditions.hpp"
#include "sctk/errors.hpp"

namespace sctk {

  namespace {

    RunWord cyclic_slice(RunWord const& w, std::uint64_t begin, std::uint64_t len) {
      std::uint64_t const L = w.length();
      RunWord             out;
      begin %= L;
      while (len > 0) {
        auto take = std::min(len, L - begin);
        out.append(w.slice(begin, take));
        len -= take;
        begin = 0;
      }
      return out;
    }

    bool disjoint(std::vector<Letter> const& a, std::vector<Letter> const& b) {
      for (auto x : a) {
        for (auto y : b) {
          if (x == y) {
            return false;
          }
        }
      }
      return true;
    }

    bool disjoint(std::vector<std::uint32_t> const& a, std::vector<std::uint32_t> const& b) {
      for (auto x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) {
          return false;
        }
      }
      return true;
    }

    // A choice of (x, y) on one class or component, reduced to what the
    // neighbouring tuples can see: the support types of x and y.
    template <typename Type>
    struct Option {
      std::uint64_t x, y;
      Type          tx, ty;
    };

    // Backtracking over ordered selections of distinct units. `linked(k)`
    // says whether tuple k must avoid the previous tuple's y type.
    template <typename Type>
    class Selector {
     public:
      Selector(std::vector<std::vector<Option<Type>>> const& options,
               std::function<bool(std::size_t)> linked, std::uint64_t budget)
          : _options(options), _linked(std::move(linked)), _budget(budget),
            _used(options.size(), false) {}

      bool run() {
        return dfs(0, std::nullopt);
      }
      std::vector<WitnessTuple> const& result() const {
        return _chosen;
      }
      std::uint64_t nodes() const {
        return _nodes;
      }

     private:
      bool dfs(std::size_t k, std::optional<Type> prev) {
        if (k == kWitnessTuples) {
          return true;
        }
        auto key = std::make_tuple(k, _used, prev);
        if (_dead.count(key)) {
          return false;
        }
        for (std::size_t u = 0; u < _options.size(); ++u) {
          if (_used[u]) {
            continue;
          }
          for (auto const& o : _options[u]) {
            if (++_nodes > _budget) {
              fail(ErrorCode::Budget, "witness search exceeded "
                                          + std::to_string(_budget) + " nodes");
            }
            if (prev && _linked(k) && !disjoint(*prev, o.tx)) {
              continue;
            }
            _used[u] = true;
            _chosen.push_back({static_cast<std::uint32_t>(u), o.x, o.y});
            if (dfs(k + 1, o.ty)) {
              return true;
            }
            _chosen.pop_back();
            _used[u] = false;
          }
        }
        _dead.insert(key);
        return false;
      }

      std::vector<std::vector<Option<Type>>> const& _options;
      std::function<bool(std::size_t)>              _linked;
      std::uint64_t                                 _budget;
      std::uint64_t                                 _nodes = 0;
      std::vector<bool>                             _used;
      std::vector<WitnessTuple>                     _chosen;
      std::set<std::tuple<std::size_t, std::vector<bool>, std::optional<Type>>> _dead;
    };

    // The joints after tuples 8 and 16 are unconstrained.
    bool classical_link(std::size_t k) {
      return k != 0 && k != 8;
    }

  }  // namespace

  // Classical ---------------------------------------------------------------

  ClassicalInput prepare_classical(RunPresentation const& p) {
    // concise refinement: one representative per class
    auto                 refined = classical_pieces(p);
    std::vector<RunWord> reps;
    for (std::size_t c = 0; c < refined.num_classes(); ++c) {
      reps.push_back(refined.class_word(c));
    }
    // one Tietze pass: a relator is redundant when some letter occurs in it
    // exactly once, nowhere else, and its inverse nowhere
    std::vector<std::uint64_t> occ(2 * p.alphabet.size(), 0);
    for (auto const& r : reps) {
      for (auto const& run : r.runs()) {
        occ[run.letter.code()] += run.count;
      }
    }
    std::vector<bool>    drop_gen(p.alphabet.size(), false);
    std::vector<RunWord> kept;
    for (auto const& r : reps) {
      std::optional<std::uint32_t> chosen;
      for (auto const& run : r.runs()) {
        if (occ[run.letter.code()] == 1 && occ[run.letter.inverse().code()] == 0) {
          chosen = run.letter.gen;
        }
      }
      if (chosen) {
        drop_gen[*chosen] = true;
      } else {
        kept.push_back(r);
      }
    }
    RunPresentation            out;
    std::vector<std::uint32_t> remap(p.alphabet.size(), 0);
    for (std::uint32_t g = 0; g < p.alphabet.size(); ++g) {
      if (!drop_gen[g]) {
        remap[g] = out.alphabet.add(p.alphabet.name(g));
      }
    }
    for (auto const& r : kept) {
      RunWord w;
      for (auto const& run : r.runs()) {
        w.push_back(Letter{remap[run.letter.gen], run.letter.inv}, run.count);
      }
      out.relators.push_back(std::move(w));
    }
    return ClassicalInput{out, ClassicalPieces(out.relators)};
  }

  std::vector<Letter> support(ClassicalPieces const& cp, std::size_t cls, std::uint64_t x) {
    auto const&         w = cp.class_word(cls);
    std::uint64_t const L = w.length();
    std::vector<Letter> s{w.at(x % L), w.at((x + L - 1) % L).inverse()};
    std::sort(s.begin(), s.end());
    return s;
  }

  namespace {

    // Farthest offset reachable from x along one orientation with at most
    // two essential pieces, capped at L.
    std::uint64_t two_piece_reach(ClassicalPieces const& cp, std::size_t cls, int o,
                                  std::uint64_t start) {
      std::uint64_t const L     = cp.length(cls);
      std::uint64_t       reach = 0;
      for (int j = 0; j < 2 && reach < L; ++j) {
        auto e = cp.extent(cls, o, (start + reach) % L, true, L - reach);
        if (e == 0) {
          break;
        }
        reach += e;
      }
      return reach;
    }

    std::vector<std::uint64_t> x_candidates(RunWord const& w, WitnessOptions const& opts) {
      std::uint64_t const        L = w.length();
      std::vector<std::uint64_t> out;
      if (L <= opts.exhaustive_length) {
        for (std::uint64_t i = 0; i < L; ++i) {
          out.push_back(i);
        }
        return out;
      }
      std::uint64_t start = 0;
      for (auto const& r : w.runs()) {
        for (auto d : {std::uint64_t{0}, std::uint64_t{1}, r.count / 2, r.count - 1}) {
          if (d < r.count) {
            out.push_back(start + d);
          }
        }
        start += r.count;
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    using Support = std::vector<Letter>;

    std::vector<Option<Support>> class_options(ClassicalPieces const& cp, std::size_t cls,
                                               WitnessOptions const& opts) {
      auto const&         w = cp.class_word(cls);
      std::uint64_t const L = w.length();
      std::vector<std::uint64_t> run_starts;
      {
        std::uint64_t s = 0;
        for (auto const& r : w.runs()) {
          run_starts.push_back(s);
          s += r.count;
        }
      }
      std::vector<Option<Support>>           out;
      std::set<std::pair<Support, Support>>  seen;
      for (auto x : x_candidates(w, opts)) {
        auto f2 = two_piece_reach(cp, cls, 0, x);
        auto b2 = two_piece_reach(cp, cls, 1, (L - x) % L);
        if (f2 + b2 + 1 >= L) {
          continue;  // every vertex is within two pieces
        }
        auto lo = f2 + 1, hi = L - b2 - 1;  // admissible forward offsets
        std::vector<std::uint64_t> ds{lo, hi};
        for (auto s : run_starts) {
          for (auto q : {s, s + 1}) {
            auto d = (q % L + L - x) % L;
            if (d >= lo && d <= hi) {
              ds.push_back(d);
            }
          }
        }
        std::sort(ds.begin(), ds.end());
        ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
        auto sx = support(cp, cls, x);
        for (auto d : ds) {
          auto y  = (x + d) % L;
          auto sy = support(cp, cls, y);
          if (seen.emplace(sx, sy).second) {
            out.push_back({x, y, sx, sy});
          }
        }
      }
      return out;
    }

  }  // namespace

  WitnessPackage select_witnesses_classical(ClassicalInput const& in,
                                            WitnessOptions const& opts) {
    auto const& cp = in.pieces;
    auto const  n  = cp.num_classes();
    if (n < kWitnessTuples) {
      fail(ErrorCode::InsufficientRelators,
           std::to_string(n) + " relator classes after refinement, 16 needed");
    }
    auto c6 = check_c_classical(cp, in.reduced.alphabet, 6);
    if (!c6.pass) {
      fail(ErrorCode::NotSmallCancellation, "the presentation is not C(6): "
                                                + c6.witness_text);
    }
    std::vector<std::vector<Option<Support>>> options;
    for (std::size_t c = 0; c < n; ++c) {
      options.push_back(class_options(cp, c, opts));
    }
    Selector<Support> sel(options, classical_link, opts.node_budget);
    if (!sel.run()) {
      if (n >= 30) {
        fail(ErrorCode::AssertionFailed,
             "no witness tuples among " + std::to_string(n)
                 + " classes although 30 classes always suffice");
      }
      fail(ErrorCode::SearchExhausted,
           "no witness tuples among " + std::to_string(n) + " classes");
    }
    WitnessPackage pkg;
    pkg.mode   = WitnessMode::Classical;
    pkg.tuples = sel.result();
    pkg.notes.push_back("search nodes: " + std::to_string(sel.nodes()));
    for (std::size_t c = 0; c < n; ++c) {
      if (cp.length(c) > opts.exhaustive_length) {
        pkg.notes.push_back("relators longer than " + std::to_string(opts.exhaustive_length)
                            + " offered run boundaries and midpoints as x");
        break;
      }
    }
    return pkg;
  }

  WitnessPackage select_witnesses_classical(RunPresentation const& p,
                                            WitnessOptions const&  opts) {
    return select_witnesses_classical(prepare_classical(p), opts);
  }

  // Graphical ---------------------------------------------------------------

  bool is_interior(Completion const& c, std::uint32_t v) {
    std::optional<std::uint32_t> sheet;
    for (Dart d : c.graph.darts_at(v)) {
      auto s = c.edge_sheet[dart_edge(d)];
      if (sheet && *sheet != s) {
        return false;
      }
      sheet = s;
    }
    return sheet.has_value();
  }

  std::vector<std::uint32_t> vertex_factors(Completion const& c, std::uint32_t v) {
    std::vector<std::uint32_t> out;
    for (Dart d : c.graph.darts_at(v)) {
      auto f = c.sheet_factor[c.edge_sheet[dart_edge(d)]];
      if (std::find(out.begin(), out.end(), f) == out.end()) {
        out.push_back(f);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  namespace {

    // Endpoints of essential pieces from every vertex at once. The graph is
    // folded, so reading a label is injective on start vertices, and whether
    // a label is an essential piece depends only on the set of starts that
    // can read it: they must meet two orbits. A state is that set paired
    // with the ends; states are explored once each.
    std::vector<std::vector<std::uint32_t>> all_piece_reach(PieceIndex const& idx) {
      auto const& g  = idx.graph();
      auto const  nv = static_cast<std::uint32_t>(g.num_vertices());
      std::vector<std::vector<std::uint32_t>> reach(nv);
      for (std::uint32_t v = 0; v < nv; ++v) {
        reach[v].push_back(v);
      }
      using State = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (start, end)
      auto two_orbits = [&](State const& s) {
        for (auto const& [u, e] : s) {
          if (!idx.same_orbit(u, s.front().first)) {
            return true;
          }
        }
        return false;
      };
      std::set<State>    visited;
      std::vector<State> stack;
      auto const         letters = 2 * static_cast<std::uint32_t>(g.alphabet().size());
      auto               push    = [&](State s) {
        if (s.size() >= 2 && two_orbits(s) && visited.insert(s).second) {
          stack.push_back(std::move(s));
        }
      };
      for (std::uint32_t code = 0; code < letters; ++code) {
        State s;
        for (std::uint32_t v = 0; v < nv; ++v) {
          if (auto d = g.step(v, Letter::from_code(code))) {
            s.emplace_back(v, g.target(*d));
          }
        }
        push(std::move(s));
      }
      while (!stack.empty()) {
        auto s = std::move(stack.back());
        stack.pop_back();
        for (auto const& [u, e] : s) {
          reach[u].push_back(e);
        }
        for (std::uint32_t code = 0; code < letters; ++code) {
          State next;
          for (auto const& [u, e] : s) {
            if (auto d = g.step(e, Letter::from_code(code))) {
              next.emplace_back(u, g.target(*d));
            }
          }
          push(std::move(next));
        }
      }
      for (auto& r : reach) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
      }
      return reach;
    }

    std::vector<bool> ball_from(std::vector<std::vector<std::uint32_t>> const& reach,
                                std::uint32_t x, std::uint32_t pieces) {
      std::vector<bool>          ball(reach.size(), false);
      std::vector<std::uint32_t> frontier{x};
      ball[x] = true;
      for (std::uint32_t k = 0; k < pieces; ++k) {
        std::vector<std::uint32_t> next;
        for (auto v : frontier) {
          for (auto w : reach[v]) {
            if (!ball[w]) {
              ball[w] = true;
              next.push_back(w);
            }
          }
        }
        frontier = std::move(next);
      }
      return ball;
    }

  }  // namespace

  std::vector<bool> piece_ball(PieceIndex const& idx, std::uint32_t x, std::uint32_t pieces) {
    if (!validate_reduced(idx.graph()).reduced) {
      fail(ErrorCode::Precondition, "piece balls need a folded graph");
    }
    return ball_from(all_piece_reach(idx), x, pieces);
  }

  std::vector<std::uint32_t> qualifying_components(Completion const& c) {
    auto const&       g    = c.graph;
    auto              comp = g.components();
    std::set<std::uint32_t> nontrivial;
    for_each_simple_cycle(g, std::nullopt, [&](PathSpec const& p) {
      if (!nontrivial.count(comp[p.start])
          && !free_product_trivial(c, path_label(g, p))) {
        nontrivial.insert(comp[p.start]);
      }
      return true;
    });
    std::vector<std::uint32_t> out;
    for (auto k : nontrivial) {
      bool fresh = true;
      for (auto j : out) {
        if (components_isomorphic(c, j, c, k)) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        out.push_back(k);
      }
    }
    return out;
  }

  WitnessPackage select_witnesses_graphical(Completion const&     c,
                                            WitnessOptions const& opts) {
    PieceIndex idx(c.graph);
    auto       gr6 = check_gr_star(c, idx, 6, true);
    if (!gr6.pass) {
      fail(ErrorCode::NotSmallCancellation,
           "the completion is not Gr*(6): "
               + (gr6.witness_text.empty() ? gr6.note : gr6.witness_text));
    }
    auto comps = qualifying_components(c);
    if (comps.size() < kWitnessTuples) {
      fail(ErrorCode::InsufficientComponents,
           std::to_string(comps.size())
               + " pairwise non-isomorphic components with nontrivial fundamental group, "
                 "16 needed");
    }
    auto const& g    = c.graph;
    auto        cid  = g.components();
    using Type       = std::vector<std::uint32_t>;
    std::vector<std::vector<Option<Type>>> options;
    std::vector<std::uint32_t>             unit_component;
    std::vector<std::string>               without_y;
    auto const                             reach = all_piece_reach(idx);
    for (auto k : comps) {
      std::vector<std::uint32_t> verts, interior;
      for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
        if (cid[v] == k) {
          verts.push_back(v);
          if (is_interior(c, v)) {
            interior.push_back(v);
          }
        }
      }
      std::set<std::uint32_t> y_factors;
      for (auto v : interior) {
        y_factors.insert(vertex_factors(c, v).front());
      }
      std::map<Type, std::set<std::uint32_t>> found;
      std::vector<Option<Type>>               opts_k;
      for (auto x : verts) {
        auto tx = vertex_factors(c, x);
        if (found[tx].size() == y_factors.size()) {
          continue;
        }
        auto ball = ball_from(reach, x, 2);
        for (auto y : interior) {
          auto fy = vertex_factors(c, y);
          if (!ball[y] && !found[tx].count(fy.front())) {
            found[tx].insert(fy.front());
            opts_k.push_back({x, y, tx, fy});
          }
        }
      }
      if (opts_k.empty()) {
        without_y.push_back(g.vertex_name(verts.front()));
        continue;
      }
      options.push_back(std::move(opts_k));
      unit_component.push_back(k);
    }
    auto listing = [&] {
      std::string s;
      for (auto const& n : without_y) {
        s += (s.empty() ? "" : ", ") + n;
      }
      return s;
    };
    if (options.size() < kWitnessTuples) {
      fail(ErrorCode::NoInteriorVertex,
           "components containing " + listing()
               + " have no interior vertex outside two pieces of any x");
    }
    Selector<Type> sel(options, [](std::size_t k) { return k != 0; }, opts.node_budget);
    if (!sel.run()) {
      fail(ErrorCode::SearchExhausted, "no choice of components separates the factors of "
                                       "consecutive y and x");
    }
    WitnessPackage pkg;
    pkg.mode   = WitnessMode::Graphical;
    pkg.tuples = sel.result();
    for (auto& t : pkg.tuples) {
      t.component = unit_component[t.component];
    }
    pkg.notes.push_back("search nodes: " + std::to_string(sel.nodes()));
    if (!without_y.empty()) {
      pkg.notes.push_back("skipped components without admissible y: " + listing());
    }
    if (c.truncated) {
      pkg.notes.push_back("cyclic sheets truncated at radius "
                          + std::to_string(c.radius.value_or(0)));
    }
    return pkg;
  }

  // W-sets --------------------------------------------------------------------

  namespace {

    Alphabet extend_alphabet(Alphabet const& al) {
      Alphabet out = al;
      for (auto n : {kAlpha1, kAlpha2}) {
        if (al.find(n)) {
          fail(ErrorCode::SymbolClash, std::string(n) + " is already a generator");
        }
        out.add(n);
      }
      return out;
    }

    // alpha_i^-1 followed by one block per choice, all combinations in
    // lexicographic order of the choice indices
    std::vector<RunWord> combine(Letter alpha_inv,
                                 std::vector<std::vector<RunWord>> const& blocks,
                                 std::size_t max_words) {
      std::size_t total = 1;
      for (auto const& b : blocks) {
        if (b.empty()) {
          return {};
        }
        if (total > max_words / b.size()) {
          fail(ErrorCode::Budget, "W-set exceeds " + std::to_string(max_words) + " words");
        }
        total *= b.size();
      }
      std::vector<RunWord>     out;
      std::vector<std::size_t> pick(blocks.size(), 0);
      for (std::size_t n = 0; n < total; ++n) {
        RunWord w;
        w.push_back(alpha_inv);
        for (std::size_t j = 0; j < blocks.size(); ++j) {
          w.append(blocks[j][pick[j]]);
        }
        out.push_back(std::move(w));
        for (std::size_t j = blocks.size(); j-- > 0;) {
          if (++pick[j] < blocks[j].size()) {
            break;
          }
          pick[j] = 0;
        }
      }
      return out;
    }

    std::vector<RunWord> classical_blocks(ClassicalPieces const& cp, WitnessTuple const& t) {
      auto const&         w = cp.class_word(t.component);
      std::uint64_t const L = w.length();
      auto forward  = cyclic_slice(w, t.x, (t.y + L - t.x) % L);
      auto backward = cyclic_slice(w, t.y, (t.x + L - t.y) % L).inverse();
      return {forward, backward};
    }

    void simple_paths(LabelledGraph const& g, std::uint32_t x, std::uint32_t y,
                      std::function<void(PathSpec const&)> const& f) {
      PathSpec          p{x, {}};
      std::vector<bool> on(g.num_vertices(), false);
      std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
        if (v == y) {
          f(p);
          return;
        }
        on[v] = true;
        for (Dart d : g.darts_at(v)) {
          auto t = g.target(d);
          if (!on[t]) {
            p.darts.push_back(d);
            dfs(t);
            p.darts.pop_back();
          }
        }
        on[v] = false;
      };
      dfs(x);
    }

    std::vector<RunWord> graphical_blocks(Completion const& c, WitnessTuple const& t,
                                          std::size_t max_words) {
      std::vector<RunWord> out;
      simple_paths(c.graph, static_cast<std::uint32_t>(t.x), static_cast<std::uint32_t>(t.y),
                   [&](PathSpec const& p) {
                     if (out.size() >= max_words) {
                       fail(ErrorCode::Budget, "more than " + std::to_string(max_words)
                                                   + " simple paths in one block");
                     }
                     out.emplace_back(path_label(c.graph, p));
                   });
      return out;
    }

  }  // namespace

  void build_w_sets_classical(WitnessPackage& pkg, ClassicalInput const& in) {
    pkg.alphabet = extend_alphabet(in.reduced.alphabet);
    auto const a1 = *pkg.alphabet.find(kAlpha1), a2 = *pkg.alphabet.find(kAlpha2);
    std::vector<std::vector<RunWord>> b1, b2;
    for (std::size_t k = 0; k < pkg.tuples.size(); ++k) {
      (k < 8 ? b1 : b2).push_back(classical_blocks(in.pieces, pkg.tuples[k]));
    }
    pkg.W1 = combine(Letter{a1, true}, b1, SIZE_MAX);
    pkg.W2 = combine(Letter{a2, true}, b2, SIZE_MAX);
  }

  void build_w_sets_graphical(WitnessPackage& pkg, Completion const& c,
                              std::size_t max_words) {
    pkg.alphabet = extend_alphabet(c.graph.alphabet());
    auto const a1 = *pkg.alphabet.find(kAlpha1), a2 = *pkg.alphabet.find(kAlpha2);
    std::vector<std::vector<RunWord>> b1, b2;
    for (std::size_t k = 0; k < pkg.tuples.size(); ++k) {
      (k < 8 ? b1 : b2).push_back(graphical_blocks(c, pkg.tuples[k], max_words));
    }
    pkg.W1 = combine(Letter{a1, true}, b1, max_words);
    pkg.W2 = combine(Letter{a2, true}, b2, max_words);
    pkg.notes.push_back("blocks are the simple paths from x to y");
  }

  RunPresentation extended_presentation(RunPresentation const& p,
                                        WitnessPackage const&  pkg) {
    RunPresentation out;
    out.alphabet = extend_alphabet(p.alphabet);
    out.relators = p.relators;
    for (auto const* ws : {&pkg.W1, &pkg.W2}) {
      for (auto const& w : *ws) {
        RunWord r;
        for (auto const& run : w.runs()) {
          auto g = out.alphabet.find(pkg.alphabet.name(run.letter.gen));
          if (!g) {
            fail(ErrorCode::Precondition,
                 "W-set letter " + pkg.alphabet.name(run.letter.gen)
                     + " is not in the presentation");
          }
          r.push_back(Letter{*g, run.letter.inv}, run.count);
        }
        out.relators.push_back(std::move(r));
      }
    }
    return out;
  }

  // Verification -----------------------------------------------------------

  namespace {

    void check_w_words(WitnessCheck& out, WitnessPackage const& pkg,
                       std::vector<std::vector<RunWord>> const& blocks) {
      for (int i = 0; i < 2; ++i) {
        auto const& ws    = i == 0 ? pkg.W1 : pkg.W2;
        auto        alpha = pkg.alphabet.find(i == 0 ? kAlpha1 : kAlpha2);
        std::size_t expected = 1;
        std::vector<std::vector<RunWord>> mine(blocks.begin() + 8 * i,
                                               blocks.begin() + 8 * i + 8);
        for (auto const& b : mine) {
          expected *= b.size();
        }
        if (ws.size() != expected) {
          out.failures.push_back("W" + std::to_string(i + 1) + " has " + std::to_string(ws.size())
                                 + " words, expected " + std::to_string(expected));
        }
        auto key = [](RunWord const& w) {
          std::vector<std::pair<std::uint32_t, std::uint64_t>> k;
          for (auto const& r : w.runs()) {
            k.emplace_back(r.letter.code(), r.count);
          }
          return k;
        };
        std::set<std::vector<std::pair<std::uint32_t, std::uint64_t>>> want;
        for (auto const& w : combine(Letter{*alpha, true}, mine, SIZE_MAX)) {
          want.insert(key(w));
        }
        for (auto const& w : ws) {
          if (w.empty() || w.runs().front().letter != Letter{*alpha, true}
              || w.runs().front().count != 1) {
            out.failures.push_back("a W word does not start with alpha^-1");
          }
          if (!want.count(key(w))) {
            out.failures.push_back("a W word is not a product of the eight blocks");
          }
        }
        // no free cancellation where blocks meet
        for (std::size_t j = 0; j + 1 < mine.size(); ++j) {
          for (auto const& u : mine[j]) {
            for (auto const& v : mine[j + 1]) {
              if (!u.empty() && !v.empty()
                  && u.runs().back().letter == v.runs().front().letter.inverse()) {
                out.failures.push_back("blocks " + std::to_string(8 * i + j + 1) + " and "
                                       + std::to_string(8 * i + j + 2) + " cancel");
              }
            }
          }
        }
      }
    }

  }  // namespace

  WitnessCheck verify_package(WitnessPackage const& pkg, ClassicalInput const& in) {
    WitnessCheck out;
    auto const&  cp = in.pieces;
    if (pkg.tuples.size() != kWitnessTuples) {
      out.failures.push_back("expected 16 tuples");
    }
    std::set<std::uint32_t> classes;
    for (std::size_t k = 0; k < pkg.tuples.size(); ++k) {
      auto const& t = pkg.tuples[k];
      if (t.component >= cp.num_classes()) {
        out.failures.push_back("tuple " + std::to_string(k + 1) + ": no such class");
        continue;
      }
      if (!classes.insert(t.component).second) {
        out.failures.push_back("tuple " + std::to_string(k + 1) + ": class repeated");
      }
      auto d = cp.distance(t.component, t.x, t.y, true);
      if (d && *d < 3) {
        out.failures.push_back("tuple " + std::to_string(k + 1) + ": piece distance "
                               + std::to_string(*d));
      }
      if (k > 0 && classical_link(k)) {
        auto const& p = pkg.tuples[k - 1];
        if (!disjoint(support(cp, p.component, p.y), support(cp, t.component, t.x))) {
          out.failures.push_back("supports of y" + std::to_string(k) + " and x"
                                 + std::to_string(k + 1) + " meet");
        }
      }
    }
    if (!pkg.W1.empty() || !pkg.W2.empty()) {
      std::vector<std::vector<RunWord>> blocks;
      for (auto const& t : pkg.tuples) {
        blocks.push_back(classical_blocks(cp, t));
      }
      if (blocks.size() == kWitnessTuples) {
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          if (blocks[k].size() != 2) {
            out.failures.push_back("tuple " + std::to_string(k + 1) + ": not two arcs");
          }
        }
        check_w_words(out, pkg, blocks);
      }
    }
    out.ok = out.failures.empty();
    return out;
  }

  WitnessCheck verify_package(WitnessPackage const& pkg, Completion const& c) {
    WitnessCheck out;
    PieceIndex   idx(c.graph);
    auto const&  g   = c.graph;
    auto         cid = g.components();
    auto         qualifying = qualifying_components(c);
    if (pkg.tuples.size() != kWitnessTuples) {
      out.failures.push_back("expected 16 tuples");
    }
    for (std::size_t k = 0; k < pkg.tuples.size(); ++k) {
      auto const& t   = pkg.tuples[k];
      auto        tag = "tuple " + std::to_string(k + 1) + ": ";
      auto        x   = static_cast<std::uint32_t>(t.x);
      auto        y   = static_cast<std::uint32_t>(t.y);
      if (x >= g.num_vertices() || y >= g.num_vertices() || cid[x] != t.component
          || cid[y] != t.component) {
        out.failures.push_back(tag + "vertices outside the component");
        continue;
      }
      if (std::find(qualifying.begin(), qualifying.end(), t.component) == qualifying.end()) {
        out.failures.push_back(tag + "component does not qualify");
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (components_isomorphic(c, pkg.tuples[j].component, c, t.component)) {
          out.failures.push_back(tag + "component isomorphic to tuple "
                                 + std::to_string(j + 1));
        }
      }
      if (!is_interior(c, y)) {
        out.failures.push_back(tag + "y is not interior");
      }
      // every simple path from x to y needs at least three essential pieces
      simple_paths(g, x, y, [&](PathSpec const& p) {
        try {
          if (min_piece_decomposition(p, idx, true).count < 3) {
            out.failures.push_back(tag + "a path from x to y has two pieces");
          }
        } catch (Error const& e) {
          if (e.code() != ErrorCode::NotDecomposable) {
            throw;
          }
        }
      });
      if (k > 0) {
        auto const& p = pkg.tuples[k - 1];
        if (!disjoint(vertex_factors(c, static_cast<std::uint32_t>(p.y)),
                      vertex_factors(c, x))) {
          out.failures.push_back(tag + "shares a factor with the previous y");
        }
      }
    }
    if ((!pkg.W1.empty() || !pkg.W2.empty()) && pkg.tuples.size() == kWitnessTuples) {
      std::vector<std::vector<RunWord>> blocks;
      for (auto const& t : pkg.tuples) {
        blocks.push_back(graphical_blocks(c, t, SIZE_MAX));
      }
      check_w_words(out, pkg, blocks);
    }
    out.ok = out.failures.empty();
    return out;
  }

  // Serialisation --------------------------------------------------------------

  std::string package_text(WitnessPackage const& pkg) {
    std::ostringstream os;
    os << "mode: " << (pkg.mode == WitnessMode::Classical ? "classical" : "graphical") << '\n';
    for (std::size_t k = 0; k < pkg.tuples.size(); ++k) {
      auto const& t = pkg.tuples[k];
      os << "tuple " << k + 1 << ": "
         << (pkg.mode == WitnessMode::Classical ? "class " : "component ") << t.component
         << ", x = " << t.x << ", y = " << t.y << '\n';
    }
    os << "|W1| = " << pkg.W1.size() << ", |W2| = " << pkg.W2.size() << '\n';
    for (auto const& n : pkg.notes) {
      os << "note: " << n << '\n';
    }
    return os.str();
  }

  std::string package_json(WitnessPackage const& pkg) {
    nlohmann::ordered_json j;
    j["mode"]   = pkg.mode == WitnessMode::Classical ? "classical" : "graphical";
    auto tuples = nlohmann::ordered_json::array();
    for (auto const& t : pkg.tuples) {
      tuples.push_back({{"component", t.component}, {"x", t.x}, {"y", t.y}});
    }
    j["tuples"] = tuples;
    for (int i = 0; i < 2; ++i) {
      auto ws = nlohmann::ordered_json::array();
      for (auto const& w : i == 0 ? pkg.W1 : pkg.W2) {
        ws.push_back(format_word(w, pkg.alphabet));
      }
      j[i == 0 ? "W1" : "W2"] = ws;
    }
    j["notes"] = pkg.notes;
    return j.dump(2) + "\n";
  }

}  // namespace sctk
