#include "sctk/graph.hpp"

#include <algorithm>  // for sort, min, all_of
#include <map>        // for map
#include <numeric>    // for iota
#include <queue>      // for queue
#include <sstream>    // for ostringstream, istringstream

#include "sctk/errors.hpp"

namespace sctk {

  // LabelledGraph -------------------------------------------------------------

  std::uint32_t LabelledGraph::add_vertex(std::string name) {
    auto id = static_cast<std::uint32_t>(_names.size());
    if (name.empty()) {
      name = "v" + std::to_string(id);
      while (find_vertex(name)) {
        name += "_";
      }
    }
    _names.push_back(std::move(name));
    _darts.emplace_back();
    return id;
  }

  std::optional<std::uint32_t>
  LabelledGraph::find_vertex(std::string const& name) const {
    for (std::uint32_t v = 0; v < _names.size(); ++v) {
      if (_names[v] == name) {
        return v;
      }
    }
    return std::nullopt;
  }

  std::uint32_t LabelledGraph::add_edge(std::uint32_t source,
                                        std::uint32_t target,
                                        std::uint32_t label) {
    if (source >= _names.size() || target >= _names.size()
        || label >= _alphabet.size()) {
      fail(ErrorCode::Precondition, "edge endpoint or label out of range");
    }
    auto e = static_cast<std::uint32_t>(_edges.size());
    _edges.push_back({source, target, label});
    _darts[source].push_back(2 * e);
    _darts[target].push_back(2 * e + 1);
    return e;
  }

  std::optional<Dart> LabelledGraph::step(std::uint32_t v, Letter l) const {
    for (Dart d : _darts[v]) {
      if (label(d) == l) {
        return d;
      }
    }
    return std::nullopt;
  }

  std::vector<std::uint32_t> LabelledGraph::components() const {
    std::uint32_t const        none = UINT32_MAX;
    std::vector<std::uint32_t> comp(num_vertices(), none);
    std::uint32_t              next = 0;
    for (std::uint32_t s = 0; s < num_vertices(); ++s) {
      if (comp[s] != none) {
        continue;
      }
      std::vector<std::uint32_t> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (Dart d : _darts[v]) {
          auto t = target(d);
          if (comp[t] == none) {
            comp[t] = next;
            stack.push_back(t);
          }
        }
      }
      ++next;
    }
    return comp;
  }

  // Paths ---------------------------------------------------------------------

  bool is_valid_path(LabelledGraph const& g, PathSpec const& p) {
    if (p.start >= g.num_vertices()) {
      return false;
    }
    auto v = p.start;
    for (Dart d : p.darts) {
      if (dart_edge(d) >= g.num_edges() || g.origin(d) != v) {
        return false;
      }
      v = g.target(d);
    }
    return true;
  }

  std::uint32_t path_end(LabelledGraph const& g, PathSpec const& p) {
    return p.darts.empty() ? p.start : g.target(p.darts.back());
  }

  bool is_closed(LabelledGraph const& g, PathSpec const& p) {
    return path_end(g, p) == p.start;
  }

  Word path_label(LabelledGraph const& g, PathSpec const& p) {
    Word w;
    w.reserve(p.darts.size());
    for (Dart d : p.darts) {
      w.push_back(g.label(d));
    }
    return w;
  }

  PathSpec reverse_path(LabelledGraph const& g, PathSpec const& p) {
    PathSpec r{path_end(g, p), {}};
    for (auto it = p.darts.rbegin(); it != p.darts.rend(); ++it) {
      r.darts.push_back(dart_reverse(*it));
    }
    return r;
  }

  PathSpec subpath(LabelledGraph const& g, PathSpec const& p,
                   std::size_t begin, std::size_t len) {
    std::size_t n = p.darts.size();
    if (n == 0) {
      return {p.start, {}};
    }
    bool wrap = is_closed(g, p);
    if (!wrap && begin + len > n) {
      fail(ErrorCode::Precondition, "subpath exceeds path length");
    }
    PathSpec out;
    out.start = begin % n == 0 && begin == 0 ? p.start
                                             : g.origin(p.darts[begin % n]);
    if (begin == n && !wrap) {
      out.start = path_end(g, p);
    }
    for (std::size_t i = 0; i < len; ++i) {
      out.darts.push_back(p.darts[(begin + i) % n]);
    }
    return out;
  }

  PathSpec rotate_path(LabelledGraph const& g, PathSpec const& p, std::size_t k) {
    return subpath(g, p, p.darts.empty() ? 0 : k % p.darts.size(),
                   p.darts.size());
  }

  std::vector<std::uint32_t> path_vertices(LabelledGraph const& g,
                                           PathSpec const&      p) {
    std::vector<std::uint32_t> vs{p.start};
    for (Dart d : p.darts) {
      vs.push_back(g.target(d));
    }
    return vs;
  }

  std::string format_path(LabelledGraph const& g, PathSpec const& p) {
    std::ostringstream os;
    os << g.vertex_name(p.start) << ':';
    bool first = true;
    for (Dart d : p.darts) {
      os << (first ? "" : ",") << 'e' << dart_edge(d)
         << (dart_backward(d) ? "~" : "");
      first = false;
    }
    return os.str();
  }

  // Morphisms -----------------------------------------------------------------

  bool is_label_preserving_morphism(LabelledGraph const& from,
                                    LabelledGraph const& to,
                                    Morphism const&      m) {
    if (m.vertex_map.size() != from.num_vertices()
        || m.edge_map.size() != from.num_edges()) {
      return false;
    }
    for (std::uint32_t e = 0; e < from.num_edges(); ++e) {
      auto const& a = from.edge(e);
      if (m.edge_map[e] >= to.num_edges()) {
        return false;
      }
      auto const& b = to.edge(m.edge_map[e]);
      if (b.label != a.label || b.source != m.vertex_map[a.source]
          || b.target != m.vertex_map[a.target]) {
        return false;
      }
    }
    return true;
  }

  PathSpec apply(LabelledGraph const&, Morphism const& m, PathSpec const& p) {
    PathSpec out{m.vertex_map[p.start], {}};
    for (Dart d : p.darts) {
      out.darts.push_back(2 * m.edge_map[dart_edge(d)] + (d & 1));
    }
    return out;
  }

  // Construction --------------------------------------------------------------

  ReducedVerdict validate_reduced(LabelledGraph const& g) {
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      std::vector<std::uint32_t> codes;
      for (Dart d : g.darts_at(v)) {
        codes.push_back(g.label(d).code());
      }
      std::sort(codes.begin(), codes.end());
      for (std::size_t i = 1; i < codes.size(); ++i) {
        if (codes[i] == codes[i - 1]) {
          return {false, v, Letter::from_code(codes[i])};
        }
      }
    }
    return {};
  }

  LabelledGraph cycle_graph(Word const& w, Alphabet const& alphabet,
                            std::string const& prefix) {
    LabelledGraph g(alphabet);
    auto          n = static_cast<std::uint32_t>(w.size());
    for (std::uint32_t i = 0; i < n; ++i) {
      g.add_vertex(prefix + std::to_string(i));
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      auto j = (i + 1) % n;
      if (w[i].inv) {
        g.add_edge(j, i, w[i].gen);
      } else {
        g.add_edge(i, j, w[i].gen);
      }
    }
    return g;
  }

  GammaR gamma_R(std::vector<Word> const& relators, Alphabet const& alphabet) {
    GammaR out;
    out.graph = LabelledGraph(alphabet);
    for (auto const& r : symmetrized_closure(relators)) {
      out.classes.push_back(class_representative(r));
    }
    std::sort(out.classes.begin(), out.classes.end(), shortlex_less);
    out.classes.erase(std::unique(out.classes.begin(), out.classes.end()),
                      out.classes.end());
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
      auto const& w     = out.classes[c];
      auto        first = static_cast<std::uint32_t>(out.graph.num_vertices());
      out.first_vertex.push_back(first);
      auto n = static_cast<std::uint32_t>(w.size());
      for (std::uint32_t i = 0; i < n; ++i) {
        out.graph.add_vertex("r" + std::to_string(c) + "_" + std::to_string(i));
      }
      for (std::uint32_t i = 0; i < n; ++i) {
        auto a = first + i, b = first + (i + 1) % n;
        if (w[i].inv) {
          out.graph.add_edge(b, a, w[i].gen);
        } else {
          out.graph.add_edge(a, b, w[i].gen);
        }
      }
    }
    return out;
  }

  std::vector<PathSpec> find_occurrences(Word const& w, LabelledGraph const& g) {
    std::vector<PathSpec> out;
    for (std::uint32_t s = 0; s < g.num_vertices(); ++s) {
      PathSpec cur{s, {}};
      // explicit DFS over all darts matching the next letter
      std::function<void(std::uint32_t)> go = [&](std::uint32_t v) {
        if (cur.darts.size() == w.size()) {
          out.push_back(cur);
          return;
        }
        for (Dart d : g.darts_at(v)) {
          if (g.label(d) == w[cur.darts.size()]) {
            cur.darts.push_back(d);
            go(g.target(d));
            cur.darts.pop_back();
          }
        }
      };
      go(s);
    }
    return out;
  }

  // Colour refinement and backtracking ---------------------------------------

  namespace {

    using Colours = std::vector<std::uint32_t>;

    std::size_t count_colours(Colours const& c) {
      std::vector<std::uint32_t> s(c);
      std::sort(s.begin(), s.end());
      return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
    }

    // Iterates neighbourhood signatures until the partition is stable. New
    // colour ids follow the sorted order of signatures, so colours agree
    // across the two halves of a disjoint union.
    Colours refine(LabelledGraph const& g, Colours colours) {
      std::size_t classes = count_colours(colours);
      while (true) {
        std::vector<std::vector<std::uint64_t>> sigs(g.num_vertices());
        for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
          auto& s = sigs[v];
          for (Dart d : g.darts_at(v)) {
            s.push_back((std::uint64_t(g.label(d).code()) << 32)
                        | colours[g.target(d)]);
          }
          std::sort(s.begin(), s.end());
          s.insert(s.begin(), colours[v]);
        }
        std::map<std::vector<std::uint64_t>, std::uint32_t> ids;
        for (auto const& s : sigs) {
          ids.emplace(s, 0);
        }
        std::uint32_t next = 0;
        for (auto& [k, id] : ids) {
          id = next++;
        }
        Colours out(g.num_vertices());
        for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
          out[v] = ids[sigs[v]];
        }
        std::size_t now = ids.size();
        colours         = std::move(out);
        if (now == classes) {
          return colours;
        }
        classes = now;
      }
    }

    Colours initial_colours(LabelledGraph const& g) {
      return refine(g, Colours(g.num_vertices(), 0));
    }

    Colours individualize(LabelledGraph const& g, Colours c, std::uint32_t v) {
      auto top = *std::max_element(c.begin(), c.end());
      c[v]     = top + 1;
      return refine(g, std::move(c));
    }

    class Matcher {
     public:
      Matcher(LabelledGraph const& g1,
              LabelledGraph const& g2,
              Colours const&       c1,
              Colours const&       c2,
              std::uint64_t        budget,
              ErrorCode            on_budget)
          : _g1(g1),
            _g2(g2),
            _c1(c1),
            _c2(c2),
            _budget(budget),
            _on_budget(on_budget) {}

      std::optional<Morphism>
      run(std::vector<std::pair<std::uint32_t, std::uint32_t>> const& fixed) {
        auto n = _g1.num_vertices();
        if (n != _g2.num_vertices() || _g1.num_edges() != _g2.num_edges()) {
          return std::nullopt;
        }
        _map.assign(n, UINT32_MAX);
        _used.assign(n, false);
        std::uint32_t top = 0;
        for (auto c : _c2) {
          top = std::max(top, c + 1);
        }
        _by_colour.assign(top, {});
        for (std::uint32_t v = 0; v < n; ++v) {
          _by_colour[_c2[v]].push_back(v);
        }
        for (auto [a, b] : fixed) {
          if (a >= n || b >= n || _c1[a] != _c2[b]) {
            return std::nullopt;
          }
          if (_map[a] != UINT32_MAX) {
            if (_map[a] != b) {
              return std::nullopt;
            }
            continue;
          }
          if (_used[b] || !consistent(a, b)) {
            return std::nullopt;
          }
          _map[a]  = b;
          _used[b] = true;
        }
        build_order(fixed);
        if (!search(0)) {
          return std::nullopt;
        }
        return to_morphism();
      }

     private:
      void build_order(
          std::vector<std::pair<std::uint32_t, std::uint32_t>> const& fixed) {
        auto              n = _g1.num_vertices();
        std::vector<bool> seen(n, false);
        _order.clear();
        _parent.assign(n, UINT32_MAX);
        std::queue<std::uint32_t> q;
        auto                      visit = [&](std::uint32_t s) {
          seen[s] = true;
          q.push(s);
          while (!q.empty()) {
            auto v = q.front();
            q.pop();
            if (_map[v] == UINT32_MAX) {
              _order.push_back(v);
            }
            for (Dart d : _g1.darts_at(v)) {
              auto t = _g1.target(d);
              if (!seen[t]) {
                seen[t]    = true;
                _parent[t] = d;
                q.push(t);
              }
            }
          }
        };
        for (auto [a, b] : fixed) {
          if (!seen[a]) {
            visit(a);
          }
        }
        // remaining components, starting from the rarest colour
        std::vector<std::size_t> cell(_by_colour.size(), 0);
        for (std::size_t c = 0; c < _by_colour.size(); ++c) {
          cell[c] = _by_colour[c].size();
        }
        std::vector<std::uint32_t> rest(n);
        std::iota(rest.begin(), rest.end(), 0);
        std::stable_sort(rest.begin(), rest.end(), [&](auto x, auto y) {
          return cell[_c1[x]] < cell[_c1[y]];
        });
        for (auto s : rest) {
          if (!seen[s]) {
            visit(s);
          }
        }
      }

      // Edges between v and already mapped vertices must match those between
      // c and their images, label by label.
      bool consistent(std::uint32_t v, std::uint32_t c) const {
        std::vector<std::uint64_t> a, b;
        for (Dart d : _g1.darts_at(v)) {
          auto t = _g1.target(d);
          if (t == v) {
            a.push_back((std::uint64_t(_g1.label(d).code()) << 32) | c);
          } else if (_map[t] != UINT32_MAX) {
            a.push_back((std::uint64_t(_g1.label(d).code()) << 32) | _map[t]);
          }
        }
        for (Dart d : _g2.darts_at(c)) {
          auto t = _g2.target(d);
          if (t == c || _used[t]) {
            b.push_back((std::uint64_t(_g2.label(d).code()) << 32) | t);
          }
        }
        if (a.size() != b.size()) {
          return false;
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
      }

      bool search(std::size_t i) {
        if (i == _order.size()) {
          return true;
        }
        auto                       v = _order[i];
        std::vector<std::uint32_t> cands;
        if (_parent[v] != UINT32_MAX && _map[_g1.origin(_parent[v])] != UINT32_MAX) {
          auto   pu = _map[_g1.origin(_parent[v])];
          Letter l  = _g1.label(_parent[v]);
          for (Dart d : _g2.darts_at(pu)) {
            if (_g2.label(d) == l) {
              cands.push_back(_g2.target(d));
            }
          }
          std::sort(cands.begin(), cands.end());
          cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        } else {
          cands = _by_colour[_c1[v]];
        }
        // try the identity first when matching a graph with itself
        if (&_g1 == &_g2) {
          auto it = std::find(cands.begin(), cands.end(), v);
          if (it != cands.end()) {
            std::rotate(cands.begin(), it, it + 1);
          }
        }
        for (auto c : cands) {
          if (_used[c] || _c2[c] != _c1[v]) {
            continue;
          }
          if (++_nodes > _budget) {
            fail(_on_budget, "search budget of " + std::to_string(_budget)
                                 + " nodes exhausted");
          }
          if (!consistent(v, c)) {
            continue;
          }
          _map[v]  = c;
          _used[c] = true;
          if (search(i + 1)) {
            return true;
          }
          _map[v]  = UINT32_MAX;
          _used[c] = false;
        }
        return false;
      }

      Morphism to_morphism() const {
        Morphism m;
        m.vertex_map = _map;
        m.edge_map.assign(_g1.num_edges(), UINT32_MAX);
        std::vector<bool> taken(_g2.num_edges(), false);
        for (std::uint32_t e = 0; e < _g1.num_edges(); ++e) {
          auto const& a = _g1.edge(e);
          for (Dart d : _g2.darts_at(_map[a.source])) {
            auto f = dart_edge(d);
            if (!dart_backward(d) && !taken[f] && _g2.edge(f).label == a.label
                && _g2.edge(f).target == _map[a.target]) {
              m.edge_map[e] = f;
              taken[f]      = true;
              break;
            }
          }
        }
        return m;
      }

      LabelledGraph const&                    _g1;
      LabelledGraph const&                    _g2;
      Colours const&                          _c1;
      Colours const&                          _c2;
      std::uint64_t                           _budget;
      ErrorCode                               _on_budget;
      std::uint64_t                           _nodes = 0;
      std::vector<std::uint32_t>              _map;
      std::vector<bool>                       _used;
      std::vector<std::vector<std::uint32_t>> _by_colour;
      std::vector<std::uint32_t>              _order;
      std::vector<Dart>                       _parent;
    };

    std::uint32_t find_root(std::vector<std::uint32_t>& uf, std::uint32_t x) {
      while (uf[x] != x) {
        uf[x] = uf[uf[x]];
        x     = uf[x];
      }
      return x;
    }

    std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
      if (b != 0 && a > UINT64_MAX / b) {
        fail(ErrorCode::TooLarge, "automorphism group order exceeds 64 bits");
      }
      return a * b;
    }

  }  // namespace

  AutomorphismGroup automorphism_group(LabelledGraph const& g,
                                       std::uint64_t        budget) {
    AutomorphismGroup out;
    auto              n = static_cast<std::uint32_t>(g.num_vertices());
    Colours           colours = initial_colours(g);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> base;
    std::uint64_t                                        spent = 0;

    while (true) {
      std::vector<std::size_t> cell_size(n + 1, 0);
      for (auto c : colours) {
        ++cell_size[c];
      }
      std::optional<std::uint32_t> b;
      for (std::uint32_t v = 0; v < n && !b; ++v) {
        if (cell_size[colours[v]] > 1) {
          b = v;
        }
      }
      if (!b) {
        break;
      }
      std::vector<bool>     in_orbit(n, false);
      std::vector<Morphism> level;
      in_orbit[*b]        = true;
      std::size_t orbit   = 1;
      auto        closure = [&]() {
        std::vector<std::uint32_t> stack;
        for (std::uint32_t v = 0; v < n; ++v) {
          if (in_orbit[v]) {
            stack.push_back(v);
          }
        }
        while (!stack.empty()) {
          auto v = stack.back();
          stack.pop_back();
          for (auto const& m : level) {
            auto w = m.vertex_map[v];
            if (!in_orbit[w]) {
              in_orbit[w] = true;
              ++orbit;
              stack.push_back(w);
            }
          }
        }
      };
      for (std::uint32_t c = 0; c < n; ++c) {
        if (colours[c] != colours[*b] || in_orbit[c]) {
          continue;
        }
        auto fixed = base;
        fixed.emplace_back(*b, c);
        Matcher mt(g, g, colours, colours, budget - std::min(budget, spent),
                   ErrorCode::TooLarge);
        auto m = mt.run(fixed);
        spent += 1;
        if (m) {
          level.push_back(*m);
          out.generators.push_back(*m);
          closure();
        }
      }
      out.order = checked_mul(out.order, orbit);
      base.emplace_back(*b, *b);
      colours = individualize(g, std::move(colours), *b);
    }

    // permutations of parallel edges
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
             std::vector<std::uint32_t>>
        parallel;
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& x = g.edge(e);
      parallel[{x.source, x.target, x.label}].push_back(e);
    }
    for (auto const& [key, es] : parallel) {
      for (std::size_t i = 1; i < es.size(); ++i) {
        out.order = checked_mul(out.order, i + 1);
        Morphism m;
        m.vertex_map.resize(n);
        std::iota(m.vertex_map.begin(), m.vertex_map.end(), 0);
        m.edge_map.resize(g.num_edges());
        std::iota(m.edge_map.begin(), m.edge_map.end(), 0);
        std::swap(m.edge_map[es[i - 1]], m.edge_map[es[i]]);
        out.generators.push_back(m);
      }
    }

    std::vector<std::uint32_t> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    for (auto const& m : out.generators) {
      for (std::uint32_t v = 0; v < n; ++v) {
        auto a = find_root(uf, v), b = find_root(uf, m.vertex_map[v]);
        if (a != b) {
          uf[std::max(a, b)] = std::min(a, b);
        }
      }
    }
    out.vertex_orbit.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
      out.vertex_orbit[v] = find_root(uf, v);
    }
    return out;
  }

  std::optional<Morphism> find_automorphism(
      LabelledGraph const&                                       g,
      std::vector<std::pair<std::uint32_t, std::uint32_t>> const& fixed,
      std::uint64_t                                              budget) {
    Colours colours = initial_colours(g);
    Matcher mt(g, g, colours, colours, budget, ErrorCode::TooLarge);
    return mt.run(fixed);
  }

  std::optional<Morphism> find_isomorphism(LabelledGraph const& g1,
                                           LabelledGraph const& g2,
                                           std::uint64_t        budget) {
    if (!(g1.alphabet() == g2.alphabet())
        || g1.num_vertices() != g2.num_vertices()
        || g1.num_edges() != g2.num_edges()) {
      return std::nullopt;
    }
    LabelledGraph u(g1.alphabet());
    auto          n1 = static_cast<std::uint32_t>(g1.num_vertices());
    for (std::uint32_t v = 0; v < n1 + g2.num_vertices(); ++v) {
      u.add_vertex("u" + std::to_string(v));
    }
    for (std::uint32_t e = 0; e < g1.num_edges(); ++e) {
      u.add_edge(g1.edge(e).source, g1.edge(e).target, g1.edge(e).label);
    }
    for (std::uint32_t e = 0; e < g2.num_edges(); ++e) {
      u.add_edge(n1 + g2.edge(e).source, n1 + g2.edge(e).target, g2.edge(e).label);
    }
    Colours all = initial_colours(u);
    Colours c1(all.begin(), all.begin() + n1), c2(all.begin() + n1, all.end());
    Colours s1(c1), s2(c2);
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) {
      return std::nullopt;
    }
    Matcher mt(g1, g2, c1, c2, budget, ErrorCode::Budget);
    return mt.run({});
  }

  LabelledGraph component_subgraph(LabelledGraph const&        g,
                                   std::uint32_t               component,
                                   std::vector<std::uint32_t>* vertex_map) {
    auto                       comp = g.components();
    LabelledGraph              out(g.alphabet());
    std::vector<std::uint32_t> local(g.num_vertices(), UINT32_MAX);
    if (vertex_map) {
      vertex_map->clear();
    }
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      if (comp[v] == component) {
        local[v] = out.add_vertex(g.vertex_name(v));
        if (vertex_map) {
          vertex_map->push_back(v);
        }
      }
    }
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& x = g.edge(e);
      if (comp[x.source] == component) {
        out.add_edge(local[x.source], local[x.target], x.label);
      }
    }
    return out;
  }

  // Simple cycles -------------------------------------------------------------

  void for_each_simple_cycle(LabelledGraph const&                       g,
                             std::optional<std::size_t>                 max_len,
                             std::function<bool(PathSpec const&)> const& visit) {
    std::size_t const cap = max_len.value_or(SIZE_MAX);
    bool              go_on = true;
    // loops first, per vertex, in edge order
    for (std::uint32_t s = 0; s < g.num_vertices() && go_on; ++s) {
      std::vector<std::uint32_t> path_v{s};
      std::vector<Dart>          path_d;
      std::vector<bool>          on_path(g.num_vertices(), false);
      on_path[s] = true;
      if (cap >= 1) {
        for (Dart d : g.darts_at(s)) {
          if (!dart_backward(d) && g.target(d) == s && go_on) {
            go_on = visit(PathSpec{s, {d}});
          }
        }
      }
      std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
        for (Dart d : g.darts_at(v)) {
          if (!go_on) {
            return;
          }
          auto t = g.target(d);
          if (t == v) {
            continue;
          }
          if (t == s && !path_d.empty()) {
            if (path_d.size() == 1 && dart_edge(path_d[0]) == dart_edge(d)) {
              continue;
            }
            // canonical direction: compare vertex sequences, then edges
            std::vector<std::uint32_t> fwd(path_v.begin() + 1, path_v.end());
            std::vector<std::uint32_t> bwd(fwd.rbegin(), fwd.rend());
            bool keep;
            if (fwd != bwd) {
              keep = fwd < bwd;
            } else {
              std::vector<std::uint32_t> ef, eb;
              for (Dart x : path_d) {
                ef.push_back(dart_edge(x));
              }
              ef.push_back(dart_edge(d));
              eb.assign(ef.rbegin(), ef.rend());
              keep = ef <= eb;
            }
            if (keep) {
              PathSpec p{s, path_d};
              p.darts.push_back(d);
              go_on = visit(p);
            }
            continue;
          }
          if (t < s || on_path[t] || path_d.size() + 1 >= cap) {
            continue;
          }
          on_path[t] = true;
          path_v.push_back(t);
          path_d.push_back(d);
          dfs(t);
          path_d.pop_back();
          path_v.pop_back();
          on_path[t] = false;
        }
      };
      if (go_on && cap >= 2) {
        dfs(s);
      }
    }
  }

  std::vector<PathSpec> simple_cycles(LabelledGraph const&        g,
                                      std::optional<std::size_t> max_len) {
    std::vector<PathSpec> out;
    for_each_simple_cycle(g, max_len, [&](PathSpec const& p) {
      out.push_back(p);
      return true;
    });
    return out;
  }

  // Text form -----------------------------------------------------------------

  LabelledGraph parse_graph(std::string_view text) {
    LabelledGraph      g;
    bool               have_alphabet = false;
    std::size_t        line_no       = 0;
    std::istringstream in{std::string(text)};
    std::string        line;
    std::map<std::string, std::uint32_t> ids;
    auto vertex = [&](std::string const& name) {
      auto it = ids.find(name);
      if (it != ids.end()) {
        return it->second;
      }
      auto v = g.add_vertex(name);
      ids.emplace(name, v);
      return v;
    };
    while (std::getline(in, line)) {
      ++line_no;
      if (auto h = line.find('#'); h != std::string::npos) {
        line.erase(h);
      }
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) {
        tok.push_back(t);
      }
      if (tok.empty()) {
        continue;
      }
      auto where = "line " + std::to_string(line_no) + ": ";
      if (!have_alphabet) {
        if (tok[0] != "alphabet:") {
          fail(ErrorCode::Parse, where + "expected 'alphabet:' header");
        }
        for (std::size_t i = 1; i < tok.size(); ++i) {
          g.alphabet().add(tok[i]);
        }
        have_alphabet = true;
        continue;
      }
      if (tok[0] == "vertices:") {
        for (std::size_t i = 1; i < tok.size(); ++i) {
          if (ids.count(tok[i]) != 0) {
            fail(ErrorCode::Parse, where + "duplicate vertex '" + tok[i] + "'");
          }
          vertex(tok[i]);
        }
        continue;
      }
      if (tok.size() != 3) {
        fail(ErrorCode::Parse, where + "expected 'source target label'");
      }
      std::string lab = tok[2];
      bool        inv = false;
      if (lab.size() > 3 && lab.compare(lab.size() - 3, 3, "^-1") == 0) {
        inv = true;
        lab.erase(lab.size() - 3);
      }
      auto gen = g.alphabet().find(lab);
      if (!gen) {
        fail(ErrorCode::Parse, where + "unknown label '" + tok[2] + "'");
      }
      auto s = vertex(tok[0]), t = vertex(tok[1]);
      if (inv) {
        std::swap(s, t);
      }
      g.add_edge(s, t, *gen);
    }
    if (!have_alphabet) {
      fail(ErrorCode::Parse, "missing 'alphabet:' header");
    }
    return g;
  }

  std::string format_graph(LabelledGraph const& g) {
    std::ostringstream os;
    os << "alphabet:";
    for (auto const& n : g.alphabet().names()) {
      os << ' ' << n;
    }
    os << "\nvertices:";
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      os << ' ' << g.vertex_name(v);
    }
    os << '\n';
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& x = g.edge(e);
      os << g.vertex_name(x.source) << ' ' << g.vertex_name(x.target) << ' '
         << g.alphabet().name(x.label) << '\n';
    }
    return os.str();
  }

}  // namespace sctk
