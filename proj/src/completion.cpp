#include "sctk/completion.hpp"

#include <algorithm>  // for find_if, sort
#include <charconv>   // for from_chars
#include <deque>      // for deque
#include <map>        // for map
#include <sstream>    // for istringstream, ostringstream

#include "sctk/errors.hpp"

namespace sctk {

  // FactorSpec --------------------------------------------------------------

  std::int64_t FactorSpec::identity() const {
    if (kind == Kind::Cyclic) {
      return 0;
    }
    for (std::size_t x = 0; x < table.size(); ++x) {
      if (table[x][x] == x) {
        return static_cast<std::int64_t>(x);
      }
    }
    fail(ErrorCode::Precondition, "factor " + id + " has no identity");
  }

  std::int64_t FactorSpec::multiply(std::int64_t x, std::int64_t y) const {
    if (kind == Kind::Cyclic) {
      return x + y;
    }
    return table.at(static_cast<std::size_t>(x)).at(static_cast<std::size_t>(y));
  }

  std::int64_t FactorSpec::inverse(std::int64_t x) const {
    if (kind == Kind::Cyclic) {
      return -x;
    }
    auto e   = identity();
    auto const& row = table.at(static_cast<std::size_t>(x));
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (row[y] == e) {
        return static_cast<std::int64_t>(y);
      }
    }
    fail(ErrorCode::Precondition, "factor " + id + ": element without inverse");
  }

  std::string FactorSpec::element_name(std::int64_t x) const {
    if (kind == Kind::Cyclic) {
      return std::to_string(x);
    }
    return elements.at(static_cast<std::size_t>(x));
  }

  std::size_t FactorSpec::order() const {
    return kind == Kind::Cyclic ? 0 : elements.size();
  }

  FactorSpec finite_factor(std::string id, std::vector<std::string> elements,
                           std::vector<std::vector<std::uint32_t>> table,
                           std::vector<std::pair<std::string, std::int64_t>> gens) {
    auto bad = [&](std::string const& why) {
      fail(ErrorCode::Precondition, "factor " + id + ": " + why);
    };
    std::size_t const n = elements.size();
    if (n == 0) {
      bad("no elements");
    }
    if (table.size() != n) {
      bad("table needs one row per element");
    }
    for (auto const& row : table) {
      if (row.size() != n) {
        bad("table rows must have one entry per element");
      }
      for (auto x : row) {
        if (x >= n) {
          bad("table entry out of range");
        }
      }
    }
    std::optional<std::uint32_t> e;
    for (std::uint32_t x = 0; x < n && !e; ++x) {
      bool ok = true;
      for (std::uint32_t y = 0; y < n && ok; ++y) {
        ok = table[x][y] == y && table[y][x] == y;
      }
      if (ok) {
        e = x;
      }
    }
    if (!e) {
      bad("no identity element");
    }
    for (std::uint32_t x = 0; x < n; ++x) {
      bool has_inverse = false;
      for (std::uint32_t y = 0; y < n && !has_inverse; ++y) {
        has_inverse = table[x][y] == *e && table[y][x] == *e;
      }
      if (!has_inverse) {
        bad("element " + elements[x] + " has no inverse");
      }
    }
    for (std::uint32_t x = 0; x < n; ++x) {
      for (std::uint32_t y = 0; y < n; ++y) {
        for (std::uint32_t z = 0; z < n; ++z) {
          if (table[table[x][y]][z] != table[x][table[y][z]]) {
            bad("multiplication is not associative");
          }
        }
      }
    }
    if (gens.empty()) {
      bad("no generators");
    }
    for (auto const& [sym, x] : gens) {
      if (x < 0 || static_cast<std::size_t>(x) >= n) {
        bad("generator " + sym + " names no element");
      }
    }
    // the subgroup generated by S
    std::vector<bool>          seen(n, false);
    std::deque<std::uint32_t>  todo{*e};
    seen[*e] = true;
    while (!todo.empty()) {
      auto x = todo.front();
      todo.pop_front();
      for (auto const& g : gens) {
        auto y = table[x][static_cast<std::size_t>(g.second)];
        if (!seen[y]) {
          seen[y] = true;
          todo.push_back(y);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      bad("generators do not generate the group");
    }
    FactorSpec f;
    f.id         = std::move(id);
    f.kind       = FactorSpec::Kind::Finite;
    f.elements   = std::move(elements);
    f.table      = std::move(table);
    f.generators = std::move(gens);
    return f;
  }

  FactorSpec cyclic_group_factor(std::string id, std::uint32_t n,
                                 std::vector<std::pair<std::string, std::int64_t>> gens) {
    if (n == 0) {
      fail(ErrorCode::Precondition, "cyclic group of order 0");
    }
    std::vector<std::string>                names;
    std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
    for (std::uint32_t i = 0; i < n; ++i) {
      names.push_back(id + "^" + std::to_string(i));
      for (std::uint32_t j = 0; j < n; ++j) {
        table[i][j] = (i + j) % n;
      }
    }
    for (auto& g : gens) {
      g.second = ((g.second % n) + n) % n;
    }
    return finite_factor(std::move(id), std::move(names), std::move(table),
                         std::move(gens));
  }

  FactorSpec infinite_cyclic_factor(std::string id, std::string symbol,
                                    std::uint64_t radius) {
    FactorSpec f;
    f.id         = std::move(id);
    f.kind       = FactorSpec::Kind::Cyclic;
    f.generators = {{std::move(symbol), 1}};
    f.radius     = radius;
    return f;
  }

  // Factor files ------------------------------------------------------------

  namespace {

    std::vector<std::string> tokens(std::string const& line) {
      std::istringstream       ls(line);
      std::vector<std::string> out;
      for (std::string t; ls >> t;) {
        out.push_back(t);
      }
      return out;
    }

    std::uint64_t parse_u64(std::string const& s, std::size_t line_no) {
      std::uint64_t v = 0;
      auto [p, ec]    = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
        fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
      }
      return v;
    }

  }  // namespace

  std::vector<FactorSpec> parse_factors(std::string_view text) {
    std::vector<FactorSpec> out;
    std::istringstream      in{std::string(text)};
    std::string             line;
    std::size_t             line_no = 0;

    struct Pending {
      std::string                             id;
      bool                                    cyclic = false;
      std::vector<std::string>                elements;
      std::vector<std::vector<std::string>>   rows;
      std::vector<std::pair<std::string, std::string>> gens;
      std::optional<std::uint64_t>            radius;
      bool                                    in_table = false;
    };
    std::optional<Pending> cur;
    auto err = [&](std::string const& why) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + why);
    };

    auto finish = [&]() {
      Pending& p = *cur;
      if (p.cyclic) {
        if (p.gens.size() != 1 || !p.radius) {
          err("cyclic factor " + p.id + " needs one generator and a radius");
        }
        out.push_back(infinite_cyclic_factor(p.id, p.gens[0].first, *p.radius));
      } else {
        std::map<std::string, std::uint32_t> idx;
        for (std::uint32_t i = 0; i < p.elements.size(); ++i) {
          if (!idx.emplace(p.elements[i], i).second) {
            err("duplicate element " + p.elements[i]);
          }
        }
        auto lookup = [&](std::string const& n) {
          auto it = idx.find(n);
          if (it == idx.end()) {
            err("unknown element " + n);
          }
          return it->second;
        };
        std::vector<std::vector<std::uint32_t>> table;
        for (auto const& row : p.rows) {
          std::vector<std::uint32_t> r;
          for (auto const& x : row) {
            r.push_back(lookup(x));
          }
          table.push_back(std::move(r));
        }
        std::vector<std::pair<std::string, std::int64_t>> gens;
        for (auto const& [sym, el] : p.gens) {
          gens.emplace_back(sym, lookup(el));
        }
        out.push_back(finite_factor(p.id, p.elements, std::move(table), std::move(gens)));
      }
      cur.reset();
    };

    while (std::getline(in, line)) {
      ++line_no;
      if (auto h = line.find('#'); h != std::string::npos) {
        line.erase(h);
      }
      auto tok = tokens(line);
      if (tok.empty()) {
        continue;
      }
      if (!cur) {
        if (tok[0] != "factor" || tok.size() != 3
            || (tok[2] != "finite" && tok[2] != "cyclic")) {
          err("expected 'factor <id> finite|cyclic'");
        }
        cur         = Pending{};
        cur->id     = tok[1];
        cur->cyclic = tok[2] == "cyclic";
        continue;
      }
      if (tok[0] == "end") {
        finish();
        continue;
      }
      if (cur->in_table && tok[0].back() != ':') {
        cur->rows.push_back(tok);
        continue;
      }
      cur->in_table = false;
      std::vector<std::string> rest(tok.begin() + 1, tok.end());
      if (tok[0] == "elements:" && !cur->cyclic) {
        cur->elements = rest;
      } else if (tok[0] == "table:" && !cur->cyclic && rest.empty()) {
        cur->in_table = true;
      } else if (tok[0] == "generators:" || tok[0] == "generator:") {
        for (auto const& g : rest) {
          auto eq = g.find('=');
          if (eq == std::string::npos) {
            cur->gens.emplace_back(g, g);  // symbol named after its element
          } else {
            cur->gens.emplace_back(g.substr(0, eq), g.substr(eq + 1));
          }
        }
      } else if (tok[0] == "radius:" && cur->cyclic && rest.size() == 1) {
        cur->radius = parse_u64(rest[0], line_no);
      } else {
        err("unexpected '" + tok[0] + "'");
      }
    }
    if (cur) {
      err("missing 'end' for factor " + cur->id);
    }
    return out;
  }

  std::string format_factors(std::vector<FactorSpec> const& fs) {
    std::ostringstream os;
    for (auto const& f : fs) {
      if (f.kind == FactorSpec::Kind::Cyclic) {
        os << "factor " << f.id << " cyclic\ngenerator: " << f.generators.at(0).first
           << "\nradius: " << f.radius << "\nend\n";
        continue;
      }
      os << "factor " << f.id << " finite\nelements:";
      for (auto const& e : f.elements) {
        os << ' ' << e;
      }
      os << "\ntable:\n";
      for (auto const& row : f.table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << (i ? " " : "") << f.elements[row[i]];
        }
        os << '\n';
      }
      os << "generators:";
      for (auto const& [sym, x] : f.generators) {
        os << ' ' << sym << '=' << f.element_name(x);
      }
      os << "\nend\n";
    }
    return os.str();
  }

  // Building -----------------------------------------------------------------

  namespace {

    struct UnionFind {
      std::vector<std::uint32_t> parent, size;
      std::uint32_t add() {
        auto i = static_cast<std::uint32_t>(parent.size());
        parent.push_back(i);
        size.push_back(1);
        return i;
      }
      std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x         = parent[x];
        }
        return x;
      }
      // returns the surviving root
      std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
          return a;
        }
        if (size[a] < size[b]) {
          std::swap(a, b);
        }
        parent[b] = a;
        size[a] += size[b];
        return a;
      }
    };

    using Adjacency = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // label, edge

    class Folder {
     public:
      std::uint32_t add_vertex() {
        _out.emplace_back();
        _in.emplace_back();
        return _v.add();
      }
      std::uint32_t add_edge(std::uint32_t s, std::uint32_t t, std::uint32_t l,
                             std::uint32_t copy) {
        src.push_back(s);
        tgt.push_back(t);
        lab.push_back(l);
        edge_copy.push_back(copy);
        return _e.add();
      }
      std::uint32_t add_copy() {
        return _c.add();
      }
      void merge_vertices(std::uint32_t a, std::uint32_t b) {
        _vq.emplace_back(a, b);
      }

      void run() {
        for (std::uint32_t e = 0; e < src.size(); ++e) {
          insert(_out[_v.find(src[e])], lab[e], e);
          insert(_in[_v.find(tgt[e])], lab[e], e);
        }
        while (!_vq.empty() || !_eq.empty()) {
          if (!_eq.empty()) {
            auto [a, b] = _eq.front();
            _eq.pop_front();
            if (_e.find(a) == _e.find(b)) {
              continue;
            }
            _e.unite(a, b);
            _c.unite(edge_copy[a], edge_copy[b]);
            _vq.emplace_back(src[a], src[b]);
            _vq.emplace_back(tgt[a], tgt[b]);
            continue;
          }
          auto [a, b] = _vq.front();
          _vq.pop_front();
          a = _v.find(a);
          b = _v.find(b);
          if (a == b) {
            continue;
          }
          auto root  = _v.unite(a, b);
          auto other = root == a ? b : a;
          for (auto [l, e] : _out[other]) {
            insert(_out[root], l, e);
          }
          for (auto [l, e] : _in[other]) {
            insert(_in[root], l, e);
          }
          Adjacency().swap(_out[other]);
          Adjacency().swap(_in[other]);
        }
      }

      std::uint32_t vertex_class(std::uint32_t v) {
        return _v.find(v);
      }
      std::uint32_t edge_class(std::uint32_t e) {
        return _e.find(e);
      }
      std::uint32_t copy_class(std::uint32_t c) {
        return _c.find(c);
      }

      std::vector<std::uint32_t> src, tgt, lab, edge_copy;

     private:
      void insert(Adjacency& adj, std::uint32_t l, std::uint32_t e) {
        auto it = std::find_if(adj.begin(), adj.end(),
                               [&](auto const& p) { return p.first == l; });
        if (it == adj.end()) {
          adj.emplace_back(l, e);
        } else if (_e.find(it->second) != _e.find(e)) {
          _eq.emplace_back(it->second, e);
        }
      }

      UnionFind _v, _e, _c;
      std::vector<Adjacency> _out, _in;
      std::deque<std::pair<std::uint32_t, std::uint32_t>> _vq, _eq;
    };

  }  // namespace

  Completion build_completion(LabelledGraph const&           g,
                              std::vector<FactorSpec> const& factors,
                              std::uint64_t                  budget) {
    Completion c;
    c.factors = factors;
    Alphabet al;
    for (std::uint32_t f = 0; f < factors.size(); ++f) {
      for (auto const& [sym, x] : factors[f].generators) {
        if (al.find(sym)) {
          fail(ErrorCode::InconsistentFactors,
               "symbol " + sym + " belongs to more than one factor");
        }
        al.add(sym);
        c.symbol_factor.push_back(f);
        c.symbol_element.push_back(x);
      }
      if (factors[f].kind == FactorSpec::Kind::Cyclic) {
        c.truncated = true;
        c.radius    = std::max(c.radius.value_or(0), factors[f].radius);
      }
    }
    std::vector<std::uint32_t> label_map(g.alphabet().size(), UINT32_MAX);
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto l = g.edge(e).label;
      if (label_map[l] == UINT32_MAX) {
        auto sym = al.find(g.alphabet().name(l));
        if (!sym) {
          fail(ErrorCode::InconsistentFactors,
               "label " + g.alphabet().name(l) + " lies in no factor");
        }
        label_map[l] = *sym;
      }
    }

    Folder                   fo;
    std::vector<std::string> names;
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      fo.add_vertex();
      names.push_back(g.vertex_name(v));
    }
    std::uint64_t total = g.num_vertices();
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& ed   = g.edge(e);
      fo.add_edge(ed.source, ed.target, label_map[ed.label], e);
    }
    std::vector<std::vector<std::uint32_t>> copy_vertices;
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      auto const& ed  = g.edge(e);
      auto        sym = label_map[ed.label];
      auto        fi  = c.symbol_factor[sym];
      auto const& f   = factors[fi];
      fo.add_copy();
      SheetCopy sc;
      sc.factor     = fi;
      sc.gamma_edge = e;
      if (f.kind == FactorSpec::Kind::Cyclic) {
        auto r = static_cast<std::int64_t>(f.radius);
        for (std::int64_t h = -r; h <= r + 1; ++h) {
          sc.elements.push_back(h);
        }
      } else {
        for (std::int64_t h = 0; h < static_cast<std::int64_t>(f.order()); ++h) {
          sc.elements.push_back(h);
        }
      }
      total += sc.elements.size();
      if (total > budget) {
        fail(ErrorCode::Budget, "attached sheets exceed " + std::to_string(budget)
                                    + " vertices");
      }
      auto const id  = f.identity();
      auto const gs  = c.symbol_element[sym];
      auto const pos = [&](std::int64_t h) -> std::optional<std::size_t> {
        if (f.kind == FactorSpec::Kind::Cyclic) {
          auto r = static_cast<std::int64_t>(f.radius);
          if (h < -r || h > r + 1) {
            return std::nullopt;
          }
          return static_cast<std::size_t>(h + r);
        }
        return static_cast<std::size_t>(h);
      };
      std::vector<std::uint32_t> vs(sc.elements.size());
      for (std::size_t i = 0; i < sc.elements.size(); ++i) {
        auto h = sc.elements[i];
        if (h == id) {
          vs[i] = ed.source;
        } else if (h == gs) {
          vs[i] = ed.target;
        } else {
          vs[i] = fo.add_vertex();
          names.push_back("e" + std::to_string(e) + "@" + f.element_name(h));
        }
      }
      if (gs == id) {
        fo.merge_vertices(ed.source, ed.target);
      }
      for (std::size_t i = 0; i < sc.elements.size(); ++i) {
        auto h = sc.elements[i];
        for (std::uint32_t k = 0; k < f.generators.size(); ++k) {
          auto tsym = *al.find(f.generators[k].first);
          if (h == id && tsym == sym) {
            continue;  // the input edge itself
          }
          if (auto j = pos(f.multiply(h, f.generators[k].second))) {
            fo.add_edge(vs[i], vs[*j], tsym, e);
          }
        }
      }
      copy_vertices.push_back(std::move(vs));
      c.copies.push_back(std::move(sc));
    }

    fo.run();

    // renumber classes in order of their least member
    std::vector<std::uint32_t> vnew(names.size(), UINT32_MAX);
    std::vector<std::uint32_t> class_id(names.size(), UINT32_MAX);
    c.graph = LabelledGraph(al);
    for (std::uint32_t v = 0; v < names.size(); ++v) {
      auto r = fo.vertex_class(v);
      if (class_id[r] == UINT32_MAX) {
        class_id[r] = c.graph.add_vertex(names[v]);
      }
      vnew[v] = class_id[r];
    }
    std::vector<std::uint32_t> eclass(fo.src.size(), UINT32_MAX);
    std::vector<std::uint32_t> sheet_of_copy(c.copies.size(), UINT32_MAX);
    for (std::uint32_t e = 0; e < fo.src.size(); ++e) {
      auto r = fo.edge_class(e);
      if (eclass[r] != UINT32_MAX) {
        continue;
      }
      eclass[r] = c.graph.add_edge(vnew[fo.src[e]], vnew[fo.tgt[e]], fo.lab[e]);
      auto cc   = fo.copy_class(fo.edge_copy[e]);
      if (sheet_of_copy[cc] == UINT32_MAX) {
        sheet_of_copy[cc] = static_cast<std::uint32_t>(c.sheet_factor.size());
        c.sheet_factor.push_back(c.copies[fo.edge_copy[e]].factor);
      }
      c.edge_sheet.push_back(sheet_of_copy[cc]);
    }
    for (std::uint32_t v = 0; v < g.num_vertices(); ++v) {
      c.origin_vertex.push_back(vnew[v]);
    }
    for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
      c.origin_edge.push_back(eclass[fo.edge_class(e)]);
    }
    for (std::size_t k = 0; k < c.copies.size(); ++k) {
      for (auto v : copy_vertices[k]) {
        c.copies[k].image.push_back(vnew[v]);
      }
    }
    return c;
  }

  // Free-product words --------------------------------------------------------

  std::vector<std::pair<std::uint32_t, std::int64_t>>
  free_product_normal_form(Completion const& c, Word const& w) {
    std::vector<std::pair<std::uint32_t, std::int64_t>> st;
    for (auto l : w) {
      auto const  fi = c.symbol_factor.at(l.gen);
      auto const& f  = c.factors[fi];
      auto        x  = c.symbol_element[l.gen];
      if (l.inv) {
        x = f.inverse(x);
      }
      if (x == f.identity()) {
        continue;
      }
      if (!st.empty() && st.back().first == fi) {
        st.back().second = f.multiply(st.back().second, x);
        if (st.back().second == f.identity()) {
          st.pop_back();
        }
      } else {
        st.emplace_back(fi, x);
      }
    }
    return st;
  }

  bool free_product_trivial(Completion const& c, Word const& w) {
    return free_product_normal_form(c, w).empty();
  }

  // Sheets ----------------------------------------------------------------------

  EmbeddingVerdict is_embedded_sheets(Completion const& c) {
    EmbeddingVerdict out;
    for (std::uint32_t k = 0; k < c.copies.size(); ++k) {
      auto const& sc = c.copies[k];
      std::map<std::uint32_t, std::size_t> seen;
      for (std::size_t i = 0; i < sc.image.size(); ++i) {
        auto [it, fresh] = seen.emplace(sc.image[i], i);
        if (!fresh) {
          out.embedded = false;
          out.copy     = k;
          out.first    = sc.elements[it->second];
          out.second   = sc.elements[i];
          out.vertex   = sc.image[i];
          return out;
        }
      }
    }
    return out;
  }

  namespace {

    // distance inside one sheet, searched only up to `limit`
    std::uint64_t sheet_distance(Completion const& c, std::uint32_t sheet,
                                 std::uint32_t from, std::uint32_t to,
                                 std::uint64_t limit) {
      if (from == to) {
        return 0;
      }
      auto const& g = c.graph;
      std::map<std::uint32_t, std::uint64_t> dist{{from, 0}};
      std::deque<std::uint32_t>              q{from};
      while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        auto dv = dist[v];
        if (dv >= limit) {
          break;
        }
        for (Dart d : g.darts_at(v)) {
          if (c.edge_sheet[dart_edge(d)] != sheet) {
            continue;
          }
          auto t = g.target(d);
          if (dist.emplace(t, dv + 1).second) {
            if (t == to) {
              return dv + 1;
            }
            q.push_back(t);
          }
        }
      }
      return limit + 1;
    }

  }  // namespace

  bool locally_geodesic(Completion const& c, PathSpec const& p) {
    auto const& g = c.graph;
    std::size_t i = 0;
    auto        v = p.start;
    while (i < p.darts.size()) {
      auto        sheet = c.edge_sheet[dart_edge(p.darts[i])];
      std::size_t j     = i;
      auto        w     = v;
      while (j < p.darts.size() && c.edge_sheet[dart_edge(p.darts[j])] == sheet) {
        w = g.target(p.darts[j]);
        ++j;
      }
      auto run = static_cast<std::uint64_t>(j - i);
      if (sheet_distance(c, sheet, v, w, run) < run) {
        return false;
      }
      i = j;
      v = w;
    }
    return true;
  }

  // Conditions --------------------------------------------------------------

  namespace {

    constexpr std::uint64_t cycle_budget = 5'000'000;

    bool too_long(std::uint64_t piece, std::uint64_t cycle, Rational const& lambda) {
      using u128 = unsigned __int128;
      if (lambda <= Rational(0)) {
        return true;
      }
      return u128(piece) * u128(lambda.denominator())
             >= u128(cycle) * u128(lambda.numerator());
    }

    bool ratio_greater(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d) {
      using u128 = unsigned __int128;
      return u128(a) * d > u128(c) * b || (u128(a) * d == u128(c) * b && a > c);
    }

    template <typename F>
    void for_each_nontrivial_cycle(Completion const& c, F&& f) {
      std::uint64_t seen = 0;
      for_each_simple_cycle(c.graph, std::nullopt, [&](PathSpec const& p) {
        if (++seen > cycle_budget) {
          fail(ErrorCode::Budget, "more than " + std::to_string(cycle_budget)
                                      + " simple closed paths");
        }
        if (!free_product_trivial(c, path_label(c.graph, p))) {
          f(p);
        }
        return true;
      });
    }

    void set_witness(ConditionReport& r, LabelledGraph const& g, PathSpec const& cycle,
                     std::uint64_t rotation, std::vector<Segment> segs) {
      auto rotated   = rotate_path(g, cycle, rotation);
      r.cycle        = rotated;
      r.rotation     = 0;
      r.cycle_length = rotated.darts.size();
      r.pieces       = std::move(segs);
      r.witness_text = format_path(g, rotated) + " reading "
                       + format_word(path_label(g, rotated), g.alphabet());
      r.piece_labels.clear();
      for (auto const& s : r.pieces) {
        r.piece_labels.push_back(format_word(
            path_label(g, subpath(g, rotated, s.offset, s.length)), g.alphabet()));
      }
    }

    ConditionReport star_report(Completion const& c, std::string cond) {
      ConditionReport r;
      r.condition = std::move(cond);
      r.scope     = "simple closed paths with label nontrivial in the free product";
      if (c.truncated) {
        r.radius = c.radius;
        r.scope += "; cyclic sheets truncated, a pass holds at this radius only";
      }
      return r;
    }

    bool embedded_or_fail(Completion const& c, ConditionReport& r) {
      auto ev = is_embedded_sheets(c);
      if (ev.embedded) {
        return true;
      }
      auto const& sc = c.copies[ev.copy];
      auto const& f  = c.factors[sc.factor];
      r.pass         = false;
      r.note = "the sheet of " + f.id + " attached along input edge "
               + std::to_string(sc.gamma_edge) + " is not embedded: elements "
               + f.element_name(ev.first) + " and " + f.element_name(ev.second)
               + " both map to vertex " + c.graph.vertex_name(ev.vertex);
      return false;
    }

  }  // namespace

  ConditionReport check_gr_star(Completion const& c, PieceIndex const& idx,
                                std::uint64_t n, bool essential) {
    auto r      = star_report(c, "Gr*");
    r.n         = n;
    r.essential = essential;
    if (!embedded_or_fail(c, r)) {
      return r;
    }
    auto const& g = idx.graph();
    for_each_nontrivial_cycle(c, [&](PathSpec const& p) {
      ++r.cycles_checked;
      Decomposition d;
      try {
        d = min_piece_decomposition(p, idx, essential);
      } catch (Error const& e) {
        if (e.code() == ErrorCode::NotDecomposable) {
          return;
        }
        throw;
      }
      // report the cycle needing the fewest pieces
      if (d.count < n && (r.pass || d.count < *r.min_pieces)) {
        r.pass = false;
        set_witness(r, g, p, d.rotation, d.segments);
      }
      if (!r.min_pieces || d.count < *r.min_pieces) {
        r.min_pieces = d.count;
      }
    });
    return r;
  }

  ConditionReport check_gr_star(Completion const& c, std::uint64_t n, bool essential) {
    return check_gr_star(c, PieceIndex(c.graph), n, essential);
  }

  ConditionReport check_cprime_star(Completion const& c, PieceIndex const& idx,
                                    Rational lambda, bool essential) {
    auto r      = star_report(c, "C'*");
    r.lambda    = lambda;
    r.essential = essential;
    if (!embedded_or_fail(c, r)) {
      return r;
    }
    auto const& g = idx.graph();
    for_each_nontrivial_cycle(c, [&](PathSpec const& p) {
      ++r.cycles_checked;
      std::uint64_t const L = p.darts.size();
      for (std::size_t i = 0; i < L; ++i) {
        auto e = idx.extent(p, i, essential, L);
        // locally geodesic subpaths are closed under taking subpaths
        std::uint64_t len = 0;
        while (len < e && locally_geodesic(c, subpath(g, p, i, len + 1))) {
          ++len;
        }
        if (len == 0) {
          continue;
        }
        if (!r.longest_piece
            || ratio_greater(len, L, r.longest_piece->first, r.longest_piece->second)) {
          r.longest_piece = std::pair{len, L};
        }
        if (r.pass && too_long(len, L, lambda)) {
          r.pass = false;
          set_witness(r, g, p, i, {{0, len}});
        }
      }
    });
    return r;
  }

  ConditionReport check_cprime_star(Completion const& c, Rational lambda,
                                    bool essential) {
    return check_cprime_star(c, PieceIndex(c.graph), lambda, essential);
  }

  bool revalidate_star(ConditionReport const& r, Completion const& c,
                       PieceIndex const& idx) {
    if (!r.cycle || !revalidate(r, idx)) {
      return false;
    }
    auto const& g = c.graph;
    if (free_product_trivial(c, path_label(g, *r.cycle))) {
      return false;
    }
    if (r.condition == "C'*") {
      for (auto const& s : r.pieces) {
        if (!locally_geodesic(c, subpath(g, *r.cycle, r.rotation + s.offset, s.length))) {
          return false;
        }
      }
    }
    return true;
  }

  std::vector<Word> completion_relators(Completion const& c, std::size_t limit) {
    std::vector<Word> out;
    for_each_simple_cycle(c.graph, std::nullopt, [&](PathSpec const& p) {
      auto w = path_label(c.graph, p);
      if (!free_product_trivial(c, w)) {
        out.push_back(std::move(w));
      }
      return out.size() < limit;
    });
    return out;
  }

  bool components_isomorphic(Completion const& c1, std::uint32_t comp1,
                             Completion const& c2, std::uint32_t comp2,
                             std::uint64_t budget) {
    auto g1 = component_subgraph(c1.graph, comp1);
    auto h  = component_subgraph(c2.graph, comp2);
    if (g1.num_vertices() != h.num_vertices() || g1.num_edges() != h.num_edges()) {
      return false;
    }
    // rewrite h over g1's alphabet
    LabelledGraph g2(g1.alphabet());
    for (std::uint32_t v = 0; v < h.num_vertices(); ++v) {
      g2.add_vertex(h.vertex_name(v));
    }
    for (std::uint32_t e = 0; e < h.num_edges(); ++e) {
      auto l = g1.alphabet().find(h.alphabet().name(h.edge(e).label));
      if (!l) {
        return false;
      }
      g2.add_edge(h.edge(e).source, h.edge(e).target, *l);
    }
    return find_isomorphism(g1, g2, budget).has_value();
  }

  std::string completion_text(Completion const& c) {
    std::ostringstream os;
    os << "vertices: " << c.graph.num_vertices() << "\nedges: " << c.graph.num_edges()
       << "\nsheets: " << c.sheet_factor.size() << '\n';
    for (std::uint32_t f = 0; f < c.factors.size(); ++f) {
      auto n = std::count(c.sheet_factor.begin(), c.sheet_factor.end(), f);
      os << "  factor " << c.factors[f].id << ": " << n << " sheet(s)\n";
    }
    if (c.truncated) {
      os << "truncated: radius " << c.radius.value_or(0) << '\n';
    }
    auto ev = is_embedded_sheets(c);
    os << "embedded sheets: " << (ev.embedded ? "yes" : "no") << '\n';
    if (!ev.embedded) {
      auto const& sc = c.copies[ev.copy];
      auto const& f  = c.factors[sc.factor];
      os << "  collapsed pair: " << f.element_name(ev.first) << ", "
         << f.element_name(ev.second) << " at " << c.graph.vertex_name(ev.vertex)
         << " (sheet along input edge " << sc.gamma_edge << ")\n";
    }
    os << format_graph(c.graph);
    return os.str();
  }

}  // namespace sctk
