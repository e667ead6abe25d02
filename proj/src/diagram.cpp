#include "sctk/diagram.hpp"

#include <algorithm>  // for min_element, find, reverse
#include <cstdint>    // for uint32_t
#include <functional> // for function
#include <map>        // for map
#include <set>        // for set
#include <sstream>    // for istringstream, ostringstream
#include <utility>    // for pair

#include "sctk/errors.hpp"

namespace sctk {

  std::optional<Letter> Diagram::dart_label(Dart d) const {
    auto const& l = labels[dart_edge(d)];
    if (!l) {
      return std::nullopt;
    }
    return dart_backward(d) ? l->inverse() : *l;
  }

  namespace {

    bool inverse_pair(std::optional<Letter> a, std::optional<Letter> b) {
      return a && b && *b == a->inverse();
    }

    std::vector<Dart> orbit(std::vector<Dart> const& perm, Dart start) {
      std::vector<Dart> out;
      Dart              x = start;
      do {
        out.push_back(x);
        x = perm[x];
      } while (x != start);
      return out;
    }

    std::vector<Dart> phi_of(Diagram const& d) {
      std::vector<Dart> phi(d.rotation.size());
      for (Dart x = 0; x < phi.size(); ++x) {
        phi[x] = d.face_next(x);
      }
      return phi;
    }

    // Puts `outer` on the least dart of its face.
    void normalise(Diagram& d) {
      if (d.topology == Topology::Sphere || d.labels.empty()) {
        d.outer.reset();
        return;
      }
      if (!d.outer) {
        return;
      }
      auto walk = orbit(phi_of(d), *d.outer);
      d.outer   = *std::min_element(walk.begin(), walk.end());
    }

    Diagram from_phi(Alphabet alphabet, std::vector<DiagramLabel> labels,
                     std::vector<Dart> const& phi, Topology topology,
                     std::optional<Dart> outer) {
      Diagram d;
      d.alphabet = std::move(alphabet);
      d.labels   = std::move(labels);
      d.rotation.resize(phi.size());
      for (Dart x = 0; x < phi.size(); ++x) {
        d.rotation[x] = phi[dart_reverse(x)];
      }
      d.topology = topology;
      d.outer    = outer;
      normalise(d);
      validate_map(d);
      return d;
    }

    // Mutable map with edge deletion by marking. Rotation entries of dead
    // darts are stale and never read from live darts.
    struct Work {
      Alphabet                  alphabet;
      std::vector<DiagramLabel> labels;
      std::vector<Dart>         sigma;
      std::vector<char>         dead;
      Topology                  topology;
      std::optional<Dart>       outer;
      // Edges killed by a fold whose role passed to another edge.
      std::map<std::uint32_t, std::uint32_t> alias;

      std::uint32_t resolve(std::uint32_t e) const {
        for (auto it = alias.find(e); it != alias.end(); it = alias.find(e)) {
          e = it->second;
        }
        return e;
      }

      explicit Work(Diagram const& d)
          : alphabet(d.alphabet),
            labels(d.labels),
            sigma(d.rotation),
            dead(d.labels.size(), 0),
            topology(d.topology),
            outer(d.outer) {}

      bool live(Dart x) const {
        return dead[dart_edge(x)] == 0;
      }
      Dart phi(Dart x) const {
        return sigma[dart_reverse(x)];
      }
      std::optional<Letter> label(Dart x) const {
        auto const& l = labels[dart_edge(x)];
        if (!l) {
          return std::nullopt;
        }
        return dart_backward(x) ? l->inverse() : *l;
      }
      Dart sigma_inv(Dart x) const {
        Dart y = x;
        while (sigma[y] != x) {
          y = sigma[y];
        }
        return y;
      }
      std::vector<Dart> walk(Dart x) const {
        std::vector<Dart> out;
        Dart              y = x;
        do {
          out.push_back(y);
          y = phi(y);
        } while (y != x);
        return out;
      }
      bool same_vertex(Dart a, Dart b) const {
        Dart y = a;
        do {
          if (y == b) {
            return true;
          }
          y = sigma[y];
        } while (y != a);
        return false;
      }
      // Face id per live dart; dead darts get UINT32_MAX.
      std::vector<std::uint32_t> face_ids(std::uint32_t& count) const {
        std::vector<std::uint32_t> id(sigma.size(), UINT32_MAX);
        count = 0;
        for (Dart x = 0; x < sigma.size(); ++x) {
          if (!live(x) || id[x] != UINT32_MAX) {
            continue;
          }
          for (Dart y : walk(x)) {
            id[y] = count;
          }
          ++count;
        }
        return id;
      }

      void kill(std::vector<std::uint32_t> const& edges) {
        std::optional<Dart> moved;
        if (outer) {
          std::set<std::uint32_t> doomed(edges.begin(), edges.end());
          for (Dart x : walk(*outer)) {
            if (doomed.count(dart_edge(x)) == 0) {
              moved = x;
              break;
            }
          }
        }
        for (auto e : edges) {
          dead[e] = 1;
        }
        std::vector<Dart> next = sigma;
        for (Dart x = 0; x < sigma.size(); ++x) {
          if (!live(x)) {
            continue;
          }
          Dart y = sigma[x];
          while (!live(y)) {
            y = sigma[y];
          }
          next[x] = y;
        }
        sigma = std::move(next);
        if (outer && !live(*outer)) {
          outer = moved;
        }
      }

      // Faces reachable from `from` without crossing the excluded edges.
      std::vector<char> flood(std::vector<std::uint32_t> const& fid, std::uint32_t nfaces,
                              std::uint32_t from, std::set<std::uint32_t> const& excluded) const {
        std::vector<char>          seen(nfaces, 0);
        std::vector<std::uint32_t> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
          auto f = stack.back();
          stack.pop_back();
          for (Dart x = 0; x < sigma.size(); ++x) {
            if (!live(x) || fid[x] != f || excluded.count(dart_edge(x)) != 0) {
              continue;
            }
            auto g = fid[dart_reverse(x)];
            if (seen[g] == 0) {
              seen[g] = 1;
              stack.push_back(g);
            }
          }
        }
        return seen;
      }

      // Edges other than `keep` with a dart on a face of `side`.
      std::vector<std::uint32_t> edges_on(std::vector<std::uint32_t> const& fid,
                                          std::vector<char> const&          side,
                                          std::set<std::uint32_t> const&    keep) const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t e = 0; e < labels.size(); ++e) {
          if (dead[e] != 0 || keep.count(e) != 0) {
            continue;
          }
          if (side[fid[2 * e]] != 0 || side[fid[2 * e + 1]] != 0) {
            out.push_back(e);
          }
        }
        return out;
      }

      // Which of two sides survives a pinch: the outside on a disk, else the
      // larger side (ties keep the first).
      bool keep_first(std::vector<std::uint32_t> const& fid, std::vector<char> const& first,
                      std::set<std::uint32_t> const& boundary) const {
        if (topology == Topology::Disk && outer) {
          return first[fid[*outer]] != 0;
        }
        std::size_t a = 0, b = 0;
        for (std::uint32_t e = 0; e < labels.size(); ++e) {
          if (dead[e] != 0 || boundary.count(e) != 0) {
            continue;
          }
          (first[fid[2 * e]] != 0 ? a : b) += 1;
        }
        return a >= b;
      }

      // Folds d1 with the next dart of its face; their labels are inverse.
      void fold(Dart d1) {
        Dart d2 = phi(d1);
        auto e1 = dart_edge(d1), e2 = dart_edge(d2);
        if (d2 == dart_reverse(d1)) {
          kill({e1});
          return;
        }
        if (e1 == e2) {
          fail(ErrorCode::AssertionFailed, "fold: a loop folded onto itself");
        }
        Dart a2 = dart_reverse(d2);
        if (!same_vertex(d1, a2)) {
          Dart succ = sigma[a2];
          if (succ == d2) {
            succ = sigma[d2];
          }
          bool w_empty = succ == a2;
          kill({e2});
          alias[e2] = e1;
          if (!w_empty) {
            Dart pu = sigma_inv(d1);
            Dart pw = sigma_inv(succ);
            sigma[pu] = succ;
            sigma[pw] = d1;
          }
          return;
        }
        // The two edges bound a closed curve: one side becomes a sphere and
        // is discarded.
        std::uint32_t nf  = 0;
        auto          fid = face_ids(nf);
        std::set<std::uint32_t> pair{e1, e2};
        auto side_a = flood(fid, nf, fid[d1], pair);
        if (side_a[fid[dart_reverse(d1)]] != 0) {
          fail(ErrorCode::AssertionFailed, "fold: the folded pair does not separate");
        }
        std::vector<char> side_b(nf);
        for (std::uint32_t f = 0; f < nf; ++f) {
          side_b[f] = side_a[f] == 0 ? 1 : 0;
        }
        if (keep_first(fid, side_a, pair)) {
          kill(edges_on(fid, side_b, {}));
        } else {
          kill(edges_on(fid, side_a, pair));
          kill({e2});
          alias[e2] = e1;
        }
      }

      void contract(std::uint32_t e) {
        Dart d = 2 * e, rd = d + 1;
        if (same_vertex(d, rd)) {
          fail(ErrorCode::Precondition, "contraction: edge is a loop");
        }
        Dart a = sigma[d], b = sigma[rd];
        bool u_only = a == d, v_only = b == rd;
        kill({e});
        if (!u_only && !v_only) {
          Dart pu   = sigma_inv(a);
          Dart pv   = sigma_inv(b);
          sigma[pu] = b;
          sigma[pv] = a;
        }
      }

      void remove_loop(std::uint32_t e) {
        Dart d = 2 * e;
        if (!same_vertex(d, d + 1)) {
          fail(ErrorCode::Precondition, "loop removal: edge is not a loop");
        }
        std::uint32_t nf  = 0;
        auto          fid = face_ids(nf);
        std::set<std::uint32_t> loop{e};
        auto side_a = flood(fid, nf, fid[d], loop);
        if (side_a[fid[d + 1]] != 0) {
          fail(ErrorCode::AssertionFailed, "loop removal: the loop does not separate");
        }
        std::vector<char> side_b(nf);
        for (std::uint32_t f = 0; f < nf; ++f) {
          side_b[f] = side_a[f] == 0 ? 1 : 0;
        }
        bool keep_a = keep_first(fid, side_a, loop);
        auto doomed = edges_on(fid, keep_a ? side_b : side_a, loop);
        doomed.push_back(e);
        kill(doomed);
      }

      // Edges of the faces labelled s s^-1, as (least, other).
      using EdgePair = std::pair<std::uint32_t, std::uint32_t>;
      std::optional<EdgePair> bigon_at(Dart x) const {
        Dart y = phi(x);
        if (phi(y) != x || dart_edge(x) == dart_edge(y) || !inverse_pair(label(x), label(y))) {
          return std::nullopt;
        }
        auto a = resolve(dart_edge(x)), b = resolve(dart_edge(y));
        return EdgePair{std::min(a, b), std::max(a, b)};
      }
      std::set<EdgePair> bigons() const {
        std::set<EdgePair> out;
        for (Dart x = 0; x < sigma.size(); ++x) {
          if (live(x)) {
            if (auto b = bigon_at(x)) {
              out.insert(*b);
            }
          }
        }
        return out;
      }

      // One 0-face move, if any applies. Bigons listed in `keep` stay.
      bool zero_face_step(std::set<EdgePair> const& keep = {}) {
        for (std::uint32_t e = 0; e < labels.size(); ++e) {
          if (dead[e] != 0 || labels[e]) {
            continue;
          }
          if (same_vertex(2 * e, 2 * e + 1)) {
            remove_loop(e);
          } else {
            contract(e);
          }
          return true;
        }
        std::uint32_t nf  = 0;
        auto          fid = face_ids(nf);
        for (Dart x = 0; x < sigma.size(); ++x) {
          if (!live(x) || (outer && fid[x] == fid[*outer])) {
            continue;
          }
          auto b = bigon_at(x);
          if (b && keep.count(*b) == 0) {
            kill({dart_edge(phi(x))});
            return true;
          }
        }
        return false;
      }

      Diagram finish() const {
        std::vector<std::uint32_t> renum(labels.size(), UINT32_MAX);
        Diagram                    d;
        d.alphabet = alphabet;
        d.topology = topology;
        for (std::uint32_t e = 0; e < labels.size(); ++e) {
          if (dead[e] == 0) {
            renum[e] = static_cast<std::uint32_t>(d.labels.size());
            d.labels.push_back(labels[e]);
          }
        }
        auto map = [&](Dart x) { return 2 * renum[dart_edge(x)] + (x & 1); };
        d.rotation.resize(2 * d.labels.size());
        for (Dart x = 0; x < sigma.size(); ++x) {
          if (live(x)) {
            d.rotation[map(x)] = map(sigma[x]);
          }
        }
        if (outer && !d.labels.empty()) {
          d.outer = map(*outer);
        }
        normalise(d);
        try {
          validate_map(d);
        } catch (Error const& err) {
          fail(ErrorCode::AssertionFailed, std::string("move produced an invalid map: ") + err.what());
        }
        return d;
      }
    };

    // A dart still on the face after folding d1 with d2: any other live
    // dart of the old walk, else d1 itself when it took over a dart of the
    // same face.
    std::optional<Dart> survivor(Work const& w, std::vector<Dart> const& walk, Dart d1, Dart d2) {
      for (Dart x : walk) {
        if (x != d1 && x != d2 && w.live(x)) {
          return x;
        }
      }
      if (w.live(d1) && std::find(walk.begin(), walk.end(), dart_reverse(d2)) != walk.end()) {
        return d1;
      }
      return std::nullopt;
    }

    Word read_walk(Diagram const& d, std::vector<Dart> const& walk) {
      Word w;
      for (Dart x : walk) {
        if (auto l = d.dart_label(x)) {
          w.push_back(*l);
        }
      }
      return w;
    }

    std::vector<std::size_t> vertex_degrees(MapView const& v, std::size_t darts) {
      std::vector<std::size_t> deg(darts);
      for (Dart x = 0; x < darts; ++x) {
        deg[x] = v.vertices[v.vertex_of[x]].size();
      }
      return deg;
    }

  }  // namespace

  // Views -------------------------------------------------------------------------

  MapView map_view(Diagram const& d) {
    MapView v;
    auto    n = d.rotation.size();
    v.vertex_of.assign(n, UINT32_MAX);
    v.face_of.assign(n, UINT32_MAX);
    for (Dart x = 0; x < n; ++x) {
      if (v.vertex_of[x] == UINT32_MAX) {
        auto cyc = orbit(d.rotation, x);
        for (Dart y : cyc) {
          v.vertex_of[y] = static_cast<std::uint32_t>(v.vertices.size());
        }
        v.vertices.push_back(std::move(cyc));
      }
    }
    auto phi = phi_of(d);
    for (Dart x = 0; x < n; ++x) {
      if (v.face_of[x] == UINT32_MAX) {
        auto cyc = orbit(phi, x);
        for (Dart y : cyc) {
          v.face_of[y] = static_cast<std::uint32_t>(v.faces.size());
        }
        v.faces.push_back(std::move(cyc));
      }
    }
    if (d.topology == Topology::Disk && d.outer && *d.outer < n) {
      v.outer_face = v.face_of[*d.outer];
    }
    return v;
  }

  void validate_map(Diagram const& d) {
    auto n = d.rotation.size();
    if (n != 2 * d.labels.size()) {
      fail(ErrorCode::InvalidMap, "rotation must list two darts per edge");
    }
    std::vector<char> hit(n, 0);
    for (Dart x : d.rotation) {
      if (x >= n || hit[x] != 0) {
        fail(ErrorCode::InvalidMap, "rotation is not a permutation of the darts");
      }
      hit[x] = 1;
    }
    for (auto const& l : d.labels) {
      if (l && l->gen >= d.alphabet.size()) {
        fail(ErrorCode::InvalidMap, "edge label outside the alphabet");
      }
    }
    if (d.topology == Topology::Sphere && d.outer) {
      fail(ErrorCode::InvalidMap, "a sphere has no outer face");
    }
    if (d.topology == Topology::Disk && n > 0 && (!d.outer || *d.outer >= n)) {
      fail(ErrorCode::InvalidMap, "a disk must name a dart of its outer face");
    }
    if (n == 0) {
      return;
    }
    // Connectivity through rotation and reversal.
    std::vector<char> seen(n, 0);
    std::vector<Dart> stack{0};
    seen[0]          = 1;
    std::size_t done = 1;
    while (!stack.empty()) {
      Dart x = stack.back();
      stack.pop_back();
      for (Dart y : {d.rotation[x], dart_reverse(x)}) {
        if (seen[y] == 0) {
          seen[y] = 1;
          ++done;
          stack.push_back(y);
        }
      }
    }
    if (done != n) {
      fail(ErrorCode::InvalidMap, "map is not connected");
    }
    auto v     = map_view(d);
    auto euler = static_cast<std::int64_t>(v.num_vertices()) - static_cast<std::int64_t>(d.labels.size())
                 + static_cast<std::int64_t>(v.num_faces());
    if (euler != 2) {
      fail(ErrorCode::InvalidMap, "V - E + F = " + std::to_string(euler) + ", expected 2");
    }
  }

  Diagram diagram_from_faces(Alphabet alphabet, std::vector<DiagramLabel> labels,
                             std::vector<std::vector<Dart>> const& faces, Topology topology,
                             std::optional<std::size_t> outer_face) {
    auto              n = 2 * labels.size();
    std::vector<Dart> phi(n, UINT32_MAX);
    for (auto const& f : faces) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= n || phi[f[i]] != UINT32_MAX) {
          fail(ErrorCode::InvalidMap, "every dart must lie on exactly one face");
        }
        phi[f[i]] = f[(i + 1) % f.size()];
      }
    }
    if (std::find(phi.begin(), phi.end(), UINT32_MAX) != phi.end()) {
      fail(ErrorCode::InvalidMap, "every dart must lie on exactly one face");
    }
    std::optional<Dart> outer;
    if (topology == Topology::Disk && n > 0) {
      if (!outer_face || *outer_face >= faces.size() || faces[*outer_face].empty()) {
        fail(ErrorCode::InvalidMap, "a disk must name its outer face");
      }
      outer = faces[*outer_face].front();
    }
    return from_phi(std::move(alphabet), std::move(labels), phi, topology, outer);
  }

  FaceView face_at(Diagram const& d, Dart on_face) {
    if (on_face >= d.rotation.size()) {
      fail(ErrorCode::Precondition, "dart out of range");
    }
    auto     walk = orbit(phi_of(d), on_face);
    auto     it   = std::min_element(walk.begin(), walk.end());
    std::rotate(walk.begin(), it, walk.end());
    FaceView f;
    f.first  = walk.front();
    f.word   = read_walk(d, walk);
    f.degree = walk.size();
    f.darts  = std::move(walk);
    return f;
  }

  std::vector<FaceView> faces(Diagram const& d) {
    auto                  v = map_view(d);
    std::vector<FaceView> out;
    for (std::uint32_t f = 0; f < v.faces.size(); ++f) {
      if (v.outer_face && *v.outer_face == f) {
        continue;
      }
      FaceView fv;
      fv.first  = v.faces[f].front();
      fv.word   = read_walk(d, v.faces[f]);
      fv.degree = v.faces[f].size();
      fv.darts  = v.faces[f];
      out.push_back(std::move(fv));
    }
    return out;
  }

  Word boundary_word(Diagram const& d) {
    if (d.topology != Topology::Disk || !d.outer) {
      return {};
    }
    auto walk = orbit(phi_of(d), *d.outer);
    std::reverse(walk.begin(), walk.end());
    for (auto& x : walk) {
      x = dart_reverse(x);
    }
    return read_walk(d, walk);
  }

  bool cyclically_equal(Word const& u, Word const& v) {
    if (u.size() != v.size()) {
      return false;
    }
    if (u.empty()) {
      return true;
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (rotate(u, k) == v) {
        return true;
      }
    }
    return false;
  }

  // Curvature ---------------------------------------------------------------------

  Rational curvature_audit(Diagram const& d) {
    if (d.topology != Topology::Sphere) {
      fail(ErrorCode::Precondition, "curvature audit needs a sphere");
    }
    validate_map(d);
    auto v = map_view(d);
    if (d.labels.empty()) {
      return Rational(3) + Rational(6, 2);
    }
    Rational total(0);
    for (auto const& cyc : v.vertices) {
      total += Rational(3 - static_cast<std::int64_t>(cyc.size()));
    }
    for (auto const& cyc : v.faces) {
      total += Rational(6 - static_cast<std::int64_t>(cyc.size()), 2);
    }
    return total;
  }

  Diagram as_sphere(Diagram const& d) {
    Diagram s  = d;
    s.topology = Topology::Sphere;
    s.outer.reset();
    return s;
  }

  // Construction ----------------------------------------------------------------------

  namespace {

    void require_in_range(Diagram const& d, Dart y) {
      if (y >= d.rotation.size()) {
        fail(ErrorCode::Precondition, "dart out of range");
      }
    }

    struct Extended {
      std::vector<DiagramLabel> labels;
      std::vector<Dart>         phi;
      std::vector<Dart>         path;
    };

    Extended extend(Diagram const& d, Word const& word) {
      if (word.empty()) {
        fail(ErrorCode::Precondition, "inserted path must be nonempty");
      }
      Extended x{d.labels, phi_of(d), {}};
      for (auto l : word) {
        x.path.push_back(static_cast<Dart>(2 * x.labels.size()));
        x.labels.push_back(l);
      }
      x.phi.resize(2 * x.labels.size());
      for (std::size_t i = 0; i + 1 < x.path.size(); ++i) {
        x.phi[x.path[i]]                      = x.path[i + 1];
        x.phi[dart_reverse(x.path[i + 1])] = dart_reverse(x.path[i]);
      }
      return x;
    }

    Dart phi_inv(std::vector<Dart> const& phi, Dart y) {
      Dart x = y;
      while (phi[x] != y) {
        x = phi[x];
      }
      return x;
    }

  }  // namespace

  Inserted insert_path(Diagram const& d, Dart y1, Dart y2, Word const& word) {
    auto x = extend(d, word);
    auto first = x.path.front(), last = x.path.back();
    std::optional<Dart> outer = d.outer;
    if (d.labels.empty()) {
      x.phi[last]                = first;
      x.phi[dart_reverse(first)] = dart_reverse(last);
      if (d.topology == Topology::Disk) {
        outer = dart_reverse(first);
      }
    } else {
      require_in_range(d, y1);
      require_in_range(d, y2);
      auto old_phi = phi_of(d);
      auto walk    = orbit(old_phi, y1);
      if (std::find(walk.begin(), walk.end(), y2) == walk.end()) {
        fail(ErrorCode::Precondition, "insert_path: corners lie on different faces");
      }
      bool was_outer = d.outer && std::find(walk.begin(), walk.end(), *d.outer) != walk.end();
      Dart x1        = phi_inv(old_phi, y1);
      if (y1 == y2) {
        x.phi[x1]                  = first;
        x.phi[last]                = y1;
        x.phi[dart_reverse(first)] = dart_reverse(last);
      } else {
        Dart x2                    = phi_inv(old_phi, y2);
        x.phi[x1]                  = first;
        x.phi[last]                = y2;
        x.phi[x2]                  = dart_reverse(last);
        x.phi[dart_reverse(first)] = y1;
      }
      if (was_outer) {
        outer = first;
      }
    }
    Inserted out;
    out.diagram = from_phi(d.alphabet, std::move(x.labels), x.phi, d.topology, outer);
    out.path    = std::move(x.path);
    return out;
  }

  Inserted insert_spike(Diagram const& d, Dart y, Word const& word) {
    auto x = extend(d, word);
    auto first = x.path.front(), last = x.path.back();
    std::optional<Dart> outer = d.outer;
    x.phi[last] = dart_reverse(last);
    if (d.labels.empty()) {
      x.phi[dart_reverse(first)] = first;
      if (d.topology == Topology::Disk) {
        outer = first;
      }
    } else {
      require_in_range(d, y);
      auto old_phi               = phi_of(d);
      x.phi[phi_inv(old_phi, y)] = first;
      x.phi[dart_reverse(first)] = y;
    }
    Inserted out;
    out.diagram = from_phi(d.alphabet, std::move(x.labels), x.phi, d.topology, outer);
    out.path    = std::move(x.path);
    return out;
  }

  Diagram stellar_subdivide(Diagram const& d, Dart on_face, DiagramLabel label) {
    require_in_range(d, on_face);
    auto phi  = phi_of(d);
    auto walk = orbit(phi, on_face);
    if (d.outer && std::find(walk.begin(), walk.end(), *d.outer) != walk.end()) {
      fail(ErrorCode::Precondition, "cannot subdivide the outer face");
    }
    auto labels = d.labels;
    auto k      = walk.size();
    auto base   = static_cast<Dart>(2 * labels.size());
    labels.resize(labels.size() + k, label);
    phi.resize(2 * labels.size());
    // Spoke i runs from the origin of walk[i] to the centre.
    auto out = [&](std::size_t i) { return base + static_cast<Dart>(2 * (i % k)); };
    for (std::size_t i = 0; i < k; ++i) {
      phi[walk[i]]             = out(i + 1);
      phi[out(i + 1)]          = dart_reverse(out(i));
      phi[dart_reverse(out(i))] = walk[i];
    }
    return from_phi(d.alphabet, std::move(labels), phi, d.topology, d.outer);
  }

  namespace {

    // Sphere from vertex cycles, oriented consistently by flipping faces.
    Diagram solid(Alphabet const& alphabet, DiagramLabel label,
                  std::vector<std::vector<std::uint32_t>> cycles) {
      using Key = std::pair<std::uint32_t, std::uint32_t>;
      auto has  = [](std::vector<std::uint32_t> const& c, std::uint32_t a, std::uint32_t b) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (c[i] == a && c[(i + 1) % c.size()] == b) {
            return true;
          }
        }
        return false;
      };
      std::vector<char>        oriented(cycles.size(), 0);
      std::vector<std::size_t> stack{0};
      oriented[0] = 1;
      while (!stack.empty()) {
        auto f = stack.back();
        stack.pop_back();
        auto const& c = cycles[f];
        for (std::size_t i = 0; i < c.size(); ++i) {
          auto a = c[i], b = c[(i + 1) % c.size()];
          for (std::size_t g = 0; g < cycles.size(); ++g) {
            if (oriented[g] != 0 || (!has(cycles[g], a, b) && !has(cycles[g], b, a))) {
              continue;
            }
            if (has(cycles[g], a, b)) {
              std::reverse(cycles[g].begin(), cycles[g].end());
            }
            oriented[g] = 1;
            stack.push_back(g);
          }
        }
      }
      std::map<Key, std::uint32_t>   edge;
      std::vector<std::vector<Dart>> faces;
      std::uint32_t                  count = 0;
      for (auto const& c : cycles) {
        std::vector<Dart> f;
        for (std::size_t i = 0; i < c.size(); ++i) {
          auto a = c[i], b = c[(i + 1) % c.size()];
          if (auto it = edge.find({b, a}); it != edge.end()) {
            f.push_back(2 * it->second + 1);
          } else {
            edge[{a, b}] = count;
            f.push_back(2 * count++);
          }
        }
        faces.push_back(std::move(f));
      }
      return diagram_from_faces(alphabet, std::vector<DiagramLabel>(count, label), faces,
                                Topology::Sphere);
    }

  }  // namespace

  Diagram tetrahedron(Alphabet const& alphabet, DiagramLabel label) {
    return solid(alphabet, label, {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
  }

  Diagram cube(Alphabet const& alphabet, DiagramLabel label) {
    return solid(alphabet, label,
                 {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}});
  }

  Diagram dodecahedron(Alphabet const& alphabet, DiagramLabel label) {
    // Rings of five: top t, upper a, lower b, bottom c.
    auto t = [](std::uint32_t i) { return i % 5; };
    auto a = [](std::uint32_t i) { return 5 + i % 5; };
    auto b = [](std::uint32_t i) { return 10 + i % 5; };
    auto c = [](std::uint32_t i) { return 15 + i % 5; };
    std::vector<std::vector<std::uint32_t>> cycles{{t(0), t(1), t(2), t(3), t(4)},
                                                   {c(0), c(1), c(2), c(3), c(4)}};
    for (std::uint32_t i = 0; i < 5; ++i) {
      cycles.push_back({t(i), t(i + 1), a(i + 1), b(i), a(i)});
      cycles.push_back({b(i), c(i), c(i + 1), b(i + 1), a(i + 1)});
    }
    return solid(alphabet, label, cycles);
  }

  // Moves --------------------------------------------------------------------------

  Diagram fold_boundary(Diagram const& d) {
    if (d.topology != Topology::Disk) {
      fail(ErrorCode::Precondition, "folding needs a disk");
    }
    if (!d.outer) {
      fail(ErrorCode::NothingToFold, "boundary is empty");
    }
    Work w(d);
    auto walk = w.walk(*d.outer);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      Dart d1 = walk[i], d2 = walk[(i + 1) % walk.size()];
      if (walk.size() < 2 || !inverse_pair(w.label(d1), w.label(d2))) {
        continue;
      }
      w.fold(d1);
      w.outer = survivor(w, walk, d1, d2);
      return w.finish();
    }
    fail(ErrorCode::NothingToFold, "no two consecutive boundary edges have inverse labels");
  }

  Diagram fold_boundary_fully(Diagram const& d) {
    Diagram cur = d;
    for (;;) {
      try {
        cur = fold_boundary(cur);
      } catch (Error const& e) {
        if (e.code() == ErrorCode::NothingToFold) {
          return cur;
        }
        throw;
      }
    }
  }

  Diagram contract_identity_edge(Diagram const& d, std::uint32_t edge) {
    if (edge >= d.labels.size() || d.labels[edge]) {
      fail(ErrorCode::Precondition, "contraction needs an edge labelled 1");
    }
    Work w(d);
    w.contract(edge);
    return w.finish();
  }

  Diagram remove_identity_loop(Diagram const& d, std::uint32_t edge) {
    if (edge >= d.labels.size() || d.labels[edge]) {
      fail(ErrorCode::Precondition, "loop removal needs an edge labelled 1");
    }
    Work w(d);
    w.remove_loop(edge);
    return w.finish();
  }

  Diagram replace_bigon(Diagram const& d, Dart on_face) {
    require_in_range(d, on_face);
    Work w(d);
    auto walk = w.walk(on_face);
    if (walk.size() != 2 || dart_edge(walk[0]) == dart_edge(walk[1])
        || !inverse_pair(w.label(walk[0]), w.label(walk[1]))) {
      fail(ErrorCode::Precondition, "face is not labelled s s^-1");
    }
    if (d.outer && std::find(walk.begin(), walk.end(), *d.outer) != walk.end()) {
      fail(ErrorCode::Precondition, "cannot replace the outer face");
    }
    w.kill({dart_edge(walk[1])});
    return w.finish();
  }

  Diagram eliminate_zero_faces(Diagram const& d) {
    Work w(d);
    while (w.zero_face_step()) {
    }
    return w.finish();
  }

  Diagram cancel_inverse_faces(Diagram const& d, Dart on_f1, Dart on_f2) {
    require_in_range(d, on_f1);
    require_in_range(d, on_f2);
    Work w(d);
    auto f1 = w.walk(on_f1);
    auto f2 = w.walk(on_f2);
    auto on = [](std::vector<Dart> const& walk, Dart x) {
      return std::find(walk.begin(), walk.end(), x) != walk.end();
    };
    if (on(f1, on_f2)) {
      fail(ErrorCode::Precondition, "both darts lie on one face");
    }
    if (d.outer && (on(f1, *d.outer) || on(f2, *d.outer))) {
      fail(ErrorCode::Precondition, "the outer face cannot be cancelled");
    }
    auto read_from = [&](Dart y) {
      Word out;
      for (Dart x : w.walk(y)) {
        if (auto l = w.label(x)) {
          out.push_back(*l);
        }
      }
      return out;
    };
    std::optional<std::pair<Dart, Dart>> corner;
    for (Dart y1 : f1) {
      for (Dart y2 : f2) {
        if (!corner && w.same_vertex(y1, y2)
            && free_reduce(concat(read_from(y1), read_from(y2))).empty()) {
          corner = {y1, y2};
        }
      }
    }
    if (!corner) {
      fail(ErrorCode::NotFreelyInverse,
           "no common vertex from which the two labels cancel freely");
    }
    auto before    = boundary_word(d);
    auto old_bigon = w.bigons();
    // Join the faces at the common vertex, splitting it in two.
    auto [y1, y2] = *corner;
    Dart s1 = w.sigma_inv(y1), s2 = w.sigma_inv(y2);
    w.sigma[s1] = y2;
    w.sigma[s2] = y1;
    Dart cur = y1;
    for (;;) {
      auto pi = w.walk(cur);
      std::optional<Dart> d1;
      for (std::size_t i = 0; i < pi.size() && !d1; ++i) {
        if (inverse_pair(w.label(pi[i]), w.label(pi[(i + 1) % pi.size()]))) {
          d1 = pi[i];
        }
      }
      std::optional<Dart> next;
      if (d1) {
        Dart d2 = w.phi(*d1);
        w.fold(*d1);
        next = survivor(w, pi, *d1, d2);
      } else {
        auto id = std::find_if(pi.begin(), pi.end(), [&](Dart x) { return !w.label(x); });
        if (id == pi.end()) {
          fail(ErrorCode::AssertionFailed, "joined face has no foldable pair");
        }
        auto e = dart_edge(*id);
        if (w.same_vertex(2 * e, 2 * e + 1)) {
          w.remove_loop(e);
        } else {
          w.contract(e);
        }
        next = survivor(w, pi, 2 * e, 2 * e + 1);
      }
      if (!next) {
        break;
      }
      cur = *next;
    }
    while (w.zero_face_step(old_bigon)) {
    }
    auto out = w.finish();
    if (d.topology == Topology::Disk && !cyclically_equal(before, boundary_word(out))) {
      fail(ErrorCode::AssertionFailed, "cancellation changed the boundary word");
    }
    return out;
  }

  Diagram replace_face(Diagram const& d, Dart on_face, Diagram const& sub) {
    require_in_range(d, on_face);
    if (sub.topology != Topology::Disk || !sub.outer) {
      fail(ErrorCode::Precondition, "replacement must be a nonempty disk");
    }
    auto phi  = phi_of(d);
    auto face = orbit(phi, on_face);
    if (d.outer && std::find(face.begin(), face.end(), *d.outer) != face.end()) {
      fail(ErrorCode::Precondition, "cannot replace the outer face");
    }
    auto sphi  = phi_of(sub);
    auto souter = orbit(sphi, *sub.outer);
    std::vector<char> is_outer(sub.rotation.size(), 0);
    for (Dart o : souter) {
      is_outer[o] = 1;
    }
    // Boundary darts of sub seen from inside, in the face's direction.
    std::vector<Dart> inner(souter.rbegin(), souter.rend());
    for (auto& x : inner) {
      x = dart_reverse(x);
    }
    auto k = face.size();
    if (inner.size() != k) {
      fail(ErrorCode::Precondition, "replacement boundary length differs from the face");
    }
    std::optional<std::size_t> shift;
    for (std::size_t r = 0; r < k && !shift; ++r) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        ok = d.dart_label(face[i]) == sub.dart_label(inner[(i + r) % k]);
      }
      if (ok) {
        shift = r;
      }
    }
    if (!shift) {
      fail(ErrorCode::Precondition, "replacement boundary word does not match the face");
    }
    std::vector<Dart> image(sub.rotation.size(), UINT32_MAX);
    auto assign = [&](Dart x, Dart y) {
      for (auto [p, q] : {std::pair{x, y}, std::pair{dart_reverse(x), dart_reverse(y)}}) {
        if (image[p] != UINT32_MAX && image[p] != q) {
          fail(ErrorCode::Precondition, "replacement boundary is glued inconsistently");
        }
        image[p] = q;
      }
    };
    for (std::size_t i = 0; i < k; ++i) {
      assign(inner[(i + *shift) % k], face[i]);
    }
    auto labels = d.labels;
    for (std::uint32_t e = 0; e < sub.labels.size(); ++e) {
      if (image[2 * e] == UINT32_MAX) {
        auto id = static_cast<Dart>(labels.size());
        labels.push_back(sub.labels[e]);
        image[2 * e]     = 2 * id;
        image[2 * e + 1] = 2 * id + 1;
      }
    }
    phi.resize(2 * labels.size());
    for (Dart x = 0; x < sub.rotation.size(); ++x) {
      if (is_outer[x] == 0) {
        phi[image[x]] = image[sphi[x]];
      }
    }
    try {
      return from_phi(d.alphabet, std::move(labels), phi, d.topology, d.outer);
    } catch (Error const& e) {
      if (e.code() == ErrorCode::InvalidMap) {
        fail(ErrorCode::Precondition, std::string("replacement does not glue to a disk: ") + e.what());
      }
      throw;
    }
  }

  // Degrees and shapes --------------------------------------------------------------------

  namespace {

    // Arcs of one face walk: (exterior?, first position) per arc.
    std::vector<std::pair<bool, std::size_t>> face_arcs(std::vector<Dart> const& walk,
                                                        std::vector<std::size_t> const& deg,
                                                        std::vector<char> const& on_outer) {
      auto ext = [&](Dart x) { return on_outer[dart_reverse(x)] != 0; };
      auto k   = walk.size();
      std::vector<std::pair<bool, std::size_t>> arcs;
      for (std::size_t i = 0; i < k; ++i) {
        Dart prev = walk[(i + k - 1) % k];
        if (deg[walk[i]] != 2 || ext(prev) != ext(walk[i])) {
          arcs.emplace_back(ext(walk[i]), i);
        }
      }
      if (arcs.empty() && k > 0) {
        arcs.emplace_back(ext(walk[0]), 0);
      }
      return arcs;
    }

    struct DegreeContext {
      MapView                  view;
      std::vector<std::size_t> deg;
      std::vector<char>        on_outer;
    };

    DegreeContext degree_context(Diagram const& d) {
      DegreeContext c{map_view(d), {}, {}};
      c.deg = vertex_degrees(c.view, d.rotation.size());
      c.on_outer.assign(d.rotation.size(), 0);
      if (c.view.outer_face) {
        for (Dart x : c.view.faces[*c.view.outer_face]) {
          c.on_outer[x] = 1;
        }
      }
      return c;
    }

    FaceDegrees count_arcs(DegreeContext const& c, std::vector<Dart> const& walk) {
      FaceDegrees out;
      for (auto [ext, pos] : face_arcs(walk, c.deg, c.on_outer)) {
        (ext ? out.exterior : out.interior) += 1;
      }
      return out;
    }

  }  // namespace

  FaceDegrees degrees(Diagram const& d, Dart on_face) {
    require_in_range(d, on_face);
    auto c = degree_context(d);
    if (c.on_outer[on_face] != 0) {
      fail(ErrorCode::Precondition, "degrees are defined for faces, not the outside");
    }
    return count_arcs(c, c.view.faces[c.view.face_of[on_face]]);
  }

  ShapeVerdict is_37_diagram(Diagram const& d) {
    auto c = degree_context(d);
    for (std::uint32_t f = 0; f < c.view.faces.size(); ++f) {
      if (c.view.outer_face && *c.view.outer_face == f) {
        continue;
      }
      auto deg = count_arcs(c, c.view.faces[f]);
      if (deg.exterior == 0 && deg.interior < 7) {
        return {false, c.view.faces[f].front(),
                "interior face of interior degree " + std::to_string(deg.interior)};
      }
    }
    return {};
  }

  ShapeVerdict shape_i1(Diagram const& d) {
    if (d.topology != Topology::Disk) {
      fail(ErrorCode::Precondition, "shape I1 is a property of disks");
    }
    auto c = degree_context(d);
    std::vector<std::uint32_t> inner;
    for (std::uint32_t f = 0; f < c.view.faces.size(); ++f) {
      if (!c.view.outer_face || *c.view.outer_face != f) {
        inner.push_back(f);
      }
    }
    if (d.labels.empty() || inner.empty()) {
      return {false, std::nullopt, "no faces"};
    }
    if (inner.size() == 1) {
      return {};
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> adj;
    for (std::uint32_t e = 0; e < d.labels.size(); ++e) {
      auto p = c.view.face_of[2 * e], q = c.view.face_of[2 * e + 1];
      if (c.on_outer[2 * e] != 0 || c.on_outer[2 * e + 1] != 0) {
        continue;
      }
      if (p == q) {
        return {false, c.view.faces[p].front(), "face meets itself along an interior edge"};
      }
      adj.insert({std::min(p, q), std::max(p, q)});
    }
    std::map<std::uint32_t, std::size_t> valence;
    for (auto [p, q] : adj) {
      ++valence[p];
      ++valence[q];
    }
    if (adj.size() + 1 != inner.size()) {
      return {false, std::nullopt, "faces do not form a chain"};
    }
    std::size_t ends = 0;
    for (auto f : inner) {
      auto v   = valence[f];
      auto deg = count_arcs(c, c.view.faces[f]);
      if (v == 0 || v > 2) {
        return {false, c.view.faces[f].front(), "face has " + std::to_string(v) + " neighbours"};
      }
      std::size_t want = v;  // ends: e = i = 1, middle: e = i = 2
      if (deg.exterior != want || deg.interior != want) {
        return {false, c.view.faces[f].front(),
                "face has e = " + std::to_string(deg.exterior) + ", i = "
                    + std::to_string(deg.interior)};
      }
      ends += v == 1 ? 1 : 0;
    }
    if (ends != 2) {
      return {false, std::nullopt, "faces do not form a chain"};
    }
    return {};
  }

  // Diagrams over graphs -----------------------------------------------------------

  namespace {

    std::optional<std::vector<Dart>> simple_closed_lift(LabelledGraph const& g, std::uint32_t z,
                                                        Word const& word) {
      std::vector<Dart> path;
      std::vector<char> used(g.num_vertices(), 0);
      used[z] = 1;
      std::function<bool(std::uint32_t)> go = [&](std::uint32_t v) {
        auto i = path.size();
        if (i == word.size()) {
          return v == z;
        }
        for (Dart x : g.darts_at(v)) {
          if (g.label(x) != word[i]) {
            continue;
          }
          auto t    = g.target(x);
          bool last = i + 1 == word.size();
          if (last ? t != z : used[t] != 0) {
            continue;
          }
          path.push_back(x);
          used[t] = last ? used[t] : 1;
          if (go(t)) {
            return true;
          }
          if (!last) {
            used[t] = 0;
          }
          path.pop_back();
        }
        return false;
      };
      if (go(z)) {
        return path;
      }
      return std::nullopt;
    }

    struct Lifted {
      std::vector<FaceView>              faces;
      std::vector<std::vector<Dart>>     lift;   // per face, per position
      std::map<Dart, std::pair<std::size_t, std::size_t>> where;  // dart -> (face, pos)
      LiftVerdict                        verdict;
    };

    Lifted lift_faces(Diagram const& d, LabelledGraph const& g) {
      Lifted out;
      out.faces = faces(d);
      for (std::size_t f = 0; f < out.faces.size(); ++f) {
        auto const& fv = out.faces[f];
        if (fv.word.size() != fv.degree) {
          fail(ErrorCode::NoLift, "face " + std::to_string(f) + " has an edge labelled 1");
        }
        std::optional<std::vector<Dart>> found;
        std::uint32_t                    start = 0;
        for (std::uint32_t z = 0; z < g.num_vertices() && !found; ++z) {
          found = simple_closed_lift(g, z, fv.word);
          start = z;
        }
        if (!found) {
          fail(ErrorCode::NoLift, "face " + std::to_string(f) + " (" + format_word(fv.word, d.alphabet)
                                      + ") is not read along a simple closed path");
        }
        for (std::size_t i = 0; i < fv.darts.size(); ++i) {
          out.where[fv.darts[i]] = {f, i};
        }
        out.lift.push_back(std::move(*found));
        out.verdict.lifts.push_back(start);
      }
      return out;
    }

    void check_interior_edges(Diagram const& d, LabelledGraph const& g, Lifted& l) {
      auto aut = automorphism_group(g);
      for (std::uint32_t e = 0; e < d.labels.size() && l.verdict.pass; ++e) {
        auto p = l.where.find(2 * e), q = l.where.find(2 * e + 1);
        if (p == l.where.end() || q == l.where.end()) {
          continue;  // on the boundary
        }
        Dart via_p = l.lift[p->second.first][p->second.second];
        Dart via_q = dart_reverse(l.lift[q->second.first][q->second.second]);
        if (aut.vertex_orbit[g.origin(via_p)] == aut.vertex_orbit[g.origin(via_q)]) {
          l.verdict.pass   = false;
          l.verdict.edge   = e;
          l.verdict.reason = "interior edge " + std::to_string(e)
                             + " essentially originates from the graph";
        }
      }
    }

  }  // namespace

  LiftVerdict validate_over_graph(Diagram const& d, LabelledGraph const& g) {
    auto l = lift_faces(d, g);
    check_interior_edges(d, g, l);
    return l.verdict;
  }

  LiftVerdict validate_over_completion(Diagram const& d, Completion const& c) {
    auto l = lift_faces(d, c.graph);
    check_interior_edges(d, c.graph, l);
    if (!l.verdict.pass) {
      return l.verdict;
    }
    auto ctx = degree_context(d);
    for (std::size_t f = 0; f < l.faces.size(); ++f) {
      auto const& walk = l.faces[f].darts;
      auto        arcs = face_arcs(walk, ctx.deg, ctx.on_outer);
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (arcs[a].first) {
          continue;
        }
        auto begin = arcs[a].second;
        auto len   = arcs.size() == 1 ? walk.size()
                                      : (arcs[(a + 1) % arcs.size()].second + walk.size() - begin)
                                          % walk.size();
        PathSpec p;
        p.start = c.graph.origin(l.lift[f][begin]);
        for (std::size_t i = 0; i < len; ++i) {
          p.darts.push_back(l.lift[f][(begin + i) % walk.size()]);
        }
        if (!locally_geodesic(c, p)) {
          l.verdict.pass   = false;
          l.verdict.edge   = dart_edge(walk[begin]);
          l.verdict.reason = "interior arc through edge " + std::to_string(dart_edge(walk[begin]))
                             + " does not lift to a locally geodesic path";
          return l.verdict;
        }
      }
    }
    return l.verdict;
  }

  // Text form ---------------------------------------------------------------------------

  namespace {

    std::string dart_text(Dart x) {
      return std::to_string(dart_edge(x)) + (dart_backward(x) ? "-" : "+");
    }

    Dart parse_dart(std::string const& tok, std::size_t line) {
      auto bad = [&] { fail(ErrorCode::Parse, "line " + std::to_string(line) + ": bad dart '" + tok + "'"); };
      if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-')) {
        bad();
      }
      std::uint64_t e = 0;
      for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9' || e > UINT32_MAX / 4) {
          bad();
        }
        e = 10 * e + static_cast<std::uint64_t>(tok[i] - '0');
      }
      return static_cast<Dart>(2 * e + (tok.back() == '-' ? 1 : 0));
    }

  }  // namespace

  Diagram parse_diagram(std::string_view text) {
    Diagram                        d;
    std::vector<std::vector<Dart>> cycles;
    std::optional<Dart>            outer;
    bool                           have_topology = false;
    std::istringstream             in{std::string(text)};
    std::string                    line;
    std::size_t                    number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream ls(line);
      std::string        key;
      if (!(ls >> key)) {
        continue;
      }
      std::string rest;
      std::getline(ls, rest);
      auto where = "line " + std::to_string(number) + ": ";
      if (key == "topology:") {
        std::istringstream rs(rest);
        std::string        t;
        rs >> t;
        if (t != "disk" && t != "sphere") {
          fail(ErrorCode::Parse, where + "topology must be disk or sphere");
        }
        d.topology    = t == "disk" ? Topology::Disk : Topology::Sphere;
        have_topology = true;
      } else if (key == "alphabet:") {
        std::istringstream       rs(rest);
        std::vector<std::string> names;
        for (std::string n; rs >> n;) {
          names.push_back(n);
        }
        d.alphabet = Alphabet(names);
      } else if (key == "edge") {
        auto w = parse_word(rest, d.alphabet);
        if (w.size() > 1) {
          fail(ErrorCode::Parse, where + "an edge carries one letter or 1");
        }
        d.labels.push_back(w.empty() ? DiagramLabel{} : DiagramLabel{w[0]});
      } else if (key == "vertex") {
        std::istringstream rs(rest);
        std::vector<Dart>  cyc;
        for (std::string tok; rs >> tok;) {
          cyc.push_back(parse_dart(tok, number));
        }
        if (cyc.empty()) {
          fail(ErrorCode::Parse, where + "vertex without darts");
        }
        cycles.push_back(std::move(cyc));
      } else if (key == "outer") {
        std::istringstream rs(rest);
        std::string        tok;
        rs >> tok;
        outer = parse_dart(tok, number);
      } else {
        fail(ErrorCode::Parse, where + "unknown key '" + key + "'");
      }
    }
    if (!have_topology) {
      fail(ErrorCode::Parse, "missing topology line");
    }
    auto n = 2 * d.labels.size();
    d.rotation.assign(n, UINT32_MAX);
    for (auto const& cyc : cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        if (cyc[i] >= n || d.rotation[cyc[i]] != UINT32_MAX) {
          fail(ErrorCode::InvalidMap, "dart " + dart_text(cyc[i]) + " is missing or repeated");
        }
        d.rotation[cyc[i]] = cyc[(i + 1) % cyc.size()];
      }
    }
    if (std::find(d.rotation.begin(), d.rotation.end(), UINT32_MAX) != d.rotation.end()) {
      fail(ErrorCode::InvalidMap, "some dart lies at no vertex");
    }
    d.outer = outer;
    if (d.outer && *d.outer >= n) {
      fail(ErrorCode::InvalidMap, "outer dart out of range");
    }
    validate_map(d);
    normalise(d);
    return d;
  }

  std::string format_diagram(Diagram const& d) {
    std::ostringstream out;
    out << "topology: " << (d.topology == Topology::Disk ? "disk" : "sphere") << '\n';
    out << "alphabet:";
    for (auto const& n : d.alphabet.names()) {
      out << ' ' << n;
    }
    out << '\n';
    for (auto const& l : d.labels) {
      out << "edge " << (l ? format_word(Word{*l}, d.alphabet) : std::string("1")) << '\n';
    }
    auto v = map_view(d);
    for (auto const& cyc : v.vertices) {
      out << "vertex";
      for (Dart x : cyc) {
        out << ' ' << dart_text(x);
      }
      out << '\n';
    }
    if (d.topology == Topology::Disk && d.outer) {
      out << "outer " << dart_text(*d.outer) << '\n';
    }
    return out.str();
  }

}  // namespace sctk
