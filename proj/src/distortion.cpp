#include "sctk/distortion.hpp"

#include <algorithm>  // for max
#include <sstream>    // for ostringstream

#include "json.hpp"
#include "sctk/errors.hpp"

namespace sctk {

  namespace {

    void require_root(Word const& w) {
      if (w.empty() || !is_cyclically_reduced(w)) {
        fail(ErrorCode::Precondition, "w must be nonempty and cyclically reduced");
      }
      if (is_proper_power(w)) {
        fail(ErrorCode::Precondition, "w must not be a proper power");
      }
    }

    void require_reduced(LabelledGraph const& g) {
      auto v = validate_reduced(g);
      if (!v.reduced) {
        fail(ErrorCode::Precondition,
             "graph is not reduced at vertex " + g.vertex_name(v.vertex));
      }
    }

    // The functional graph on states (v, o, j); next dart or none.
    struct RayStates {
      LabelledGraph const& g;
      Word                 words[2];
      std::uint64_t        L;

      RayStates(LabelledGraph const& graph, Word const& w)
          : g(graph), words{w, inverse(w)}, L(w.size()) {}

      std::size_t size() const {
        return g.num_vertices() * 2 * L;
      }
      std::size_t state(std::uint32_t v, int o, std::uint64_t j) const {
        return (std::size_t(v) * 2 + o) * L + j;
      }
      std::uint32_t vertex(std::size_t s) const {
        return static_cast<std::uint32_t>(s / (2 * L));
      }
      int orientation(std::size_t s) const {
        return static_cast<int>((s / L) % 2);
      }
      std::uint64_t phase(std::size_t s) const {
        return s % L;
      }
      std::optional<Dart> dart(std::size_t s) const {
        return g.step(vertex(s), words[orientation(s)][phase(s)]);
      }
      std::size_t next(std::size_t s, Dart d) const {
        return state(g.target(d), orientation(s), (phase(s) + 1) % L);
      }
    };

    RayPath follow(RayStates const& rs, std::size_t s, std::uint64_t steps) {
      RayPath rp{{rs.vertex(s), {}}, rs.orientation(s), rs.phase(s)};
      for (std::uint64_t k = 0; k < steps; ++k) {
        auto d = rs.dart(s);
        rp.path.darts.push_back(*d);
        s = rs.next(s, *d);
      }
      return rp;
    }

  }  // namespace

  RayScan subword_ray_scan(LabelledGraph const& g, Word const& w) {
    require_root(w);
    require_reduced(g);
    RayStates rs(g, w);
    RayScan   out;

    // depth: longest chain from a state; colour 0 new, 1 on stack, 2 done
    std::vector<std::uint64_t> depth(rs.size(), 0);
    std::vector<char>          colour(rs.size(), 0);
    std::vector<std::size_t>   stack;
    for (std::size_t s0 = 0; s0 < rs.size(); ++s0) {
      if (colour[s0] != 0) {
        continue;
      }
      std::size_t   s    = s0;
      std::uint64_t base = 0;
      for (;;) {
        if (colour[s] == 2) {
          base = depth[s];
          break;
        }
        if (colour[s] == 1) {
          // s lies on a cycle: walk it once to get a closed path
          std::uint64_t len = 0;
          std::size_t   t   = s;
          do {
            t = rs.next(t, *rs.dart(t));
            ++len;
          } while (t != s);
          out.bounded = false;
          out.closed  = follow(rs, s, len);
          return out;
        }
        colour[s] = 1;
        stack.push_back(s);
        auto d = rs.dart(s);
        if (!d) {
          break;
        }
        s = rs.next(s, *d);
      }
      // unwind: the top of the stack either has no successor or points at
      // a finished state
      while (!stack.empty()) {
        auto t = stack.back();
        stack.pop_back();
        depth[t]  = rs.dart(t) ? base + 1 : 0;
        base      = depth[t];
        colour[t] = 2;
      }
    }
    std::size_t best = 0;
    for (std::size_t s = 0; s < rs.size(); ++s) {
      if (depth[s] > depth[best]) {
        best = s;
      }
    }
    out.c0 = rs.size() ? depth[best] : 0;
    if (rs.size()) {
      out.longest = follow(rs, best, out.c0);
    }
    return out;
  }

  std::optional<Morphism> detect_period(LabelledGraph const& g, PathSpec const& p) {
    auto end = path_end(g, p);
    if (end == p.start) {
      fail(ErrorCode::Precondition, "a period needs distinct endpoints");
    }
    return find_automorphism(g, {{p.start, end}});
  }

  char const* case_name(DistortionCase c) noexcept {
    switch (c) {
      case DistortionCase::Case1:
        return "Case1";
      case DistortionCase::Case2a:
        return "Case2a";
      case DistortionCase::Case2b:
        return "Case2b";
    }
    return "?";
  }

  bool OverlapWitness::all_hold() const {
    return std::all_of(audits.begin(), audits.end(),
                       [](auto const& a) { return a.holds; });
  }

  namespace {

    // Longest w̄-subpath of a simple closed path, with where it starts.
    struct Overlap {
      std::uint64_t length = 0;
      std::size_t   start  = 0;
      int           orientation = 0;
      std::uint64_t phase       = 0;
    };

    Overlap best_overlap(LabelledGraph const& g, PathSpec const& c,
                         Word const (&words)[2]) {
      Overlap       best;
      std::uint64_t n = c.darts.size();
      std::uint64_t L = words[0].size();
      for (std::size_t i = 0; i < n; ++i) {
        for (int o = 0; o < 2; ++o) {
          for (std::uint64_t j = 0; j < L; ++j) {
            std::uint64_t k = 0;
            while (k < n && g.label(c.darts[(i + k) % n]) == words[o][(j + k) % L]) {
              ++k;
            }
            if (k > best.length) {
              best = {k, i, o, j};
            }
          }
        }
      }
      return best;
    }

    std::vector<InequalityAudit> audit(std::uint64_t w, std::uint64_t gamma,
                                       std::uint64_t m) {
      return {
          {"|w| < |γ∩w̄|", w < m},
          {"|γ∩w̄| < |w| + |γ|/6", 6 * m < 6 * w + gamma},
          {"2|w| <= |γ|", 2 * w <= gamma},
          {"|γ| < 3|w|", gamma < 3 * w},
          {"|γ∩w̄| < 2|γ|/3", 3 * m < 2 * gamma},
      };
    }

  }  // namespace

  DistortionCertificate classify_case(LabelledGraph const& g, Word const& w,
                                      ClassifyOptions const& opts) {
    DistortionCertificate c;
    c.w    = w;
    c.scan = subword_ray_scan(g, w);
    c.notes.push_back(
        "w is taken as given: minimality among roots up to conjugacy is not checked");

    c.small_cancellation = check_grprime(g, Rational(1, 6), true).pass;
    if (!c.small_cancellation) {
      if (opts.require_small_cancellation) {
        fail(ErrorCode::NotSmallCancellation, "graph is not Gr'(1/6)");
      }
      c.notes.push_back("graph is not Gr'(1/6); the case analysis assumes it");
    }

    if (!c.scan.bounded) {
      c.tag          = DistortionCase::Case1;
      c.finite_order = true;
      c.notes.push_back("a closed path reads a conjugate of a power of w, so w has "
                        "finite order in G(Γ)");
      return c;
    }

    std::uint64_t const L = w.size();
    Word const          words[2] = {w, inverse(w)};
    c.c0                         = c.scan.c0;
    for_each_simple_cycle(g, std::nullopt, [&](PathSpec const& cyc) {
      auto ov = best_overlap(g, cyc, words);
      auto n  = cyc.darts.size();
      if (ov.length > 0
          && (c.max_overlap == 0 || ov.length * c.max_overlap_cycle > c.max_overlap * n)) {
        c.max_overlap       = ov.length;
        c.max_overlap_cycle = n;
      }
      if (2 * ov.length > n) {
        OverlapWitness wit;
        wit.cycle          = rotate_path(g, cyc, ov.start);
        wit.cycle_length   = n;
        wit.overlap_length = ov.length;
        wit.overlap        = RayPath{subpath(g, wit.cycle, 0, ov.length),
                                     ov.orientation, ov.phase};
        wit.audits         = audit(L, n, ov.length);
        if (!wit.all_hold()) {
          c.downgraded = true;
        }
        c.witnesses.push_back(std::move(wit));
      }
      return true;
    });

    if (c.witnesses.empty()) {
      c.tag         = DistortionCase::Case2a;
      c.coefficient = Rational(1, 3);
    } else {
      c.tag         = DistortionCase::Case2b;
      c.coefficient = Rational(1, static_cast<std::int64_t>(*c.c0));
    }
    c.hausdorff = 6 * *c.c0 + L;
    if (c.downgraded) {
      c.notes.push_back("an overlap witness fails the Case2b inequalities; the "
                        "certificate is downgraded");
    }
    return c;
  }

  RayPath sigma_path(LabelledGraph const& g, Word const& w) {
    auto cert = classify_case(g, w);
    if (cert.tag != DistortionCase::Case2b) {
      fail(ErrorCode::Precondition,
           std::string("sigma needs Case2b, got ") + case_name(cert.tag));
    }
    std::uint64_t const L   = w.size();
    auto const&         wit = cert.witnesses.front();
    auto                m   = wit.overlap_length;
    if (m < L) {
      fail(ErrorCode::AssertionFailed,
           "overlap of length " + std::to_string(m) + " holds no conjugate of w");
    }
    // read the overlap along w^k
    RayPath sigma = wit.overlap;
    if (sigma.orientation == 1) {
      sigma.path        = reverse_path(g, sigma.path);
      sigma.phase       = (L - 1 + 2 * L - (sigma.phase + m - 1) % L) % L;
      sigma.orientation = 0;
    }
    // keep one conjugate of w, then extend both ways as far as w̄ allows
    sigma.path.darts.resize(L);
    for (;;) {
      auto end = path_end(g, sigma.path);
      auto d   = g.step(end, w[(sigma.phase + sigma.path.darts.size()) % L]);
      if (!d) {
        break;
      }
      sigma.path.darts.push_back(*d);
    }
    for (;;) {
      auto prev = (sigma.phase + L - 1) % L;
      auto d    = g.step(sigma.path.start, w[prev].inverse());
      if (!d) {
        break;
      }
      sigma.path.darts.insert(sigma.path.darts.begin(), dart_reverse(*d));
      sigma.path.start = g.target(*d);
      sigma.phase      = prev;
    }
    auto len = sigma.path.darts.size();
    if (!(L < len && len < 2 * L)) {
      fail(ErrorCode::AssertionFailed,
           "sigma " + format_path(g, sigma.path) + " has length " + std::to_string(len)
               + ", outside (" + std::to_string(L) + ", " + std::to_string(2 * L) + ")");
    }

    auto aut = automorphism_group(g);
    auto vs  = path_vertices(g, sigma.path);
    for (std::uint64_t k = 0; k < L; ++k) {
      for (auto const& delta : find_occurrences(rotate(w, k), g)) {
        std::size_t images = 0;
        for (std::size_t t = 0; t + L <= len; ++t) {
          if ((sigma.phase + t) % L == k
              && aut.vertex_orbit[vs[t]] == aut.vertex_orbit[delta.start]) {
            ++images;
          }
        }
        if (images != 1) {
          fail(ErrorCode::AssertionFailed,
               "path " + format_path(g, delta) + " maps to " + std::to_string(images)
                   + " subpaths of sigma " + format_path(g, sigma.path));
        }
      }
    }
    return sigma;
  }

  namespace {

    nlohmann::ordered_json ray_json(RayPath const& r, LabelledGraph const& g) {
      return {{"path", format_path(g, r.path)},
              {"length", r.path.darts.size()},
              {"orientation", r.orientation},
              {"phase", r.phase},
              {"label", format_word(path_label(g, r.path), g.alphabet())}};
    }

  }  // namespace

  std::string certificate_json(DistortionCertificate const& c, LabelledGraph const& g) {
    nlohmann::ordered_json j;
    j["w"]            = format_word(c.w, g.alphabet());
    j["case"]         = case_name(c.tag);
    j["finite_order"] = c.finite_order;
    if (c.c0) {
      j["C0"] = *c.c0;
    }
    if (c.coefficient) {
      j["coefficient"] = format_rational(*c.coefficient);
    }
    if (c.hausdorff) {
      j["hausdorff"] = *c.hausdorff;
    }
    j["small_cancellation"] = c.small_cancellation;
    j["downgraded"]         = c.downgraded;
    if (c.scan.bounded) {
      j["longest_ray_path"] = ray_json(c.scan.longest, g);
    } else {
      j["closed_ray_path"] = ray_json(*c.scan.closed, g);
    }
    auto ws = nlohmann::ordered_json::array();
    for (auto const& w : c.witnesses) {
      nlohmann::ordered_json x;
      x["cycle"]          = format_path(g, w.cycle);
      x["cycle_length"]   = w.cycle_length;
      x["overlap"]        = ray_json(w.overlap, g);
      x["overlap_length"] = w.overlap_length;
      auto au             = nlohmann::ordered_json::array();
      for (auto const& a : w.audits) {
        au.push_back({{"inequality", a.name}, {"holds", a.holds}});
      }
      x["audits"] = au;
      ws.push_back(x);
    }
    j["witnesses"] = ws;
    j["notes"]     = c.notes;
    return j.dump(2) + "\n";
  }

  std::string certificate_text(DistortionCertificate const& c, LabelledGraph const& g) {
    std::ostringstream os;
    os << "w: " << format_word(c.w, g.alphabet()) << '\n';
    os << "case: " << case_name(c.tag) << (c.finite_order ? " (finite order)" : "")
       << '\n';
    if (c.c0) {
      os << "C0: " << *c.c0 << '\n';
    }
    if (c.coefficient) {
      os << "coefficient: " << format_rational(*c.coefficient) << '\n';
    }
    if (c.hausdorff) {
      os << "hausdorff: " << *c.hausdorff << '\n';
    }
    os << "Gr'(1/6): " << (c.small_cancellation ? "yes" : "no") << '\n';
    if (c.scan.bounded) {
      os << "longest w̄-path: " << format_path(g, c.scan.longest.path) << '\n';
    } else {
      os << "closed w̄-path: " << format_path(g, c.scan.closed->path) << '\n';
    }
    for (auto const& w : c.witnesses) {
      os << "overlap " << w.overlap_length << " on cycle " << format_path(g, w.cycle)
         << " (length " << w.cycle_length << ")\n";
      for (auto const& a : w.audits) {
        os << "  " << (a.holds ? "holds " : "FAILS ") << a.name << '\n';
      }
    }
    for (auto const& n : c.notes) {
      os << "note: " << n << '\n';
    }
    return os.str();
  }

  // Family ---------------------------------------------------------------------

  RunWord distorted_relator(std::uint64_t p, std::uint64_t n) {
    if (p < 2 || n < 1 || n > 62) {
      fail(ErrorCode::Precondition, "family needs p >= 2 and 1 <= n <= 62");
    }
    Letter const a{0, false}, b{1, false};
    RunWord      r;
    for (std::uint64_t k = 1; k <= p; ++k) {
      r.push_back(a);
      r.push_back(b, 2 * n * p + 2 * k - 1);
    }
    r.push_back(a);
    r.push_back(b, std::uint64_t{1} << n);
    return r;
  }

  RunPresentation gen_distorted_family(std::uint64_t p, std::uint64_t N) {
    RunPresentation out{Alphabet({"a", "b"}), {}};
    if (N < 1) {
      fail(ErrorCode::Precondition, "family needs N >= 1");
    }
    for (std::uint64_t n = 1; n <= N; ++n) {
      out.relators.push_back(distorted_relator(p, n));
    }
    return out;
  }

  RunWord short_witness(std::uint64_t p, std::uint64_t n) {
    auto    r = distorted_relator(p, n);
    RunWord u;
    for (std::size_t i = 0; i + 1 < r.runs().size(); ++i) {
      u.push_back(r.runs()[i].letter, r.runs()[i].count);
    }
    return u.inverse();
  }

  RunPresentation combine_free_product(RunPresentation const& p1,
                                       RunPresentation const& p2) {
    RunPresentation            out{p1.alphabet, p1.relators};
    std::vector<std::uint32_t> map;
    for (auto const& name : p2.alphabet.names()) {
      auto fresh = name;
      while (out.alphabet.find(fresh)) {
        fresh += "_2";
      }
      map.push_back(out.alphabet.add(fresh));
    }
    for (auto const& r : p2.relators) {
      RunWord x;
      for (auto const& run : r.runs()) {
        x.push_back(Letter{map[run.letter.gen], run.letter.inv}, run.count);
      }
      out.relators.push_back(std::move(x));
    }
    return out;
  }

}  // namespace sctk
