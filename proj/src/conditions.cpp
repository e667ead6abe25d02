#include "sctk/conditions.hpp"

#include <charconv>  // for from_chars
#include <sstream>   // for ostringstream

#include "json.hpp"
#include "sctk/errors.hpp"

namespace sctk {

  Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
      std::int64_t v   = 0;
      auto [ptr, ec]   = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
      }
      return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return Rational(parse_int(text));
    }
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) {
      fail(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
  }

  std::string format_rational(Rational const& r) {
    if (r.denominator() == 1) {
      return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }

  namespace {

    // |p| >= λ|γ| without leaving the integers
    bool too_long(std::uint64_t piece, std::uint64_t cycle, Rational const& lambda) {
      using u128 = unsigned __int128;
      if (lambda <= Rational(0)) {
        return true;
      }
      return u128(piece) * u128(lambda.denominator())
             >= u128(cycle) * u128(lambda.numerator());
    }

    // a/b > c/d, ties broken towards the longer piece so that the
    // reported pair does not depend on scan order
    bool ratio_greater(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d) {
      using u128 = unsigned __int128;
      return u128(a) * d > u128(c) * b || (u128(a) * d == u128(c) * b && a > c);
    }

    // Closed non-backtracking paths up to max_len, cyclically reduced.
    void for_each_closed_reduced_path(LabelledGraph const& g, std::size_t max_len,
                                      std::function<void(PathSpec const&)> const& f) {
      for (std::uint32_t s = 0; s < g.num_vertices(); ++s) {
        PathSpec                               cur{s, {}};
        std::function<void(std::uint32_t)> dfs = [&](std::uint32_t v) {
          if (!cur.darts.empty() && v == s
              && cur.darts.back() != dart_reverse(cur.darts.front())) {
            f(cur);
          }
          if (cur.darts.size() == max_len) {
            return;
          }
          for (Dart d : g.darts_at(v)) {
            if (!cur.darts.empty() && d == dart_reverse(cur.darts.back())) {
              continue;
            }
            cur.darts.push_back(d);
            dfs(g.target(d));
            cur.darts.pop_back();
          }
        };
        dfs(s);
      }
    }

    void fill_graph_witness(ConditionReport& r, LabelledGraph const& g,
                            PathSpec const& cycle, std::uint64_t rotation,
                            std::vector<Segment> segs) {
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

    std::string scope_of(CheckOptions const& opts) {
      std::string s = "simple-cycle scope";
      if (opts.exhaustive_max_len) {
        s += " plus closed reduced paths up to length "
             + std::to_string(*opts.exhaustive_max_len);
      }
      return s;
    }

    template <typename F>
    void for_each_cycle(LabelledGraph const& g, CheckOptions const& opts, F&& f) {
      for_each_simple_cycle(g, std::nullopt, [&](PathSpec const& c) {
        f(c);
        return true;
      });
      if (opts.exhaustive_max_len) {
        for_each_closed_reduced_path(g, *opts.exhaustive_max_len, f);
      }
    }

    RunWord cyclic_slice(RunWord const& w, std::uint64_t begin, std::uint64_t len) {
      std::uint64_t L = w.length();
      begin %= L;
      RunWord out;
      while (len > 0) {
        auto take = std::min(len, L - begin);
        out.append(w.slice(begin, take));
        len -= take;
        begin = 0;
      }
      return out;
    }

    void fill_classical_witness(ConditionReport& r, ClassicalPieces const& cp,
                                Alphabet const& al, std::size_t cls,
                                std::uint64_t rotation, std::vector<Segment> segs) {
      auto const& w   = cp.class_word(cls);
      r.relator_class = cls;
      r.rotation      = rotation;
      r.cycle_length  = w.length();
      r.pieces        = std::move(segs);
      r.witness_text  = format_word(cyclic_slice(w, rotation, w.length()), al);
      r.piece_labels.clear();
      for (auto const& s : r.pieces) {
        r.piece_labels.push_back(
            format_word(cyclic_slice(w, rotation + s.offset, s.length), al));
      }
    }

  }  // namespace

  // Graph conditions -------------------------------------------------------

  ConditionReport check_gr(PieceIndex const& idx, std::uint64_t n, bool essential,
                           CheckOptions const& opts) {
    ConditionReport r;
    r.condition = "Gr";
    r.n         = n;
    r.essential = essential;
    r.scope     = scope_of(opts);
    auto const& g = idx.graph();
    for_each_cycle(g, opts, [&](PathSpec const& c) {
      ++r.cycles_checked;
      Decomposition d;
      try {
        d = min_piece_decomposition(c, idx, essential);
      } catch (Error const& e) {
        if (e.code() == ErrorCode::NotDecomposable) {
          return;
        }
        throw;
      }
      if (!r.min_pieces || d.count < *r.min_pieces) {
        r.min_pieces = d.count;
      }
      if (r.pass && d.count < n) {
        r.pass = false;
        fill_graph_witness(r, g, c, d.rotation, d.segments);
      }
    });
    return r;
  }

  ConditionReport check_gr(LabelledGraph const& g, std::uint64_t n, bool essential,
                           CheckOptions const& opts) {
    return check_gr(PieceIndex(g), n, essential, opts);
  }

  ConditionReport check_grprime(PieceIndex const& idx, Rational lambda,
                                bool essential, CheckOptions const& opts) {
    ConditionReport r;
    r.condition = "Gr'";
    r.lambda    = lambda;
    r.essential = essential;
    r.scope     = scope_of(opts);
    auto const& g = idx.graph();
    for_each_cycle(g, opts, [&](PathSpec const& c) {
      ++r.cycles_checked;
      std::uint64_t L = c.darts.size();
      for (std::size_t i = 0; i < L; ++i) {
        auto e = idx.extent(c, i, essential, L);
        if (e == 0) {
          continue;
        }
        if (!r.longest_piece
            || ratio_greater(e, L, r.longest_piece->first, r.longest_piece->second)) {
          r.longest_piece = std::pair{e, L};
        }
        if (r.pass && too_long(e, L, lambda)) {
          r.pass = false;
          fill_graph_witness(r, g, c, i, {{0, e}});
        }
      }
    });
    return r;
  }

  ConditionReport check_grprime(LabelledGraph const& g, Rational lambda,
                                bool essential, CheckOptions const& opts) {
    return check_grprime(PieceIndex(g), lambda, essential, opts);
  }

  // Classical conditions ---------------------------------------------------

  ClassicalPieces classical_pieces(RunPresentation const& p) {
    std::vector<RunWord> rels;
    for (auto const& r : p.relators) {
      if (r.empty()) {
        fail(ErrorCode::EmptyAfterReduction, "empty relator");
      }
      if (is_cyclically_reduced(r)) {
        rels.push_back(r);
      } else {
        rels.emplace_back(cyclic_reduce(free_reduce(r.expand())).core);
      }
    }
    return ClassicalPieces(rels);
  }

  ConditionReport check_c_classical(ClassicalPieces const& cp, Alphabet const& al,
                                    std::uint64_t n) {
    ConditionReport r;
    r.condition = "C";
    r.n         = n;
    r.scope     = "relator classes";
    for (std::size_t c = 0; c < cp.num_classes(); ++c) {
      ++r.cycles_checked;
      Decomposition d;
      try {
        d = cp.decompose(c, true);
      } catch (Error const& e) {
        if (e.code() == ErrorCode::NotDecomposable) {
          continue;
        }
        throw;
      }
      if (!r.min_pieces || d.count < *r.min_pieces) {
        r.min_pieces = d.count;
      }
      if (r.pass && d.count < n) {
        r.pass = false;
        fill_classical_witness(r, cp, al, c, d.rotation, d.segments);
      }
    }
    return r;
  }

  ConditionReport check_cprime_classical(ClassicalPieces const& cp,
                                         Alphabet const& al, Rational lambda) {
    ConditionReport r;
    r.condition = "C'";
    r.lambda    = lambda;
    r.scope     = "relator classes";
    for (std::size_t c = 0; c < cp.num_classes(); ++c) {
      ++r.cycles_checked;
      std::uint64_t const L = cp.length(c);
      for (auto const& mp : cp.maximal_pieces(c, true)) {
        auto len = std::min(mp.length, L);
        if (!r.longest_piece
            || ratio_greater(len, L, r.longest_piece->first, r.longest_piece->second)) {
          r.longest_piece = std::pair{len, L};
        }
        if (r.pass && too_long(len, L, lambda)) {
          r.pass = false;
          // report in the relator's own reading direction
          std::uint64_t start
              = mp.orientation == 0 ? mp.offset : (2 * L - mp.offset - len) % L;
          fill_classical_witness(r, cp, al, c, start, {{0, len}});
        }
      }
    }
    return r;
  }

  std::vector<ConditionReport> cprime_violations(ClassicalPieces const& cp,
                                                 Alphabet const& al, Rational lambda,
                                                 std::size_t limit) {
    std::vector<ConditionReport> out;
    for (std::size_t c = 0; c < cp.num_classes() && out.size() < limit; ++c) {
      std::uint64_t const L = cp.length(c);
      for (auto const& mp : cp.maximal_pieces(c, true)) {
        auto len = std::min(mp.length, L);
        if (!too_long(len, L, lambda)) {
          continue;
        }
        ConditionReport r;
        r.condition = "C'";
        r.lambda    = lambda;
        r.scope     = "relator classes";
        r.pass      = false;
        std::uint64_t start
            = mp.orientation == 0 ? mp.offset : (2 * L - mp.offset - len) % L;
        fill_classical_witness(r, cp, al, c, start, {{0, len}});
        out.push_back(std::move(r));
        if (out.size() == limit) {
          break;
        }
      }
    }
    return out;
  }

  ConditionReport check_c_classical(RunPresentation const& p, std::uint64_t n,
                                    std::optional<std::uint64_t> truncation) {
    auto r       = check_c_classical(classical_pieces(p), p.alphabet, n);
    r.truncation = truncation;
    return r;
  }

  ConditionReport check_cprime_classical(RunPresentation const& p, Rational lambda,
                                         std::optional<std::uint64_t> truncation) {
    auto r       = check_cprime_classical(classical_pieces(p), p.alphabet, lambda);
    r.truncation = truncation;
    return r;
  }

  // Revalidation -------------------------------------------------------------

  namespace {

    bool tiles(std::vector<Segment> const& segs, std::uint64_t L) {
      std::uint64_t pos = 0;
      for (auto const& s : segs) {
        if (s.offset != pos || s.length == 0) {
          return false;
        }
        pos += s.length;
      }
      return pos == L;
    }

    bool violation_shape(ConditionReport const& r) {
      bool cn = r.condition == "C" || r.condition == "Gr" || r.condition == "Gr*";
      if (cn) {
        return r.n && tiles(r.pieces, r.cycle_length) && r.pieces.size() < *r.n;
      }
      return r.lambda && r.pieces.size() == 1
             && too_long(r.pieces[0].length, r.cycle_length, *r.lambda);
    }

  }  // namespace

  bool revalidate(ConditionReport const& r, PieceIndex const& idx) {
    if (r.pass || !r.cycle) {
      return false;
    }
    auto const& g = idx.graph();
    auto const& c = *r.cycle;
    if (!is_valid_path(g, c) || !is_closed(g, c) || c.darts.size() != r.cycle_length) {
      return false;
    }
    for (auto const& s : r.pieces) {
      if (!idx.is_piece(subpath(g, c, r.rotation + s.offset, s.length), r.essential)) {
        return false;
      }
    }
    return violation_shape(r);
  }

  bool revalidate(ConditionReport const& r, ClassicalPieces const& cp) {
    if (r.pass || !r.relator_class || *r.relator_class >= cp.num_classes()) {
      return false;
    }
    auto const cls = *r.relator_class;
    auto const L   = cp.length(cls);
    if (L != r.cycle_length) {
      return false;
    }
    for (auto const& s : r.pieces) {
      if (cp.extent(cls, 0, (r.rotation + s.offset) % L, true, s.length) != s.length) {
        return false;
      }
    }
    return violation_shape(r);
  }

  // Serialisation --------------------------------------------------------------

  namespace {

    nlohmann::ordered_json to_json(ConditionReport const& r) {
      nlohmann::ordered_json j;
      j["condition"] = r.condition;
      if (r.n) {
        j["n"] = *r.n;
      }
      if (r.lambda) {
        j["lambda"] = format_rational(*r.lambda);
      }
      j["essential"] = r.essential;
      j["verdict"]   = r.pass ? "pass" : "fail";
      j["scope"]     = r.scope;
      if (r.truncation) {
        j["truncation"] = *r.truncation;
      }
      if (r.radius) {
        j["radius"] = *r.radius;
      }
      j["cycles_checked"] = r.cycles_checked;
      if (r.min_pieces) {
        j["min_pieces"] = *r.min_pieces;
      }
      if (r.longest_piece) {
        j["longest_piece"] = {{"length", r.longest_piece->first},
                              {"cycle_length", r.longest_piece->second}};
      }
      if (!r.pass) {
        nlohmann::ordered_json w;
        if (r.relator_class) {
          w["relator_class"] = *r.relator_class;
          w["rotation"]      = r.rotation;
        }
        w["cycle"]        = r.witness_text;
        w["cycle_length"] = r.cycle_length;
        auto pieces       = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < r.pieces.size(); ++i) {
          pieces.push_back({{"offset", r.pieces[i].offset},
                            {"length", r.pieces[i].length},
                            {"label", r.piece_labels.at(i)}});
        }
        w["pieces"]  = pieces;
        j["witness"] = w;
      }
      if (!r.note.empty()) {
        j["note"] = r.note;
      }
      return j;
    }

  }  // namespace

  std::string report_json(ConditionReport const& r) {
    return to_json(r).dump(2) + "\n";
  }

  std::string report_text(ConditionReport const& r) {
    std::ostringstream os;
    os << "condition: " << r.condition;
    if (r.n) {
      os << "(" << *r.n << ")";
    }
    if (r.lambda) {
      os << "(" << format_rational(*r.lambda) << ")";
    }
    os << (r.essential ? ", essential pieces" : ", all pieces") << '\n';
    os << "verdict: " << (r.pass ? "pass" : "fail") << '\n';
    os << "scope: " << r.scope << '\n';
    if (r.truncation) {
      os << "truncation: N = " << *r.truncation << '\n';
    }
    if (r.radius) {
      os << "radius: " << *r.radius << '\n';
    }
    os << "cycles checked: " << r.cycles_checked << '\n';
    if (r.min_pieces) {
      os << "fewest pieces on a cycle: " << *r.min_pieces << '\n';
    }
    if (r.longest_piece) {
      os << "longest piece: " << r.longest_piece->first << " on a cycle of length "
         << r.longest_piece->second << '\n';
    }
    if (!r.pass) {
      os << "witness: ";
      if (r.relator_class) {
        os << "relator class " << *r.relator_class << " rotated by " << r.rotation
           << ": ";
      }
      os << r.witness_text << " (length " << r.cycle_length << ")\n";
      for (std::size_t i = 0; i < r.pieces.size(); ++i) {
        os << "  piece at " << r.pieces[i].offset << ", length " << r.pieces[i].length
           << ": " << r.piece_labels.at(i) << '\n';
      }
    }
    if (!r.note.empty()) {
      os << "note: " << r.note << '\n';
    }
    return os.str();
  }

}  // namespace sctk
