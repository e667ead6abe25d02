#pragma once

#include <cstdint>     // for uint32_t, uint64_t
#include <functional>  // for function
#include <optional>    // for optional
#include <string>      // for string
#include <vector>      // for vector

#include "sctk/words.hpp"

namespace sctk {

  //! Every edge e yields two darts: 2e traverses e along its orientation and
  //! reads its label, 2e+1 traverses it backwards and reads the inverse.
  using Dart = std::uint32_t;

  inline std::uint32_t dart_edge(Dart d) noexcept {
    return d >> 1;
  }
  inline bool dart_backward(Dart d) noexcept {
    return (d & 1) != 0;
  }
  inline Dart dart_reverse(Dart d) noexcept {
    return d ^ 1u;
  }

  struct Edge {
    std::uint32_t source;
    std::uint32_t target;
    std::uint32_t label;  // generator index
  };

  class LabelledGraph {
   public:
    LabelledGraph() = default;
    explicit LabelledGraph(Alphabet alphabet) : _alphabet(std::move(alphabet)) {}

    std::uint32_t add_vertex(std::string name = {});
    std::uint32_t add_edge(std::uint32_t source,
                           std::uint32_t target,
                           std::uint32_t label);

    Alphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    Alphabet& alphabet() noexcept {
      return _alphabet;
    }
    std::size_t num_vertices() const noexcept {
      return _names.size();
    }
    std::size_t num_edges() const noexcept {
      return _edges.size();
    }
    std::size_t num_darts() const noexcept {
      return 2 * _edges.size();
    }
    Edge const& edge(std::uint32_t e) const {
      return _edges[e];
    }
    std::string const& vertex_name(std::uint32_t v) const {
      return _names[v];
    }
    std::optional<std::uint32_t> find_vertex(std::string const& name) const;

    std::uint32_t origin(Dart d) const noexcept {
      auto const& e = _edges[dart_edge(d)];
      return dart_backward(d) ? e.target : e.source;
    }
    std::uint32_t target(Dart d) const noexcept {
      auto const& e = _edges[dart_edge(d)];
      return dart_backward(d) ? e.source : e.target;
    }
    Letter label(Dart d) const noexcept {
      return Letter{_edges[dart_edge(d)].label, dart_backward(d)};
    }
    //! Darts starting at v, in order of edge insertion.
    std::vector<Dart> const& darts_at(std::uint32_t v) const {
      return _darts[v];
    }
    //! First dart at v reading l, if any.
    std::optional<Dart> step(std::uint32_t v, Letter l) const;

    //! Component id per vertex, numbered by smallest vertex.
    std::vector<std::uint32_t> components() const;

   private:
    Alphabet                       _alphabet;
    std::vector<std::string>       _names;
    std::vector<Edge>              _edges;
    std::vector<std::vector<Dart>> _darts;
  };

  // Paths ---------------------------------------------------------------------

  struct PathSpec {
    std::uint32_t     start = 0;
    std::vector<Dart> darts;

    std::size_t length() const noexcept {
      return darts.size();
    }
    bool operator==(PathSpec const&) const = default;
  };

  bool          is_valid_path(LabelledGraph const& g, PathSpec const& p);
  std::uint32_t path_end(LabelledGraph const& g, PathSpec const& p);
  bool          is_closed(LabelledGraph const& g, PathSpec const& p);
  Word          path_label(LabelledGraph const& g, PathSpec const& p);
  PathSpec      reverse_path(LabelledGraph const& g, PathSpec const& p);
  //! Subpath of length len starting after `begin` steps; for closed paths
  //! the indices wrap around.
  PathSpec subpath(LabelledGraph const& g, PathSpec const& p,
                   std::size_t begin, std::size_t len);
  //! Closed path rotated to start after k steps.
  PathSpec rotate_path(LabelledGraph const& g, PathSpec const& p, std::size_t k);
  std::vector<std::uint32_t> path_vertices(LabelledGraph const& g,
                                           PathSpec const&      p);
  std::string format_path(LabelledGraph const& g, PathSpec const& p);

  // Morphisms -----------------------------------------------------------------

  struct Morphism {
    std::vector<std::uint32_t> vertex_map;
    std::vector<std::uint32_t> edge_map;
    bool operator==(Morphism const&) const = default;
  };

  bool     is_label_preserving_morphism(LabelledGraph const& from,
                                        LabelledGraph const& to,
                                        Morphism const&      m);
  PathSpec apply(LabelledGraph const& g, Morphism const& m, PathSpec const& p);

  // Construction and queries --------------------------------------------------

  struct ReducedVerdict {
    bool          reduced = true;
    std::uint32_t vertex  = 0;  // witness when not reduced
    Letter        letter{};
  };

  //! Reduced iff no vertex has two distinct darts with the same signed label.
  ReducedVerdict validate_reduced(LabelledGraph const& g);

  //! Cycle with |w| vertices v0..v_{n-1}; dart i leaves v_i reading w[i].
  LabelledGraph cycle_graph(Word const& w, Alphabet const& alphabet,
                            std::string const& prefix = "v");

  struct GammaR {
    LabelledGraph              graph;
    std::vector<Word>          classes;      // shortlex representative
    std::vector<std::uint32_t> first_vertex; // vertex reading classes[i]
  };

  //! One cycle per class of the (symmetrized) relators; classes ordered by
  //! their shortlex representatives.
  GammaR gamma_R(std::vector<Word> const& relators, Alphabet const& alphabet);

  //! Every walk reading w, from every start vertex, including backward darts.
  std::vector<PathSpec> find_occurrences(Word const& w, LabelledGraph const& g);

  // Automorphisms and isomorphisms -------------------------------------------

  struct AutomorphismGroup {
    std::vector<Morphism>      generators;
    std::uint64_t              order = 1;
    std::vector<std::uint32_t> vertex_orbit;  // orbit id = least vertex
  };

  constexpr std::uint64_t default_search_budget = 2'000'000;

  //! Stabiliser-chain backtracking with colour refinement. Throws TooLarge
  //! when the number of search nodes exceeds the budget, or when the order
  //! does not fit in 64 bits.
  AutomorphismGroup automorphism_group(LabelledGraph const& g,
                                       std::uint64_t budget
                                       = default_search_budget);

  //! An automorphism extending the given vertex assignments, if one exists.
  std::optional<Morphism> find_automorphism(
      LabelledGraph const&                                       g,
      std::vector<std::pair<std::uint32_t, std::uint32_t>> const& fixed,
      std::uint64_t budget = default_search_budget);

  //! Label-preserving isomorphism g1 -> g2, if one exists. Throws Budget.
  std::optional<Morphism> find_isomorphism(LabelledGraph const& g1,
                                           LabelledGraph const& g2,
                                           std::uint64_t        budget
                                           = default_search_budget);

  //! Subgraph spanned by the vertices with the given component id.
  LabelledGraph component_subgraph(LabelledGraph const& g,
                                   std::uint32_t        component,
                                   std::vector<std::uint32_t>* vertex_map
                                   = nullptr);

  // Cycles --------------------------------------------------------------------

  //! Visits every simple closed path once, up to rotation and reversal, in
  //! canonical form: it starts at its least vertex and takes the
  //! lexicographically smaller direction (vertex sequence, then edge ids).
  //! Stops early when the visitor returns false.
  void for_each_simple_cycle(LabelledGraph const&                       g,
                             std::optional<std::size_t>                 max_len,
                             std::function<bool(PathSpec const&)> const& visit);

  std::vector<PathSpec> simple_cycles(LabelledGraph const&        g,
                                      std::optional<std::size_t> max_len
                                      = std::nullopt);

  // Text form -----------------------------------------------------------------

  //! Header "alphabet: ...", optional "vertices: ..." listing names in id
  //! order, then one "source target label" line per edge. A label written
  //! name^-1 stores the reversed edge. Output always lists vertices, so
  //! format_graph(parse_graph(t)) == t for any t produced by format_graph.
  LabelledGraph parse_graph(std::string_view text);
  std::string   format_graph(LabelledGraph const& g);

}  // namespace sctk
