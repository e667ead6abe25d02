#pragma once

#include <cstdint>      // for uint32_t, uint64_t, int64_t
#include <optional>     // for optional
#include <string>       // for string
#include <string_view>  // for string_view
#include <utility>      // for pair
#include <vector>       // for vector

#include "sctk/conditions.hpp"
#include "sctk/graph.hpp"
#include "sctk/pieces.hpp"
#include "sctk/words.hpp"

namespace sctk {

  // Factor groups ---------------------------------------------------------------

  //! A factor G_i with generating set S_i. Finite factors carry a full
  //! multiplication table; infinite cyclic factors have one generator and
  //! are realised by sheets truncated to [-radius, radius + 1].
  struct FactorSpec {
    enum class Kind { Finite, Cyclic };

    std::string id;
    Kind        kind = Kind::Finite;
    //! Finite: element names and table[x][y] = index of x*y.
    std::vector<std::string>                elements;
    std::vector<std::vector<std::uint32_t>> table;
    //! Generator symbols with their elements (cyclic: exactly one, element 1).
    std::vector<std::pair<std::string, std::int64_t>> generators;
    std::uint64_t radius = 0;

    std::int64_t identity() const;
    std::int64_t multiply(std::int64_t x, std::int64_t y) const;
    std::int64_t inverse(std::int64_t x) const;
    std::string  element_name(std::int64_t x) const;
    std::size_t  order() const;  // 0 for the infinite cyclic group
  };

  //! Validates the table (closure, identity, inverses, associativity) and
  //! that the generators generate. Throws Precondition otherwise.
  FactorSpec finite_factor(std::string id, std::vector<std::string> elements,
                           std::vector<std::vector<std::uint32_t>> table,
                           std::vector<std::pair<std::string, std::int64_t>> gens);

  //! Z/n with elements named "<id>^k", generators given by exponent.
  FactorSpec cyclic_group_factor(std::string id, std::uint32_t n,
                                 std::vector<std::pair<std::string, std::int64_t>> gens);

  FactorSpec infinite_cyclic_factor(std::string id, std::string symbol,
                                    std::uint64_t radius);

  //! Blocks of the form
  //!   factor <id> finite
  //!   elements: e x y
  //!   table:
  //!   e x y        (one row per element, in element order)
  //!   ...
  //!   generators: s=x t=y
  //!   end
  //! or
  //!   factor <id> cyclic
  //!   generator: a
  //!   radius: 4
  //!   end
  std::vector<FactorSpec> parse_factors(std::string_view text);
  std::string             format_factors(std::vector<FactorSpec> const& fs);

  // Completions -------------------------------------------------------------------

  //! The Cayley sheet attached along one edge of the input graph: element h
  //! of the factor sits at completion vertex image[i] where elements[i] = h.
  struct SheetCopy {
    std::uint32_t             factor     = 0;
    std::uint32_t             gamma_edge = 0;
    std::vector<std::int64_t> elements;
    std::vector<std::uint32_t> image;
  };

  struct Completion {
    LabelledGraph           graph;  // alphabet: all generator symbols
    std::vector<FactorSpec> factors;
    std::vector<std::uint32_t> symbol_factor;   // per generator of graph
    std::vector<std::int64_t>  symbol_element;  // per generator of graph
    std::vector<std::uint32_t> edge_sheet;
    std::vector<std::uint32_t> sheet_factor;
    std::vector<std::uint32_t> origin_vertex;  // input vertex -> vertex
    std::vector<std::uint32_t> origin_edge;    // input edge -> edge
    std::vector<SheetCopy>     copies;         // one per input edge
    bool                         truncated = false;
    std::optional<std::uint64_t> radius;  // largest cyclic radius in use
  };

  constexpr std::uint64_t default_completion_budget = 2'000'000;

  //! Attaches a copy of Cay(G_i, S_i) along every edge and folds until no
  //! vertex has two equally labelled edges on the same side. Throws
  //! InconsistentFactors when a label lies in no factor or a symbol lies in
  //! two, and Budget when the attached sheets exceed `budget` vertices.
  Completion build_completion(LabelledGraph const&           g,
                              std::vector<FactorSpec> const& factors,
                              std::uint64_t budget = default_completion_budget);

  //! Value of the label in the free product, as a reduced syllable sequence
  //! (factor, non-identity element).
  std::vector<std::pair<std::uint32_t, std::int64_t>>
  free_product_normal_form(Completion const& c, Word const& w);
  bool free_product_trivial(Completion const& c, Word const& w);

  struct EmbeddingVerdict {
    bool          embedded = true;
    std::uint32_t copy     = 0;  // witness: two elements of one copy
    std::int64_t  first    = 0;  // sharing a vertex
    std::int64_t  second   = 0;
    std::uint32_t vertex   = 0;
  };
  EmbeddingVerdict is_embedded_sheets(Completion const& c);

  //! Every maximal single-sheet subpath has length equal to the distance of
  //! its endpoints inside that sheet.
  bool locally_geodesic(Completion const& c, PathSpec const& p);

  //! Gr_*(n): closed simple paths with label nontrivial in the free product
  //! need at least n pieces. Fails immediately when a sheet is not embedded.
  ConditionReport check_gr_star(Completion const& c, PieceIndex const& idx,
                                std::uint64_t n, bool essential);
  ConditionReport check_gr_star(Completion const& c, std::uint64_t n, bool essential);

  //! C'_*(λ): locally geodesic pieces on such paths are shorter than λ|γ|.
  ConditionReport check_cprime_star(Completion const& c, PieceIndex const& idx,
                                    Rational lambda, bool essential);
  ConditionReport check_cprime_star(Completion const& c, Rational lambda,
                                    bool essential);

  //! revalidate() plus the starred side conditions: the cycle's label is
  //! nontrivial and, for C'_*, the piece is locally geodesic.
  bool revalidate_star(ConditionReport const& r, Completion const& c,
                       PieceIndex const& idx);

  //! Labels of the simple closed paths with nontrivial label, as relators
  //! over the completion's symbols (up to `limit` of them).
  std::vector<Word> completion_relators(Completion const& c, std::size_t limit = 100000);

  //! Label-preserving isomorphism test between two components; labels are
  //! matched by symbol name.
  bool components_isomorphic(Completion const& c1, std::uint32_t comp1,
                             Completion const& c2, std::uint32_t comp2,
                             std::uint64_t budget = default_search_budget);

  std::string completion_text(Completion const& c);

}  // namespace sctk
