#pragma once

#include <cstdint>  // for uint32_t, uint64_t
#include <string>   // for string
#include <vector>   // for vector

#include "sctk/completion.hpp"
#include "sctk/pieces.hpp"
#include "sctk/words.hpp"

namespace sctk {

  enum class WitnessMode { Classical, Graphical };

  //! One of the sixteen choices: a relator class (classical) or a component
  //! of the completion (graphical), and two of its vertices. Classical
  //! vertices are offsets into the class word; graphical ones are vertex ids.
  struct WitnessTuple {
    std::uint32_t component = 0;
    std::uint64_t x         = 0;
    std::uint64_t y         = 0;
    bool operator==(WitnessTuple const&) const = default;
  };

  constexpr std::size_t kWitnessTuples = 16;

  struct WitnessPackage {
    WitnessMode               mode = WitnessMode::Classical;
    std::vector<WitnessTuple> tuples;
    //! The two W-sets, over the input alphabet extended by alpha1, alpha2.
    std::vector<RunWord> W1, W2;
    Alphabet             alphabet;
    std::vector<std::string> notes;
  };

  struct WitnessOptions {
    //! Backtracking nodes before giving up with Budget.
    std::uint64_t node_budget = 5'000'000;
    //! Relators longer than this offer only run boundaries, their
    //! neighbours and run midpoints as candidates for x.
    std::uint64_t exhaustive_length = 4096;
  };

  // Classical selection -----------------------------------------------------

  //! The relator classes the selection works on: concise refinement of the
  //! input followed by one Tietze reduction pass.
  struct ClassicalInput {
    RunPresentation reduced;
    ClassicalPieces pieces;
  };
  ClassicalInput prepare_classical(RunPresentation const& p);

  //! Labels of the two paths of length 1 leaving offset x of class cls.
  std::vector<Letter> support(ClassicalPieces const& cp, std::size_t cls, std::uint64_t x);

  //! Sixteen tuples from pairwise distinct classes with d_p(x, y) >= 3 for
  //! essential pieces and supp(y_k) disjoint from supp(x_{k+1}) except after
  //! the eighth and sixteenth, found by exhaustive backtracking in canonical
  //! order. Throws NotSmallCancellation unless the input is C(6),
  //! InsufficientRelators for fewer than 16 classes, SearchExhausted when no
  //! assignment exists, AssertionFailed when none exists despite 30 or more
  //! classes, and Budget when the node budget runs out.
  WitnessPackage select_witnesses_classical(RunPresentation const& p,
                                            WitnessOptions const& opts = {});
  WitnessPackage select_witnesses_classical(ClassicalInput const& in,
                                            WitnessOptions const& opts = {});

  // Graphical selection -------------------------------------------------------

  //! A vertex contained in a single attached sheet.
  bool is_interior(Completion const& c, std::uint32_t v);

  //! Sheets' factors meeting at v.
  std::vector<std::uint32_t> vertex_factors(Completion const& c, std::uint32_t v);

  //! Vertices reachable from x along concatenations of at most `pieces`
  //! essential pieces. The graph must be folded (Precondition).
  std::vector<bool> piece_ball(PieceIndex const& idx, std::uint32_t x, std::uint32_t pieces);

  //! Components with a closed path of nontrivial label, one per isomorphism
  //! class, in order of their least vertex.
  std::vector<std::uint32_t> qualifying_components(Completion const& c);

  //! Per chosen component, x and an interior y outside the two-piece ball of
  //! x; y_k and x_{k+1} lie in sheets of different factors. Throws
  //! NotSmallCancellation unless the completion is Gr_*(6),
  //! InsufficientComponents when fewer than 16 components qualify,
  //! NoInteriorVertex when too few of them admit such y, SearchExhausted or
  //! Budget otherwise.
  WitnessPackage select_witnesses_graphical(Completion const&     c,
                                            WitnessOptions const& opts = {});

  // W-sets and the extended presentation ------------------------------------

  inline constexpr char const* kAlpha1 = "alpha1";
  inline constexpr char const* kAlpha2 = "alpha2";

  //! Fills pkg.W1, pkg.W2 and pkg.alphabet. Classical blocks are the two
  //! arcs of the relator cycle from x to y; graphical blocks are all simple
  //! paths from x to y. Throws SymbolClash when alpha1 or alpha2 is taken
  //! and Budget when a W-set would exceed max_words.
  void build_w_sets_classical(WitnessPackage& pkg, ClassicalInput const& in);
  void build_w_sets_graphical(WitnessPackage& pkg, Completion const& c,
                              std::size_t max_words = 1'000'000);

  //! <S, alpha | W, R>: the relators R followed by W1 and W2.
  RunPresentation extended_presentation(RunPresentation const& p,
                                        WitnessPackage const& pkg);

  // Verification --------------------------------------------------------------

  struct WitnessCheck {
    bool                     ok = true;
    std::vector<std::string> failures;
  };

  //! Re-derives every invariant from the piece machinery alone.
  WitnessCheck verify_package(WitnessPackage const& pkg, ClassicalInput const& in);
  WitnessCheck verify_package(WitnessPackage const& pkg, Completion const& c);

  std::string package_text(WitnessPackage const& pkg);
  std::string package_json(WitnessPackage const& pkg);

}  // namespace sctk
