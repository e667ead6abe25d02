#pragma once

#include <cstdint>   // for uint64_t, int64_t
#include <optional>  // for optional
#include <string>    // for string
#include <vector>    // for vector

#include <boost/rational.hpp>

#include "sctk/graph.hpp"
#include "sctk/pieces.hpp"
#include "sctk/words.hpp"

namespace sctk {

  using Rational = boost::rational<std::int64_t>;

  //! Accepts "p/q" or an integer; no decimals. Throws Parse.
  Rational    parse_rational(std::string_view text);
  std::string format_rational(Rational const& r);

  //! Outcome of a small cancellation check. A failing report carries a
  //! witness: a closed path (graph checks) or a relator class (classical
  //! checks), rotated so that `pieces` tile it from offset 0. For the
  //! C(n)/Gr(n) family the pieces are the whole decomposition; for the
  //! C'(λ)/Gr'(λ) family `pieces` holds the single long piece.
  struct ConditionReport {
    std::string                  condition;  // C, C', Gr, Gr', Gr*, C'*
    std::optional<std::uint64_t> n;
    std::optional<Rational>      lambda;
    bool                         essential = true;
    bool                         pass      = true;
    std::string                  scope;
    std::optional<std::uint64_t> truncation;
    std::optional<std::uint64_t> radius;

    std::uint64_t cycles_checked = 0;
    //! Fewest pieces over all decomposable cycles (C/Gr family).
    std::optional<std::uint64_t> min_pieces;
    //! Longest piece relative to its cycle (C'/Gr' family): length, cycle.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> longest_piece;

    std::optional<PathSpec>    cycle;         // graph witness
    std::optional<std::size_t> relator_class; // classical witness
    std::uint64_t              rotation     = 0;
    std::uint64_t              cycle_length = 0;
    std::vector<Segment>       pieces;
    std::string                witness_text;  // rendered path or relator
    std::vector<std::string>   piece_labels;  // rendered label per piece
    std::string                note;
  };

  struct CheckOptions {
    //! Also scan every closed reduced path up to this length, not only
    //! simple ones.
    std::optional<std::size_t> exhaustive_max_len;
  };

  //! No simple closed path is a concatenation of fewer than n (essential)
  //! pieces; cycles that do not decompose pass.
  ConditionReport check_gr(PieceIndex const& idx, std::uint64_t n, bool essential,
                           CheckOptions const& opts = {});
  ConditionReport check_gr(LabelledGraph const& g, std::uint64_t n, bool essential,
                           CheckOptions const& opts = {});

  //! Every (essential) piece on a simple closed path γ has |p| < λ|γ|.
  ConditionReport check_grprime(PieceIndex const& idx, Rational lambda,
                                bool essential, CheckOptions const& opts = {});
  ConditionReport check_grprime(LabelledGraph const& g, Rational lambda,
                                bool essential, CheckOptions const& opts = {});

  //! Relators are cyclically reduced first (EmptyAfterReduction) and
  //! grouped into classes; pieces are the essential pieces of Γ_R.
  ClassicalPieces classical_pieces(RunPresentation const& p);

  ConditionReport check_c_classical(RunPresentation const& p, std::uint64_t n,
                                    std::optional<std::uint64_t> truncation = {});
  ConditionReport check_cprime_classical(RunPresentation const& p, Rational lambda,
                                         std::optional<std::uint64_t> truncation = {});
  ConditionReport check_c_classical(ClassicalPieces const& cp, Alphabet const& al,
                                    std::uint64_t n);
  ConditionReport check_cprime_classical(ClassicalPieces const& cp,
                                         Alphabet const& al, Rational lambda);

  //! One failing report per maximal piece that violates C'(λ), in class
  //! order, at most `limit` of them.
  std::vector<ConditionReport> cprime_violations(ClassicalPieces const& cp,
                                                 Alphabet const& al, Rational lambda,
                                                 std::size_t limit = SIZE_MAX);

  //! Recomputes the violation from the witness alone.
  bool revalidate(ConditionReport const& r, PieceIndex const& idx);
  bool revalidate(ConditionReport const& r, ClassicalPieces const& cp);

  std::string report_text(ConditionReport const& r);
  std::string report_json(ConditionReport const& r);

}  // namespace sctk
