#pragma once

#include <cstdint>   // for uint64_t
#include <memory>    // for shared_ptr
#include <optional>  // for optional
#include <vector>    // for vector

#include "sctk/graph.hpp"
#include "sctk/words.hpp"

namespace sctk {

  //! Stands for "no finite bound" in extent and length queries.
  constexpr std::uint64_t kUnbounded = UINT64_MAX;

  //! Piece queries on a finite reduced labelled graph.
  //!
  //! In a reduced graph a path is determined by its start vertex and label,
  //! so a path is a piece iff its label can be read from a second start
  //! vertex, and an essential piece iff it can be read from a start vertex
  //! outside the Aut-orbit of its own. Partner sets are simulated along the
  //! queried path, which is the fiber product restricted to that path.
  class PieceIndex {
   public:
    explicit PieceIndex(LabelledGraph g,
                        std::uint64_t budget = default_search_budget);

    LabelledGraph const& graph() const noexcept {
      return _graph;
    }
    AutomorphismGroup const& automorphisms() const noexcept {
      return _aut;
    }
    bool same_orbit(std::uint32_t u, std::uint32_t v) const {
      return _aut.vertex_orbit[u] == _aut.vertex_orbit[v];
    }

    //! Length of the longest (essential) piece that starts after i steps of
    //! p and follows p. Closed paths wrap around; the result never exceeds
    //! cap, nor the remaining length of an open path.
    std::uint64_t extent(PathSpec const& p, std::size_t i, bool essential,
                         std::uint64_t cap = kUnbounded) const;

    bool is_piece(PathSpec const& p, bool essential) const;

    //! Longest (essential) piece beginning with dart d, over all reduced
    //! continuations; kUnbounded when the labelled fiber product has a cycle
    //! reachable off the diagonal.
    std::uint64_t max_piece(Dart d, bool essential) const;

   private:
    void build_tables() const;

    LabelledGraph                           _graph;
    AutomorphismGroup                       _aut;
    std::vector<std::vector<Dart>>          _by_label;  // darts per letter code
    mutable std::vector<std::uint64_t>      _max_piece[2];
  };

  struct Segment {
    std::uint64_t offset;  // from the start of the (rotated) path
    std::uint64_t length;
    bool operator==(Segment const&) const = default;
  };

  struct Decomposition {
    std::uint64_t        count    = 0;
    std::uint64_t        rotation = 0;  // closed paths: start offset used
    std::vector<Segment> segments;
  };

  //! Fewest (essential) pieces whose concatenation is p. Greedy stepping is
  //! optimal because pieces are closed under subpaths; closed paths are
  //! minimised over all rotations. Throws NotDecomposable when some edge of
  //! p lies on no piece.
  Decomposition min_piece_decomposition(PathSpec const&   p,
                                        PieceIndex const& idx,
                                        bool              essential);

  //! Least number of pieces along either arc of the cycle component holding
  //! x and y; nullopt stands for infinity.
  std::optional<std::uint64_t> piece_distance(PieceIndex const& idx,
                                              std::uint32_t     x,
                                              std::uint32_t     y,
                                              bool              essential);

  //! Signed labels of length-one paths from v, sorted.
  std::vector<Letter> support(LabelledGraph const& g, std::uint32_t v);

  // Run-length engine for the cycle graphs of a relator set ----------------

  //! A maximal piece on a relator cycle: it starts `offset` letters into the
  //! orientation and cannot be extended to the right.
  struct MaximalPiece {
    std::size_t   cls;
    int           orientation;  // 0 reads the relator, 1 its inverse
    std::uint64_t offset;
    std::uint64_t length;  // kUnbounded if arbitrarily long
  };

  //! Pieces of Γ_R computed on run-length relators, so relators of length
  //! 2^30 cost as much as their number of runs. Vertex i of class c is the
  //! point before letter i of the relator; orientation 1 reads the inverse
  //! word, and its offset j sits at vertex (|r| - j) mod |r|.
  //!
  //! For a position inside a run of x of length m with l letters of the run
  //! still ahead, a partner run of x of length M contributes l + T when
  //! M >= l (T: common length of what follows both runs) and M otherwise;
  //! the run itself contributes l when l < m and m - 1 at its first letter.
  //! Classes are the rotation/inversion classes of the input; their
  //! automorphisms are rotations by the period, which is all that separates
  //! essential from plain pieces.
  class ClassicalPieces {
   public:
    explicit ClassicalPieces(std::vector<RunWord> const& relators);

    std::size_t num_classes() const noexcept {
      return _classes.size();
    }
    RunWord const& class_word(std::size_t c) const {
      return _classes[c].word;
    }
    std::uint64_t length(std::size_t c) const {
      return _classes[c].word.length();
    }
    //! Index of the input relator that produced class c.
    std::size_t source_index(std::size_t c) const {
      return _classes[c].source;
    }

    std::uint64_t extent(std::size_t cls, int orientation, std::uint64_t offset,
                         bool essential, std::uint64_t cap = kUnbounded) const;

    //! Minimal cyclic decomposition of the relator cycle, offsets counted in
    //! orientation 0. Throws NotDecomposable.
    Decomposition decompose(std::size_t cls, bool essential) const;

    //! Piece distance between vertices x and y of a class cycle.
    std::optional<std::uint64_t> distance(std::size_t cls, std::uint64_t x,
                                          std::uint64_t y, bool essential) const;

    //! Greedy piece count along one orientation from offset for len letters;
    //! nullopt if some letter lies on no piece. Stops early past limit.
    std::optional<std::uint64_t> greedy(std::size_t cls, int orientation,
                                        std::uint64_t offset, std::uint64_t len,
                                        bool essential,
                                        std::uint64_t limit = kUnbounded,
                                        std::vector<Segment>* out = nullptr) const;

    //! Every piece lies inside one of these; they start where the end point
    //! of maximal pieces jumps, so the list has O(runs * partners) entries.
    std::vector<MaximalPiece> maximal_pieces(std::size_t cls, bool essential) const;

    //! Longest piece on the class cycle, capped at the cycle length.
    std::uint64_t max_piece_length(std::size_t cls, bool essential) const;

   private:
    struct Partner {
      std::uint64_t len;   // run length M (kUnbounded for a one-letter cycle)
      std::uint64_t tail;  // T
    };
    struct RunInfo {
      Letter        letter;
      std::uint64_t count;
      std::uint64_t start;  // offset of the first letter in the strand
      // partners sorted by len, with suffix maxima of tail and prefix maxima
      // of len, for plain and essential pieces
      std::vector<Partner>       partners[2];
      std::vector<std::uint64_t> suffix_tail[2];
      std::vector<std::uint64_t> prefix_len[2];
    };
    struct Strand {
      std::uint64_t        shift = 0;  // strand offset 0 sits at word offset shift
      bool                 single_letter = false;
      std::size_t          period_runs   = 0;
      std::vector<RunInfo> runs;
    };
    struct Class {
      RunWord     word;
      std::size_t source = 0;
      Strand      strands[2];
    };

    std::uint64_t run_extent(Strand const& s, std::size_t run, std::uint64_t ahead,
                             bool essential) const;
    std::pair<std::size_t, std::uint64_t> locate(Strand const& s,
                                                 std::uint64_t offset) const;
    std::vector<std::uint64_t> candidate_starts(std::size_t cls, bool essential) const;

    std::vector<Class> _classes;
  };

}  // namespace sctk
