#pragma once

#include <cstdint>   // for uint64_t
#include <optional>  // for optional
#include <string>    // for string
#include <vector>    // for vector

#include "sctk/conditions.hpp"
#include "sctk/graph.hpp"
#include "sctk/words.hpp"

namespace sctk {

  // Paths labelled by subwords of the bi-infinite ray w̄ -----------------------

  //! A path in the graph read along w̄: `orientation` 0 follows w^k, 1 follows
  //! (w^-1)^k, and the first letter is position `phase` of that word.
  struct RayPath {
    PathSpec      path;
    int           orientation = 0;
    std::uint64_t phase       = 0;
  };

  struct RayScan {
    bool bounded = true;
    //! Longest path labelled by a subword of w̄ (bounded case).
    std::uint64_t c0 = 0;
    RayPath       longest;
    //! Closed path labelled by a cyclic conjugate of w^k or w^-k
    //! (unbounded case). Such a path makes w a torsion element of G(Γ).
    std::optional<RayPath> closed;
  };

  //! The fiber product of g with the cycles of w and w^-1 is a functional
  //! graph on (vertex, orientation, phase) because g is reduced; a cycle in
  //! it means unboundedly long w̄-paths, otherwise C₀ is its longest chain.
  //! Requires w cyclically reduced and not a proper power (Precondition).
  RayScan subword_ray_scan(LabelledGraph const& g, Word const& w);

  //! A label-preserving automorphism φ with φ(ιp) = τp, if one exists.
  //! Throws Precondition when ιp = τp.
  std::optional<Morphism> detect_period(LabelledGraph const& g, PathSpec const& p);

  // Case classification ---------------------------------------------------------

  enum class DistortionCase { Case1, Case2a, Case2b };
  char const* case_name(DistortionCase c) noexcept;

  struct InequalityAudit {
    std::string name;
    bool        holds;
  };

  //! A simple closed path γ whose maximal w̄-subpath is longer than |γ|/2.
  //! The cycle is rotated so that the overlap starts at offset 0.
  struct OverlapWitness {
    RayPath                      overlap;
    PathSpec                     cycle;
    std::uint64_t                cycle_length   = 0;
    std::uint64_t                overlap_length = 0;
    std::vector<InequalityAudit> audits;
    bool all_hold() const;
  };

  struct DistortionCertificate {
    Word           w;
    DistortionCase tag          = DistortionCase::Case2a;
    bool           finite_order = false;  // raised with Case1 evidence
    std::optional<std::uint64_t> c0;
    std::optional<Rational>      coefficient;  // |g_n| >= coefficient * n|w|
    std::optional<std::uint64_t> hausdorff;    // 6 C₀ + |w|
    RayScan                      scan;
    std::uint64_t                max_overlap = 0;  // largest |γ ∩ w̄| seen
    std::uint64_t                max_overlap_cycle = 0;
    std::vector<OverlapWitness>  witnesses;   // Case2b only
    bool                         small_cancellation = true;  // Gr'(1/6)
    bool                         downgraded = false;  // an audit failed
    std::vector<std::string>     notes;
  };

  struct ClassifyOptions {
    //! Throw NotSmallCancellation instead of flagging when g is not Gr'(1/6).
    bool require_small_cancellation = false;
  };

  DistortionCertificate classify_case(LabelledGraph const& g, Word const& w,
                                      ClassifyOptions const& opts = {});

  //! The maximal w̄-path containing a w-conjugate-labelled subpath of a
  //! Case2b witness cycle. Checks |w| < |σ| < 2|w| and that every path
  //! labelled by a cyclic conjugate of w maps onto exactly one subpath of σ
  //! by an automorphism; throws AssertionFailed with the evidence otherwise,
  //! and Precondition unless the case is 2b.
  RayPath sigma_path(LabelledGraph const& g, Word const& w);

  std::string certificate_text(DistortionCertificate const& c, LabelledGraph const& g);
  std::string certificate_json(DistortionCertificate const& c, LabelledGraph const& g);

  // The distorted C(p) family ------------------------------------------------------

  //! r_n = a b^{2np+1} a b^{2np+3} ... a b^{2np+2p-1} a b^{2^n}.
  RunWord distorted_relator(std::uint64_t p, std::uint64_t n);

  //! Relators r_1..r_N over the alphabet {a, b}. Requires p >= 2, N >= 1 and
  //! N <= 62.
  RunPresentation gen_distorted_family(std::uint64_t p, std::uint64_t N);

  //! u_n^-1, where r_n is literally u_n b^{2^n}; it equals b^{2^n} in the group.
  RunWord short_witness(std::uint64_t p, std::uint64_t n);

  //! Union of two presentations; generators of p2 that clash with p1 are
  //! renamed by appending "_2" (repeatedly, until fresh).
  RunPresentation combine_free_product(RunPresentation const& p1,
                                       RunPresentation const& p2);

}  // namespace sctk
