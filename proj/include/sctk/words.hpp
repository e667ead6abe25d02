#pragma once

#include <compare>        // for strong_ordering
#include <cstdint>        // for uint32_t, uint64_t
#include <optional>       // for optional
#include <string>         // for string
#include <string_view>    // for string_view
#include <unordered_map>  // for unordered_map
#include <vector>         // for vector

namespace sctk {

  //! A generator index together with a sign. Letters order by generator
  //! index first, and a generator precedes its inverse.
  struct Letter {
    std::uint32_t gen = 0;
    bool          inv = false;

    Letter inverse() const noexcept {
      return Letter{gen, !inv};
    }
    //! Dense code 2*gen + inv, used to index per-letter tables.
    std::uint32_t code() const noexcept {
      return 2 * gen + (inv ? 1 : 0);
    }
    static Letter from_code(std::uint32_t c) noexcept {
      return Letter{c / 2, (c & 1) != 0};
    }
    auto operator<=>(Letter const&) const = default;
  };

  using Word = std::vector<Letter>;

  //! Ordered list of generator names. Names are opaque non-blank tokens.
  class Alphabet {
   public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    std::uint32_t add(std::string const& name);
    std::optional<std::uint32_t> find(std::string_view name) const;
    std::uint32_t index(std::string_view name) const;  // throws Parse
    std::string const& name(std::uint32_t i) const {
      return _names.at(i);
    }
    std::size_t size() const noexcept {
      return _names.size();
    }
    std::vector<std::string> const& names() const noexcept {
      return _names;
    }
    bool operator==(Alphabet const& that) const {
      return _names == that._names;
    }

   private:
    std::vector<std::string>                       _names;
    std::unordered_map<std::string, std::uint32_t> _index;
  };

  // Basic word algebra ------------------------------------------------------

  Word inverse(Word const& w);
  Word concat(Word const& u, Word const& v);
  Word power(Word const& w, std::size_t k);
  Word rotate(Word const& w, std::size_t k);  // w[k..] w[..k]

  bool is_freely_reduced(Word const& w);
  bool is_cyclically_reduced(Word const& w);

  Word free_reduce(Word const& w);

  struct CyclicReduction {
    Word core;
    Word conjugator;  // w = conjugator * core * conjugator^-1 freely
  };

  //! Throws EmptyAfterReduction when w is freely trivial.
  CyclicReduction cyclic_reduce(Word const& w);

  //! Shortlex order: shorter first, then lexicographic in Letter order.
  bool shortlex_less(Word const& u, Word const& v);

  //! All cyclic conjugates of a cyclically reduced word and of its inverse,
  //! deduplicated and sorted by shortlex.
  std::vector<Word> conjugacy_class(Word const& core);

  //! Shortlex-least element of conjugacy_class(core).
  Word class_representative(Word const& core);

  //! Smallest closure of the cyclically reduced inputs under rotation and
  //! inversion. Output sorted by shortlex, without duplicates.
  std::vector<Word> symmetrized_closure(std::vector<Word> const& relators);

  struct ProperPower {
    Word        root;
    std::size_t exponent;
  };

  std::optional<ProperPower> is_proper_power(Word const& w);

  // Presentations -----------------------------------------------------------

  struct Presentation {
    Alphabet          alphabet;
    std::vector<Word> relators;
  };

  //! One shortlex-least representative per class of the symmetrized closure,
  //! listed in shortlex order.
  Presentation concise_refinement(Presentation const& p);

  //! A single simultaneous pass removing redundant relators and one redundant
  //! generator per removed relator. Not iterated.
  Presentation tietze_reduce(Presentation const& p);

  // Run-length words ---------------------------------------------------------

  struct Run {
    Letter        letter;
    std::uint64_t count = 0;
    bool operator==(Run const&) const = default;
  };

  //! A word stored as maximal runs of a repeated letter. Adjacent runs never
  //! share a letter; zero-length runs never appear.
  class RunWord {
   public:
    RunWord() = default;
    explicit RunWord(Word const& w);

    void push_back(Letter l, std::uint64_t count = 1);
    void append(RunWord const& that);

    std::uint64_t length() const noexcept {
      return _length;
    }
    std::vector<Run> const& runs() const noexcept {
      return _runs;
    }
    bool empty() const noexcept {
      return _runs.empty();
    }
    //! Throws Budget when the expansion would exceed max_len letters.
    Word expand(std::uint64_t max_len = 1u << 24) const;
    RunWord inverse() const;
    //! Letter at a position (0-based).
    Letter at(std::uint64_t pos) const;
    //! Subword [begin, begin+len), no wrap-around.
    RunWord slice(std::uint64_t begin, std::uint64_t len) const;
    bool operator==(RunWord const& that) const {
      return _runs == that._runs;
    }

   private:
    std::vector<Run> _runs;
    std::uint64_t    _length = 0;
  };

  struct RunPresentation {
    Alphabet             alphabet;
    std::vector<RunWord> relators;
  };

  //! Adjacent runs are never mutually inverse, nor are the last and first.
  bool is_cyclically_reduced(RunWord const& w);

  Presentation    expand(RunPresentation const& p,
                         std::uint64_t          max_len = 1u << 24);
  RunPresentation compress(Presentation const& p);

  // Text form -----------------------------------------------------------------

  //! Tokens are separated by blanks. A token is a generator name, optionally
  //! followed by ^k for a nonzero integer k. A single upper-case character
  //! whose lower-case form is a generator (and which is not itself one)
  //! denotes the inverse. When every generator name is one character, a token
  //! may also juxtapose several letters, e.g. abAB or ab^3a^-1.
  RunWord parse_run_word(std::string_view text, Alphabet const& alphabet);
  Word    parse_word(std::string_view text, Alphabet const& alphabet);

  //! Whitespace-separated tokens; runs of length k >= 2 print as name^k,
  //! inverse letters as name^-1 (name^-k for runs). Empty word prints as 1.
  std::string format_word(RunWord const& w, Alphabet const& alphabet);
  std::string format_word(Word const& w, Alphabet const& alphabet);

  //! Line-oriented: a header "alphabet: g1 g2 ...", then one relator per
  //! line; '#' starts a comment; a line holding only "1" is the empty
  //! relator. Throws Parse with a line number on malformed input.
  RunPresentation parse_presentation(std::string_view text);
  std::string     format_presentation(RunPresentation const& p);
  std::string     format_presentation(Presentation const& p);

}  // namespace sctk
