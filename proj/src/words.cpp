#include "sctk/words.hpp"

#include <algorithm>     // for sort, unique, min, reverse
#include <cctype>        // for isupper, tolower, isspace, isdigit
#include <charconv>      // for from_chars
#include <map>           // for map
#include <set>           // for set
#include <sstream>       // for ostringstream
#include <system_error>  // for errc

#include "sctk/errors.hpp"

namespace sctk {

  // Alphabet ----------------------------------------------------------------

  Alphabet::Alphabet(std::vector<std::string> names) {
    for (auto const& n : names) {
      add(n);
    }
  }

  std::uint32_t Alphabet::add(std::string const& name) {
    if (name.empty() || name == "1"
        || name.find_first_of(" \t\r\n#^") != std::string::npos) {
      fail(ErrorCode::Parse, "invalid generator name '" + name + "'");
    }
    if (_index.count(name) != 0) {
      fail(ErrorCode::SymbolClash, "duplicate generator '" + name + "'");
    }
    auto i = static_cast<std::uint32_t>(_names.size());
    _names.push_back(name);
    _index.emplace(name, i);
    return i;
  }

  std::optional<std::uint32_t> Alphabet::find(std::string_view name) const {
    auto it = _index.find(std::string(name));
    if (it == _index.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::uint32_t Alphabet::index(std::string_view name) const {
    auto r = find(name);
    if (!r) {
      fail(ErrorCode::Parse, "unknown generator '" + std::string(name) + "'");
    }
    return *r;
  }

  // Word algebra ------------------------------------------------------------

  Word inverse(Word const& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(it->inverse());
    }
    return out;
  }

  Word concat(Word const& u, Word const& v) {
    Word out(u);
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  Word power(Word const& w, std::size_t k) {
    Word out;
    out.reserve(w.size() * k);
    for (std::size_t i = 0; i < k; ++i) {
      out.insert(out.end(), w.begin(), w.end());
    }
    return out;
  }

  Word rotate(Word const& w, std::size_t k) {
    if (w.empty()) {
      return w;
    }
    k %= w.size();
    Word out(w.begin() + k, w.end());
    out.insert(out.end(), w.begin(), w.begin() + k);
    return out;
  }

  bool is_freely_reduced(Word const& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (w[i] == w[i - 1].inverse()) {
        return false;
      }
    }
    return true;
  }

  bool is_cyclically_reduced(Word const& w) {
    return is_freely_reduced(w)
           && (w.size() < 2 || w.front() != w.back().inverse());
  }

  Word free_reduce(Word const& w) {
    Word out;
    out.reserve(w.size());
    for (auto const& l : w) {
      if (!out.empty() && out.back() == l.inverse()) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    return out;
  }

  CyclicReduction cyclic_reduce(Word const& w) {
    Word r = free_reduce(w);
    if (r.empty()) {
      fail(ErrorCode::EmptyAfterReduction, "word is freely trivial");
    }
    std::size_t i = 0, j = r.size();
    while (j - i >= 2 && r[i] == r[j - 1].inverse()) {
      ++i;
      --j;
    }
    return {Word(r.begin() + i, r.begin() + j), Word(r.begin(), r.begin() + i)};
  }

  bool shortlex_less(Word const& u, Word const& v) {
    if (u.size() != v.size()) {
      return u.size() < v.size();
    }
    return u < v;
  }

  std::vector<Word> conjugacy_class(Word const& core) {
    std::vector<Word> out;
    Word              inv = inverse(core);
    for (std::size_t k = 0; k < core.size(); ++k) {
      out.push_back(rotate(core, k));
      out.push_back(rotate(inv, k));
    }
    std::sort(out.begin(), out.end(), shortlex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Word class_representative(Word const& core) {
    auto cls = conjugacy_class(core);
    return cls.empty() ? Word{} : cls.front();
  }

  std::vector<Word> symmetrized_closure(std::vector<Word> const& relators) {
    std::vector<Word> out;
    for (auto const& r : relators) {
      auto cls = conjugacy_class(cyclic_reduce(r).core);
      out.insert(out.end(), cls.begin(), cls.end());
    }
    std::sort(out.begin(), out.end(), shortlex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::optional<ProperPower> is_proper_power(Word const& w) {
    std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d != 0) {
        continue;
      }
      bool periodic = true;
      for (std::size_t i = d; i < n && periodic; ++i) {
        periodic = w[i] == w[i - d];
      }
      if (periodic) {
        return ProperPower{Word(w.begin(), w.begin() + d), n / d};
      }
    }
    return std::nullopt;
  }

  // Presentations -----------------------------------------------------------

  Presentation concise_refinement(Presentation const& p) {
    std::vector<Word> reps;
    for (auto const& r : symmetrized_closure(p.relators)) {
      reps.push_back(class_representative(r));
    }
    std::sort(reps.begin(), reps.end(), shortlex_less);
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    return {p.alphabet, reps};
  }

  Presentation tietze_reduce(Presentation const& p) {
    std::vector<std::size_t> occ(2 * p.alphabet.size(), 0);
    for (auto const& r : p.relators) {
      for (auto const& l : r) {
        ++occ[l.code()];
      }
    }
    std::vector<bool> drop_gen(p.alphabet.size(), false);
    std::vector<Word> kept;
    for (auto const& r : p.relators) {
      std::optional<std::uint32_t> chosen;
      for (auto const& l : r) {
        if (occ[l.code()] == 1 && occ[l.inverse().code()] == 0) {
          chosen = l.gen;  // the last qualifying letter wins
        }
      }
      if (chosen) {
        drop_gen[*chosen] = true;
      } else {
        kept.push_back(r);
      }
    }
    Presentation               out;
    std::vector<std::uint32_t> remap(p.alphabet.size(), 0);
    for (std::uint32_t g = 0; g < p.alphabet.size(); ++g) {
      if (!drop_gen[g]) {
        remap[g] = out.alphabet.add(p.alphabet.name(g));
      }
    }
    for (auto& r : kept) {
      for (auto& l : r) {
        l.gen = remap[l.gen];
      }
      out.relators.push_back(std::move(r));
    }
    return out;
  }

  // RunWord -----------------------------------------------------------------

  RunWord::RunWord(Word const& w) {
    for (auto const& l : w) {
      push_back(l);
    }
  }

  void RunWord::push_back(Letter l, std::uint64_t count) {
    if (count == 0) {
      return;
    }
    if (!_runs.empty() && _runs.back().letter == l) {
      _runs.back().count += count;
    } else {
      _runs.push_back({l, count});
    }
    _length += count;
  }

  void RunWord::append(RunWord const& that) {
    for (auto const& r : that._runs) {
      push_back(r.letter, r.count);
    }
  }

  Word RunWord::expand(std::uint64_t max_len) const {
    if (_length > max_len) {
      fail(ErrorCode::Budget,
           "word of length " + std::to_string(_length)
               + " exceeds the expansion limit " + std::to_string(max_len));
    }
    Word out;
    out.reserve(_length);
    for (auto const& r : _runs) {
      out.insert(out.end(), r.count, r.letter);
    }
    return out;
  }

  RunWord RunWord::inverse() const {
    RunWord out;
    for (auto it = _runs.rbegin(); it != _runs.rend(); ++it) {
      out.push_back(it->letter.inverse(), it->count);
    }
    return out;
  }

  Letter RunWord::at(std::uint64_t pos) const {
    for (auto const& r : _runs) {
      if (pos < r.count) {
        return r.letter;
      }
      pos -= r.count;
    }
    fail(ErrorCode::Precondition, "position out of range");
  }

  RunWord RunWord::slice(std::uint64_t begin, std::uint64_t len) const {
    if (begin + len > _length) {
      fail(ErrorCode::Precondition, "slice out of range");
    }
    RunWord out;
    for (auto const& r : _runs) {
      if (len == 0) {
        break;
      }
      if (begin >= r.count) {
        begin -= r.count;
        continue;
      }
      std::uint64_t take = std::min(r.count - begin, len);
      out.push_back(r.letter, take);
      len -= take;
      begin = 0;
    }
    return out;
  }

  bool is_cyclically_reduced(RunWord const& w) {
    auto const& rs = w.runs();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      auto const& next = rs[(i + 1) % rs.size()];
      if (rs[i].letter.inverse() == next.letter) {
        return false;
      }
    }
    return true;
  }

  Presentation expand(RunPresentation const& p, std::uint64_t max_len) {
    Presentation out{p.alphabet, {}};
    for (auto const& r : p.relators) {
      out.relators.push_back(r.expand(max_len));
    }
    return out;
  }

  RunPresentation compress(Presentation const& p) {
    RunPresentation out{p.alphabet, {}};
    for (auto const& r : p.relators) {
      out.relators.emplace_back(r);
    }
    return out;
  }

  // Text form ---------------------------------------------------------------

  namespace {
    [[noreturn]] void parse_error(std::size_t col, std::string const& msg) {
      fail(ErrorCode::Parse, "column " + std::to_string(col + 1) + ": " + msg);
    }

    std::optional<Letter> resolve(std::string_view name, Alphabet const& a) {
      if (auto g = a.find(name)) {
        return Letter{*g, false};
      }
      if (name.size() == 1
          && std::isupper(static_cast<unsigned char>(name[0]))) {
        char lower
            = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
        if (auto g = a.find(std::string_view(&lower, 1))) {
          return Letter{*g, true};
        }
      }
      return std::nullopt;
    }

    // Parses "^k" at text[i..]; returns signed exponent and advances i.
    long long parse_exponent(std::string_view text, std::size_t& i) {
      if (i >= text.size() || text[i] != '^') {
        return 1;
      }
      std::size_t start = i++;
      bool        neg   = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
      }
      std::uint64_t v   = 0;
      auto [ptr, ec]    = std::from_chars(text.data() + i, text.data() + text.size(), v);
      std::size_t used  = static_cast<std::size_t>(ptr - (text.data() + i));
      if (ec != std::errc() || used == 0 || v == 0
          || v > static_cast<std::uint64_t>(1) << 62) {
        parse_error(start, "malformed exponent");
      }
      i += used;
      return neg ? -static_cast<long long>(v) : static_cast<long long>(v);
    }

    void push_power(RunWord& out, Letter l, long long k) {
      if (k < 0) {
        out.push_back(l.inverse(), static_cast<std::uint64_t>(-k));
      } else {
        out.push_back(l, static_cast<std::uint64_t>(k));
      }
    }

    bool single_char_alphabet(Alphabet const& a) {
      return std::all_of(a.names().begin(), a.names().end(),
                         [](std::string const& n) { return n.size() == 1; });
    }
  }  // namespace

  RunWord parse_run_word(std::string_view text, Alphabet const& alphabet) {
    RunWord     out;
    bool const  compact = single_char_alphabet(alphabet);
    std::size_t i       = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      std::size_t start = i;
      std::size_t end   = i;
      while (end < text.size()
             && !std::isspace(static_cast<unsigned char>(text[end]))) {
        ++end;
      }
      std::string_view token = text.substr(start, end - start);
      if (token == "1") {
        i = end;
        continue;
      }
      std::size_t      caret = token.find('^');
      std::string_view name  = token.substr(0, caret);
      auto             whole = resolve(name, alphabet);
      if (whole && (caret == std::string_view::npos
                    || token.find('^', caret + 1) == std::string_view::npos)) {
        std::size_t j = start + name.size();
        long long   k = parse_exponent(text, j);
        if (j != end) {
          parse_error(j, "unexpected characters after exponent");
        }
        push_power(out, *whole, k);
        i = end;
        continue;
      }
      if (!compact) {
        parse_error(start, "unknown generator '" + std::string(name) + "'");
      }
      std::size_t j = start;
      while (j < end) {
        auto l = resolve(text.substr(j, 1), alphabet);
        if (!l) {
          parse_error(j, "unknown generator '" + std::string(text.substr(j, 1)) + "'");
        }
        ++j;
        long long k = parse_exponent(text, j);
        push_power(out, *l, k);
      }
      i = end;
    }
    return out;
  }

  Word parse_word(std::string_view text, Alphabet const& alphabet) {
    return parse_run_word(text, alphabet).expand();
  }

  std::string format_word(RunWord const& w, Alphabet const& alphabet) {
    if (w.empty()) {
      return "1";
    }
    std::ostringstream os;
    bool               first = true;
    for (auto const& r : w.runs()) {
      if (!first) {
        os << ' ';
      }
      first = false;
      os << alphabet.name(r.letter.gen);
      if (r.letter.inv) {
        os << "^-" << r.count;
      } else if (r.count > 1) {
        os << '^' << r.count;
      }
    }
    return os.str();
  }

  std::string format_word(Word const& w, Alphabet const& alphabet) {
    return format_word(RunWord(w), alphabet);
  }

  RunPresentation parse_presentation(std::string_view text) {
    RunPresentation out;
    bool            have_header = false;
    std::size_t     line_no     = 0;
    std::size_t     pos         = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) {
        nl = text.size();
      }
      std::string_view line = text.substr(pos, nl - pos);
      pos                   = nl + 1;
      ++line_no;
      if (auto h = line.find('#'); h != std::string_view::npos) {
        line = line.substr(0, h);
      }
      std::size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) {
        continue;
      }
      line = line.substr(b);
      try {
        if (!have_header) {
          constexpr std::string_view key = "alphabet:";
          if (line.substr(0, key.size()) != key) {
            fail(ErrorCode::Parse, "column 1: expected 'alphabet:' header");
          }
          std::istringstream is{std::string(line.substr(key.size()))};
          std::string        name;
          while (is >> name) {
            out.alphabet.add(name);
          }
          have_header = true;
          continue;
        }
        out.relators.push_back(parse_run_word(line, out.alphabet));
      } catch (Error const& e) {
        fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ", " + e.detail());
      }
    }
    if (!have_header) {
      fail(ErrorCode::Parse, "missing 'alphabet:' header");
    }
    return out;
  }

  std::string format_presentation(RunPresentation const& p) {
    std::ostringstream os;
    os << "alphabet:";
    for (auto const& n : p.alphabet.names()) {
      os << ' ' << n;
    }
    os << '\n';
    for (auto const& r : p.relators) {
      os << format_word(r, p.alphabet) << '\n';
    }
    return os.str();
  }

  std::string format_presentation(Presentation const& p) {
    return format_presentation(compress(p));
  }

}  // namespace sctk
