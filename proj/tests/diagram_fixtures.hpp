#pragma once

// Diagram fixtures shared by the unit tests and the acceptance run.

#include <random>
#include <vector>

#include "sctk/diagram.hpp"

namespace fixture {

  using namespace sctk;

  inline Alphabet const kAB({"a", "b"});
  inline Letter const A{0, false}, B{1, false};

  // Cyclic free reduction by a stack, for comparison with folding.
  inline Word cyclic_reduction(Word w) {
    Word s;
    for (auto l : w) {
      if (!s.empty() && s.back() == l.inverse()) {
        s.pop_back();
      } else {
        s.push_back(l);
      }
    }
    while (s.size() >= 2 && s.front() == s.back().inverse()) {
      s.erase(s.begin());
      s.pop_back();
    }
    return s;
  }

  inline Word canonical(Word const& w) {
    Word best = w;
    for (std::size_t k = 1; k < w.size(); ++k) {
      best = std::min(best, rotate(w, k));
    }
    return best;
  }

  inline Word random_word(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    Word w(lo + rng() % (hi - lo + 1));
    for (auto& l : w) {
      l = Letter{static_cast<std::uint32_t>(rng() % 2), rng() % 2 == 1};
    }
    return w;
  }

  inline Dart pick(std::mt19937& rng, std::vector<Dart> const& v) {
    return v[rng() % v.size()];
  }

  inline std::vector<Dart> outer_walk(Diagram const& d) {
    return face_at(d, *d.outer).darts;
  }

  // Random disk: a polygon grown by paths through the outside, spikes and
  // chords of inner faces.
  inline Diagram random_disk(std::mt19937& rng, std::size_t steps) {
    Diagram d;
    d.alphabet = kAB;
    d          = insert_path(d, 0, 0, random_word(rng, 2, 6)).diagram;
    for (std::size_t s = 0; s < steps; ++s) {
      auto op = rng() % 4;
      if (op <= 1) {
        auto o = outer_walk(d);
        d      = insert_path(d, pick(rng, o), pick(rng, o), random_word(rng, 1, 3)).diagram;
      } else if (op == 2) {
        d = insert_spike(d, pick(rng, outer_walk(d)), random_word(rng, 1, 2)).diagram;
      } else {
        auto fs = faces(d);
        auto f  = fs[rng() % fs.size()].darts;
        Dart y1 = pick(rng, f), y2 = pick(rng, f);
        if (y1 != y2) {
          d = insert_path(d, y1, y2, random_word(rng, 1, 3)).diagram;
        }
      }
    }
    return d;
  }

  inline Diagram ladder(std::size_t k) {
    // Bottom b_i: B_i -> B_{i+1}, top t_i: T_i -> T_{i+1}, rungs r_i: B_i -> T_i.
    auto b = [&](std::size_t i) { return static_cast<Dart>(2 * i); };
    auto t = [&](std::size_t i) { return static_cast<Dart>(2 * (k + i)); };
    auto r = [&](std::size_t i) { return static_cast<Dart>(2 * (2 * k + i)); };
    std::vector<std::vector<Dart>> fs;
    for (std::size_t i = 0; i < k; ++i) {
      fs.push_back({b(i), r(i + 1), t(i) + 1, r(i) + 1});
    }
    std::vector<Dart> outer{r(0)};
    for (std::size_t i = 0; i < k; ++i) {
      outer.push_back(t(i));
    }
    outer.push_back(r(k) + 1);
    for (std::size_t i = k; i-- > 0;) {
      outer.push_back(b(i) + 1);
    }
    fs.push_back(outer);
    return diagram_from_faces(kAB, std::vector<DiagramLabel>(3 * k + 1, A), fs, Topology::Disk,
                              fs.size() - 1);
  }

  // n-gon surrounded by a ring of n quadrilaterals.
  inline Diagram ringed(std::size_t n) {
    auto m = [&](std::size_t i) { return static_cast<Dart>(2 * (i % n)); };
    auto o = [&](std::size_t i) { return static_cast<Dart>(2 * (n + i % n)); };
    auto p = [&](std::size_t i) { return static_cast<Dart>(2 * (2 * n + i % n)); };
    std::vector<std::vector<Dart>> fs;
    std::vector<Dart>              inner, outer;
    for (std::size_t i = 0; i < n; ++i) {
      inner.push_back(m(i));
      outer.push_back(o(n - 1 - i) + 1);
      fs.push_back({p(i), o(i), p(i + 1) + 1, m(i) + 1});
    }
    fs.push_back(inner);
    fs.push_back(outer);
    return diagram_from_faces(kAB, std::vector<DiagramLabel>(3 * n, A), fs, Topology::Disk,
                              fs.size() - 1);
  }

  inline Diagram tripod() {
    // Spokes s_i: c -> P_i (edges 0..2), rim q_i: P_i -> P_{i+1} (edges 3..5).
    std::vector<std::vector<Dart>> fs{{0, 6, 3}, {2, 8, 5}, {4, 10, 1}, {11, 9, 7}};
    return diagram_from_faces(kAB, std::vector<DiagramLabel>(6, A), fs, Topology::Disk, 3);
  }

}  // namespace fixture
