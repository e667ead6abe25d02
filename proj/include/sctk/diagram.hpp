#pragma once

#include <cstdint>      // for uint32_t
#include <optional>     // for optional
#include <string>       // for string
#include <string_view>  // for string_view
#include <vector>       // for vector

#include "sctk/completion.hpp"
#include "sctk/conditions.hpp"
#include "sctk/graph.hpp"
#include "sctk/words.hpp"

namespace sctk {

  // Combinatorial maps ---------------------------------------------------------

  enum class Topology { Disk, Sphere };

  //! Edge label read along dart 2e: a letter or, when empty, the identity 1.
  using DiagramLabel = std::optional<Letter>;

  //! A diagram as a rotation system. Edge e has darts 2e (along its
  //! orientation) and 2e + 1; rotation[d] is the next dart counterclockwise
  //! around the origin of d. Faces are the orbits of d -> rotation[d ^ 1],
  //! each traversed with the face on its left. A disk designates one face
  //! as the outside; a sphere has none. The diagram without edges is a
  //! single vertex (and a single face).
  struct Diagram {
    Alphabet                  alphabet;
    std::vector<DiagramLabel> labels;    // per edge
    std::vector<Dart>         rotation;  // per dart
    Topology                  topology = Topology::Disk;
    std::optional<Dart>       outer;     // any dart of the outer face

    std::size_t num_edges() const noexcept {
      return labels.size();
    }
    Dart face_next(Dart d) const {
      return rotation[dart_reverse(d)];
    }
    //! Label read along the dart; empty for the identity.
    std::optional<Letter> dart_label(Dart d) const;

    bool operator==(Diagram const&) const = default;
  };

  //! Vertices and faces of a map. Faces are listed by least dart and walked
  //! from it; the outer face of a disk is included and flagged.
  struct MapView {
    std::vector<std::uint32_t>              vertex_of;  // per dart: its origin
    std::vector<std::uint32_t>              face_of;    // per dart
    std::vector<std::vector<Dart>>          vertices;   // rotation order
    std::vector<std::vector<Dart>>          faces;      // walk order
    std::optional<std::uint32_t>            outer_face;

    std::size_t num_vertices() const noexcept {
      return vertices.empty() ? 1 : vertices.size();
    }
    std::size_t num_faces() const noexcept {
      return faces.empty() ? 1 : faces.size();
    }
  };
  MapView map_view(Diagram const& d);

  //! Rotation is a permutation, the map is connected, V - E + F = 2 and a
  //! disk names its outer face. Throws InvalidMap with the first problem.
  void validate_map(Diagram const& d);

  //! Builds a map from face walks (every dart in exactly one walk). A disk
  //! names the index of its outer face.
  Diagram diagram_from_faces(Alphabet alphabet, std::vector<DiagramLabel> labels,
                             std::vector<std::vector<Dart>> const& faces, Topology topology,
                             std::optional<std::size_t> outer_face = std::nullopt);

  struct FaceView {
    Dart              first = 0;
    std::vector<Dart> darts;   // boundary walk
    Word              word;    // its label, identity edges omitted
    std::size_t       degree = 0;
  };

  //! The 2-cells: all faces of a sphere, all but the outer face of a disk.
  std::vector<FaceView> faces(Diagram const& d);
  FaceView              face_at(Diagram const& d, Dart on_face);

  //! Label of the boundary of a disk read with the diagram on the left,
  //! identity edges omitted. Empty for a sphere.
  Word boundary_word(Diagram const& d);

  //! Same cyclic word up to rotation.
  bool cyclically_equal(Word const& u, Word const& v);

  // Curvature --------------------------------------------------------------------

  //! sum over vertices of (3 - d(v)) plus half the sum over faces of
  //! (6 - d(face)), exactly. Requires a valid sphere (InvalidMap).
  Rational curvature_audit(Diagram const& d);

  //! The same map with the outer face counted as a face.
  Diagram as_sphere(Diagram const& d);

  // Construction ---------------------------------------------------------------------

  //! Result of inserting a path: the new diagram and the new path's darts
  //! in order, each pointing away from the first corner.
  struct Inserted {
    Diagram           diagram;
    std::vector<Dart> path;
  };

  //! Inserts a path labelled `word` through the face containing darts y1
  //! and y2, from the corner just before y1 to the corner just before y2.
  //! The face splits in two; the part containing the new path followed by
  //! y2 keeps the role of the old face when that was the outside. y1 == y2
  //! inserts a loop. On the diagram without edges the result is a polygon
  //! whose face reads `word`. Throws Precondition unless y1, y2 share a face.
  Inserted insert_path(Diagram const& d, Dart y1, Dart y2, Word const& word);

  //! Inserts a path labelled `word` into the corner just before y that
  //! ends in a new vertex of degree one.
  Inserted insert_spike(Diagram const& d, Dart y, Word const& word);

  //! Cones off the face containing `on_face` from a new vertex joined to
  //! each of its corners by an edge labelled `label`.
  Diagram stellar_subdivide(Diagram const& d, Dart on_face, DiagramLabel label);

  //! Tetrahedron, cube and dodecahedron with all edges labelled `label`.
  Diagram tetrahedron(Alphabet const& alphabet, DiagramLabel label);
  Diagram cube(Alphabet const& alphabet, DiagramLabel label);
  Diagram dodecahedron(Alphabet const& alphabet, DiagramLabel label);

  // Moves ---------------------------------------------------------------------------

  //! Folds the first pair of consecutive boundary edges with mutually
  //! inverse labels. The boundary word loses that pair. Throws
  //! NothingToFold when there is none.
  Diagram fold_boundary(Diagram const& d);

  //! Folds until the boundary has no consecutive inverse pair.
  Diagram fold_boundary_fully(Diagram const& d);

  //! Removes two faces whose labels, read counterclockwise from a common
  //! vertex, multiply to a freely trivial word: the faces are joined at
  //! that vertex and the joint face folded away, followed by the 0-face
  //! cleanup of the 0-faces and s s^-1 faces the move created. The
  //! boundary word is unchanged (checked, AssertionFailed).
  //! Throws NotFreelyInverse when no common vertex works, Precondition
  //! when a dart is on the outside or both are on one face.
  Diagram cancel_inverse_faces(Diagram const& d, Dart on_f1, Dart on_f2);

  //! Contracts an edge labelled 1 with distinct endpoints.
  Diagram contract_identity_edge(Diagram const& d, std::uint32_t edge);

  //! Removes a loop labelled 1 together with everything it encloses (the
  //! side away from the outside; on a sphere, the side with fewer edges).
  Diagram remove_identity_loop(Diagram const& d, std::uint32_t edge);

  //! Replaces a face labelled s s^-1 by a single edge.
  Diagram replace_bigon(Diagram const& d, Dart on_face);

  //! Applies the three moves above until none applies.
  Diagram eliminate_zero_faces(Diagram const& d);

  //! Replaces the face containing `on_face` by the disk `sub`, whose
  //! boundary word must be a rotation of the face's word (Precondition).
  Diagram replace_face(Diagram const& d, Dart on_face, Diagram const& sub);

  // Degrees and shapes ----------------------------------------------------------------

  struct FaceDegrees {
    std::size_t exterior = 0;  // arcs on the boundary of the disk
    std::size_t interior = 0;  // other arcs, with multiplicity
  };

  //! Arcs are maximal subpaths of the face's walk whose inner vertices have
  //! degree 2. Requires a disk.
  FaceDegrees degrees(Diagram const& d, Dart on_face);

  struct ShapeVerdict {
    bool                pass = true;
    std::optional<Dart> face;  // first offending face
    std::string         reason;
  };

  //! Every interior face has interior degree at least 7.
  ShapeVerdict is_37_diagram(Diagram const& d);

  //! A single face, or a chain: the faces and their shared arcs form a
  //! path, the ends have e = i = 1 and the others e = i = 2.
  ShapeVerdict shape_i1(Diagram const& d);

  // Diagrams over graphs -----------------------------------------------------------

  struct LiftVerdict {
    bool                         pass = true;
    std::optional<std::uint32_t> edge;  // offending interior edge
    std::string                  reason;
    //! Per face (in faces() order): start vertex of the lift used.
    std::vector<std::uint32_t> lifts;
  };

  //! Every face label is read along a simple closed path of g (NoLift
  //! otherwise). Passes when no interior edge essentially originates from
  //! g, i.e. the two lifts of each interior edge lie in different orbits
  //! of label-preserving automorphisms. Faces use their first lift.
  LiftVerdict validate_over_graph(Diagram const& d, LabelledGraph const& g);

  //! As above over the completion, and every interior arc must lift to a
  //! locally geodesic path.
  LiftVerdict validate_over_completion(Diagram const& d, Completion const& c);

  // Text form ---------------------------------------------------------------------------

  //! Lines:
  //!   topology: disk|sphere
  //!   alphabet: a b
  //!   edge <label or 1>        (one per edge, in order)
  //!   vertex 0+ 3- 5+          (rotation at each vertex; e+ is dart 2e)
  //!   outer 2-                 (disks with edges)
  Diagram     parse_diagram(std::string_view text);
  std::string format_diagram(Diagram const& d);

}  // namespace sctk
