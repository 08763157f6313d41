#pragma once
// Finite truncated dyadic lattice below the unit top cube Q0.
//
// A cube at level j has side length 2^-j. Cubes are identified by their level
// and their Z-order code: the path of child indices from the root read as
// base-2^n digits, where bit i of a child index is the offset of the child in
// coordinate i. Atoms are the level-D cells and are numbered by their Z-order
// code, so the atoms of any cube form one contiguous index range.
//
// The scale measure eta is discretised to the levels j = 0..D (the point mass
// at t = 2^-j); the Carleson box of Q is then the set of cells (a, j) with
// a inside Q and j >= level(Q).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

struct CubeId {
  int level = 0;
  std::uint64_t code = 0;

  friend constexpr auto operator<=>(const CubeId&, const CubeId&) = default;
};

// One point of the discretised upper half-space: an atom and a scale level.
struct Cell {
  std::size_t atom = 0;
  int level = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

class DyadicSystem {
 public:
  static constexpr int kMaxDimension = 3;

  // Largest admissible depth for `dimension`, or -1 if the dimension is not
  // supported.
  static int max_depth(int dimension) noexcept;

  // Throws SizeLimitError outside the memory guard.
  DyadicSystem(int dimension, int depth);

  int dimension() const noexcept { return dimension_; }
  int depth() const noexcept { return depth_; }
  int num_levels() const noexcept { return depth_ + 1; }
  std::size_t num_atoms() const noexcept { return num_atoms_; }
  std::size_t num_cubes() const noexcept { return cubes_.size(); }
  std::size_t num_cells() const noexcept { return num_atoms_ * static_cast<std::size_t>(num_levels()); }
  std::size_t fanout() const noexcept { return std::size_t{1} << dimension_; }

  CubeId root() const noexcept { return CubeId{0, 0}; }

  // All cubes, level-major then lexicographic multi-index (coordinate 0 most
  // significant). The position of a cube in this list is its ordinal.
  const std::vector<CubeId>& cubes() const noexcept { return cubes_; }
  std::size_t level_count(int level) const noexcept { return std::size_t{1} << (dimension_ * level); }

  bool valid(CubeId q) const noexcept;
  // Throws IndexError for an invalid cube.
  std::size_t ordinal(CubeId q) const;
  std::size_t ordinal_unchecked(CubeId q) const noexcept {
    return code_to_ordinal_[level_offset_[static_cast<std::size_t>(q.level)] + q.code];
  }
  CubeId cube(std::size_t ordinal) const { return cubes_.at(ordinal); }

  std::optional<CubeId> parent(CubeId q) const;
  std::vector<CubeId> children(CubeId q) const;
  // Every Q' contained in Q (Q included), in enumeration order.
  std::vector<CubeId> subcubes(CubeId q) const;

  // Half-open atom range [begin, end) of q.
  std::size_t atom_begin(CubeId q) const noexcept {
    return static_cast<std::size_t>(q.code) << (dimension_ * (depth_ - q.level));
  }
  std::size_t atom_end(CubeId q) const noexcept {
    return static_cast<std::size_t>(q.code + 1) << (dimension_ * (depth_ - q.level));
  }
  std::size_t atom_count(CubeId q) const noexcept { return atom_end(q) - atom_begin(q); }

  bool contains(CubeId outer, CubeId inner) const noexcept;
  bool contains_atom(CubeId q, std::size_t atom) const noexcept {
    return atom >= atom_begin(q) && atom < atom_end(q);
  }
  // The unique cube at `level` that contains `atom`.
  CubeId ancestor(std::size_t atom, int level) const noexcept {
    return CubeId{level, static_cast<std::uint64_t>(atom >> (dimension_ * (depth_ - level)))};
  }

  std::vector<std::uint32_t> multi_index(CubeId q) const;
  CubeId from_multi_index(int level, std::span<const std::uint32_t> m) const;

  // Paths look like "0/3/1"; the root is "". Throws ParseError.
  std::string path(CubeId q) const;
  CubeId cube_from_path(std::string_view path) const;

  // Index of a cell in level-major storage.
  std::size_t cell_index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.level) * num_atoms_ + c.atom;
  }

 private:
  std::uint64_t lex_rank(int level, std::uint64_t code) const noexcept;

  int dimension_;
  int depth_;
  std::size_t num_atoms_;
  std::vector<CubeId> cubes_;
  std::vector<std::size_t> level_offset_;
  std::vector<std::size_t> code_to_ordinal_;
};

DyadicSystem build_system(int dimension, int depth);

// Cells of the Carleson box of q, level-major then by atom.
std::vector<Cell> box_members(const DyadicSystem& sys, CubeId q);
std::size_t box_size(const DyadicSystem& sys, CubeId q);

}  // namespace dyadic
