#include "dyadic/dyadic_system.hpp"

#include <algorithm>
#include <charconv>

#include "dyadic/errors.hpp"

namespace dyadic {

int DyadicSystem::max_depth(int dimension) noexcept {
  switch (dimension) {
    case 1: return 12;
    case 2: return 6;
    case 3: return 4;
    default: return -1;
  }
}

DyadicSystem::DyadicSystem(int dimension, int depth) : dimension_(dimension), depth_(depth) {
  const int limit = max_depth(dimension);
  if (limit < 0) {
    throw SizeLimitError("dimension must be 1, 2 or 3 (got " + std::to_string(dimension) + ")");
  }
  if (depth < 0 || depth > limit) {
    throw SizeLimitError("depth " + std::to_string(depth) + " outside [0, " + std::to_string(limit) +
                         "] for dimension " + std::to_string(dimension));
  }
  num_atoms_ = std::size_t{1} << (dimension * depth);

  std::size_t total = 0;
  level_offset_.reserve(static_cast<std::size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) {
    level_offset_.push_back(total);
    total += level_count(j);
  }
  cubes_.resize(total);
  code_to_ordinal_.resize(total);
  for (int j = 0; j <= depth; ++j) {
    const std::size_t off = level_offset_[static_cast<std::size_t>(j)];
    for (std::uint64_t code = 0; code < level_count(j); ++code) {
      const std::size_t ord = off + static_cast<std::size_t>(lex_rank(j, code));
      cubes_[ord] = CubeId{j, code};
      code_to_ordinal_[off + code] = ord;
    }
  }
}

std::uint64_t DyadicSystem::lex_rank(int level, std::uint64_t code) const noexcept {
  std::uint64_t rank = 0;
  for (int i = 0; i < dimension_; ++i) {
    std::uint64_t m = 0;
    for (int t = 0; t < level; ++t) {
      const std::uint64_t digit = (code >> (dimension_ * (level - 1 - t))) & (fanout() - 1);
      m = (m << 1) | ((digit >> i) & 1U);
    }
    rank |= m << (level * (dimension_ - 1 - i));
  }
  return rank;
}

bool DyadicSystem::valid(CubeId q) const noexcept {
  return q.level >= 0 && q.level <= depth_ && q.code < level_count(q.level);
}

std::size_t DyadicSystem::ordinal(CubeId q) const {
  if (!valid(q)) {
    throw IndexError("cube (level " + std::to_string(q.level) + ", code " + std::to_string(q.code) +
                     ") is not in the system");
  }
  return ordinal_unchecked(q);
}

std::optional<CubeId> DyadicSystem::parent(CubeId q) const {
  ordinal(q);
  if (q.level == 0) return std::nullopt;
  return CubeId{q.level - 1, q.code >> dimension_};
}

std::vector<CubeId> DyadicSystem::children(CubeId q) const {
  ordinal(q);
  std::vector<CubeId> out;
  if (q.level == depth_) return out;
  out.reserve(fanout());
  for (std::uint64_t c = 0; c < fanout(); ++c) out.push_back(CubeId{q.level + 1, (q.code << dimension_) | c});
  std::sort(out.begin(), out.end(),
            [this](CubeId a, CubeId b) { return ordinal_unchecked(a) < ordinal_unchecked(b); });
  return out;
}

std::vector<CubeId> DyadicSystem::subcubes(CubeId q) const {
  ordinal(q);
  std::vector<CubeId> out;
  for (int k = q.level; k <= depth_; ++k) {
    const int shift = dimension_ * (k - q.level);
    const std::uint64_t first = q.code << shift;
    const std::uint64_t last = (q.code + 1) << shift;
    for (std::uint64_t c = first; c < last; ++c) out.push_back(CubeId{k, c});
  }
  std::sort(out.begin(), out.end(),
            [this](CubeId a, CubeId b) { return ordinal_unchecked(a) < ordinal_unchecked(b); });
  return out;
}

bool DyadicSystem::contains(CubeId outer, CubeId inner) const noexcept {
  if (inner.level < outer.level) return false;
  return (inner.code >> (dimension_ * (inner.level - outer.level))) == outer.code;
}

std::vector<std::uint32_t> DyadicSystem::multi_index(CubeId q) const {
  ordinal(q);
  std::vector<std::uint32_t> m(static_cast<std::size_t>(dimension_), 0);
  for (int t = 0; t < q.level; ++t) {
    const std::uint64_t digit = (q.code >> (dimension_ * (q.level - 1 - t))) & (fanout() - 1);
    for (int i = 0; i < dimension_; ++i) {
      m[static_cast<std::size_t>(i)] = (m[static_cast<std::size_t>(i)] << 1) | ((digit >> i) & 1U);
    }
  }
  return m;
}

CubeId DyadicSystem::from_multi_index(int level, std::span<const std::uint32_t> m) const {
  if (level < 0 || level > depth_ || m.size() != static_cast<std::size_t>(dimension_)) {
    throw IndexError("multi-index does not match the system");
  }
  std::uint64_t code = 0;
  for (int t = 0; t < level; ++t) {
    std::uint64_t digit = 0;
    for (int i = 0; i < dimension_; ++i) {
      const std::uint32_t mi = m[static_cast<std::size_t>(i)];
      if ((mi >> level) != 0) throw IndexError("multi-index component out of range");
      digit |= static_cast<std::uint64_t>((mi >> (level - 1 - t)) & 1U) << i;
    }
    code = (code << dimension_) | digit;
  }
  return CubeId{level, code};
}

std::string DyadicSystem::path(CubeId q) const {
  ordinal(q);
  std::string out;
  for (int t = 0; t < q.level; ++t) {
    const std::uint64_t digit = (q.code >> (dimension_ * (q.level - 1 - t))) & (fanout() - 1);
    if (t > 0) out.push_back('/');
    out += std::to_string(digit);
  }
  return out;
}

CubeId DyadicSystem::cube_from_path(std::string_view path) const {
  CubeId q = root();
  if (path.empty()) return q;
  std::size_t pos = 0;
  while (true) {
    const std::size_t slash = path.find('/', pos);
    const std::string_view part = path.substr(pos, slash == std::string_view::npos ? path.size() - pos : slash - pos);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw ParseError("malformed path component '" + std::string(part) + "' in '" + std::string(path) + "'");
    }
    if (value >= fanout()) {
      throw ParseError("child index " + std::to_string(value) + " out of range [0, " +
                       std::to_string(fanout()) + ") in '" + std::string(path) + "'");
    }
    if (q.level == depth_) throw ParseError("path '" + std::string(path) + "' is deeper than the system");
    q = CubeId{q.level + 1, (q.code << dimension_) | value};
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return q;
}

DyadicSystem build_system(int dimension, int depth) { return DyadicSystem(dimension, depth); }

std::size_t box_size(const DyadicSystem& sys, CubeId q) {
  sys.ordinal(q);
  return sys.atom_count(q) * static_cast<std::size_t>(sys.depth() - q.level + 1);
}

std::vector<Cell> box_members(const DyadicSystem& sys, CubeId q) {
  sys.ordinal(q);
  std::vector<Cell> out;
  out.reserve(box_size(sys, q));
  for (int j = q.level; j <= sys.depth(); ++j) {
    for (std::size_t a = sys.atom_begin(q); a < sys.atom_end(q); ++a) out.push_back(Cell{a, j});
  }
  return out;
}

}  // namespace dyadic
