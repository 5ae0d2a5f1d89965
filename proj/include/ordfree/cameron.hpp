#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ordfree/adfam.hpp"
#include "ordfree/basis.hpp"
#include "ordfree/witness.hpp"

namespace ordfree {

// A frame whose blocks each carry their own free machinery: a rank-2 pair on
// an inner coterminal frame inside the open block, extended to infinite rank
// by the conjugate basis words. Bases of distinct blocks have disjoint
// supports by construction.
class BlockFreeFamily {
 public:
  BlockFreeFamily(Interval hull, Frame frame, Selector selected = select_all())
      : hull_(std::move(hull)), frame_(std::move(frame)), selected_(std::move(selected)) {
    const Interval fh = frame_.hull();
    if ((hull_.lo && (!fh.lo || *fh.lo < *hull_.lo)) ||
        (hull_.hi && (!fh.hi || *fh.hi > *hull_.hi)))
      throw DomainError("block family: frame leaves the family hull");
  }

  const Interval& hull() const { return hull_; }
  const Frame& frame() const { return frame_; }
  const Selector& selected() const { return selected_; }

  bool block_selected(std::int64_t i) const {
    return frame_.valid_index(i) && selector_contains(selected_, i);
  }

  Interval open_block(std::int64_t i) const {
    return Interval::open(frame_.point(i), frame_.point(i + 1));
  }

  /// The rank-2 pair acting inside the open block, identity elsewhere.
  std::pair<MapDescriptor, MapDescriptor> block_basis(std::int64_t i) const {
    if (!block_selected(i)) throw DomainError("block family: block not selected");
    return rank2_basis(Frame::geometric_in(open_block(i)));
  }

  /// The j-th generator of the block's infinite-rank family: w_j = f^-j g f^j
  /// over the block basis, as a standalone descriptor confined to the block.
  MapDescriptor block_generator(std::int64_t i, std::uint64_t j) const {
    auto [f, g] = block_basis(i);
    return rank_omega_descriptor(j, f, g);
  }

  bool operator==(const BlockFreeFamily& o) const {
    return hull_ == o.hull_ && frame_ == o.frame_ && selected_ == o.selected_;
  }

 private:
  Interval hull_;
  Frame frame_;
  Selector selected_;
};

// Lazy rule: block i carries the h(i)-th generator of its family, where h
// enumerates the branch's almost-disjoint set.
class CameronRule final : public BlockRule {
 public:
  CameronRule(BlockFreeFamily family, Branch branch)
      : family_(std::move(family)), enum_(std::move(branch)) {}
  const char* rule_name() const override { return "cameron"; }
  MapDescriptor at(std::int64_t block) const override {
    if (block < 0) throw DomainError("cameron rule: negative block");
    return family_.block_generator(block, enum_.at(static_cast<std::uint64_t>(block)));
  }
  const BlockFreeFamily& family() const { return family_; }
  const Branch& branch() const { return enum_.branch(); }

 private:
  BlockFreeFamily family_;
  Enumerator enum_;
};

// A generator of the branch-indexed family: restricted to block i it is
// exactly the h_branch(i)-th basis element, and the identity off the hull.
struct CameronGenerator {
  BlockFreeFamily family;
  Branch branch;
  MapDescriptor descriptor;

  GeneratorId id() const { return GeneratorId("g", branch); }
};

inline CameronGenerator cameron_generator(const BlockFreeFamily& fam, const Branch& branch) {
  if (fam.frame().kind() != Frame::IndexKind::naturals)
    throw DomainError("cameron generator: family frame must be indexed by the naturals");
  if (!selector_is_all(fam.selected()))
    throw DomainError("cameron generator: family must select every block");
  MapDescriptor d = MapDescriptor::lazy(fam.frame(), std::make_shared<CameronRule>(fam, branch));
  return CameronGenerator{fam, branch, std::move(d)};
}

/// Blocks below N where the two generators' restrictions coincide: exactly
/// the blocks whose index is below the branches' common prefix length.
inline std::vector<std::int64_t> agreement_blocks(const CameronGenerator& ga,
                                                  const CameronGenerator& gb, std::int64_t n) {
  if (!(ga.family == gb.family)) throw DomainError("agreement: different families");
  if (ga.branch == gb.branch) throw DomainError("agreement: branches must be distinct");
  const auto ell = static_cast<std::int64_t>(intersection_size(ga.branch, gb.branch));
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < std::min(ell, n); ++i) out.push_back(i);
  return out;
}

struct CameronWitness {
  bool found = false;
  std::int64_t block = 0;
  Rational point;
  Rational image;
  std::size_t candidates_tried = 0;
};

/// Moved-point witness for a reduced word over branch-indexed generators.
/// Picks the first block past every pairwise common prefix, where the induced
/// letters are distinct basis elements, and searches inside that block only.
/// The returned point is re-verified against the full lazy generators.
inline CameronWitness cameron_word_witness(const BlockFreeFamily& fam, const Word& word,
                                           const WitnessBudget& budget = {}) {
  Word w = reduce(word);
  if (w.empty()) throw DomainError("cameron witness: word reduces to the empty word");
  std::vector<Branch> branches;
  for (const auto& l : w.letters()) {
    const auto* b = std::get_if<Branch>(&l.gen.index);
    if (!b) throw DomainError("cameron witness: letters must carry branch indices");
    bool seen = false;
    for (const auto& known : branches) seen = seen || known == *b;
    if (!seen) branches.push_back(*b);
  }
  std::int64_t block = 0;
  for (std::size_t a = 0; a < branches.size(); ++a)
    for (std::size_t b = a + 1; b < branches.size(); ++b)
      block = std::max(block,
                       static_cast<std::int64_t>(intersection_size(branches[a], branches[b])));

  // induced word over the block's own basis pair
  auto [fb, gb] = fam.block_basis(block);
  Action induced;
  const GeneratorId fid("f"), gid("g");
  induced.alphabet[fid] = fb;
  induced.alphabet[gid] = gb;
  Word substituted;
  for (const auto& l : w.letters()) {
    const auto& br = std::get<Branch>(l.gen.index);
    std::uint64_t j = Enumerator(br).at(static_cast<std::uint64_t>(block));
    Word piece = rank_omega_word(j, fid, gid);
    substituted = substituted.concat(l.exp > 0 ? piece : piece.inverse());
  }
  substituted = reduce(substituted);
  if (substituted.empty())
    throw DomainError("cameron witness: induced block word vanished");  // unreachable

  Interval window = Interval::closed(fam.frame().point(block), fam.frame().point(block + 1));
  WitnessResult r = find_moved_point_in(induced, substituted, window, budget);
  CameronWitness out;
  out.block = block;
  out.candidates_tried = r.candidates_tried;
  if (!r.found) return out;

  // verify against the production lazy generators
  Action full;
  for (const auto& br : branches)
    full.alphabet[GeneratorId("g", br)] = cameron_generator(fam, br).descriptor;
  Rational image = eval_word(full, w, r.point);
  if (image == r.point) throw DomainError("cameron witness: verification failed");
  out.found = true;
  out.point = r.point;
  out.image = image;
  return out;
}

// --- patched families over interval collections ------------------------------

// Lazy rule: on every selected block, the fixed j-th generator of that
// block's family; identity elsewhere. The intensional form of merging the
// per-interval generators by disjoint patching.
class FamilyMemberRule final : public BlockRule {
 public:
  FamilyMemberRule(BlockFreeFamily family, std::uint64_t index)
      : family_(std::move(family)), index_(index) {}
  const char* rule_name() const override { return "family_member"; }
  MapDescriptor at(std::int64_t block) const override {
    if (!family_.block_selected(block)) return MapDescriptor::identity();
    return family_.block_generator(block, index_);
  }
  DeclaredSupport support(const Frame& frame) const override {
    return DeclaredSupport::blocks(BlockSet(frame, family_.selected()));
  }
  const BlockFreeFamily& family() const { return family_; }
  std::uint64_t index() const { return index_; }

 private:
  BlockFreeFamily family_;
  std::uint64_t index_;
};

// Lazy rule: every selected block hosts its own branch-indexed family; this
// rule installs the generator of one branch inside each of them.
class IntervalCameronRule final : public BlockRule {
 public:
  IntervalCameronRule(BlockSet collection, Branch branch)
      : collection_(std::move(collection)), branch_(std::move(branch)) {}
  const char* rule_name() const override { return "interval_cameron"; }
  MapDescriptor at(std::int64_t block) const override {
    if (!collection_.contains_index(block)) return MapDescriptor::identity();
    Interval inside = Interval::open(collection_.frame.point(block),
                                     collection_.frame.point(block + 1));
    BlockFreeFamily inner(inside, Frame::geometric_naturals_in(inside));
    return cameron_generator(inner, branch_).descriptor;
  }
  DeclaredSupport support(const Frame& frame) const override {
    return DeclaredSupport::blocks(BlockSet(frame, collection_.selector));
  }
  const BlockSet& collection() const { return collection_; }
  const Branch& branch() const { return branch_; }

 private:
  BlockSet collection_;
  Branch branch_;
};

/// Generators of unbounded support over a coterminal collection of disjoint
/// intervals: f#j acts as the j-th family generator inside every interval of
/// the collection, and g#<branch> as the branch's generator of each
/// interval's own branch-indexed family.
inline Action pathological_family(const BlockSet& collection, std::uint64_t rank,
                                  const std::vector<Branch>& branches) {
  if (collection.frame.kind() != Frame::IndexKind::integers)
    throw DomainError("pathological family: collection not coterminal (frame not over Z)");
  if (!selector_coterminal(collection.selector))
    throw DomainError("pathological family: bounded collection, support would be bounded");
  BlockFreeFamily fam(Interval::all(), collection.frame, collection.selector);
  Action out;
  for (std::uint64_t j = 0; j < rank; ++j)
    out.alphabet[GeneratorId("f", j)] =
        MapDescriptor::lazy(collection.frame, std::make_shared<FamilyMemberRule>(fam, j));
  for (const auto& br : branches)
    out.alphabet[GeneratorId("g", br)] =
        MapDescriptor::lazy(collection.frame, std::make_shared<IntervalCameronRule>(collection, br));
  return out;
}

// A coterminal interval collection split into residue classes of increasing
// rank; one union alphabet acts across all classes at once, and the stage-k
// generator sets are nested prefixes of it.
struct PartitionedFamily {
  BlockSet base;                    // single-residue collection over Z
  std::vector<std::uint64_t> ranks;  // strictly increasing, one per class

  std::size_t depth() const { return ranks.size(); }

  std::int64_t base_modulus() const { return std::get<ResidueSel>(base.selector).modulus; }
  std::int64_t base_residue() const {
    return std::get<ResidueSel>(base.selector).residues.front();
  }

  /// Class of a selected block: position within the collection, mod depth.
  std::size_t class_of(std::int64_t index) const {
    const std::int64_t m = base_modulus(), r = base_residue();
    if (detail::imod(index, m) != r) throw DomainError("partition: index not in the collection");
    const std::int64_t pos = ifloor_div(Integer(index - r), Integer(m)).convert_to<std::int64_t>();
    return static_cast<std::size_t>(detail::imod(pos, static_cast<std::int64_t>(depth())));
  }

  Selector class_selector(std::size_t n) const {
    const std::int64_t m = base_modulus(), r = base_residue();
    const auto d = static_cast<std::int64_t>(depth());
    return select_residue(m * d, {detail::imod(r + m * static_cast<std::int64_t>(n), m * d)});
  }
};

class ClassRankedRule final : public BlockRule {
 public:
  ClassRankedRule(PartitionedFamily partition, std::uint64_t index)
      : partition_(std::move(partition)),
        family_(Interval::all(), partition_.base.frame, partition_.base.selector),
        index_(index) {}
  const char* rule_name() const override { return "class_ranked"; }
  MapDescriptor at(std::int64_t block) const override {
    if (!partition_.base.contains_index(block)) return MapDescriptor::identity();
    if (index_ >= partition_.ranks[partition_.class_of(block)]) return MapDescriptor::identity();
    return family_.block_generator(block, index_);
  }
  DeclaredSupport support(const Frame& frame) const override {
    // only classes whose rank admits this generator
    std::vector<std::int64_t> residues;
    const std::int64_t m = partition_.base_modulus(), r = partition_.base_residue();
    const auto d = static_cast<std::int64_t>(partition_.depth());
    for (std::int64_t n = 0; n < d; ++n)
      if (index_ < partition_.ranks[static_cast<std::size_t>(n)])
        residues.push_back(detail::imod(r + m * n, m * d));
    return DeclaredSupport::blocks(BlockSet(frame, select_residue(m * d, std::move(residues))));
  }
  const PartitionedFamily& partition() const { return partition_; }
  std::uint64_t index() const { return index_; }

 private:
  PartitionedFamily partition_;
  BlockFreeFamily family_;
  std::uint64_t index_;
};

/// The nested-union family: generator g#j acts as the class-n family's j-th
/// generator on the n-th class whenever j is below that class's rank, and the
/// stage-k alphabets {g#j : j < ranks[k]} are nested by construction.
inline std::pair<PartitionedFamily, Action> nested_union_family(
    const BlockSet& base, std::vector<std::uint64_t> ranks) {
  if (ranks.empty()) throw DomainError("nested family: need depth >= 1");
  for (std::size_t k = 1; k < ranks.size(); ++k)
    if (!(ranks[k - 1] < ranks[k])) throw DomainError("nested family: ranks must increase");
  if (base.frame.kind() != Frame::IndexKind::integers ||
      !selector_coterminal(base.selector))
    throw DomainError("nested family: collection not coterminal");
  const auto* res = std::get_if<ResidueSel>(&base.selector);
  if (!res || res->residues.size() != 1 || !res->excluded.empty())
    throw DomainError("nested family: base collection must be a single residue class");
  PartitionedFamily part{base, std::move(ranks)};
  Action out;
  for (std::uint64_t j = 0; j < part.ranks.back(); ++j)
    out.alphabet[GeneratorId("g", j)] =
        MapDescriptor::lazy(base.frame, std::make_shared<ClassRankedRule>(part, j));
  return {std::move(part), std::move(out)};
}

}  // namespace ordfree
