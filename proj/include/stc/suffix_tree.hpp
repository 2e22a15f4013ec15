#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stc {

inline constexpr int kMinTreeDepth = 1;
inline constexpr int kMaxTreeDepth = 16;
inline constexpr int kDefaultTreeDepth = 8;

/// Handle to a node of one ClassTree. Only meaningful for the tree that
/// produced it.
struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

/// Contiguous run of node ids (siblings, or one tree level).
class NodeRange {
 public:
  class iterator {
   public:
    using iterator_category = std::random_access_iterator_tag;
    using value_type = NodeId;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = NodeId;

    iterator() = default;
    explicit iterator(std::uint32_t i) : i_(i) {}
    NodeId operator*() const { return NodeId{i_}; }
    iterator& operator++() { ++i_; return *this; }
    iterator operator++(int) { auto t = *this; ++i_; return t; }
    friend bool operator==(iterator a, iterator b) { return a.i_ == b.i_; }

   private:
    std::uint32_t i_ = 0;
  };

  NodeRange(std::uint32_t begin, std::uint32_t end) : begin_(begin), end_(end) {}
  iterator begin() const { return iterator(begin_); }
  iterator end() const { return iterator(end_); }
  std::size_t size() const { return end_ - begin_; }
  bool empty() const { return begin_ == end_; }

 private:
  std::uint32_t begin_;
  std::uint32_t end_;
};

/// Depth-limited, node-labelled suffix tree of one class of documents.
///
/// Every node stands for one distinct substring (its root path) of length at
/// most depth_limit() and carries that substring's occurrence count across
/// the class. There are no terminal symbols and no suffix links.
///
/// The tree is immutable once built. Nodes are stored in level order with
/// each node's children contiguous and sorted by character, so a level is a
/// contiguous id range and child lookup is a binary search. All queries are
/// safe from any number of threads.
class ClassTree {
 public:
  /// Empty tree of depth kDefaultTreeDepth.
  ClassTree();

  int depth_limit() const { return depth_limit_; }
  std::size_t doc_count() const { return doc_count_; }
  std::uint64_t char_count() const { return char_count_; }

  /// Number of non-root nodes, i.e. distinct substrings of length <= depth.
  std::size_t node_count() const { return labels_.size() - 1; }
  /// Deepest level with at least one node (0 for an empty tree).
  int populated_depth() const { return static_cast<int>(level_begin_.size()) - 2; }

  static constexpr NodeId root() { return NodeId{0}; }

  char32_t label(NodeId n) const { return labels_[n.index]; }
  std::uint32_t frequency(NodeId n) const { return freqs_[n.index]; }
  int level(NodeId n) const;
  std::optional<NodeId> parent(NodeId n) const;

  NodeRange children(NodeId n) const {
    return {child_begin_[n.index], child_begin_[n.index + 1]};
  }
  std::optional<NodeId> child(NodeId n, char32_t c) const;
  /// Sum of the frequencies of n's children.
  std::uint64_t child_frequency_sum(NodeId n) const { return child_sum_[n.index]; }

  /// Nodes at `level` (1-based; level 0 is the root).
  NodeRange level_nodes(int level) const;
  std::uint64_t level_frequency_sum(int level) const;

  /// Walk `path` from the root. Absent if any step is missing.
  std::optional<NodeId> find(std::u32string_view path) const;
  /// Root path of n.
  std::u32string path(NodeId n) const;

  bool operator==(const ClassTree&) const = default;

 private:
  friend class TreeBuilder;
  friend ClassTree read_profile(std::istream& in);

  struct Preorder {
    std::vector<char32_t> labels;
    std::vector<std::uint32_t> freqs;
    std::vector<std::uint8_t> depths;
    std::vector<std::uint32_t> parents;
  };
  static ClassTree from_preorder(const Preorder& pre, int depth_limit, std::size_t doc_count,
                                 std::uint64_t char_count);

  int depth_limit_ = kDefaultTreeDepth;
  std::size_t doc_count_ = 0;
  std::uint64_t char_count_ = 0;
  std::vector<char32_t> labels_;
  std::vector<std::uint32_t> freqs_;
  std::vector<std::uint32_t> child_begin_;  // node count + 1 entries
  std::vector<std::uint64_t> child_sum_;
  std::vector<std::uint32_t> level_begin_;  // populated levels + 2 entries
  std::vector<std::uint64_t> level_sum_;
};

/// Accumulates documents for one class and freezes them into a ClassTree.
class TreeBuilder {
 public:
  /// Throws ConfigError unless kMinTreeDepth <= depth_limit <= kMaxTreeDepth.
  explicit TreeBuilder(int depth_limit = kDefaultTreeDepth);

  /// Adds every suffix of s, each truncated to the depth limit. Empty
  /// strings are ignored.
  void insert(std::u32string_view s);

  int depth_limit() const { return depth_limit_; }
  std::size_t doc_count() const { return segments_.size(); }
  std::uint64_t char_count() const { return text_.size(); }

  ClassTree build() const;

 private:
  struct Segment {
    std::uint32_t start;
    std::uint32_t length;
  };
  int depth_limit_;
  std::u32string text_;
  std::vector<Segment> segments_;
};

ClassTree build_class_tree(std::span<const std::u32string> docs, int depth_limit);

/// f(node) / sum of f over node and its siblings. node must not be the root.
double conditional_probability(const ClassTree& tree, NodeId node);
/// f(node) / sum of f over every node on the same level. node must not be
/// the root.
double total_probability(const ClassTree& tree, NodeId node);

struct TreeStats {
  std::size_t node_count = 0;
  std::uint64_t frequency_sum = 0;
  /// Indexed by level; entry 0 (the root) is always 0.
  std::vector<std::uint64_t> per_level_frequency_sums;
  std::vector<std::size_t> per_level_node_counts;
  /// Mean child count over nodes that have children, root included.
  double density = 0.0;
};

/// Computed by a full traversal rather than the cached level sums.
TreeStats tree_stats(const ClassTree& tree);

/// Profile file: {"depth","doc_count","char_count","root":{"k":[...]}} with
/// nodes {"c": codepoint, "f": frequency, "k": [children]} in preorder.
void write_profile(const ClassTree& tree, std::ostream& out);
/// Throws ConfigError on malformed or inconsistent input.
ClassTree read_profile(std::istream& in);

}  // namespace stc
