#include "stc/suffix_tree.hpp"

#include <algorithm>
#include <limits>

#include "stc/errors.hpp"

namespace stc {

ClassTree::ClassTree()
    : labels_{0}, freqs_{0}, child_begin_{1, 1}, child_sum_{0}, level_begin_{0, 1}, level_sum_{0} {}

int ClassTree::level(NodeId n) const {
  const auto it = std::upper_bound(level_begin_.begin(), level_begin_.end(), n.index);
  return static_cast<int>(it - level_begin_.begin()) - 1;
}

std::optional<NodeId> ClassTree::parent(NodeId n) const {
  if (n.index == 0) return std::nullopt;
  // child_begin_ is non-decreasing; the parent p satisfies
  // child_begin_[p] <= n < child_begin_[p + 1].
  const auto it = std::upper_bound(child_begin_.begin(), child_begin_.end(), n.index);
  return NodeId{static_cast<std::uint32_t>(it - child_begin_.begin() - 1)};
}

std::optional<NodeId> ClassTree::child(NodeId n, char32_t c) const {
  const auto first = labels_.begin() + child_begin_[n.index];
  const auto last = labels_.begin() + child_begin_[n.index + 1];
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return std::nullopt;
  return NodeId{static_cast<std::uint32_t>(it - labels_.begin())};
}

NodeRange ClassTree::level_nodes(int level) const {
  if (level < 0 || level > populated_depth()) return {0, 0};
  return {level_begin_[static_cast<std::size_t>(level)],
          level_begin_[static_cast<std::size_t>(level) + 1]};
}

std::uint64_t ClassTree::level_frequency_sum(int level) const {
  if (level < 0 || level > populated_depth()) return 0;
  return level_sum_[static_cast<std::size_t>(level)];
}

std::optional<NodeId> ClassTree::find(std::u32string_view path) const {
  NodeId node = root();
  for (char32_t c : path) {
    const auto next = child(node, c);
    if (!next) return std::nullopt;
    node = *next;
  }
  return node;
}

std::u32string ClassTree::path(NodeId n) const {
  std::u32string out;
  for (auto cur = std::optional<NodeId>(n); cur && cur->index != 0; cur = parent(*cur)) {
    out.push_back(label(*cur));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ClassTree ClassTree::from_preorder(const Preorder& pre, int depth_limit, std::size_t doc_count,
                                   std::uint64_t char_count) {
  const std::size_t n = pre.labels.size();
  ClassTree tree;
  tree.depth_limit_ = depth_limit;
  tree.doc_count_ = doc_count;
  tree.char_count_ = char_count;

  int max_depth = 0;
  std::vector<std::uint32_t> per_level(static_cast<std::size_t>(depth_limit) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++per_level[pre.depths[i]];
    max_depth = std::max<int>(max_depth, pre.depths[i]);
  }
  tree.level_begin_.assign(static_cast<std::size_t>(max_depth) + 2, 0);
  for (int l = 0; l <= max_depth; ++l) {
    tree.level_begin_[l + 1] = tree.level_begin_[l] + per_level[l];
  }

  // Preorder visits children in label order, so numbering each level in
  // preorder puts every sibling group contiguously and in parent order.
  std::vector<std::uint32_t> next_slot(tree.level_begin_.begin(), tree.level_begin_.end() - 1);
  std::vector<std::uint32_t> to_level(n);
  for (std::size_t i = 0; i < n; ++i) to_level[i] = next_slot[pre.depths[i]]++;

  tree.labels_.assign(n, 0);
  tree.freqs_.assign(n, 0);
  tree.child_sum_.assign(n, 0);
  tree.level_sum_.assign(static_cast<std::size_t>(max_depth) + 1, 0);
  std::vector<std::uint32_t> child_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = to_level[i];
    tree.labels_[x] = pre.labels[i];
    tree.freqs_[x] = pre.freqs[i];
    if (i == 0) continue;
    const auto p = to_level[pre.parents[i]];
    ++child_count[p];
    tree.child_sum_[p] += pre.freqs[i];
    tree.level_sum_[pre.depths[i]] += pre.freqs[i];
  }
  tree.child_begin_.assign(n + 1, 0);
  tree.child_begin_[0] = 1;
  for (std::size_t x = 0; x < n; ++x) tree.child_begin_[x + 1] = tree.child_begin_[x] + child_count[x];
  return tree;
}

TreeBuilder::TreeBuilder(int depth_limit) : depth_limit_(depth_limit) {
  if (depth_limit < kMinTreeDepth || depth_limit > kMaxTreeDepth) {
    throw ConfigError("tree depth must be in [" + std::to_string(kMinTreeDepth) + ", " +
                      std::to_string(kMaxTreeDepth) + "], got " + std::to_string(depth_limit));
  }
}

void TreeBuilder::insert(std::u32string_view s) {
  if (s.empty()) return;
  if (text_.size() + s.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("class text exceeds 2^32 characters");
  }
  segments_.push_back({static_cast<std::uint32_t>(text_.size()), static_cast<std::uint32_t>(s.size())});
  text_.append(s);
}

ClassTree TreeBuilder::build() const {
  // One window per suffix: the suffix truncated to the depth limit. Sorting
  // the windows lays the trie out in preorder; a window shares its first
  // lcp(prev, cur) nodes with the previous one and adds fresh nodes below.
  struct Window {
    std::uint32_t start;
    std::uint32_t length;
  };
  const auto depth = static_cast<std::uint32_t>(depth_limit_);
  std::vector<Window> windows;
  windows.reserve(text_.size());
  for (const auto& seg : segments_) {
    for (std::uint32_t i = 0; i < seg.length; ++i) {
      windows.push_back({seg.start + i, std::min(depth, seg.length - i)});
    }
  }
  const char32_t* text = text_.data();
  auto view = [text](const Window& w) { return std::u32string_view(text + w.start, w.length); };
  std::sort(windows.begin(), windows.end(),
            [&](const Window& a, const Window& b) { return view(a) < view(b); });

  ClassTree::Preorder pre;
  pre.labels.push_back(0);
  pre.freqs.push_back(0);
  pre.depths.push_back(0);
  pre.parents.push_back(0);

  std::vector<std::uint32_t> stack{0};  // stack[k] = node at depth k on the current path
  std::u32string_view prev;
  for (const auto& w : windows) {
    const auto cur = view(w);
    std::size_t lcp = 0;
    const std::size_t limit = std::min(prev.size(), cur.size());
    while (lcp < limit && prev[lcp] == cur[lcp]) ++lcp;
    stack.resize(lcp + 1);
    for (std::size_t k = stack.size() - 1; k < cur.size(); ++k) {
      pre.labels.push_back(cur[k]);
      pre.freqs.push_back(0);
      pre.depths.push_back(static_cast<std::uint8_t>(k + 1));
      pre.parents.push_back(stack.back());
      stack.push_back(static_cast<std::uint32_t>(pre.labels.size() - 1));
    }
    for (std::size_t k = 1; k <= cur.size(); ++k) ++pre.freqs[stack[k]];
    stack.resize(cur.size() + 1);
    prev = cur;
  }
  return ClassTree::from_preorder(pre, depth_limit_, segments_.size(), text_.size());
}

ClassTree build_class_tree(std::span<const std::u32string> docs, int depth_limit) {
  TreeBuilder builder(depth_limit);
  for (const auto& d : docs) builder.insert(d);
  return builder.build();
}

double conditional_probability(const ClassTree& tree, NodeId node) {
  const auto p = tree.parent(node);
  if (!p) throw ContractViolation("conditional_probability: root has no probability");
  return static_cast<double>(tree.frequency(node)) /
         static_cast<double>(tree.child_frequency_sum(*p));
}

double total_probability(const ClassTree& tree, NodeId node) {
  if (node == ClassTree::root()) throw ContractViolation("total_probability: root has no probability");
  return static_cast<double>(tree.frequency(node)) /
         static_cast<double>(tree.level_frequency_sum(tree.level(node)));
}

TreeStats tree_stats(const ClassTree& tree) {
  TreeStats stats;
  const auto levels = static_cast<std::size_t>(tree.depth_limit()) + 1;
  stats.per_level_frequency_sums.assign(levels, 0);
  stats.per_level_node_counts.assign(levels, 0);
  std::uint64_t internal = 0;
  std::uint64_t child_links = 0;

  struct Item {
    NodeId node;
    int level;
  };
  std::vector<Item> todo{{ClassTree::root(), 0}};
  while (!todo.empty()) {
    const auto [node, level] = todo.back();
    todo.pop_back();
    if (level > 0) {
      ++stats.node_count;
      stats.frequency_sum += tree.frequency(node);
      stats.per_level_frequency_sums[static_cast<std::size_t>(level)] += tree.frequency(node);
      ++stats.per_level_node_counts[static_cast<std::size_t>(level)];
    }
    const auto kids = tree.children(node);
    if (!kids.empty()) {
      ++internal;
      child_links += kids.size();
    }
    for (NodeId c : kids) todo.push_back({c, level + 1});
  }
  stats.density = internal == 0 ? 0.0 : static_cast<double>(child_links) / static_cast<double>(internal);
  return stats;
}

}  // namespace stc
