#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/suffix_tree.hpp"

namespace stc {
namespace {

void write_node(const ClassTree& tree, NodeId node, std::string& buf, std::ostream& out) {
  if (node != ClassTree::root()) {
    buf += "{\"c\":";
    buf += std::to_string(static_cast<std::uint32_t>(tree.label(node)));
    buf += ",\"f\":";
    buf += std::to_string(tree.frequency(node));
    buf += ",\"k\":[";
  } else {
    buf += "{\"k\":[";
  }
  bool first = true;
  for (NodeId c : tree.children(node)) {
    if (!first) buf += ',';
    first = false;
    write_node(tree, c, buf, out);
  }
  buf += "]}";
  if (buf.size() > (1u << 16)) {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  }
}

// Streams the profile into preorder arrays without materialising a DOM; a
// depth-8 profile of a large class holds millions of nodes.
class ProfileSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  struct Result {
    std::vector<char32_t> labels;
    std::vector<std::uint32_t> freqs;
    std::vector<std::uint8_t> depths;
    std::vector<std::uint32_t> parents;
    std::optional<std::uint64_t> depth, doc_count, char_count;
    bool has_root = false;
  };

  Result result;
  std::string error;

  bool null() override { return fail("unexpected null"); }
  bool boolean(bool) override { return fail("unexpected boolean"); }
  bool number_integer(number_integer_t v) override {
    if (v < 0) return fail("negative number");
    return number(static_cast<std::uint64_t>(v));
  }
  bool number_unsigned(number_unsigned_t v) override { return number(v); }
  bool number_float(number_float_t, const string_t&) override { return fail("non-integer number"); }
  bool string(string_t&) override { return fail("unexpected string"); }
  bool binary(binary_t&) override { return fail("unexpected binary"); }

  bool start_object(std::size_t) override {
    if (frames_.empty()) {
      frames_.push_back({Frame::Top, 0});
      return true;
    }
    auto& top = frames_.back();
    if (top.kind == Frame::Top && key_ == "root") {
      if (result.has_root) return fail("duplicate root");
      result.has_root = true;
      push_node(0, 0);
      frames_.push_back({Frame::Node, 0});
      return true;
    }
    if (top.kind == Frame::Children) {
      const auto parent = top.node;
      const auto depth = static_cast<std::uint32_t>(result.depths[parent]) + 1;
      if (depth > kMaxTreeDepth) return fail("node deeper than " + std::to_string(kMaxTreeDepth));
      push_node(parent, depth);
      frames_.push_back({Frame::Node, static_cast<std::uint32_t>(result.labels.size() - 1)});
      return true;
    }
    return fail("unexpected object");
  }

  bool key(string_t& k) override {
    key_ = k;
    const auto kind = frames_.back().kind;
    if (kind == Frame::Top) {
      if (k == "depth" || k == "doc_count" || k == "char_count" || k == "root") return true;
      return fail("unknown key '" + k + "'");
    }
    const bool is_root = frames_.back().node == 0;
    if (k == "k" || (!is_root && (k == "c" || k == "f"))) return true;
    return fail("unknown node key '" + k + "'");
  }

  bool end_object() override {
    const auto frame = frames_.back();
    frames_.pop_back();
    if (frame.kind == Frame::Node && frame.node != 0) {
      if (!seen_c_[frame.node] || result.freqs[frame.node] == 0) {
        return fail("node without \"c\" or with zero \"f\"");
      }
    }
    return true;
  }

  bool start_array(std::size_t) override {
    if (frames_.empty() || frames_.back().kind != Frame::Node || key_ != "k") {
      return fail("unexpected array");
    }
    frames_.push_back({Frame::Children, frames_.back().node});
    return true;
  }

  bool end_array() override {
    frames_.pop_back();
    return true;
  }

  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& e) override {
    error = "malformed JSON at byte " + std::to_string(pos) + ": " + e.what();
    return false;
  }

 private:
  struct Frame {
    enum Kind { Top, Node, Children } kind;
    std::uint32_t node;
  };

  bool fail(std::string msg) {
    if (error.empty()) error = std::move(msg);
    return false;
  }

  void push_node(std::uint32_t parent, std::uint32_t depth) {
    result.labels.push_back(0);
    result.freqs.push_back(0);
    result.depths.push_back(static_cast<std::uint8_t>(depth));
    result.parents.push_back(parent);
    seen_c_.push_back(false);
  }

  bool number(std::uint64_t v) {
    if (frames_.empty()) return fail("unexpected number");
    const auto& top = frames_.back();
    if (top.kind == Frame::Top) {
      if (key_ == "depth") result.depth = v;
      else if (key_ == "doc_count") result.doc_count = v;
      else if (key_ == "char_count") result.char_count = v;
      else return fail("unexpected number for key '" + key_ + "'");
      return true;
    }
    if (top.kind == Frame::Node && top.node != 0) {
      if (key_ == "c") {
        if (v > 0x10FFFF) return fail("codepoint out of range");
        result.labels[top.node] = static_cast<char32_t>(v);
        seen_c_[top.node] = true;
        return true;
      }
      if (key_ == "f") {
        if (v > std::numeric_limits<std::uint32_t>::max()) return fail("frequency out of range");
        result.freqs[top.node] = static_cast<std::uint32_t>(v);
        return true;
      }
    }
    return fail("unexpected number");
  }

  std::vector<Frame> frames_;
  std::vector<bool> seen_c_;
  std::string key_;
};

}  // namespace

void write_profile(const ClassTree& tree, std::ostream& out) {
  std::string buf = "{\"depth\":" + std::to_string(tree.depth_limit()) +
                    ",\"doc_count\":" + std::to_string(tree.doc_count()) +
                    ",\"char_count\":" + std::to_string(tree.char_count()) + ",\"root\":";
  write_node(tree, ClassTree::root(), buf, out);
  buf += "}\n";
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

ClassTree read_profile(std::istream& in) {
  ProfileSax sax;
  const bool ok = nlohmann::json::sax_parse(in, &sax);
  if (!ok) throw ConfigError("invalid profile: " + (sax.error.empty() ? "parse failed" : sax.error));
  auto& r = sax.result;
  if (!r.depth || !r.doc_count || !r.char_count || !r.has_root) {
    throw ConfigError("invalid profile: missing depth, doc_count, char_count or root");
  }
  if (*r.depth < kMinTreeDepth || *r.depth > kMaxTreeDepth) {
    throw ConfigError("invalid profile: depth " + std::to_string(*r.depth) + " out of range");
  }

  const std::size_t n = r.labels.size();
  std::vector<std::int64_t> last_child(n, -1);
  std::uint64_t level1 = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = r.parents[i];
    if (r.depths[i] > *r.depth) throw ConfigError("invalid profile: node deeper than declared depth");
    if (static_cast<std::int64_t>(r.labels[i]) <= last_child[p]) {
      throw ConfigError("invalid profile: children not strictly ordered by codepoint");
    }
    last_child[p] = r.labels[i];
    if (p != 0 && r.freqs[i] > r.freqs[p]) {
      throw ConfigError("invalid profile: child frequency exceeds its parent's");
    }
    if (r.depths[i] == 1) level1 += r.freqs[i];
  }
  if (level1 != *r.char_count) {
    throw ConfigError("invalid profile: level-1 frequencies sum to " + std::to_string(level1) +
                      ", char_count is " + std::to_string(*r.char_count));
  }

  ClassTree::Preorder pre{std::move(r.labels), std::move(r.freqs), std::move(r.depths),
                          std::move(r.parents)};
  return ClassTree::from_preorder(pre, static_cast<int>(*r.depth),
                                  static_cast<std::size_t>(*r.doc_count), *r.char_count);
}

}  // namespace stc
