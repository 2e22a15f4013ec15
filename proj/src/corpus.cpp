#include "stc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>
#include <span>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/random.hpp"
#include "stc/text.hpp"

namespace stc {
namespace fs = std::filesystem;

std::string_view to_string(Label label) { return label == Label::Spam ? "spam" : "ham"; }

std::optional<Label> parse_label(std::string_view text) {
  if (text == "spam") return Label::Spam;
  if (text == "ham") return Label::Ham;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// "Name: value" where Name is printable ASCII without spaces or colons.
bool is_header_line(std::string_view line) {
  const auto colon = line.find(':');
  if (colon == 0 || colon == std::string_view::npos) return false;
  return std::all_of(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(colon),
                     [](char c) { return c > ' ' && c < 127; });
}

bool iequals_prefix(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const auto a = static_cast<unsigned char>(s[i]);
    const auto b = static_cast<unsigned char>(prefix[i]);
    if (std::tolower(a) != std::tolower(b)) return false;
  }
  return true;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void require_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("not a directory: " + dir.string());
}

std::vector<fs::path> regular_files(const fs::path& dir) {
  require_dir(dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  return files;
}

void sort_by_source_id(std::vector<Message>& messages) {
  std::sort(messages.begin(), messages.end(),
            [](const Message& a, const Message& b) { return a.source_id() < b.source_id(); });
}

}  // namespace

ParsedEmail parse_email(std::string_view raw) {
  ParsedEmail out;
  const std::string text = sanitize_utf8(raw, &out.replacements);
  const std::string_view all(text);

  // Locate the first blank line; the header block is everything before it.
  std::vector<std::string_view> header_lines;
  std::size_t body_start = std::string_view::npos;
  std::size_t pos = 0;
  while (pos < all.size()) {
    auto nl = all.find('\n', pos);
    const auto end = nl == std::string_view::npos ? all.size() : nl;
    const auto line = strip_cr(all.substr(pos, end - pos));
    if (line.empty()) {
      body_start = nl == std::string_view::npos ? all.size() : nl + 1;
      break;
    }
    header_lines.push_back(line);
    pos = nl == std::string_view::npos ? all.size() : nl + 1;
  }

  if (header_lines.empty() || !is_header_line(header_lines.front())) {
    out.body = text;
    return out;
  }

  for (std::size_t i = 0; i < header_lines.size(); ++i) {
    if (!iequals_prefix(header_lines[i], "subject:")) continue;
    std::string value(header_lines[i].substr(8));
    for (std::size_t j = i + 1; j < header_lines.size(); ++j) {
      const auto cont = header_lines[j];
      if (cont.front() != ' ' && cont.front() != '\t') break;
      value.append(cont);
    }
    out.subject = std::string(trim(value));
    break;
  }
  if (body_start != std::string_view::npos) out.body = std::string(all.substr(body_start));
  return out;
}

std::string Message::text() const {
  std::string out;
  out.reserve(subject().size() + 1 + body().size());
  if (!subject().empty()) out.append(subject()).push_back('\n');
  out.append(body());
  return out;
}

std::u32string Message::chars() const { return decode_utf8(text()).text; }

std::vector<Message> load_class_dir(const fs::path& dir, Label label, std::string_view id_prefix) {
  std::vector<Message> out;
  for (const auto& file : regular_files(dir)) {
    std::string id(id_prefix);
    id += fs::relative(file, dir).generic_string();
    out.emplace_back(parse_email(read_file(file)), label, std::move(id));
  }
  sort_by_source_id(out);
  return out;
}

std::vector<Message> load_labeled_dir(const fs::path& spam_dir, const fs::path& ham_dir) {
  require_dir(spam_dir);
  require_dir(ham_dir);
  auto out = load_class_dir(spam_dir, Label::Spam, "spam/");
  auto ham = load_class_dir(ham_dir, Label::Ham, "ham/");
  out.insert(out.end(), std::make_move_iterator(ham.begin()), std::make_move_iterator(ham.end()));
  sort_by_source_id(out);
  return out;
}

std::vector<Message> load_lingspam_dir(const fs::path& dir) {
  require_dir(dir);
  fs::path root = dir;
  std::error_code ec;
  if (fs::is_directory(dir / "bare", ec)) root = dir / "bare";

  std::vector<Message> out;
  for (const auto& file : regular_files(root)) {
    const auto name = file.filename().string();
    const Label label = name.rfind("spmsg", 0) == 0 ? Label::Spam : Label::Ham;
    out.emplace_back(parse_email(read_file(file)), label,
                     fs::relative(file, root).generic_string());
  }
  sort_by_source_id(out);
  return out;
}

namespace {

EdsSpec make_spec(std::string_view name, std::string_view spam_src, std::size_t spam_n,
                  std::vector<SourceCount> ham) {
  return EdsSpec{std::string(name), SourceCount{std::string(spam_src), spam_n}, std::move(ham), 0};
}

const std::vector<EdsSpec>& named_table() {
  static const std::vector<EdsSpec> table = [] {
    std::vector<EdsSpec> t;
    t.push_back(make_spec("LS-FULL", "LS", 481, {{"LS", 2412}}));
    t.push_back(make_spec("LS-11", "LS", 400, {{"LS", 400}}));
    t.push_back(make_spec("LS-46", "LS", 400, {{"LS", 600}}));
    t.push_back(make_spec("LS-15", "LS", 200, {{"LS", 1000}}));
    t.push_back(make_spec("SAe-11", "SAs-G2", 400, {{"SAe-G2", 400}}));
    t.push_back(make_spec("SAe-46", "SAs-G2", 400, {{"SAe-G2", 600}}));
    t.push_back(make_spec("SAe-15", "SAs-G2", 200, {{"SAe-G2", 1000}}));
    t.push_back(make_spec("SAeh-11", "SAs-G2", 400, {{"SAe-G2", 200}, {"SAh", 200}}));
    t.push_back(make_spec("SAeh-46", "SAs-G2", 400, {{"SAe-G2", 400}, {"SAh", 200}}));
    t.push_back(make_spec("SAeh-15", "SAs-G2", 200, {{"SAe-G2", 800}, {"SAh", 200}}));
    for (std::string_view ham : {"LS", "SAe", "SAeh"}) {
      const std::string prefix = "BKS-" + std::string(ham);
      if (ham == "LS") {
        t.push_back(make_spec(prefix + "-11", "BKS", 400, {{"LS", 400}}));
        t.push_back(make_spec(prefix + "-46", "BKS", 400, {{"LS", 600}}));
        t.push_back(make_spec(prefix + "-15", "BKS", 200, {{"LS", 1000}}));
      } else if (ham == "SAe") {
        t.push_back(make_spec(prefix + "-11", "BKS", 400, {{"SAe-G2", 400}}));
        t.push_back(make_spec(prefix + "-46", "BKS", 400, {{"SAe-G2", 600}}));
        t.push_back(make_spec(prefix + "-15", "BKS", 200, {{"SAe-G2", 1000}}));
      } else {
        t.push_back(make_spec(prefix + "-11", "BKS", 400, {{"SAe-G2", 200}, {"SAh", 200}}));
        t.push_back(make_spec(prefix + "-46", "BKS", 400, {{"SAe-G2", 400}, {"SAh", 200}}));
        t.push_back(make_spec(prefix + "-15", "BKS", 200, {{"SAe-G2", 800}, {"SAh", 200}}));
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

std::optional<EdsSpec> named_eds(std::string_view name, std::uint64_t seed) {
  for (const auto& spec : named_table()) {
    if (spec.name == name) {
      EdsSpec out = spec;
      out.seed = seed;
      return out;
    }
  }
  return std::nullopt;
}

std::vector<std::string> named_eds_list() {
  std::vector<std::string> names;
  for (const auto& spec : named_table()) names.push_back(spec.name);
  return names;
}

std::size_t EmailDataSet::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      messages.begin(), messages.end(), [label](const Message& m) { return m.label() == label; }));
}

EmailDataSet compose_eds(const MessagePool& pool, const EdsSpec& spec) {
  SeededRng rng(spec.seed);
  EmailDataSet eds{spec.name, spec.seed, {}};

  // Indices already drawn, per source, so one file never enters twice.
  std::map<std::string, std::set<std::size_t>, std::less<>> taken;

  auto draw = [&](const SourceCount& entry, Label label) {
    if (entry.count == 0) return;
    const auto it = pool.find(entry.source);
    if (it == pool.end()) throw ConfigError("unknown message source '" + entry.source + "'");
    auto& used = taken[entry.source];
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      if (it->second[i].label() == label && !used.contains(i)) candidates.push_back(i);
    }
    if (candidates.size() < entry.count) {
      throw ConfigError("source '" + entry.source + "' has " + std::to_string(candidates.size()) +
                        " " + std::string(to_string(label)) + " messages available, " +
                        std::to_string(entry.count) + " requested (short by " +
                        std::to_string(entry.count - candidates.size()) + ")");
    }
    // Partial Fisher-Yates: the first `count` slots become the sample.
    for (std::size_t i = 0; i < entry.count; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
      used.insert(candidates[i]);
      eds.messages.push_back(it->second[candidates[i]]);
    }
  };

  draw(spec.spam, Label::Spam);
  for (const auto& entry : spec.ham) draw(entry, Label::Ham);
  rng.shuffle(std::span<Message>(eds.messages));
  return eds;
}

std::string eds_manifest_json(const EmailDataSet& eds) {
  nlohmann::ordered_json doc;
  doc["name"] = eds.name;
  doc["seed"] = eds.seed;
  auto& entries = doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& m : eds.messages) {
    entries.push_back({{"source_id", m.source_id()}, {"label", to_string(m.label())}});
  }
  return doc.dump(2) + "\n";
}

std::size_t FoldAssignment::fold_size(int fold) const {
  return static_cast<std::size_t>(std::count(fold_of.begin(), fold_of.end(), fold));
}

FoldAssignment stratified_folds(const EmailDataSet& eds, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2, got " + std::to_string(k));
  FoldAssignment out{k, std::vector<int>(eds.size(), -1)};
  SeededRng rng(seed);
  for (Label label : {Label::Spam, Label::Ham}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < eds.size(); ++i) {
      if (eds.messages[i].label() == label) members.push_back(i);
    }
    if (members.size() < static_cast<std::size_t>(k)) {
      throw ConfigError("class " + std::string(to_string(label)) + " has " +
                        std::to_string(members.size()) + " messages, fewer than k=" +
                        std::to_string(k));
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t r = 0; r < members.size(); ++r) {
      out.fold_of[members[r]] = static_cast<int>(r % static_cast<std::size_t>(k));
    }
  }
  return out;
}

std::string folds_json(const EmailDataSet& eds, const FoldAssignment& folds, std::uint64_t seed) {
  nlohmann::ordered_json doc;
  doc["eds"] = eds.name;
  doc["k"] = folds.k;
  doc["seed"] = seed;
  auto& entries = doc["assignments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < eds.size(); ++i) {
    entries.push_back({{"source_id", eds.messages[i].source_id()}, {"fold", folds.fold_of[i]}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace stc
