#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stc {

enum class Label { Spam, Ham };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

/// Subject and body of one email, always valid UTF-8.
struct ParsedEmail {
  std::string subject;
  std::string body;
  /// Malformed byte sequences replaced with U+FFFD while decoding.
  std::size_t replacements = 0;
};

/// Total: never throws. Picks the first "Subject:" header (case-insensitive,
/// folded continuation lines joined) and everything after the first blank
/// line. Input without a leading header block is all body.
ParsedEmail parse_email(std::string_view raw);

class Message {
 public:
  Message(ParsedEmail content, Label label, std::string source_id)
      : content_(std::move(content)), label_(label), source_id_(std::move(source_id)) {}

  const std::string& subject() const { return content_.subject; }
  const std::string& body() const { return content_.body; }
  Label label() const { return label_; }
  const std::string& source_id() const { return source_id_; }
  std::size_t replacements() const { return content_.replacements; }

  /// subject + '\n' + body, the text every classifier sees. A message
  /// without a subject is just its body.
  std::string text() const;
  std::u32string chars() const;

 private:
  ParsedEmail content_;
  Label label_;
  std::string source_id_;
};

/// Every regular file under dir (recursive), labelled `label`, ordered by
/// source_id. source_id is the file path relative to dir prefixed with
/// `id_prefix`.
std::vector<Message> load_class_dir(const std::filesystem::path& dir, Label label,
                                    std::string_view id_prefix = {});

/// Spam and ham directories. source ids are "spam/<rel>" and "ham/<rel>".
std::vector<Message> load_labeled_dir(const std::filesystem::path& spam_dir,
                                      const std::filesystem::path& ham_dir);

/// Ling-Spam layout: one tree mixing both classes; files whose name starts
/// with "spmsg" are spam. If dir has a "bare" subdirectory, that variant is
/// loaded.
std::vector<Message> load_lingspam_dir(const std::filesystem::path& dir);

/// Messages grouped by source name ("LS", "SAs-G2", ...).
using MessagePool = std::map<std::string, std::vector<Message>, std::less<>>;

struct SourceCount {
  std::string source;
  std::size_t count = 0;
};

struct EdsSpec {
  std::string name;
  SourceCount spam;
  std::vector<SourceCount> ham;
  std::uint64_t seed = 0;
};

/// The named data sets from the experiments (LS-FULL, LS-11, ..., BKS-SAeh-15)
/// with the given seed. Unknown name -> nullopt.
std::optional<EdsSpec> named_eds(std::string_view name, std::uint64_t seed);
std::vector<std::string> named_eds_list();

struct EmailDataSet {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<Message> messages;

  std::size_t count(Label label) const;
  std::size_t size() const { return messages.size(); }
};

/// Seeded sampling without replacement per source, then one seeded shuffle of
/// the result. Spam entries draw from the source's spam messages, ham entries
/// from its ham messages. Throws ConfigError naming the source on shortfall.
EmailDataSet compose_eds(const MessagePool& pool, const EdsSpec& spec);

/// {"name","seed","entries":[{"source_id","label"}]}, pretty printed.
std::string eds_manifest_json(const EmailDataSet& eds);

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;

  std::size_t fold_size(int fold) const;
};

/// Per-class seeded shuffle, then round-robin. Throws ConfigError when k < 2
/// or a class has fewer than k messages.
FoldAssignment stratified_folds(const EmailDataSet& eds, int k, std::uint64_t seed);

std::string folds_json(const EmailDataSet& eds, const FoldAssignment& folds,
                       std::uint64_t seed);

}  // namespace stc
