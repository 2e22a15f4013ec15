#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "stc/errors.hpp"
#include "stc/experiment.hpp"
#include "synthetic.hpp"

using namespace stc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Workspace {
  fs::path dir = fs::temp_directory_path() / "stc_test_experiment";
  Workspace() {
    fs::remove_all(dir);
    synthetic::write_corpus(dir / "corpus", 25, 35, 17, 0.3);
  }
  ~Workspace() { fs::remove_all(dir); }
};

const char* kDirSpec = R"({
  "name": "toy",
  "eds": {"spam_dir": "corpus/spam", "ham_dir": "corpus/ham"},
  "classifier": "st",
  "st": {"phi": "linear", "norm": "none", "depth": 5},
  "folds": 5,
  "seed": 3,
  "output": {"dir": "out"}
})";

}  // namespace

TEST_CASE("spec parsing") {
  const auto spec = parse_experiment(kDirSpec, "/base");
  CHECK(spec.name == "toy");
  CHECK(spec.folds == 5);
  CHECK(spec.seed == 3);
  CHECK(spec.eds_uses_all);
  CHECK(spec.output_dir == fs::path("/base/out"));
  CHECK(spec.thresholds.size() == 31);
  const auto& cfg = std::get<ScoringConfig>(spec.classifier);
  CHECK(cfg.phi == SignificanceKind::Linear);
  CHECK(cfg.depth == 5);

  const auto preset = parse_experiment(
      R"({"sources":{"LS":{"lingspam":"ls"}},"eds":{"preset":"LS-11"},"classifier":"nb","seed":4,
          "thresholds":{"lo":0.9,"hi":1.1,"step":0.1}})",
      "/b");
  CHECK(preset.eds.spam.count == 400);
  CHECK(preset.eds.seed == 4);
  CHECK(preset.thresholds.size() == 3);
  CHECK(preset.sources.at("LS").kind == SourceSpec::Kind::LingSpam);
  CHECK(std::holds_alternative<TokenPipeline>(preset.classifier));

  const auto custom = parse_experiment(
      R"({"sources":{"a":{"dir":"x","label":"spam"},"b":{"dir":"y","label":"ham"}},
          "eds":{"name":"c","spam":{"source":"a","count":3},"ham":[{"source":"b","count":4}]},
          "classifier":"st"})",
      "/b");
  CHECK(custom.eds.name == "c");
  CHECK(custom.eds.ham.at(0).count == 4);
}

TEST_CASE("spec errors") {
  const char* bad[] = {
      "not json",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","colour":1})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"svm"})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","st":{"phi":"cubic"}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","st":{"norm":"tree"}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","st":{"depth":0}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","st":{"depth":"8"}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","st":{"extra":1}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","folds":1})",
      R"({"eds":{"preset":"LS-99"},"classifier":"st"})",
      R"({"classifier":"st"})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","thresholds":{"lo":1.2,"hi":1.0}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","thresholds":{"step":0}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"st","nb":{}})",
      R"({"eds":{"spam_dir":"a","ham_dir":"b"},"classifier":"nb","nb":{"min_length":-1}})",
      R"({"sources":{"x":{"dir":"a","label":"eggs"}},"eds":{"spam":{"source":"x","count":1}},"classifier":"st"})",
      R"({"eds":{"spam":{"source":"x","count":-2}},"classifier":"st"})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_experiment(text, "/b"), ConfigError);
  }
}

TEST_CASE("end to end experiment") {
  Workspace ws;
  const auto spec_path = ws.dir / "toy.json";
  std::ofstream(spec_path) << kDirSpec;
  const auto spec = load_experiment(spec_path);

  const auto result = run_experiment(spec);
  CHECK(result.eds.count(Label::Spam) == 25);
  CHECK(result.eds.count(Label::Ham) == 35);
  CHECK(result.report.folds == 5);
  for (const auto& row : result.report.rows) CHECK(row.confusion.total() == 60);

  write_experiment_outputs(spec, result);
  for (const char* f : {"sweep.csv", "roc.csv", "summary.json", "eds.json", "manifest.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(spec.output_dir / f));
  }
  for (const auto& entry : fs::directory_iterator(spec.output_dir))
    CHECK(entry.path().extension() != ".tmp");

  const auto manifest = nlohmann::json::parse(slurp(spec.output_dir / "manifest.json"));
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["spec"]["name"] == "toy");
  REQUIRE(manifest["inputs"].size() == 60);
  const auto& first = manifest["inputs"][0];
  const auto id = first["source_id"].get<std::string>();
  bool found = false;
  for (const auto& m : result.eds.messages) {
    if (m.source_id() != id) continue;
    found = true;
    CHECK(first["text_sha256"] == sha256_hex(m.text()));
  }
  CHECK(found);

  const auto sweep = slurp(spec.output_dir / "sweep.csv");
  const auto again = run_experiment(spec);
  CHECK(sweep_csv(again.report) == sweep);
  CHECK(run_manifest_json(spec, again) == slurp(spec.output_dir / "manifest.json"));
}

TEST_CASE("composition through a spec") {
  Workspace ws;
  const auto spec = parse_experiment(
      R"({"sources":{"sp":{"dir":"corpus/spam","label":"spam"},"hm":{"dir":"corpus/ham","label":"ham"}},
          "eds":{"name":"part","spam":{"source":"sp","count":10},"ham":[{"source":"hm","count":12}]},
          "classifier":"st","seed":8})",
      ws.dir);
  const auto pool = load_sources(spec);
  const auto eds = compose_experiment_eds(spec, pool);
  CHECK(eds.count(Label::Spam) == 10);
  CHECK(eds.count(Label::Ham) == 12);
  CHECK(eds_manifest_json(eds) == eds_manifest_json(compose_experiment_eds(spec, load_sources(spec))));

  auto greedy = spec;
  greedy.eds.spam.count = 26;
  CHECK_THROWS_AS(compose_experiment_eds(greedy, pool), ConfigError);

  auto missing = spec;
  missing.sources["sp"].path = ws.dir / "nope";
  CHECK_THROWS_AS(load_sources(missing), ConfigError);
}

TEST_CASE("hashing and atomic writes") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto p = fs::temp_directory_path() / "stc_test_atomic.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  CHECK(slurp(p) == "two");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  fs::remove(p);
}
