#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ensuq/error.hpp"
#include "uq/app.hpp"
#include "uq/config.hpp"
#include "uq/csv.hpp"
#include "uq/manifest.hpp"

namespace fs = std::filesystem;
using ensuq::Errc;
using ensuq::Error;
using nlohmann::json;

namespace {

const fs::path kData = ENSUQ_TEST_DATA_DIR;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("ensuq-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream out(path_ / name, std::ios::binary);
    out << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "uq");
  std::ostringstream out, err;
  const int status = uq::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ensuq::Error";
  return Errc::IoFailure;
}

std::vector<std::vector<std::string>> parse_table(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(uq::split_csv_line(line));
  return rows;
}

// Three trees splitting on feature 0 at 0. Left of the split they all agree
// on class 0; right of it they vote 0, 1, 1 with confident leaves.
const char* kDisagreementModel =
    "ensuq-forest 1\n"
    "classes 2 dims 1 trees 3\n"
    "config seed 0 max_depth 1 features_per_split 0 oob 0\n"
    "tree 0 max_depth 1 nodes 3 loglik -10\n"
    "split 0 0 1 2\nleaf 40 0\nleaf 40 0\n"
    "tree 1 max_depth 1 nodes 3 loglik -10\n"
    "split 0 0 1 2\nleaf 40 0\nleaf 0 40\n"
    "tree 2 max_depth 1 nodes 3 loglik -10\n"
    "split 0 0 1 2\nleaf 40 0\nleaf 0 40\n";

}  // namespace

// ---- ingestion ---------------------------------------------------------------

TEST(Ingest, FirstAppearanceLabels) {
  TempDir dir;
  const auto p = dir.write("t.csv", "f1,f2,label\n1,2,a\n3,4,b\n5,6,a\n");
  const auto d = uq::ingest_csv(p, "label");
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.dims(), 2u);
  EXPECT_EQ(d.classes(), 2u);
  EXPECT_EQ(std::vector<int>(d.labels().begin(), d.labels().end()), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.class_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(d.at(2, 1), 6.0);
}

TEST(Ingest, MissingLabelColumn) {
  TempDir dir;
  const auto p = dir.write("t.csv", "f1,f2\n1,2\n");
  EXPECT_EQ(code_of([&] { uq::ingest_csv(p, "label"); }), Errc::MissingLabelColumn);
  EXPECT_EQ(code_of([&] { uq::ingest_csv(dir.path() / "absent.csv", "label"); }), Errc::FileNotFound);
}

TEST(Ingest, BundledIrisCounts) {
  // 151 lines: a header and 150 records; 4 measurement columns; 3 species
  const auto d = uq::ingest_csv(kData / "iris.csv", "species");
  EXPECT_EQ(d.rows(), 150u);
  EXPECT_EQ(d.dims(), 4u);
  EXPECT_EQ(d.classes(), 3u);
  const auto b = uq::ingest_csv(kData / "breast_cancer.csv", "diagnosis");
  EXPECT_EQ(b.rows(), 569u);
  EXPECT_EQ(b.dims(), 30u);
  EXPECT_EQ(b.classes(), 2u);
}

TEST(Ingest, MissingValuesAreSkippedAndReported) {
  TempDir dir;
  const auto p = dir.write("t.csv", "x,y,c\n1,2,a\n?,3,b\n4,,a\nNA,1,b\n5,6,\n7,8,b\r\n");
  uq::IngestReport report;
  const auto d = uq::ingest_csv(p, "c", &report);
  EXPECT_EQ(d.rows(), 2u);
  EXPECT_EQ(report.skipped_lines, (std::vector<std::size_t>{3, 4, 5, 6}));
}

TEST(Ingest, NonNumericFeatureNamesLineAndColumn) {
  TempDir dir;
  const auto p = dir.write("t.csv", "x,y,c\n1,2,a\n3,abc,b\n");
  try {
    uq::ingest_csv(p, "c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonNumericFeature);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("'y'"), std::string::npos);
  }
  const auto q = dir.write("u.csv", "x,y,c\n1,2\n");
  EXPECT_EQ(code_of([&] { uq::ingest_csv(q, "c"); }), Errc::NonNumericFeature);
  const auto r = dir.write("v.csv", "x,c\n?,a\n");
  EXPECT_EQ(code_of([&] { uq::ingest_csv(r, "c"); }), Errc::EmptyAfterFiltering);
}

TEST(Ingest, QuotedFields) {
  const auto f = uq::split_csv_line(R"(1,"a,b","say ""hi""")");
  EXPECT_EQ(f, (std::vector<std::string>{"1", "a,b", "say \"hi\""}));
}

TEST(Format, LocaleIndependentRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, 0.0}) {
    const auto s = uq::format_real(x);
    EXPECT_EQ(s.find(','), std::string::npos);
    EXPECT_EQ(std::stod(s), x);
  }
}

// ---- configuration and manifest ---------------------------------------------

TEST(Config, ThreeLayerPrecedence) {
  const json file{{"data", "from-file.csv"}, {"label", "y"}, {"runs", 20}, {"delta", 3.0}};
  const json flags{{"runs", 5}, {"data", "from-flag.csv"}};
  const auto r = uq::resolve_experiment(file, flags);
  EXPECT_EQ(r.config.runs, 5u);                  // flag beats file
  EXPECT_EQ(r.config.delta, 3.0);                // file beats default
  EXPECT_EQ(r.config.trees, 10u);                // default
  EXPECT_EQ(r.config.data_path, "from-flag.csv");
  EXPECT_EQ(r.config.label_column, "y");
  EXPECT_EQ(r.config.rejection_grid.size(), 19u);
  EXPECT_EQ(r.settings["runs"], 5);
}

TEST(Config, CustomGridAndErrors) {
  const json base{{"data", "d.csv"}, {"label", "y"}};
  auto r = uq::resolve_experiment(base, json{{"grid-step", 0.1}, {"grid-max", 0.5}});
  EXPECT_EQ(r.config.rejection_grid, (std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5}));
  r = uq::resolve_experiment(base, json{{"rejection-grid", {0.0, 0.25}}});
  EXPECT_EQ(r.config.rejection_grid, (std::vector<double>{0.0, 0.25}));
  EXPECT_EQ(code_of([&] { uq::resolve_experiment(base, json{{"depth", 3}}); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([&] { uq::resolve_experiment(base, json{{"runs", "many"}}); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([&] { uq::resolve_experiment(base, json{{"delta", 0.5}}); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([&] { uq::resolve_experiment(json{{"label", "y"}}, json::object()); }),
            Errc::InvalidConfig);
}

TEST(Manifest, Sha256KnownVectors) {
  EXPECT_EQ(uq::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(uq::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(uq::sha256_file(kData / "iris.csv"), uq::sha256_hex(slurp(kData / "iris.csv")));
}

// ---- end to end ----------------------------------------------------------------

TEST(CliExperiment, WritesAllOutputs) {
  TempDir dir;
  const auto cfg = dir.write("cfg.json", R"({"runs": 50, "trees": 4, "max-depth": 4})");
  const auto r = cli({"experiment", "--config", cfg.string(), "--data", (kData / "iris.csv").string(),
                      "--label", "species", "--runs", "2", "--seed", "7", "--out",
                      (dir.path() / "o").string(), "--emit-scores"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto curves = slurp(dir.path() / "o" / "curves.csv");
  EXPECT_EQ(curves.find('\r'), std::string::npos);
  const auto table = parse_table(curves);
  ASSERT_EQ(table.size(), 1u + 9u * 19u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"method", "measure", "rejection_rate", "mean_accuracy",
                                                "std_accuracy", "runs"}));
  EXPECT_EQ(table[1][5], "2");

  const auto manifest = json::parse(slurp(dir.path() / "o" / "manifest.json"));
  EXPECT_EQ(manifest["config"]["runs"], 2);
  EXPECT_EQ(manifest["config"]["trees"], 4);
  EXPECT_EQ(manifest["dataset"]["sha256"], uq::sha256_file(kData / "iris.csv"));
  EXPECT_EQ(manifest["dataset"]["rows"], 150);
  EXPECT_EQ(manifest["outputs"], json({"curves.csv", "scores.csv", "manifest.json"}));
  for (const auto& name : manifest["outputs"]) EXPECT_TRUE(fs::exists(dir.path() / "o" / name.get<std::string>()));

  const auto scores = parse_table(slurp(dir.path() / "o" / "scores.csv"));
  EXPECT_EQ(scores[0].size(), 12u);
  EXPECT_EQ(scores.size(), 1u + 45u);  // 30% of 150 held out
}

TEST(CliExperiment, DeterministicBytes) {
  TempDir dir;
  auto run = [&](const std::string& out) {
    return cli({"experiment", "--data", (kData / "iris.csv").string(), "--label", "species", "--runs", "3",
                "--seed", "7", "--trees", "5", "--out", (dir.path() / out).string()});
  };
  ASSERT_EQ(run("a").status, 0);
  ASSERT_EQ(run("b").status, 0);
  EXPECT_EQ(slurp(dir.path() / "a" / "curves.csv"), slurp(dir.path() / "b" / "curves.csv"));
}

TEST(CliExperiment, DeltaOneCollapsesTotalUncertainty) {
  TempDir dir;
  const auto r = cli({"experiment", "--data", (kData / "iris.csv").string(), "--label", "species",
                      "--runs", "1", "--delta", "1", "--out", dir.path().string(), "--emit-scores"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto scores = parse_table(slurp(dir.path() / "scores.csv"));
  const auto& head = scores[0];
  auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  };
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double bayes = std::stod(scores[i][col("Bayes_TU")]);
    EXPECT_NEAR(std::stod(scores[i][col("LeviGH_TU")]), bayes, 1e-8);
    EXPECT_NEAR(std::stod(scores[i][col("LeviEnt_TU")]), bayes, 1e-8);
    EXPECT_NEAR(std::stod(scores[i][col("LeviGH_EU")]), 0.0, 1e-8);
    EXPECT_NEAR(std::stod(scores[i][col("LeviEnt_EU")]), 0.0, 1e-8);
  }
}

TEST(CliExperiment, ErrorsGiveNonzeroStatus) {
  TempDir dir;
  EXPECT_NE(cli({"experiment", "--data", (dir.path() / "none.csv").string(), "--label", "y", "--out",
                 dir.path().string()})
                .status,
            0);
  EXPECT_NE(cli({"experiment", "--bogus"}).status, 0);
  EXPECT_NE(cli({}).status, 0);
  const auto r = cli({"experiment", "--data", (kData / "iris.csv").string(), "--label", "species",
                      "--delta", "0.5", "--out", dir.path().string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("InvalidConfig"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir.path() / "curves.csv"));
}

TEST(CliUq, SingleTreeHasNoBayesianEpistemic) {
  TempDir dir;
  const auto model = dir.write("m.txt",
                               "ensuq-forest 1\nclasses 2 dims 1 trees 1\n"
                               "config seed 0 max_depth 1 features_per_split 0 oob 0\n"
                               "tree 0 max_depth 1 nodes 3 loglik -3\n"
                               "split 0 0 1 2\nleaf 3 1\nleaf 1 5\n");
  const auto query = dir.write("q.csv", "x\n0.5\n");
  const auto r = cli({"uq", "--model", model.string(), "--query", query.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto t = parse_table(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0][2], "Bayes_EU");
  EXPECT_EQ(std::stod(t[1][2]), 0.0);
  EXPECT_EQ(t[1][1], "1");
}

TEST(CliUq, AgreementScoresBelowDisagreement) {
  TempDir dir;
  const auto model = dir.write("m.txt", kDisagreementModel);
  const auto query = dir.write("q.csv", "x\n-1\n1\n");
  const auto r = cli({"uq", "--model", model.string(), "--query", query.string(), "--delta", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto t = parse_table(r.out);
  ASSERT_EQ(t.size(), 3u);
  std::vector<double> agree, disagree;
  for (std::size_t c = 0; c < t[0].size(); ++c) {
    if (t[0][c].ends_with("_EU")) {
      agree.push_back(std::stod(t[1][c]));
      disagree.push_back(std::stod(t[2][c]));
    }
  }
  ASSERT_EQ(agree.size(), 3u);
  EXPECT_LE(*std::max_element(agree.begin(), agree.end()),
            *std::min_element(disagree.begin(), disagree.end()));
}

TEST(CliUq, TrainSaveAndReload) {
  TempDir dir;
  const auto query = dir.write("q.csv", "sepal_length,sepal_width,petal_length,petal_width\n5.1,3.5,1.4,0.2\n6.7,3.0,5.2,2.3\n");
  const auto model = dir.path() / "m.txt";
  const auto a = cli({"uq", "--data", (kData / "iris.csv").string(), "--label", "species", "--query",
                      query.string(), "--save-model", model.string()});
  ASSERT_EQ(a.status, 0) << a.err;
  const auto b = cli({"uq", "--model", model.string(), "--query", query.string()});
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_EQ(a.out, b.out);
  const auto t = parse_table(a.out);
  EXPECT_EQ(t[1][1], "0");
  EXPECT_EQ(t[2][1], "2");
}

TEST(CliUq, MalformedQueryRowFails) {
  TempDir dir;
  const auto model = dir.write("m.txt", kDisagreementModel);
  const auto query = dir.write("q.csv", "x\n-1\noops\n");
  const auto r = cli({"uq", "--model", model.string(), "--query", query.string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  const auto empty = dir.write("e.csv", "x\n\"\"\n");
  EXPECT_NE(cli({"uq", "--model", model.string(), "--query", empty.string()}).status, 0);
  EXPECT_NE(cli({"uq", "--query", query.string()}).status, 0);
}

TEST(CliDatasets, Fingerprint) {
  const auto r = cli({"datasets", "fingerprint", "--data", (kData / "iris.csv").string(), "--label", "species"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["sha256"], uq::sha256_file(kData / "iris.csv"));
  EXPECT_EQ(j["rows"], 150);
  EXPECT_EQ(j["features"], 4);
  EXPECT_EQ(j["classes"], 3);
  EXPECT_NE(cli({"datasets"}).status, 0);
}
