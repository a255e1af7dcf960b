#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "ensuq/error.hpp"
#include "ensuq/forest.hpp"

namespace ensuq {

namespace {

constexpr int kFormatVersion = 1;

std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(Errc::MalformedModel, "line " + std::to_string(line) + ": " + what);
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      return std::istringstream(line);
    }
    malformed(line_no_ + 1, "unexpected end of input");
  }

  void expect(std::istringstream& ss, const char* keyword) {
    std::string word;
    if (!(ss >> word) || word != keyword) malformed(line_no_, std::string("expected '") + keyword + "'");
  }

  template <typename T>
  T read(std::istringstream& ss, const char* what) {
    std::string token;
    if (!(ss >> token)) malformed(line_no_, std::string("missing ") + what);
    T value{};
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      malformed(line_no_, std::string("bad ") + what + " '" + token + "'");
    }
    return value;
  }

  std::size_t line() const noexcept { return line_no_; }

  bool at_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() != '#') return false;
    }
    return true;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_forest(const ForestModel& forest, std::ostream& out) {
  out << "ensuq-forest " << kFormatVersion << '\n';
  out << "classes " << forest.classes << " dims " << forest.dims << " trees " << forest.trees.size()
      << '\n';
  out << "config seed " << forest.config.seed << " max_depth " << forest.config.max_depth
      << " features_per_split " << forest.config.features_per_split << " oob "
      << (forest.config.oob_likelihood ? 1 : 0) << '\n';
  for (std::size_t m = 0; m < forest.trees.size(); ++m) {
    const auto& tree = forest.trees[m];
    out << "tree " << m << " max_depth " << tree.max_depth() << " nodes " << tree.nodes().size()
        << " loglik " << format_real(forest.log_likelihoods[m]) << '\n';
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) {
        out << "leaf";
        for (auto c : node.counts) out << ' ' << c;
      } else {
        out << "split " << node.feature << ' ' << format_real(node.threshold) << ' ' << node.left
            << ' ' << node.right;
      }
      out << '\n';
    }
  }
  if (!out) throw Error(Errc::IoFailure, "failed to write forest");
}

ForestModel load_forest(std::istream& in) {
  LineReader reader(in);
  ForestModel forest;

  auto header = reader.next();
  reader.expect(header, "ensuq-forest");
  if (reader.read<int>(header, "version") != kFormatVersion) {
    malformed(reader.line(), "unsupported format version");
  }

  auto shape = reader.next();
  reader.expect(shape, "classes");
  forest.classes = reader.read<std::size_t>(shape, "class count");
  reader.expect(shape, "dims");
  forest.dims = reader.read<std::size_t>(shape, "feature count");
  reader.expect(shape, "trees");
  const auto tree_count = reader.read<std::size_t>(shape, "tree count");
  if (tree_count == 0) malformed(reader.line(), "forest needs at least one tree");

  auto cfg = reader.next();
  reader.expect(cfg, "config");
  reader.expect(cfg, "seed");
  forest.config.seed = reader.read<std::uint64_t>(cfg, "seed");
  reader.expect(cfg, "max_depth");
  forest.config.max_depth = reader.read<int>(cfg, "depth cap");
  reader.expect(cfg, "features_per_split");
  forest.config.features_per_split = reader.read<std::size_t>(cfg, "features per split");
  reader.expect(cfg, "oob");
  forest.config.oob_likelihood = reader.read<int>(cfg, "oob flag") != 0;
  forest.config.trees = tree_count;

  for (std::size_t m = 0; m < tree_count; ++m) {
    auto th = reader.next();
    reader.expect(th, "tree");
    if (reader.read<std::size_t>(th, "tree index") != m) malformed(reader.line(), "trees out of order");
    reader.expect(th, "max_depth");
    const int max_depth = reader.read<int>(th, "depth cap");
    reader.expect(th, "nodes");
    const auto node_count = reader.read<std::size_t>(th, "node count");
    reader.expect(th, "loglik");
    const double ll = reader.read<double>(th, "log-likelihood");
    if (!std::isfinite(ll)) malformed(reader.line(), "log-likelihood must be finite");

    std::vector<TreeNode> nodes(node_count);
    for (auto& node : nodes) {
      auto nl = reader.next();
      std::string kind;
      nl >> kind;
      if (kind == "leaf") {
        node.counts.resize(forest.classes);
        for (auto& c : node.counts) c = reader.read<std::uint32_t>(nl, "class count");
      } else if (kind == "split") {
        node.feature = reader.read<int>(nl, "feature index");
        if (node.feature < 0) malformed(reader.line(), "negative feature index");
        node.threshold = reader.read<double>(nl, "threshold");
        node.left = reader.read<int>(nl, "left child");
        node.right = reader.read<int>(nl, "right child");
      } else {
        malformed(reader.line(), "expected 'leaf' or 'split'");
      }
      std::string extra;
      if (nl >> extra) malformed(reader.line(), "trailing token '" + extra + "'");
    }
    forest.trees.emplace_back(std::move(nodes), forest.classes, forest.dims, max_depth);
    forest.log_likelihoods.push_back(ll);
  }
  if (!reader.at_end()) malformed(reader.line(), "content after the last tree");
  return forest;
}

}  // namespace ensuq
