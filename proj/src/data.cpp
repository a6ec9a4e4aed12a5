#include "supnys/data.hpp"

#include "supnys/error.hpp"
#include "supnys/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace supnys {

Dataset Dataset::subset(const IndexSet &idx) const {
  Dataset out;
  out.X.resize(static_cast<Index>(idx.size()), dim());
  out.y.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.X.row(static_cast<Index>(i)) = X.row(idx[i]);
    out.y.push_back(y[static_cast<std::size_t>(idx[i])]);
  }
  out.num_classes = num_classes;
  out.class_names = class_names;
  out.scaled = scaled;
  return out;
}

void Dataset::validate() const {
  if (X.rows() < 1) throw invalid_argument("data set is empty");
  if (static_cast<Index>(y.size()) != X.rows())
    throw invalid_argument("label count does not match row count");
  for (int c : y)
    if (c < 0 || c >= num_classes) throw invalid_argument("class id out of range");
  if (!X.allFinite()) throw invalid_argument("data set contains NaN or Inf");
  if (scaled && X.size() > 0 && (X.minCoeff() < 0.0 || X.maxCoeff() > 1.0))
    throw invalid_argument("scaled data set has entries outside [0,1]");
}

namespace {

double parse_double(std::string_view tok, std::size_t line) {
  // std::from_chars rejects a leading '+', LIBSVM labels commonly carry one.
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error("invalid number '" + std::string(tok) + "'", line);
  return v;
}

struct RawRow {
  double label;
  std::string label_text;
  std::vector<std::pair<Index, double>> entries;
};

}  // namespace

Dataset parse_libsvm(std::istream &in, Index min_dim) {
  std::vector<RawRow> rows;
  Index dim = min_dim;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream tokens(text);
    std::string tok;
    if (!(tokens >> tok)) continue;  // blank line
    RawRow row;
    row.label = parse_double(tok, line_no);
    row.label_text = tok;
    Index prev = 0;
    while (tokens >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw parse_error("expected <index>:<value>, got '" + tok + "'", line_no);
      std::string_view sv(tok);
      Index idx = 0;
      auto [p, ec] = std::from_chars(sv.data(), sv.data() + colon, idx);
      if (ec != std::errc() || p != sv.data() + colon || idx < 1)
        throw parse_error("invalid feature index in '" + tok + "'", line_no);
      if (idx <= prev)
        throw parse_error("feature indices must be strictly increasing", line_no);
      prev = idx;
      row.entries.emplace_back(idx - 1, parse_double(sv.substr(colon + 1), line_no));
    }
    dim = std::max(dim, prev);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("no samples found", line_no);

  // Numeric order of labels defines the class ids.
  std::map<double, int> label_ids;
  for (const auto &r : rows) label_ids.emplace(r.label, 0);
  Dataset d;
  d.num_classes = static_cast<int>(label_ids.size());
  d.class_names.resize(label_ids.size());
  int next = 0;
  for (auto &[label, id] : label_ids) id = next++;

  d.X = Points::Zero(static_cast<Index>(rows.size()), dim);
  d.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int c = label_ids.at(rows[i].label);
    if (d.class_names[static_cast<std::size_t>(c)].empty())
      d.class_names[static_cast<std::size_t>(c)] = rows[i].label_text;
    d.y.push_back(c);
    for (auto [j, v] : rows[i].entries) d.X(static_cast<Index>(i), j) = v;
  }
  d.validate();
  return d;
}

Dataset load_libsvm(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path.string() + "'");
  return parse_libsvm(in);
}

void write_libsvm(const Dataset &d, std::ostream &out) {
  char buf[64];
  for (Index i = 0; i < d.size(); ++i) {
    const int c = d.y[static_cast<std::size_t>(i)];
    out << (c < static_cast<int>(d.class_names.size()) ? d.class_names[static_cast<std::size_t>(c)]
                                                        : std::to_string(c));
    for (Index j = 0; j < d.dim(); ++j) {
      const double v = d.X(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
}

void write_libsvm(const Dataset &d, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write '" + path.string() + "'");
  write_libsvm(d, out);
  if (!out) throw error("write failed for '" + path.string() + "'");
}

void unify_labels(Dataset &a, Dataset &b) {
  auto key = [](const std::string &name) {
    std::string_view sv(name);
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    double v = 0.0;
    std::from_chars(sv.data(), sv.data() + sv.size(), v);
    return v;
  };
  std::map<double, std::string> merged;
  for (const auto &n : a.class_names) merged.emplace(key(n), n);
  for (const auto &n : b.class_names) merged.emplace(key(n), n);
  std::vector<std::string> names;
  std::map<double, int> ids;
  for (const auto &[k, n] : merged) {
    ids[k] = static_cast<int>(names.size());
    names.push_back(n);
  }
  for (Dataset *d : {&a, &b}) {
    for (int &c : d->y) c = ids.at(key(d->class_names[static_cast<std::size_t>(c)]));
    d->class_names = names;
    d->num_classes = static_cast<int>(names.size());
  }
}

ScalingParams fit_scaling(const Points &X) {
  if (X.rows() < 1) throw invalid_argument("cannot fit scaling on an empty split");
  return {X.colwise().minCoeff().transpose(), X.colwise().maxCoeff().transpose()};
}

Points ScalingParams::apply(const Points &X) const {
  if (X.cols() != min.size()) throw invalid_argument("scaling dimension mismatch");
  Points out(X.rows(), X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double lo = min(j), range = max(j) - min(j);
    for (Index i = 0; i < X.rows(); ++i) {
      out(i, j) = range > 0.0 ? std::clamp((X(i, j) - lo) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

std::pair<ScalingParams, std::vector<Dataset>> fit_apply_unit_scaling(
    const Dataset &train, const std::vector<Dataset> &others) {
  ScalingParams params = fit_scaling(train.X);
  std::vector<Dataset> out;
  out.reserve(others.size() + 1);
  auto scaled = [&](const Dataset &d) {
    Dataset s = d;
    s.X = params.apply(d.X);
    s.scaled = true;
    return s;
  };
  out.push_back(scaled(train));
  for (const auto &o : others) out.push_back(scaled(o));
  return {std::move(params), std::move(out)};
}

namespace {

struct RowKey {
  const Dataset *d;
  Index row;
};

struct RowHash {
  std::size_t operator()(const RowKey &k) const {
    std::size_t h = std::hash<int>{}(k.d->y[static_cast<std::size_t>(k.row)]);
    for (Index j = 0; j < k.d->dim(); ++j) {
      double v = k.d->X(k.row, j);
      if (v == 0.0) v = 0.0;  // fold -0.0
      h ^= std::hash<double>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct RowEq {
  bool operator()(const RowKey &a, const RowKey &b) const {
    return a.d->y[static_cast<std::size_t>(a.row)] == b.d->y[static_cast<std::size_t>(b.row)] &&
           a.d->X.row(a.row) == b.d->X.row(b.row);
  }
};

}  // namespace

Dataset dedupe(const Dataset &d) {
  std::unordered_set<RowKey, RowHash, RowEq> seen;
  IndexSet keep;
  for (Index i = 0; i < d.size(); ++i)
    if (seen.insert({&d, i}).second) keep.push_back(i);
  return d.subset(keep);
}

std::pair<Dataset, Dataset> split(const Dataset &d, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw invalid_argument("test_fraction must lie in (0,1)");
  const Index N = d.size();
  const auto n_test = static_cast<Index>(std::llround(test_fraction * static_cast<double>(N)));
  if (n_test < 1 || n_test >= N)
    throw invalid_argument("split would leave an empty side");
  Rng rng(seed);
  IndexSet perm = sample_without_replacement(N, N, rng);
  IndexSet test(perm.begin(), perm.begin() + n_test);
  IndexSet train(perm.begin() + n_test, perm.end());
  return {d.subset(train), d.subset(test)};
}

}  // namespace supnys
