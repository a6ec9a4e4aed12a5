#include "supnys/json_io.hpp"

#include "supnys/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace supnys {

namespace {

void emit(const json &j, std::ostream &out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        emit(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto &e : j) flat = flat && !e.is_structured();
      out << '[';
      bool first = true;
      for (const auto &e : j) {
        if (!first) out << (flat && indent >= 0 ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        emit(e, out, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw error("cannot serialize a non-finite number");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf;
      return;
    }
    default: out << j.dump(); return;
  }
}

}  // namespace

std::string dump_json(const json &j, int indent) {
  std::ostringstream out;
  emit(j, out, indent, 0);
  return out.str();
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw error("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json_file(const json &j, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write '" + path.string() + "'");
  out << dump_json(j) << '\n';
  if (!out) throw error("write failed for '" + path.string() + "'");
}

json matrix_to_json(const Eigen::Ref<const Matrix> &M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json &j) {
  const auto r = j.at("rows").get<Index>(), c = j.at("cols").get<Index>();
  const json &data = j.at("data");
  if (static_cast<Index>(data.size()) != r) throw error("matrix row count mismatch");
  Matrix M(r, c);
  for (Index i = 0; i < r; ++i) {
    const json &row = data[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != c) throw error("matrix column count mismatch");
    for (Index k = 0; k < c; ++k) M(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return M;
}

Points points_from_json(const json &j) { return matrix_from_json(j); }

json to_json(const KernelConfig &cfg) {
  return {{"kind", to_string(cfg.kind)}, {"gamma", cfg.gamma}};
}

KernelConfig kernel_config_from_json(const json &j) {
  KernelConfig cfg;
  cfg.kind = kernel_kind_from_string(j.value("kind", std::string("rbf")));
  cfg.gamma = j.at("gamma").get<double>();
  cfg.validate();
  return cfg;
}

json to_json(const NystromMap &map) {
  json blocks = json::array();
  for (const auto &b : map.blocks)
    blocks.push_back({{"row_begin", b.row_begin},
                      {"rows", b.rows},
                      {"col_begin", b.col_begin},
                      {"cols", b.cols},
                      {"weight", b.weight}});
  return {{"type", "nystrom_map"},
          {"variant", to_string(map.variant)},
          {"kernel", to_json(map.kernel)},
          {"landmarks", matrix_to_json(map.landmarks)},
          {"landmark_indices", map.landmark_indices},
          {"a_hat", matrix_to_json(map.a_hat)},
          {"blocks", std::move(blocks)}};
}

NystromMap nystrom_map_from_json(const json &j) {
  try {
    NystromMap map;
    map.variant = map_variant_from_string(j.at("variant").get<std::string>());
    map.kernel = kernel_config_from_json(j.at("kernel"));
    map.landmarks = points_from_json(j.at("landmarks"));
    map.landmark_indices = j.value("landmark_indices", IndexSet{});
    map.a_hat = matrix_from_json(j.at("a_hat"));
    for (const auto &b : j.value("blocks", json::array()))
      map.blocks.push_back({b.at("row_begin").get<Index>(), b.at("rows").get<Index>(),
                            b.at("col_begin").get<Index>(), b.at("cols").get<Index>(),
                            b.at("weight").get<double>()});
    if (map.a_hat.rows() != map.landmarks.rows())
      throw error("a_hat rows do not match landmark count");
    return map;
  } catch (const json::exception &e) {
    throw error(std::string("malformed Nystrom map: ") + e.what());
  }
}

json to_json(const StandardClassifier &clf) {
  return {{"type", "standard_classifier"},
          {"kernel", to_json(clf.kernel)},
          {"support", matrix_to_json(clf.support)},
          {"A", matrix_to_json(clf.A)},
          {"b", std::vector<double>(clf.b.data(), clf.b.data() + clf.b.size())},
          {"class_names", clf.class_names}};
}

StandardClassifier standard_classifier_from_json(const json &j) {
  try {
    StandardClassifier clf;
    clf.kernel = kernel_config_from_json(j.at("kernel"));
    clf.support = points_from_json(j.at("support"));
    clf.A = matrix_from_json(j.at("A"));
    const auto b = j.at("b").get<std::vector<double>>();
    clf.b = Eigen::Map<const Vector>(b.data(), static_cast<Index>(b.size()));
    clf.class_names = j.value("class_names", std::vector<std::string>{});
    if (clf.A.rows() != clf.support.rows() || clf.A.cols() != clf.b.size())
      throw error("classifier shapes are inconsistent");
    if (!clf.class_names.empty() && static_cast<Index>(clf.class_names.size()) != clf.b.size())
      throw error("class map size does not match the class count");
    return clf;
  } catch (const json::exception &e) {
    throw error(std::string("malformed classifier: ") + e.what());
  }
}

json to_json(const Diagnostics &d) {
  json steps = json::object();
  for (const auto &[name, s] : d.step_s) steps[name] = s;
  return {{"stage1_s", d.stage1_s},
          {"stage2_s", d.stage2_s},
          {"total_s", d.total_s},
          {"steps_s", std::move(steps)},
          {"stage1_landmarks", d.stage1_landmarks},
          {"selected", d.selected},
          {"margins",
           {{"min", d.margins.min},
            {"max", d.margins.max},
            {"mean", d.margins.mean},
            {"selected_min", d.margins.selected_min}}},
          {"kmeans_iterations", d.kmeans_iterations},
          {"num_support", d.num_support}};
}

}  // namespace supnys
