#include "htv/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "htv/error.hpp"
#include "json.hpp"

namespace htv {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& source, const std::string& path, const std::string& what) {
  fail(ErrorKind::parse, source + ": field '" + path + "': " + what);
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // locate the byte offset
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto colon = msg.find("parse error");
    if (colon != std::string::npos) msg = msg.substr(colon);
    fail(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

const json& field(const json& obj, const char* key, const std::string& source) {
  if (!obj.is_object()) schema_error(source, "", "top level must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(source, key, "missing");
  return *it;
}

double number(const json& v, const std::string& source, const std::string& path) {
  if (!v.is_number()) schema_error(source, path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(source, path, "not finite");
  return x;
}

int integer(const json& v, const std::string& source, const std::string& path) {
  if (!v.is_number_integer()) schema_error(source, path, "expected an integer");
  return v.get<int>();
}

const json& array(const json& v, const std::string& source, const std::string& path) {
  if (!v.is_array()) schema_error(source, path, "expected an array");
  return v;
}

std::string optional_string(const json& obj, const char* key, const std::string& source) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_string()) schema_error(source, key, "expected a string");
  return it->get<std::string>();
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MeshFile parse_mesh(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  const int dim = integer(field(doc, "dim", source), source, "dim");
  if (dim < 1) schema_error(source, "dim", "must be >= 1");
  std::vector<double> coords;
  const json& verts = array(field(doc, "vertices", source), source, "vertices");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const json& v = array(verts[i], source, idx("vertices", i));
    if (static_cast<int>(v.size()) != dim) schema_error(source, idx("vertices", i), "expected " + std::to_string(dim) + " coordinates");
    for (std::size_t c = 0; c < v.size(); ++c) coords.push_back(number(v[c], source, idx(idx("vertices", i), c)));
  }
  std::vector<int> simplices;
  const json& simp = array(field(doc, "simplices", source), source, "simplices");
  for (std::size_t i = 0; i < simp.size(); ++i) {
    const json& s = array(simp[i], source, idx("simplices", i));
    if (static_cast<int>(s.size()) != dim + 1)
      schema_error(source, idx("simplices", i), "expected " + std::to_string(dim + 1) + " vertex indices");
    for (std::size_t c = 0; c < s.size(); ++c) simplices.push_back(integer(s[c], source, idx(idx("simplices", i), c)));
  }
  std::vector<double> values;
  const json& vals = array(field(doc, "values", source), source, "values");
  for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(number(vals[i], source, idx("values", i)));
  if (values.size() != verts.size()) schema_error(source, "values", "expected one value per vertex");

  bool exact = true;
  if (auto it = doc.find("exact"); it != doc.end()) {
    if (!it->is_boolean()) schema_error(source, "exact", "expected true or false");
    exact = it->get<bool>();
  }
  try {
    return MeshFile{SimplicialCpwl(dim, std::move(coords), std::move(simplices), std::move(values)),
                    optional_string(doc, "name", source), optional_string(doc, "units", source), exact};
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
}

MeshFile read_mesh_file(const std::string& path) { return parse_mesh(read_text_file(path), path); }

SimplicialCpwl read_mesh(const std::string& path) { return read_mesh_file(path).mesh; }

std::string mesh_to_json(const MeshFile& file) {
  const SimplicialCpwl& m = file.mesh;
  json doc = json::object();
  doc["dim"] = m.dim();
  if (!file.name.empty()) doc["name"] = file.name;
  if (!file.units.empty()) doc["units"] = file.units;
  doc["exact"] = file.exact;
  json verts = json::array();
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    auto v = m.vertex(i);
    verts.push_back(std::vector<double>(v.begin(), v.end()));
  }
  doc["vertices"] = std::move(verts);
  json simp = json::array();
  for (std::size_t s = 0; s < m.simplex_count(); ++s) {
    auto sv = m.simplex(s);
    simp.push_back(std::vector<int>(sv.begin(), sv.end()));
  }
  doc["simplices"] = std::move(simp);
  doc["values"] = m.values();
  return doc.dump() + "\n";
}

void write_mesh(const MeshFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, path + ": cannot write file");
  out << mesh_to_json(file);
  if (!out) fail(ErrorKind::invalid_input, path + ": write failed");
}

void write_mesh(const SimplicialCpwl& m, const std::string& path) { write_mesh(MeshFile{m, "", "", true}, path); }

void MlpWeights::validate() const {
  if (input_dim < 1) fail(ErrorKind::invalid_input, "network input dimension must be >= 1");
  if (layers.empty()) fail(ErrorKind::invalid_input, "network has no layers");
  int width = input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& L = layers[l];
    if (L.cols != width)
      fail(ErrorKind::dimension_mismatch, "layer " + std::to_string(l) + " expects " + std::to_string(L.cols) +
                                              " inputs, previous width is " + std::to_string(width));
    if (L.rows < 1 || L.weights.size() != static_cast<std::size_t>(L.rows * L.cols) ||
        L.bias.size() != static_cast<std::size_t>(L.rows))
      fail(ErrorKind::dimension_mismatch, "layer " + std::to_string(l) + " has inconsistent shapes");
    for (double x : L.weights)
      if (!std::isfinite(x)) fail(ErrorKind::non_finite, "layer " + std::to_string(l) + " has non-finite weights");
    for (double x : L.bias)
      if (!std::isfinite(x)) fail(ErrorKind::non_finite, "layer " + std::to_string(l) + " has non-finite bias");
    width = L.rows;
  }
  if (width != 1) fail(ErrorKind::dimension_mismatch, "network output must be scalar");
}

double MlpWeights::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim) fail(ErrorKind::dimension_mismatch, "network input has wrong size");
  std::vector<double> a(x.begin(), x.end()), next;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& L = layers[l];
    next.assign(static_cast<std::size_t>(L.rows), 0.0);
    for (int i = 0; i < L.rows; ++i) {
      double s = L.bias[static_cast<std::size_t>(i)];
      for (int j = 0; j < L.cols; ++j) s += L.weights[static_cast<std::size_t>(i * L.cols + j)] * a[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] = l + 1 < layers.size() ? std::max(0.0, s) : s;
    }
    a.swap(next);
  }
  return a[0];
}

MlpWeights parse_weights(std::string_view text, const std::string& source) {
  const json doc = parse_json(text, source);
  MlpWeights w;
  w.input_dim = integer(field(doc, "input_dim", source), source, "input_dim");
  const json& layers = array(field(doc, "layers", source), source, "layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string base = idx("layers", l);
    const json& L = layers[l];
    if (!L.is_object()) schema_error(source, base, "expected an object");
    DenseLayer layer;
    const json& rows = array(field(L, "weights", source), source, base + ".weights");
    layer.rows = static_cast<int>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const json& row = array(rows[i], source, idx(base + ".weights", i));
      if (i == 0) layer.cols = static_cast<int>(row.size());
      if (static_cast<int>(row.size()) != layer.cols) schema_error(source, idx(base + ".weights", i), "ragged row");
      for (std::size_t j = 0; j < row.size(); ++j)
        layer.weights.push_back(number(row[j], source, idx(idx(base + ".weights", i), j)));
    }
    const json& bias = array(field(L, "bias", source), source, base + ".bias");
    for (std::size_t i = 0; i < bias.size(); ++i) layer.bias.push_back(number(bias[i], source, idx(base + ".bias", i)));
    w.layers.push_back(std::move(layer));
  }
  try {
    w.validate();
  } catch (const Error& e) {
    throw Error(e.kind(), source + ": " + e.what());
  }
  return w;
}

MlpWeights read_weights(const std::string& path) { return parse_weights(read_text_file(path), path); }

std::string weights_to_json(const MlpWeights& w) {
  json doc = json::object();
  doc["input_dim"] = w.input_dim;
  json layers = json::array();
  for (const DenseLayer& L : w.layers) {
    json rows = json::array();
    for (int i = 0; i < L.rows; ++i)
      rows.push_back(std::vector<double>(L.weights.begin() + i * L.cols, L.weights.begin() + (i + 1) * L.cols));
    layers.push_back({{"weights", rows}, {"bias", L.bias}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump() + "\n";
}

}  // namespace htv
