#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "htv/box.hpp"
#include "htv/cpwl.hpp"
#include "htv/error.hpp"
#include "htv/io.hpp"
#include "htv/oracle.hpp"
#include "htv/relu.hpp"
#include "htv/smooth.hpp"
#include "htv/transforms.hpp"
#include "json.hpp"

namespace htv::cli {

namespace {

using nlohmann::ordered_json;

enum class Format { text, json, csv };

using Value = std::variant<double, long long, std::string, bool>;
struct Field {
  std::string key;
  Value value;
};
using Row = std::vector<Field>;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::showpoint << std::setprecision(12) << x;
  return os.str();
}

std::string text(const Value& v) {
  if (auto d = std::get_if<double>(&v)) return num(*d);
  if (auto i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

ordered_json json_value(const Value& v) {
  if (auto d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return nullptr;
    return std::strtod(num(*d).c_str(), nullptr);  // 12 significant digits
  }
  if (auto i = std::get_if<long long>(&v)) return *i;
  if (auto b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

ordered_json json_row(const Row& r) {
  ordered_json o = ordered_json::object();
  for (const auto& f : r) o[f.key] = json_value(f.value);
  return o;
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows[0].size(); ++i) out << (i ? "," : "") << csv_cell(rows[0][i].key);
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(text(r[i].value));
    out << "\n";
  }
}

void emit(std::ostream& out, Format fmt, const Row& record) {
  switch (fmt) {
    case Format::json:
      out << json_row(record).dump() << "\n";
      break;
    case Format::csv:
      write_csv(out, {record});
      break;
    case Format::text:
      for (const auto& f : record) out << f.key << " = " << text(f.value) << "\n";
      break;
  }
}

// Metadata first, then a table.
void emit_table(std::ostream& out, Format fmt, const Row& meta, const std::vector<Row>& rows) {
  switch (fmt) {
    case Format::json: {
      ordered_json o = json_row(meta);
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) arr.push_back(json_row(r));
      o["rows"] = std::move(arr);
      out << o.dump() << "\n";
      break;
    }
    case Format::csv:
      write_csv(out, rows);
      break;
    case Format::text: {
      for (const auto& f : meta) out << f.key << " = " << text(f.value) << "\n";
      if (rows.empty()) break;
      std::vector<std::size_t> width;
      for (const auto& f : rows[0]) width.push_back(f.key.size());
      for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], text(r[i].value).size());
      for (std::size_t i = 0; i < rows[0].size(); ++i)
        out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << rows[0][i].key;
      out << "\n";
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
          out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << text(r[i].value);
        out << "\n";
      }
      break;
    }
  }
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse:
    case ErrorKind::invalid_order:
      return 2;
    case ErrorKind::singular_point:
    case ErrorKind::non_finite:
    case ErrorKind::undefined_witness:
    case ErrorKind::stencil_out_of_domain:
      return 4;
    default:
      return 3;
  }
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v))
      fail(ErrorKind::parse, std::string("bad number '") + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::parse, std::string("empty list for ") + what);
  return out;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::parse, "parameter '" + it + "' is not KEY=VALUE");
    out[it.substr(0, eq)] = it.substr(eq + 1);
  }
  return out;
}

SmoothFn pyramid_fn(int dim) {
  SmoothFn f;
  f.dim = dim;
  f.label = "pyramid";
  f.value = [](std::span<const double> x) {
    double s = 1.0;
    for (double v : x) s -= std::fabs(v);
    return std::max(0.0, s);
  };
  return f;
}

// Shared option holders, one per subcommand.
struct Common {
  std::string p = "2";
  bool json = false;
  bool csv = false;
  Format format() const { return json ? Format::json : csv ? Format::csv : Format::text; }
};

void add_format(CLI::App* sub, Common& c) {
  auto* j = sub->add_flag("--json", c.json, "Print one JSON object");
  auto* v = sub->add_flag("--csv", c.csv, "Print CSV with a header row");
  j->excludes(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hessian-Schatten total variation of CPWL meshes, smooth functions and ReLU networks", "htv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "htv 0.1.0");
  app.footer(
      "Exit codes: 0 ok, 2 parse error, 3 invariant violation, 4 numerical failure.\n"
      "Numbers are printed with 12 significant digits.");

  // cpwl
  Common cpwl_c;
  std::string cpwl_mesh;
  auto* cpwl = app.add_subcommand("cpwl", "Closed-form HTV and linear-region count of a mesh file");
  cpwl->add_option("--mesh", cpwl_mesh, "Mesh file (JSON)")->required();
  cpwl->add_option("--p", cpwl_c.p, "Schatten order: number >= 1 or inf")->capture_default_str();
  add_format(cpwl, cpwl_c);
  cpwl->footer("CSV columns: p,htv,regions");

  // smooth
  Common sm_c;
  std::string sm_fn, sm_box, sm_rule = "gauss2";
  std::vector<std::string> sm_params;
  int sm_nodes = 64;
  double sm_ratio = 0.125;
  auto* smooth = app.add_subcommand("smooth", "Quadrature HTV of a built-in smooth function");
  smooth->add_option("--fn", sm_fn, "bowl | affine | gauss | rbf")->required();
  smooth->add_option("--params", sm_params, "KEY=VALUE parameters, e.g. sigma=0.3 center=0,0");
  smooth->add_option("--box", sm_box, "Domain lo:hi,lo:hi,...")->required();
  smooth->add_option("--nodes", sm_nodes, "Cells per axis")->capture_default_str();
  smooth->add_option("--rule", sm_rule, "gauss2 | midpoint")->capture_default_str();
  smooth->add_option("--fd-step", sm_ratio, "Finite-difference step / cell width (functions without Hessian)")
      ->capture_default_str();
  smooth->add_option("--p", sm_c.p, "Schatten order")->capture_default_str();
  add_format(smooth, sm_c);
  smooth->footer("CSV columns: p,htv,error_estimate");

  // oracle
  Common or_c;
  std::string or_fn, or_mesh, or_box, or_nodes = "256";
  std::vector<std::string> or_params;
  int or_r = 0;
  double or_ref = std::nan("");
  auto* oracle = app.add_subcommand("oracle", "Grid oracle HTV (one resolution or a convergence table)");
  auto* o_fn = oracle->add_option("--fn", or_fn, "bowl | affine | gauss | rbf | pyramid");
  auto* o_mesh = oracle->add_option("--mesh", or_mesh, "Mesh file (JSON)");
  o_fn->excludes(o_mesh);
  oracle->add_option("--params", or_params, "KEY=VALUE parameters for --fn");
  oracle->add_option("--box", or_box, "Domain lo:hi,...; defaults to the mesh bounding box");
  oracle->add_option("--nodes", or_nodes, "Cells per axis, or an increasing list 32,64,128")->capture_default_str();
  oracle->add_option("--supersample", or_r, "Face integration points per cell and axis (0: 8 for d <= 2, 4 in 3D)")->capture_default_str();
  oracle->add_option("--reference", or_ref, "Reference value for relative errors (mesh default: closed form)");
  oracle->add_option("--p", or_c.p, "Schatten order")->capture_default_str();
  add_format(oracle, or_c);
  oracle->footer("CSV columns: n,h,value,relative_error,excluded");

  // check-invariance
  Common ci_c;
  std::string ci_mesh, ci_transform;
  auto* check = app.add_subcommand("check-invariance", "Measured vs predicted HTV factor under a transform");
  check->add_option("--mesh", ci_mesh, "Mesh file (JSON)")->required();
  check->add_option("--transform", ci_transform,
                    "'+'-joined parts: rot:30deg, rot@0,2:0.5rad, flip:AXIS, scale:A, shift:X,Y")
      ->required();
  check->add_option("--p", ci_c.p, "Schatten order")->capture_default_str();
  add_format(check, ci_c);
  check->footer("CSV columns: p,htv_before,htv_after,measured_factor,predicted_factor,holds");

  // sweep-rbf
  Common sw_c;
  std::string sw_centers, sw_widths, sw_csv, sw_box;
  int sw_nodes = 128;
  auto* sweep = app.add_subcommand("sweep-rbf", "HTV of an RBF mixture across kernel widths");
  sweep->add_option("--centers", sw_centers, "JSON file {\"centers\": [[x, y], ...], \"weights\": [...]}")->required();
  sweep->add_option("--widths", sw_widths, "Comma-separated sigma values")->required();
  sweep->add_option("--csv", sw_csv, "Write the table as CSV to this file ('-' for stdout)");
  sweep->add_option("--box", sw_box, "Domain; default [-1, 1]^d");
  sweep->add_option("--nodes", sw_nodes, "Cells per axis")->capture_default_str();
  sweep->add_option("--p", sw_c.p, "Schatten order")->capture_default_str();
  sweep->add_flag("--json", sw_c.json, "Print one JSON object");
  sweep->footer("CSV columns: sigma,htv,error_estimate");

  // import-relu
  Common ir_c;
  std::string ir_weights, ir_box, ir_out, ir_name;
  int ir_nodes = 128;
  bool ir_exact_only = false;
  auto* import = app.add_subcommand("import-relu", "Convert a ReLU network to a CPWL mesh file");
  import->add_option("--weights", ir_weights, "Weights file (JSON)")->required();
  import->add_option("--box", ir_box, "Domain; default [-1, 1]^d");
  import->add_option("--nodes", ir_nodes, "Grid squares per axis for the sampled (approximate) path")
      ->capture_default_str();
  import->add_option("--out", ir_out, "Output mesh file")->required();
  import->add_option("--name", ir_name, "Mesh name stored in the file");
  import->add_flag("--exact-only", ir_exact_only, "Fail instead of sampling deep 2D networks");
  import->add_option("--p", ir_c.p, "Schatten order for the reported HTV")->capture_default_str();
  add_format(import, ir_c);
  import->footer("CSV columns: exact,vertices,simplices,htv,regions,notice");

  std::vector<const char*> argv{"htv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: parse: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (*cpwl) {
      const auto p = SchattenOrder::parse(cpwl_c.p);
      const MeshFile f = read_mesh_file(cpwl_mesh);
      emit(out, cpwl_c.format(),
           {{"p", p.to_string()},
            {"htv", htv(f.mesh, p)},
            {"regions", static_cast<long long>(region_count(f.mesh))}});
    } else if (*smooth) {
      const auto p = SchattenOrder::parse(sm_c.p);
      const BoxDomain box = BoxDomain::parse(sm_box);
      const SmoothFn f = make_builtin(sm_fn, box.dim(), parse_params(sm_params));
      QuadratureRule rule;
      if (sm_rule == "gauss2") {
        rule = QuadratureRule::gauss2;
      } else if (sm_rule == "midpoint") {
        rule = QuadratureRule::midpoint;
      } else {
        fail(ErrorKind::parse, "unknown rule '" + sm_rule + "'");
      }
      QuadratureOptions opt;
      opt.fd_step_ratio = sm_ratio;
      const auto r = htv_quadrature(f, {box, std::vector<int>(static_cast<std::size_t>(box.dim()), sm_nodes), rule}, p, opt);
      emit(out, sm_c.format(), {{"p", p.to_string()}, {"htv", r.value}, {"error_estimate", r.error_estimate}});
    } else if (*oracle) {
      const auto p = SchattenOrder::parse(or_c.p);
      if (or_fn.empty() && or_mesh.empty()) fail(ErrorKind::parse, "oracle needs --fn or --mesh");
      std::vector<int> ns;
      for (double v : parse_list(or_nodes, "--nodes")) {
        if (v != std::floor(v)) fail(ErrorKind::parse, "--nodes must be integers");
        ns.push_back(static_cast<int>(v));
      }
      std::optional<SimplicialCpwl> mesh;
      Evaluator eval;
      std::optional<BoxDomain> box;
      if (!or_box.empty()) box = BoxDomain::parse(or_box);
      double reference = or_ref;
      if (!or_mesh.empty()) {
        mesh = read_mesh_file(or_mesh).mesh;
        if (!box) box = mesh->bounding_box();
        const SimplicialCpwl& m = *mesh;
        eval = [&m](std::span<const double> x) { return m.evaluate_extended(x); };
        if (std::isnan(reference) && !or_box.empty() && !(*box == mesh->bounding_box())) {
          // closed form refers to the whole mesh; no default reference on a sub-box
        } else if (std::isnan(reference)) {
          reference = htv(m, p);
        }
      } else {
        if (!box) fail(ErrorKind::parse, "--fn needs --box");
        const SmoothFn f = or_fn == "pyramid" ? pyramid_fn(box->dim()) : make_builtin(or_fn, box->dim(), parse_params(or_params));
        eval = f.value;
      }
      const auto rows = convergence_study(eval, *box, p, ns, std::isnan(reference) ? 0.0 : reference, or_r);
      std::vector<Row> table;
      for (const auto& r : rows)
        table.push_back({{"n", static_cast<long long>(r.n)},
                         {"h", r.h},
                         {"value", r.value},
                         {"relative_error", std::isnan(reference) ? std::nan("") : r.relative_error},
                         {"excluded", static_cast<long long>(r.excluded)}});
      if (table.size() == 1 && or_c.format() != Format::csv) {
        Row rec{{"p", p.to_string()}};
        rec.insert(rec.end(), table[0].begin(), table[0].end());
        if (!std::isnan(reference)) rec.push_back({"reference", reference});
        emit(out, or_c.format(), rec);
      } else {
        Row meta{{"p", p.to_string()}};
        if (!std::isnan(reference)) meta.push_back({"reference", reference});
        emit_table(out, or_c.format(), meta, table);
      }
    } else if (*check) {
      const auto p = SchattenOrder::parse(ci_c.p);
      const SimplicialCpwl m = read_mesh_file(ci_mesh).mesh;
      const DomainTransform t = DomainTransform::parse(ci_transform, m.dim());
      const double before = htv(m, p);
      const double after = htv(apply_to_cpwl(m, t), p);
      const double predicted = predicted_factor(t, m.dim());
      double measured = std::nan("");
      bool holds;
      if (before > 0) {
        measured = after / before;
        holds = std::fabs(measured / predicted - 1.0) <= 1e-9;
      } else {
        holds = after == 0.0;
      }
      emit(out, ci_c.format(),
           {{"p", p.to_string()},
            {"htv_before", before},
            {"htv_after", after},
            {"measured_factor", measured},
            {"predicted_factor", predicted},
            {"holds", holds}});
    } else if (*sweep) {
      const auto p = SchattenOrder::parse(sw_c.p);
      const auto doc = ordered_json::parse(read_text_file(sw_centers), nullptr, false);
      if (doc.is_discarded() || !doc.is_object() || !doc.contains("centers") || !doc.contains("weights"))
        fail(ErrorKind::parse, sw_centers + ": expected {\"centers\": [...], \"weights\": [...]}");
      std::vector<std::vector<double>> centers;
      std::vector<double> weights;
      try {
        centers = doc["centers"].get<std::vector<std::vector<double>>>();
        weights = doc["weights"].get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, sw_centers + ": " + e.what());
      }
      if (centers.empty()) fail(ErrorKind::invalid_input, "no centers given");
      const int d = static_cast<int>(centers.front().size());
      const BoxDomain box = sw_box.empty() ? BoxDomain::cube(d, -1, 1) : BoxDomain::parse(sw_box);
      const auto widths = parse_list(sw_widths, "--widths");
      const auto rows = sweep_rbf_width(centers, weights, widths,
                                        {box, std::vector<int>(static_cast<std::size_t>(d), sw_nodes)}, p);
      std::vector<Row> table;
      for (const auto& r : rows) table.push_back({{"sigma", r.sigma}, {"htv", r.htv}, {"error_estimate", r.error_estimate}});
      if (!sw_csv.empty() && sw_csv != "-") {
        std::ofstream f(sw_csv, std::ios::binary);
        if (!f) fail(ErrorKind::invalid_input, sw_csv + ": cannot write file");
        write_csv(f, table);
      }
      if (sw_csv == "-") {
        write_csv(out, table);
      } else {
        emit_table(out, sw_c.json ? Format::json : Format::text, {{"p", p.to_string()}}, table);
      }
    } else if (*import) {
      const auto p = SchattenOrder::parse(ir_c.p);
      const MlpWeights w = read_weights(ir_weights);
      const BoxDomain box = ir_box.empty() ? BoxDomain::cube(w.input_dim, -1, 1) : BoxDomain::parse(ir_box);
      if (box.dim() != w.input_dim) fail(ErrorKind::dimension_mismatch, "box and network input dimensions differ");
      MeshFile file{SimplicialCpwl(1, {0, 1}, {0, 1}, {0, 0}), ir_name, "", true};
      std::string notice;
      if (w.input_dim == 1) {
        file.mesh = spline_to_mesh(relu_to_cpwl_1d(w), box.lower(0), box.upper(0));
      } else if (w.input_dim == 2) {
        auto r = relu_to_cpwl_2d(w, box, {ir_nodes, !ir_exact_only});
        file.mesh = std::move(r.mesh);
        file.exact = r.exact;
        notice = r.notice;
      } else {
        fail(ErrorKind::unsupported, "ReLU import supports input dimension 1 or 2");
      }
      write_mesh(file, ir_out);
      if (!notice.empty() && ir_c.format() == Format::text) err << "notice: " << notice << "\n";
      emit(out, ir_c.format(),
           {{"exact", file.exact},
            {"vertices", static_cast<long long>(file.mesh.vertex_count())},
            {"simplices", static_cast<long long>(file.mesh.simplex_count())},
            {"htv", htv(file.mesh, p)},
            {"regions", static_cast<long long>(region_count(file.mesh))},
            {"notice", notice}});
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return 4;
  }
  return 0;
}

}  // namespace htv::cli
