#include "interpnet/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "interpnet/errors.hpp"
#include "interpnet/format.hpp"

namespace interpnet {

using nlohmann::json;

namespace {

struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  Record rec;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  std::size_t line = 1;
  rec.line = 1;
  std::size_t i = 0;

  const auto end_record = [&]() {
    rec.cells.push_back(std::move(cell));
    cell.clear();
    const bool blank = rec.cells.size() == 1 && rec.cells[0].empty() && !cell_started;
    if (!blank) {
      records.push_back(std::move(rec));
    }
    rec = Record{};
    cell_started = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        if (c == '\n') {
          ++line;
        }
        cell += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      quoted = true;
      cell_started = true;
    } else if (c == ',') {
      rec.cells.push_back(std::move(cell));
      cell.clear();
      cell_started = true;
    } else if (c == '\n' || c == '\r') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
        ++i;
      }
      ++line;
      rec.line = line;
    } else {
      cell += c;
    }
    ++i;
  }
  if (quoted) {
    throw ParseError("unterminated quoted field", rec.line, rec.cells.size() + 1);
  }
  if (!cell.empty() || !rec.cells.empty() || cell_started) {
    end_record();
  }
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_cell(std::string_view raw, std::size_t row, std::size_t column) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw NonNumericCell("non-numeric cell '" + std::string(raw) + "'", row, column);
  }
  return v;
}

std::size_t resolve_column(const std::string& ref, const std::vector<std::string>& header,
                           std::size_t width) {
  const auto named = std::find(header.begin(), header.end(), ref);
  if (named != header.end()) {
    return static_cast<std::size_t>(named - header.begin());
  }
  long long idx = 0;
  const auto res = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
  if (ref.empty() || res.ec != std::errc() || res.ptr != ref.data() + ref.size()) {
    throw SchemaError("unknown target column '" + ref + "'");
  }
  const long long w = static_cast<long long>(width);
  if (idx < 0) {
    idx += w;
  }
  if (idx < 0 || idx >= w) {
    throw SchemaError("target column " + ref + " is out of range for " + std::to_string(width) +
                      " columns");
  }
  return static_cast<std::size_t>(idx);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("error while reading " + path.string());
  }
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw IoError("error while writing " + path.string());
  }
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const char* interpolation_name(InterpolationRule r) {
  return r == InterpolationRule::NearestConstant ? "nearest_constant" : "two_neuron_weighted";
}

InterpolationRule interpolation_from(const std::string& s) {
  if (s == "two_neuron_weighted") {
    return InterpolationRule::TwoNeuronWeighted;
  }
  if (s == "nearest_constant") {
    return InterpolationRule::NearestConstant;
  }
  throw SchemaError("unknown interpolation rule '" + s + "'");
}

json tnn_params(const TnnModel& m) {
  return {{"a", m.sharpness}, {"dummy_gap", m.dummy_gap}};
}

json tnn_payload(const TnnModel& m) {
  return {{"weights", m.weights},     {"biases", m.biases},   {"alpha", m.alpha},
          {"ordered_x", m.ordered_x}, {"ordered_y", m.ordered_y}, {"ordered_index", m.ordered_index}};
}

json sqann_params(const SqannConfig& c) {
  return {{"a1", c.dsa.a1},
          {"a2", c.dsa.a2},
          {"r", c.dsa.r},
          {"tau_ad", c.tau_ad},
          {"tau_act", c.tau_act},
          {"max_construction_steps", c.max_construction_steps},
          {"interpolation", interpolation_name(c.interpolation)}};
}

json sqann_payload(const SqannModel& m) {
  json layers = json::array();
  for (const SqannLayer& l : m.layers) {
    layers.push_back({{"nodes", l.nodes}, {"alphas", l.alphas}, {"sample_indices", l.sample_indices}});
  }
  return {{"input_dim", m.input_dim}, {"output_dim", m.output_dim}, {"layers", layers}};
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) {
    throw SchemaError(std::string("expected an object holding '") + key + "'");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return *it;
}

template <class T>
T get(const json& obj, const char* key) {
  try {
    return field(obj, key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

TnnModel tnn_from(const json& params, const json& payload) {
  TnnModel m;
  m.sharpness = get<double>(params, "a");
  m.dummy_gap = get<double>(params, "dummy_gap");
  m.weights = get<Vector>(payload, "weights");
  m.biases = get<Vector>(payload, "biases");
  m.alpha = get<std::vector<Vector>>(payload, "alpha");
  m.ordered_x = get<Vector>(payload, "ordered_x");
  m.ordered_y = get<std::vector<Vector>>(payload, "ordered_y");
  m.ordered_index = get<std::vector<std::size_t>>(payload, "ordered_index");
  const std::size_t n = m.weights.size();
  const bool shaped = m.biases.size() == n && m.ordered_x.size() == n && m.ordered_y.size() == n &&
                      m.ordered_index.size() == n &&
                      std::all_of(m.alpha.begin(), m.alpha.end(), [n](const Vector& r) { return r.size() == n; });
  if (!shaped) {
    throw SchemaError("TNN payload arrays disagree in length");
  }
  return m;
}

SqannModel sqann_from(const json& params, const json& payload) {
  SqannModel m;
  SqannConfig& c = m.config;
  c.dsa.a1 = get<double>(params, "a1");
  c.dsa.a2 = get<double>(params, "a2");
  c.dsa.r = get<double>(params, "r");
  c.tau_ad = get<double>(params, "tau_ad");
  c.tau_act = get<double>(params, "tau_act");
  c.max_construction_steps = get<std::size_t>(params, "max_construction_steps");
  c.interpolation = interpolation_from(get<std::string>(params, "interpolation"));
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("invalid SQANN parameters: ") + e.what());
  }
  m.input_dim = get<std::size_t>(payload, "input_dim");
  m.output_dim = get<std::size_t>(payload, "output_dim");
  const json& layers = field(payload, "layers");
  if (!layers.is_array()) {
    throw SchemaError("field 'layers' must be an array");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    SqannLayer l;
    l.nodes = get<std::vector<Vector>>(layers[k], "nodes");
    l.alphas = get<std::vector<Vector>>(layers[k], "alphas");
    l.sample_indices = get<std::vector<std::size_t>>(layers[k], "sample_indices");
    const std::size_t node_dim = k == 0 ? m.input_dim : m.layers[k - 1].size();
    const bool shaped =
        !l.nodes.empty() && l.alphas.size() == l.size() && l.sample_indices.size() == l.size() &&
        std::all_of(l.nodes.begin(), l.nodes.end(), [&](const Vector& v) { return v.size() == node_dim; }) &&
        std::all_of(l.alphas.begin(), l.alphas.end(), [&](const Vector& v) { return v.size() == m.output_dim; });
    if (!shaped) {
      throw SchemaError("SQANN layer " + std::to_string(k + 1) + " has inconsistent shapes");
    }
    m.layers.push_back(std::move(l));
  }
  if (m.layers.empty()) {
    throw SchemaError("SQANN payload has no layers");
  }
  return m;
}

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& opts) {
  std::vector<Record> records = split_records(text);
  std::vector<std::string> header;
  std::size_t first = 0;
  if (opts.has_header) {
    if (records.empty()) {
      throw SchemaError("CSV has no header row");
    }
    for (const std::string& h : records[0].cells) {
      header.emplace_back(trim(h));
    }
    first = 1;
  }
  if (records.size() <= first) {
    throw SchemaError("CSV has no data rows");
  }
  const std::size_t width = opts.has_header ? header.size() : records[first].cells.size();
  if (width < 2) {
    throw SchemaError("CSV needs at least one input and one target column");
  }

  std::vector<std::size_t> targets;
  if (opts.target_columns.empty()) {
    targets.push_back(width - 1);
  }
  for (const std::string& ref : opts.target_columns) {
    targets.push_back(resolve_column(ref, header, width));
  }
  const std::set<std::size_t> target_set(targets.begin(), targets.end());
  if (target_set.size() != targets.size() || target_set.size() >= width) {
    throw SchemaError("target columns must be distinct and leave at least one input column");
  }

  std::vector<Vector> xs;
  std::vector<Vector> ys;
  for (std::size_t r = first; r < records.size(); ++r) {
    const Record& rec = records[r];
    if (rec.cells.size() != width) {
      throw RaggedRows("expected " + std::to_string(width) + " cells, found " +
                           std::to_string(rec.cells.size()),
                       rec.line, std::min(rec.cells.size(), width) + 1);
    }
    Vector x;
    Vector y(targets.size());
    for (std::size_t c = 0; c < width; ++c) {
      const double v = parse_cell(rec.cells[c], rec.line, c + 1);
      if (!target_set.count(c)) {
        x.push_back(v);
      }
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
      y[t] = parse_cell(rec.cells[targets[t]], rec.line, targets[t] + 1);
    }
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
  }
  return Dataset::from_rows(xs, ys);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  return parse_csv(read_file(path), opts);
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < d.input_dim(); ++i) {
    out += (i ? ",x" : "x") + std::to_string(i + 1);
  }
  for (std::size_t i = 0; i < d.output_dim(); ++i) {
    out += ",y" + std::to_string(i + 1);
  }
  out += '\n';
  for (const Sample& s : d) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out += (i ? "," : "") + format_number(s.x[i]);
    }
    for (double v : s.y) {
      out += "," + format_number(v);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::uint64_t dataset_fingerprint(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= bits & 0xffU;
      h *= 0x100000001b3ULL;
      bits >>= 8;
    }
  };
  for (const Sample& s : d) {
    for (double v : s.x) {
      mix(v);
    }
    for (double v : s.y) {
      mix(v);
    }
  }
  return h;
}

std::string model_to_json(const ModelFile& f) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  if (const auto* t = std::get_if<TnnModel>(&f.model)) {
    doc["model_kind"] = "tnn";
    doc["params"] = tnn_params(*t);
    doc["payload"] = tnn_payload(*t);
  } else {
    const auto& s = std::get<SqannModel>(f.model);
    doc["model_kind"] = "sqann";
    doc["params"] = sqann_params(s.config);
    doc["payload"] = sqann_payload(s);
  }
  doc["scaling"] = f.scaling.empty() ? json(nullptr) : json{{"min", f.scaling.min}, {"max", f.scaling.max}};
  doc["dataset_fingerprint"] = to_hex(f.dataset_fingerprint);
  return doc.dump(2) + "\n";
}

ModelFile model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError("model file must hold a JSON object");
  }
  static const std::set<std::string> keys{"format_version", "model_kind", "params",
                                          "payload",        "scaling",    "dataset_fingerprint"};
  for (const auto& [key, value] : doc.items()) {
    if (!keys.count(key)) {
      throw SchemaError("unexpected top-level field '" + key + "'");
    }
  }
  const int version = get<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw VersionMismatch("model format version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kModelFormatVersion) + ")");
  }

  const json& params = field(doc, "params");
  const json& payload = field(doc, "payload");
  const std::string kind = get<std::string>(doc, "model_kind");
  ModelFile f;
  if (kind == "tnn") {
    f.model = tnn_from(params, payload);
  } else if (kind == "sqann") {
    f.model = sqann_from(params, payload);
  } else {
    throw SchemaError("unknown model_kind '" + kind + "'");
  }

  const json& scaling = field(doc, "scaling");
  if (!scaling.is_null()) {
    f.scaling.min = get<Vector>(scaling, "min");
    f.scaling.max = get<Vector>(scaling, "max");
    if (f.scaling.min.size() != f.scaling.max.size()) {
      throw SchemaError("scaling min and max differ in length");
    }
  }

  const std::string hex = get<std::string>(doc, "dataset_fingerprint");
  const auto res = std::from_chars(hex.data(), hex.data() + hex.size(), f.dataset_fingerprint, 16);
  if (hex.size() != 16 || res.ec != std::errc() || res.ptr != hex.data() + hex.size()) {
    throw SchemaError("dataset_fingerprint must be 16 hex digits");
  }
  return f;
}

void save_model(const ModelFile& f, const std::filesystem::path& path) { write_file(path, model_to_json(f)); }

ModelFile load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

Vector predict(const ModelFile& f, std::span<const double> x) {
  if (f.scaling.empty()) {
    return predict(f.model, x);
  }
  return predict(f.model, f.scaling.apply(x));
}

}  // namespace interpnet
