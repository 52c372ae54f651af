#include "macsi/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "macsi/errors.hpp"
#include "macsi/version.hpp"

namespace macsi {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ValidationError("channel spec: " + context + ": " + what);
}

int parse_alphabet(const json& j, const std::string& field,
                   std::vector<std::string>& labels) {
  labels.clear();
  if (j.is_number_integer()) {
    const long long n = j.get<long long>();
    if (n < 1) fail(field, "alphabet size must be >= 1");
    return static_cast<int>(n);
  }
  if (j.is_array()) {
    if (j.empty()) fail(field, "label array must be nonempty");
    for (const auto& e : j) {
      if (!e.is_string()) fail(field, "labels must be strings");
      labels.push_back(e.get<std::string>());
    }
    return static_cast<int>(labels.size());
  }
  fail(field, "expected an integer size or an array of string labels");
}

std::vector<double> parse_prob_vector(const json& j, const std::string& field,
                                      int expect) {
  if (!j.is_array() || static_cast<int>(j.size()) != expect)
    fail(field, "expected an array of " + std::to_string(expect) + " numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) fail(field, "entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Re-indexes raw quantizer values densely (ascending by declared value) and
// records a warning when declared labels go unused.
std::vector<int> densify_quantizer(const json& j, const std::string& field,
                                   int state_size, int& obs_size,
                                   std::vector<std::string>& warnings) {
  if (!j.is_array() || static_cast<int>(j.size()) != state_size)
    fail(field, "expected an array of " + std::to_string(state_size) + " integers");
  std::vector<int> raw;
  raw.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) fail(field, "entries must be integers");
    const long long v = e.get<long long>();
    if (v < 0) fail(field, "observation labels must be nonnegative");
    raw.push_back(static_cast<int>(v));
  }
  std::map<int, int> dense;  // declared value -> dense index, ascending
  for (int v : raw) dense.emplace(v, 0);
  int next = 0;
  for (auto& [value, index] : dense) index = next++;
  obs_size = next;

  const int declared_max = *std::max_element(raw.begin(), raw.end());
  if (declared_max + 1 != obs_size) {
    std::ostringstream os;
    os << field << ": observation labels re-indexed densely; dropped unused label(s)";
    for (int v = 0; v <= declared_max; ++v)
      if (!dense.count(v)) os << " " << v;
    warnings.push_back(os.str());
  }

  std::vector<int> out;
  out.reserve(raw.size());
  for (int v : raw) out.push_back(dense[v]);
  return out;
}

Conditional parse_conditional(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of rows");
  Conditional cond;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) fail(field, "rows must be nonempty arrays");
    std::vector<double> r;
    for (const auto& e : row) {
      if (!e.is_number()) fail(field, "entries must be numbers");
      r.push_back(e.get<double>());
    }
    cond.push_back(std::move(r));
  }
  return cond;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

LoadedModel parse_channel_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Count lines up to the reported byte for a friendlier message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ValidationError("channel spec: malformed document at line " +
                          std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("channel spec: top level must be an object");

  static const char* kFields[] = {"states",      "prior",       "inputs_a",
                                  "inputs_b",    "outputs",     "quantizer_a",
                                  "quantizer_b", "kernel"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kFields), std::end(kFields), [&](const char* f) {
          return key == f;
        }) == std::end(kFields))
      throw ValidationError("channel spec: unknown field \"" + key + "\"");
  }
  for (const char* f : kFields)
    if (!doc.contains(f))
      throw ValidationError("channel spec: missing field \"" + std::string(f) + "\"");

  LoadedModel loaded;
  MacModel& m = loaded.model;

  const int s_size = parse_alphabet(doc["states"], "states", m.state_labels);
  m.input_size_a = parse_alphabet(doc["inputs_a"], "inputs_a", m.input_labels_a);
  m.input_size_b = parse_alphabet(doc["inputs_b"], "inputs_b", m.input_labels_b);
  m.output_size = parse_alphabet(doc["outputs"], "outputs", m.output_labels);

  m.state_prior = parse_prob_vector(doc["prior"], "prior", s_size);
  m.quantizer_a = densify_quantizer(doc["quantizer_a"], "quantizer_a", s_size,
                                    m.obs_size_a, loaded.warnings);
  m.quantizer_b = densify_quantizer(doc["quantizer_b"], "quantizer_b", s_size,
                                    m.obs_size_b, loaded.warnings);

  const json& kern = doc["kernel"];
  if (!kern.is_array() || static_cast<int>(kern.size()) != s_size)
    fail("kernel", "expected " + std::to_string(s_size) + " state slices");
  m.kernel = Tensor({s_size, m.input_size_a, m.input_size_b, m.output_size});
  for (int s = 0; s < s_size; ++s) {
    const json& by_xa = kern[static_cast<std::size_t>(s)];
    const std::string sctx = "kernel[s=" + std::to_string(s) + "]";
    if (!by_xa.is_array() || static_cast<int>(by_xa.size()) != m.input_size_a)
      fail(sctx, "expected " + std::to_string(m.input_size_a) + " rows (one per x_a)");
    for (int xa = 0; xa < m.input_size_a; ++xa) {
      const json& by_xb = by_xa[static_cast<std::size_t>(xa)];
      const std::string actx = sctx + "[xa=" + std::to_string(xa) + "]";
      if (!by_xb.is_array() || static_cast<int>(by_xb.size()) != m.input_size_b)
        fail(actx, "expected " + std::to_string(m.input_size_b) + " rows (one per x_b)");
      for (int xb = 0; xb < m.input_size_b; ++xb) {
        const std::string bctx = actx + "[xb=" + std::to_string(xb) + "]";
        const std::vector<double> row =
            parse_prob_vector(by_xb[static_cast<std::size_t>(xb)], bctx, m.output_size);
        for (int y = 0; y < m.output_size; ++y) {
          const int idx[4] = {s, xa, xb, y};
          m.kernel.at(idx) = row[static_cast<std::size_t>(y)];
        }
      }
    }
  }

  const ValidationReport report = validate_model(m);
  if (!report.empty()) {
    std::ostringstream os;
    os << "channel spec: model fails validation (" << report.size() << " violation"
       << (report.size() == 1 ? "" : "s") << "):";
    for (const Violation& v : report) os << "\n  - " << v.message;
    throw ValidationError(os.str());
  }
  return loaded;
}

LoadedModel load_channel_spec(const std::string& path) {
  return parse_channel_spec(read_text_file(path));
}

std::string export_channel_spec(const MacModel& m) {
  json doc;
  auto alphabet = [](int size, const std::vector<std::string>& labels) {
    if (labels.empty()) return json(size);
    return json(labels);
  };
  doc["states"] = alphabet(m.state_size(), m.state_labels);
  doc["prior"] = m.state_prior;
  doc["inputs_a"] = alphabet(m.input_size_a, m.input_labels_a);
  doc["inputs_b"] = alphabet(m.input_size_b, m.input_labels_b);
  doc["outputs"] = alphabet(m.output_size, m.output_labels);
  doc["quantizer_a"] = m.quantizer_a;
  doc["quantizer_b"] = m.quantizer_b;

  json kern = json::array();
  for (int s = 0; s < m.state_size(); ++s) {
    json by_xa = json::array();
    for (int xa = 0; xa < m.input_size_a; ++xa) {
      json by_xb = json::array();
      for (int xb = 0; xb < m.input_size_b; ++xb) {
        json row = json::array();
        for (int y = 0; y < m.output_size; ++y) {
          const int idx[4] = {s, xa, xb, y};
          row.push_back(m.kernel.at(idx));
        }
        by_xb.push_back(std::move(row));
      }
      by_xa.push_back(std::move(by_xb));
    }
    kern.push_back(std::move(by_xa));
  }
  doc["kernel"] = std::move(kern);
  return doc.dump(2) + "\n";
}

TeamPolicy parse_team_policy(const std::string& text, const MacModel& model) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("policy file: malformed document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pi_a") || !doc.contains("pi_b"))
    throw ValidationError("policy file: expected an object with pi_a and pi_b");
  TeamPolicy p;
  p.pi_a = parse_conditional(doc["pi_a"], "pi_a");
  p.pi_b = parse_conditional(doc["pi_b"], "pi_b");
  ensure_valid_policy(model, p);
  return p;
}

TeamPolicy load_team_policy(const std::string& path, const MacModel& model) {
  return parse_team_policy(read_text_file(path), model);
}

std::string export_team_policy(const TeamPolicy& policy) {
  json doc;
  doc["pi_a"] = policy.pi_a;
  doc["pi_b"] = policy.pi_b;
  return doc.dump(2) + "\n";
}

std::string format_polygon(const Polygon& region, std::uint64_t seed) {
  std::ostringstream os;
  os << "# macsi " << kVersion << " seed=" << seed << "\n";
  for (const RatePair& v : region.vertices())
    os << format_double(v.ra) << " " << format_double(v.rb) << "\n";
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace macsi
