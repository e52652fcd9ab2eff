#include "eqmanna/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eqmanna/errors.hpp"

namespace eqmanna {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line holding the first occurrence of the quoted key, or 1.
int line_of_key(const std::string& text, const std::string& key) {
  const std::size_t at = text.find("\"" + key + "\"");
  return at == std::string::npos ? 1 : line_of_offset(text, at);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1),
                     "");
  }
}

void require_fields(const std::string& text, const json& doc, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional) {
  if (!doc.is_object()) throw ParseError("top level must be an object", 1, "");
  for (const char* f : required)
    if (!doc.contains(f)) throw ParseError(std::string("missing field '") + f + "'", 1, f);
  for (const auto& [key, _] : doc.items()) {
    const bool known = std::ranges::any_of(required, [&](const char* f) { return key == f; }) ||
                       std::ranges::any_of(optional, [&](const char* f) { return key == f; });
    if (!known) throw ParseError("unknown field '" + key + "'", line_of_key(text, key), key);
  }
}

int read_count(const std::string& text, const json& doc, const char* field) {
  const json& v = doc.at(field);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 1'000'000)
    throw ParseError(std::string("field '") + field + "' must be a non-negative integer", line_of_key(text, field),
                     field);
  return static_cast<int>(v.get<std::int64_t>());
}

std::optional<std::string> read_optional_string(const std::string& text, const json& doc, const char* field) {
  if (!doc.contains(field)) return std::nullopt;
  if (!doc.at(field).is_string())
    throw ParseError(std::string("field '") + field + "' must be text", line_of_key(text, field), field);
  return doc.at(field).get<std::string>();
}

std::string quoted(const std::string& s) { return json(s).dump(); }

template <class Seq>
std::string inline_array(const Seq& seq) {
  std::string out = "[";
  bool first = true;
  for (const auto& x : seq) {
    if (!first) out += ", ";
    out += std::to_string(x);
    first = false;
  }
  return out + "]";
}

// Rows of a nested array: "[\n    row,\n    row\n  ]", or "[]" when empty.
template <class Rows>
std::string block_array(const Rows& rows) {
  if (rows.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += "    " + inline_array(rows[r]);
    out += r + 1 < rows.size() ? ",\n" : "\n";
  }
  return out + "  ]";
}

}  // namespace

std::string write_instance(const Instance& instance, const std::optional<std::string>& regime_claim) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"name\": " << quoted(instance.name()) << ",\n";
  out << "  \"agents\": " << instance.num_agents() << ",\n";
  out << "  \"items\": " << instance.num_items() << ",\n";
  out << "  \"values\": " << block_array(instance.rows());
  if (regime_claim) out << ",\n  \"regime_claim\": " << quoted(*regime_claim);
  out << "\n}\n";
  return out.str();
}

InstanceDocument parse_instance(const std::string& text) {
  const json doc = parse_json(text);
  require_fields(text, doc, {"name", "agents", "items", "values"}, {"regime_claim"});
  const auto name = read_optional_string(text, doc, "name");
  const int n = read_count(text, doc, "agents");
  const int m = read_count(text, doc, "items");

  const json& values = doc.at("values");
  const int values_line = line_of_key(text, "values");
  if (!values.is_array()) throw ParseError("field 'values' must be an array of rows", values_line, "values");
  if (static_cast<int>(values.size()) != n)
    throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(values.size()), values_line,
                     "values");
  std::vector<Value> flat;
  flat.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    const json& row = values[i];
    const int row_line = values_line + 1 + i;
    const std::string field = "values[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(m) + " integers", row_line, field);
    for (int o = 0; o < m; ++o) {
      if (!row[o].is_number_integer())
        throw ParseError("value at row " + std::to_string(i) + ", item " + std::to_string(o) + " is not an integer",
                         row_line, field + "[" + std::to_string(o) + "]");
      flat.push_back(row[o].get<Value>());
    }
  }
  InstanceDocument out{Instance(n, m, std::move(flat), name.value_or("")), read_optional_string(text, doc, "regime_claim")};
  return out;
}

std::string write_allocation(const Allocation& allocation, const std::optional<std::string>& source) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"bundles\": " << block_array(allocation.bundles());
  if (source) out << ",\n  \"source\": " << quoted(*source);
  out << "\n}\n";
  return out.str();
}

AllocationDocument parse_allocation(const Instance& instance, const std::string& text) {
  const json doc = parse_json(text);
  require_fields(text, doc, {"bundles"}, {"source"});
  const json& bundles = doc.at("bundles");
  const int line = line_of_key(text, "bundles");
  if (!bundles.is_array() || static_cast<int>(bundles.size()) != instance.num_agents())
    throw ParseError("field 'bundles' must hold one array per agent (" + std::to_string(instance.num_agents()) + ")",
                     line, "bundles");
  Allocation a(instance);
  for (int i = 0; i < instance.num_agents(); ++i) {
    const std::string field = "bundles[" + std::to_string(i) + "]";
    if (!bundles[i].is_array()) throw ParseError(field + " must be an array", line + 1 + i, field);
    for (const json& item : bundles[i]) {
      if (!item.is_number_integer() || item.get<std::int64_t>() < 0 ||
          item.get<std::int64_t>() >= instance.num_items())
        throw ParseError("item index out of range in " + field, line + 1 + i, field);
      const auto o = static_cast<ItemId>(item.get<std::int64_t>());
      if (a.is_allocated(o))
        throw ParseError("item " + std::to_string(o) + " appears in more than one bundle", line + 1 + i, field);
      a.assign(instance, o, i);
    }
  }
  return AllocationDocument{std::move(a), read_optional_string(text, doc, "source")};
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

InstanceDocument load_instance(const std::string& path) { return parse_instance(read_file(path)); }

AllocationDocument load_allocation(const Instance& instance, const std::string& path) {
  return parse_allocation(instance, read_file(path));
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace eqmanna
