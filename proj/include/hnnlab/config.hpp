#pragma once

// JSON presentation files. Integers may be JSON numbers or decimal strings.
//
//   {"type": "hnn", "base_rank": 1,
//    "edges": [{"name": "t", "m_plus": [[1]], "m_minus": [[2]]}],
//    "generators": [{"name": "a", "inverse": "a'", "image": {"vertex": "H", "vector": [1]}},
//                   {"name": "t", "inverse": "t'", "image": {"stable": "t", "exp": 1}}]}
//
// Amalgams use "type": "amalgam" with "h_rank", "k_rank", "m_h", "m_k".
// An image may also be a list of such parts.

#include "hnnlab/presentation.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnnlab {

/// Malformed or invalid configuration; one message per problem, each
/// prefixed with its location.
class config_error : public std::runtime_error {
 public:
  explicit config_error(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> problems_;
};

namespace detail {

using json = nlohmann::json;

class ConfigReader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& path, const std::string& what) { problems.push_back(path + ": " + what); }

  const json* field(const json& obj, const std::string& path, const char* key, bool required = true) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "/" + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<BigInt> integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
    if (v.is_string()) {
      try {
        return parse_bigint(v.get<std::string>());
      } catch (const std::exception&) {
      }
    }
    fail(path, "expected an integer (JSON number or decimal string)");
    return std::nullopt;
  }

  std::optional<std::size_t> natural(const json& v, const std::string& path) {
    auto x = integer(v, path);
    if (!x) return std::nullopt;
    if (*x < 0 || *x > 1'000'000) {
      fail(path, "expected a small nonnegative integer");
      return std::nullopt;
    }
    return static_cast<std::size_t>(*x);
  }

  std::optional<std::string> string(const json& v, const std::string& path) {
    if (v.is_string()) return v.get<std::string>();
    fail(path, "expected a string");
    return std::nullopt;
  }

  std::optional<BigVector> vector(const json& v, const std::string& path) {
    if (!v.is_array()) {
      fail(path, "expected an array of integers");
      return std::nullopt;
    }
    BigVector out;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto x = integer(v[i], path + "/" + std::to_string(i));
      if (x) out.push_back(*x);
      else ok = false;
    }
    return ok ? std::optional<BigVector>(std::move(out)) : std::nullopt;
  }

  /// Row-major matrix.
  std::optional<BigMatrix> matrix(const json& v, const std::string& path) {
    if (!v.is_array()) {
      fail(path, "expected an array of rows");
      return std::nullopt;
    }
    std::vector<BigVector> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto r = vector(v[i], path + "/" + std::to_string(i));
      if (!r) return std::nullopt;
      if (!rows.empty() && r->size() != rows.front().size()) {
        fail(path, "rows have different lengths");
        return std::nullopt;
      }
      rows.push_back(std::move(*r));
    }
    return BigMatrix::from_rows(rows, rows.empty() ? 0 : rows.front().size());
  }

  std::optional<ImagePart> image_part(const json& v, const std::string& path) {
    if (!v.is_object()) {
      fail(path, "expected an image object");
      return std::nullopt;
    }
    if (v.contains("stable")) {
      auto name = string(v["stable"], path + "/stable");
      std::optional<BigInt> exp = BigInt(1);
      if (v.contains("exp")) exp = integer(v["exp"], path + "/exp");
      if (!name || !exp) return std::nullopt;
      if (*exp != 1 && *exp != -1) {
        fail(path + "/exp", "must be 1 or -1");
        return std::nullopt;
      }
      return StableImage{*name, static_cast<int>(*exp)};
    }
    const json* vertex = field(v, path, "vertex");
    const json* vec = field(v, path, "vector");
    if (!vertex || !vec) return std::nullopt;
    auto tag = string(*vertex, path + "/vertex");
    auto x = vector(*vec, path + "/vector");
    if (!tag || !x) return std::nullopt;
    if (*tag != "H" && *tag != "K") {
      fail(path + "/vertex", "must be \"H\" or \"K\"");
      return std::nullopt;
    }
    return BaseImage{*tag == "H" ? Vertex::H : Vertex::K, std::move(*x)};
  }

  std::optional<GeneratorSpec> generator(const json& v, const std::string& path) {
    const json* name = field(v, path, "name");
    const json* image = field(v, path, "image");
    if (!name || !image) return std::nullopt;
    GeneratorSpec g;
    auto n = string(*name, path + "/name");
    if (!n) return std::nullopt;
    g.name = *n;
    if (const json* inv = field(v, path, "inverse", false)) {
      auto s = string(*inv, path + "/inverse");
      if (!s) return std::nullopt;
      g.inverse = *s;
    }
    if (image->is_array()) {
      g.expansion = true;
      for (std::size_t i = 0; i < image->size(); ++i) {
        auto part = image_part((*image)[i], path + "/image/" + std::to_string(i));
        if (!part) return std::nullopt;
        g.image.push_back(std::move(*part));
      }
    } else {
      auto part = image_part(*image, path + "/image");
      if (!part) return std::nullopt;
      g.image.push_back(std::move(*part));
    }
    return g;
  }
};

}  // namespace detail

/// Reads a presentation from JSON without semantic validation.
inline Presentation parse_presentation(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + end, '\n'));
    throw config_error({"line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")"});
  }
  detail::ConfigReader r;
  Presentation p;
  const json* type = r.field(doc, "", "type");
  std::optional<std::string> kind;
  if (type) kind = r.string(*type, "/type");
  if (kind == "hnn") {
    HnnPresentation h;
    if (const json* n = r.field(doc, "", "base_rank"))
      if (auto v = r.natural(*n, "/base_rank")) h.base_rank = *v;
    if (const json* edges = r.field(doc, "", "edges")) {
      if (!edges->is_array()) r.fail("/edges", "expected an array");
      else
        for (std::size_t i = 0; i < edges->size(); ++i) {
          const std::string path = "/edges/" + std::to_string(i);
          const json& e = (*edges)[i];
          const json* name = r.field(e, path, "name");
          const json* mp = r.field(e, path, "m_plus");
          const json* mm = r.field(e, path, "m_minus");
          if (!name || !mp || !mm) continue;
          auto n = r.string(*name, path + "/name");
          auto a = r.matrix(*mp, path + "/m_plus");
          auto b = r.matrix(*mm, path + "/m_minus");
          if (n && a && b) h.edges.push_back({*n, std::move(*a), std::move(*b)});
        }
    }
    p.splitting = std::move(h);
  } else if (kind == "amalgam") {
    AmalgamPresentation a;
    if (const json* n = r.field(doc, "", "h_rank"))
      if (auto v = r.natural(*n, "/h_rank")) a.h_rank = *v;
    if (const json* n = r.field(doc, "", "k_rank"))
      if (auto v = r.natural(*n, "/k_rank")) a.k_rank = *v;
    if (const json* m = r.field(doc, "", "m_h"))
      if (auto v = r.matrix(*m, "/m_h")) a.m_h = std::move(*v);
    if (const json* m = r.field(doc, "", "m_k"))
      if (auto v = r.matrix(*m, "/m_k")) a.m_k = std::move(*v);
    p.splitting = std::move(a);
  } else if (kind) {
    r.fail("/type", "must be \"hnn\" or \"amalgam\"");
  }
  if (const json* gens = r.field(doc, "", "generators")) {
    if (!gens->is_array()) r.fail("/generators", "expected an array");
    else
      for (std::size_t i = 0; i < gens->size(); ++i)
        if (auto g = r.generator((*gens)[i], "/generators/" + std::to_string(i))) p.generators.push_back(std::move(*g));
  }
  if (!r.problems.empty()) throw config_error(std::move(r.problems));
  return p;
}

/// Parses and validates; throws config_error listing every violation.
inline Presentation parse_config(const std::string& text) {
  Presentation p = parse_presentation(text);
  if (auto v = validate_presentation(p); !v.empty()) throw config_error(std::move(v));
  return p;
}

inline Presentation load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

namespace detail {

/// Integers that fit a double exactly stay numbers; larger ones become
/// decimal strings.
inline json integer_json(const BigInt& x) {
  static const BigInt limit = BigInt(1) << 53;
  if (abs(x) <= limit) return x.convert_to<std::int64_t>();
  return x.str();
}

inline json vector_json(const BigVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline json matrix_json(const BigMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

inline json image_part_json(const ImagePart& part) {
  if (const auto* b = std::get_if<BaseImage>(&part))
    return {{"vertex", std::string(1, vertex_name(b->vertex))}, {"vector", vector_json(b->vector)}};
  const auto& s = std::get<StableImage>(part);
  return {{"stable", s.edge}, {"exp", s.exp}};
}

}  // namespace detail

inline std::string serialize_presentation(const Presentation& p) {
  using detail::json;
  json doc;
  if (p.is_hnn()) {
    const auto& h = p.hnn();
    doc["type"] = "hnn";
    doc["base_rank"] = h.base_rank;
    json edges = json::array();
    for (const auto& e : h.edges)
      edges.push_back(
          {{"name", e.name}, {"m_plus", detail::matrix_json(e.m_plus)}, {"m_minus", detail::matrix_json(e.m_minus)}});
    doc["edges"] = std::move(edges);
  } else {
    const auto& a = p.amalgam();
    doc["type"] = "amalgam";
    doc["h_rank"] = a.h_rank;
    doc["k_rank"] = a.k_rank;
    doc["m_h"] = detail::matrix_json(a.m_h);
    doc["m_k"] = detail::matrix_json(a.m_k);
  }
  json gens = json::array();
  for (const auto& g : p.generators) {
    json x = {{"name", g.name}};
    if (g.inverse) x["inverse"] = *g.inverse;
    if (g.expansion) {
      json parts = json::array();
      for (const auto& part : g.image) parts.push_back(detail::image_part_json(part));
      x["image"] = std::move(parts);
    } else {
      x["image"] = detail::image_part_json(g.image.front());
    }
    gens.push_back(std::move(x));
  }
  doc["generators"] = std::move(gens);
  return doc.dump(2) + "\n";
}

}  // namespace hnnlab
