#include "qpa/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qpa/errors.hpp"

namespace qpa {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

std::vector<std::vector<double>> real_rows(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& row = j[i];
    if (!row.is_array()) schema_error(where, "row " + std::to_string(i) + " is not an array");
    std::vector<double> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number()) {
        schema_error(where, "entry (" + std::to_string(i) + ", " + std::to_string(k) +
                                ") is not a number");
      }
      r.push_back(row[k].get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::uint32_t unsigned_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    schema_error(where, std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint32_t>();
}

Json bounds_json(const std::map<std::uint64_t, double>& m) {
  Json out = Json::object();
  for (const auto& [n, v] : m) out[std::to_string(n)] = v;
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  const auto re = real_rows(field(j, "re", where), where + ".re");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) {
    im = real_rows(j.at("im"), where + ".im");
  } else {
    for (const auto& row : re) im.emplace_back(row.size(), 0.0);
  }
  const std::size_t n = re.size();
  if (n == 0) schema_error(where, "empty matrix");
  if (im.size() != n) schema_error(where, "re and im have different row counts");
  Matrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (re[i].size() != n || im[i].size() != n) {
      schema_error(where, "row " + std::to_string(i) + " has " + std::to_string(re[i].size()) +
                              " entries, expected " + std::to_string(n) + " for a square matrix");
    }
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Index>(i), static_cast<Index>(k)) = Complex(re[i][k], im[i][k]);
    }
  }
  return m;
}

Json to_json(const CQState& s) {
  Json rhos = Json::array();
  for (const DensityOperator& r : s.rhos()) rhos.push_back(matrix_to_json(r.matrix()));
  return Json{{"p", s.p()}, {"rhos", std::move(rhos)}};
}

CQState cq_state_from_json(const Json& j) {
  const Json& pj = field(j, "p", "state");
  if (!pj.is_array()) schema_error("state.p", "expected an array of probabilities");
  std::vector<double> p;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    if (!pj[i].is_number()) schema_error("state.p[" + std::to_string(i) + "]", "not a number");
    p.push_back(pj[i].get<double>());
  }
  const Json& rj = field(j, "rhos", "state");
  if (!rj.is_array()) schema_error("state.rhos", "expected an array of matrices");
  std::vector<DensityOperator> rhos;
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string where = "state.rhos[" + std::to_string(i) + "]";
    try {
      rhos.emplace_back(matrix_from_json(rj[i], where));
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      if (msg.rfind(where, 0) == 0) throw;
      throw ValidationError(where + ": " + msg);
    }
  }
  return CQState(std::move(p), std::move(rhos));
}

Json to_json(const WiretapChannel& ch) {
  Json outs = Json::array();
  for (const DensityOperator& o : ch.outputs()) outs.push_back(matrix_to_json(o.matrix()));
  return Json{{"dB", ch.dim_b()}, {"dE", ch.dim_e()}, {"outputs", std::move(outs)}};
}

WiretapChannel wiretap_from_json(const Json& j) {
  const auto db = static_cast<Index>(unsigned_field(j, "dB", "channel"));
  const auto de = static_cast<Index>(unsigned_field(j, "dE", "channel"));
  const Json& oj = field(j, "outputs", "channel");
  if (!oj.is_array()) schema_error("channel.outputs", "expected an array of matrices");
  std::vector<DensityOperator> outs;
  for (std::size_t i = 0; i < oj.size(); ++i) {
    const std::string where = "channel.outputs[" + std::to_string(i) + "]";
    outs.emplace_back(matrix_from_json(oj[i], where));
  }
  return WiretapChannel(db, de, std::move(outs));
}

Json to_json(const AffineHash& h) {
  return Json{{"u", h.u()}, {"v", h.v()}, {"modulus", h.context().modulus()},
              {"a", h.a()}, {"b", h.b()}};
}

AffineHash hash_from_json(const Json& j) {
  const unsigned u = unsigned_field(j, "u", "hash");
  const unsigned v = unsigned_field(j, "v", "hash");
  const std::uint32_t modulus =
      j.contains("modulus") ? unsigned_field(j, "modulus", "hash") : default_modulus(u);
  return AffineHash(GFContext(u, modulus), v, unsigned_field(j, "a", "hash"),
                    unsigned_field(j, "b", "hash"));
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": JSON syntax error: " << e.what();
    throw ValidationError(os.str());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string content_hash(const Json& state) { return fnv1a_hex(state.dump()); }

Json to_json(const ExponentReport& r, double unit) {
  Json raw{{"sup", r.raw_sup / unit}, {"bounds", bounds_json(r.raw_bounds)}};
  return Json{{"kind", to_string(r.kind)},
              {"rate", r.rate / unit},
              {"exponent", r.exponent / unit},
              {"alpha_star", r.alpha_star},
              {"threshold", r.threshold / unit},
              {"vacuous", r.vacuous()},
              {"bounds", bounds_json(r.bounds)},
              {"raw", std::move(raw)}};
}

Json to_json(const PAResult& r) {
  Json j{{"mode", r.exact ? "exact" : "sampled"},
         {"value", r.value},
         {"std_error", r.std_error},
         {"family_size", r.family_size},
         {"trials", r.trials}};
  if (!r.per_hash.empty()) {
    Json rows = Json::array();
    for (const HashDistance& h : r.per_hash) {
      rows.push_back(Json{{"a", h.a}, {"b", h.b}, {"distance", h.distance}});
    }
    j["per_hash"] = std::move(rows);
  }
  return j;
}

Json to_json(const SandwichReport& r, double unit) {
  return Json{{"n", r.n},
              {"u", r.u},
              {"v", r.v},
              {"rate", r.rate / unit},
              {"exact", r.exact},
              {"upper", r.upper},
              {"lower", r.lower},
              {"exponent_ach", r.exponent_ach / unit},
              {"exponent_conv", r.exponent_conv / unit},
              {"verdict", Json{{"upper", r.upper_ok ? "pass" : "fail"},
                               {"lower", r.lower_ok ? "pass" : "fail"}}}};
}

Json to_json(const WiretapD1Result& r) {
  return Json{{"mode", r.exact ? "exact" : "monte_carlo"},
              {"d1", r.value},
              {"d1_pessimistic", r.pessimistic},
              {"std_error", r.std_error},
              {"samples", r.samples},
              {"unbalanced_weight", r.unbalanced_weight}};
}

Json to_json(const CheckReport& r) {
  return Json{{"name", r.name},         {"trials", r.trials}, {"worst_violation", r.worst_violation},
              {"slack", r.slack},       {"pass", r.pass},     {"seed", r.seed},
              {"excluded", r.excluded}, {"detail", r.detail}};
}

Json to_json(const ModerateTable& t, double unit) {
  Json rows = Json::array();
  for (const ModerateRow& r : t.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"a_n", r.a_n / unit},
                        {"rate", r.rate / unit},
                        {"in_window", r.in_window},
                        {"exponent", r.exponent / unit},
                        {"bound", r.bound},
                        {"normalized_exponent", r.normalized_exponent}});
  }
  return Json{{"kind", to_string(t.kind)},
              {"threshold", t.threshold / unit},
              {"variance", t.variance},
              {"limit", t.limit},
              {"rows", std::move(rows)}};
}

Json to_json(const ModerateEATable& t, double unit) {
  Json rows = Json::array();
  for (const ModerateEARow& r : t.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"a_n", r.a_n / unit},
                        {"rate", r.rate / unit},
                        {"in_window", r.in_window},
                        {"raw_bound", r.raw_bound},
                        {"exponent_part", r.exponent_part},
                        {"normalized_exponent", r.normalized_exponent}});
  }
  return Json{{"side", t.side == EASide::converse ? "converse" : "achievability"},
              {"limit", t.limit},
              {"rows", std::move(rows)}};
}

}  // namespace qpa
