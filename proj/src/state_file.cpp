#include "qmarg/state_file.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qmarg {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where, what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path.empty() ? "/" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
  return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

Dims dims_value(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of dimensions");
  Dims dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    if (!j[i].is_number_unsigned()) fail(p, "dimension must be a positive integer");
    dims.push_back(j[i].get<std::size_t>());
    if (dims.back() < 2) fail(p, "dimension must be at least 2");
  }
  return dims;
}

ComplexMatrix matrix_value(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != dim) fail(path, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != dim)
      fail(rp, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c)
      m(r, c) = complex_value(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

template <class Build>
auto checked(const std::string& path, Build&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

const char* state_kind_name(StateKind k) {
  switch (k) {
    case StateKind::Pure: return "pure";
    case StateKind::Density: return "density";
    case StateKind::Marginals: return "marginals";
    case StateKind::Classical: return "classical";
  }
  return "?";
}

StateFile parse_state_file(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail("byte " + std::to_string(e.byte), e.what());
  }
  const json& kind_j = field(doc, "kind", "");
  if (!kind_j.is_string()) fail("/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  const Dims dims = dims_value(field(doc, "dims", ""), "/dims");
  const std::size_t dim = total_dim(dims);

  if (kind == "pure") {
    const json& amps = field(doc, "amplitudes", "");
    if (!amps.is_array() || amps.size() != dim)
      fail("/amplitudes", "expected " + std::to_string(dim) + " amplitudes");
    ComplexVector v(dim);
    for (std::size_t i = 0; i < dim; ++i)
      v(i) = complex_value(amps[i], "/amplitudes/" + std::to_string(i));
    const bool normalize = doc.contains("normalize") && doc["normalize"].is_boolean() &&
                           doc["normalize"].get<bool>();
    return {checked("/amplitudes", [&] {
      return normalize ? PureState::normalized(dims, v) : PureState(dims, v);
    })};
  }
  if (kind == "density") {
    ComplexMatrix m = matrix_value(field(doc, "matrix", ""), dim, "/matrix");
    return {checked("/matrix", [&] { return DensityMatrix(dims, std::move(m)); })};
  }
  if (kind == "marginals") {
    const json& parts = field(doc, "marginals", "");
    if (!parts.is_array() || parts.empty()) fail("/marginals", "expected a nonempty array");
    std::vector<Marginal> list;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto p = "/marginals/" + std::to_string(i);
      const json& subs_j = field(parts[i], "subsystems", p);
      if (!subs_j.is_array() || subs_j.empty()) fail(p + "/subsystems", "expected an index list");
      Subsystems subs;
      for (const auto& s : subs_j) {
        if (!s.is_number_unsigned() || s.get<std::size_t>() >= dims.size())
          fail(p + "/subsystems", "subsystem index out of range");
        subs.push_back(s.get<std::size_t>());
      }
      subs = normalize_subsystems(subs, dims.size());
      const Dims sub_dims = restrict_dims(dims, subs);
      ComplexMatrix m = matrix_value(field(parts[i], "matrix", p), total_dim(sub_dims), p + "/matrix");
      list.push_back(checked(p, [&] { return Marginal{subs, DensityMatrix(sub_dims, std::move(m))}; }));
    }
    return {checked("/marginals", [&] { return MarginalSet(dims, std::move(list)); })};
  }
  if (kind == "classical") {
    for (std::size_t d : dims)
      if (d != 2) fail("/dims", "classical distributions are over bits");
    const json& probs = field(doc, "probs", "");
    if (!probs.is_array() || probs.size() != dim)
      fail("/probs", "expected " + std::to_string(dim) + " probabilities");
    std::vector<double> p;
    for (std::size_t i = 0; i < dim; ++i) p.push_back(number(probs[i], "/probs/" + std::to_string(i)));
    return {checked("/probs", [&] { return classical::JointDistribution(dims.size(), std::move(p)); })};
  }
  fail("/kind", "unknown kind '" + kind + "'");
}

StateFile load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_state_file(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ":" + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

std::string format_state_file(const StateFile& file) {
  json doc;
  doc["kind"] = state_kind_name(file.kind());
  std::visit(
      [&doc](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PureState>) {
          doc["dims"] = s.dims();
          json amps = json::array();
          for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i)
            amps.push_back(complex_json(s.amplitudes()(i)));
          doc["amplitudes"] = std::move(amps);
        } else if constexpr (std::is_same_v<T, DensityMatrix>) {
          doc["dims"] = s.dims();
          doc["matrix"] = matrix_json(s.matrix());
        } else if constexpr (std::is_same_v<T, MarginalSet>) {
          doc["dims"] = s.dims();
          json parts = json::array();
          for (const auto& m : s.parts())
            parts.push_back({{"subsystems", m.subsystems}, {"matrix", matrix_json(m.state.matrix())}});
          doc["marginals"] = std::move(parts);
        } else {
          doc["dims"] = Dims(s.variables(), 2);
          doc["probs"] = s.probs();
        }
      },
      file.payload);
  return doc.dump(1) + "\n";
}

void save_state_file(const std::filesystem::path& path, const StateFile& file) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_state_file(file);
}

}  // namespace qmarg
