#include "misosec/channel.hpp"

#include <cmath>

#include "json_io.hpp"
#include "misosec/error.hpp"

namespace misosec {

using detail::field;
using detail::json;
using detail::number;
using detail::read_json;
using detail::write_json;

namespace {

void check_eves(const std::vector<CMatrix>& eves, Eigen::Index n_t, const char* what) {
  for (std::size_t k = 0; k < eves.size(); ++k) {
    if (eves[k].rows() != n_t) {
      throw InvalidInput(std::string(what) + ": Eve " + std::to_string(k) +
                         " row count differs from N_t");
    }
    if (eves[k].cols() < 1) throw InvalidInput(std::string(what) + ": Eve with no antennas");
    if (!eves[k].allFinite()) throw InvalidInput(std::string(what) + ": non-finite Eve channel");
  }
}

}  // namespace

void ChannelInstance::validate() const {
  if (h.size() < 1) throw InvalidInput("ChannelInstance: N_t must be at least 1");
  if (!h.allFinite()) throw InvalidInput("ChannelInstance: non-finite Bob channel");
  check_eves(eves, h.size(), "ChannelInstance");
  if (!(std::isfinite(power) && power > 0.0)) {
    throw InvalidInput("ChannelInstance: power must be finite and positive");
  }
}

CMatrix ChannelInstance::aggregate_eves() const {
  Eigen::Index cols = 0;
  for (const auto& g : eves) cols += g.cols();
  CMatrix out(h.size(), cols);
  Eigen::Index c = 0;
  for (const auto& g : eves) {
    out.middleCols(c, g.cols()) = g;
    c += g.cols();
  }
  return out;
}

void UncertaintySpec::validate() const {
  if (h_bar.size() < 1) throw InvalidInput("UncertaintySpec: N_t must be at least 1");
  if (!h_bar.allFinite()) throw InvalidInput("UncertaintySpec: non-finite Bob channel");
  check_eves(g_bars, h_bar.size(), "UncertaintySpec");
  if (eps_e.size() != g_bars.size()) {
    throw InvalidInput("UncertaintySpec: one Eve radius per Eve is required");
  }
  if (!(std::isfinite(eps_b) && eps_b >= 0.0)) {
    throw InvalidInput("UncertaintySpec: eps_b must be finite and nonnegative");
  }
  for (double e : eps_e) {
    if (!(std::isfinite(e) && e >= 0.0)) {
      throw InvalidInput("UncertaintySpec: eps_e must be finite and nonnegative");
    }
  }
  if (!(std::isfinite(power) && power > 0.0)) {
    throw InvalidInput("UncertaintySpec: power must be finite and positive");
  }
}

ChannelInstance UncertaintySpec::nominal() const { return {h_bar, g_bars, power}; }

// ---------------------------------------------------------------------------

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6d69736fu};
  engine_.seed(seq);
}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return uniform_(engine_); }

Complex Rng::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

ChannelInstance sample_channel(Rng& rng, int n_t, const std::vector<int>& eve_dims,
                               double rho_e_sq) {
  if (n_t < 1) throw InvalidInput("sample_channel: N_t must be at least 1");
  if (!(rho_e_sq > 0.0)) throw InvalidInput("sample_channel: rho_e^2 must be positive");
  ChannelInstance inst;
  inst.h.resize(n_t);
  for (int i = 0; i < n_t; ++i) inst.h(i) = rng.complex_normal(1.0);
  for (int ne : eve_dims) {
    if (ne < 1) throw InvalidInput("sample_channel: Eve antenna count must be at least 1");
    CMatrix g(n_t, ne);
    for (int c = 0; c < ne; ++c) {
      for (int r = 0; r < n_t; ++r) g(r, c) = rng.complex_normal(rho_e_sq);
    }
    inst.eves.push_back(std::move(g));
  }
  inst.power = 1.0;
  return inst;
}

double db_to_linear(double p_db) { return std::pow(10.0, p_db / 10.0); }

double linear_to_db(double p) { return 10.0 * std::log10(p); }

UncertaintySpec uncertainty_from_ratios(const ChannelInstance& means, double alpha_b,
                                        double alpha_e, double rho_e_sq) {
  if (!(alpha_b >= 0.0 && alpha_e >= 0.0)) {
    throw InvalidInput("uncertainty_from_ratios: ratios must be nonnegative");
  }
  UncertaintySpec spec;
  spec.h_bar = means.h;
  spec.g_bars = means.eves;
  spec.power = means.power;
  const double n_t = static_cast<double>(means.h.size());
  spec.eps_b = alpha_b * std::sqrt(n_t);
  for (const auto& g : means.eves) {
    spec.eps_e.push_back(alpha_e * std::sqrt(n_t * static_cast<double>(g.cols()) * rho_e_sq));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where, "expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

CVector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where, "expected a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ParseError(where, "expected a nonempty row-major nested array");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(rw, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], rw + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

std::vector<CMatrix> matrices_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of matrices");
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(matrix_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

double power_from_json(const json& doc, const std::string& where) {
  // "power" (linear) is written alongside "power_db" so round trips are exact.
  if (doc.contains("power")) return number(doc["power"], where + ".power");
  return db_to_linear(number(field(doc, "power_db", where), where + ".power_db"));
}

}  // namespace

ChannelInstance load_instance(const std::filesystem::path& path) {
  const json doc = read_json(path);
  const std::string w = path.string();
  ChannelInstance inst;
  inst.h = vector_from_json(field(doc, "h", w), w + ".h");
  inst.eves = matrices_from_json(field(doc, "eves", w), w + ".eves");
  inst.power = power_from_json(doc, w);
  if (doc.contains("n_t")) {
    const auto& nt = doc["n_t"];
    if (!nt.is_number_integer() || nt.get<long>() != inst.h.size()) {
      throw ParseError(w + ".n_t", "does not match the length of h");
    }
  }
  try {
    inst.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(w, e.what());
  }
  return inst;
}

void save_instance(const std::filesystem::path& path, const ChannelInstance& inst) {
  inst.validate();
  json doc;
  doc["n_t"] = inst.n_t();
  doc["h"] = vector_to_json(inst.h);
  json eves = json::array();
  for (const auto& g : inst.eves) eves.push_back(matrix_to_json(g));
  doc["eves"] = std::move(eves);
  doc["power_db"] = linear_to_db(inst.power);
  doc["power"] = inst.power;
  write_json(path, doc);
}

UncertaintySpec load_uncertainty(const std::filesystem::path& path) {
  const json doc = read_json(path);
  const std::string w = path.string();
  UncertaintySpec spec;
  spec.h_bar = vector_from_json(field(doc, "h_bar", w), w + ".h_bar");
  spec.g_bars = matrices_from_json(field(doc, "g_bars", w), w + ".g_bars");
  spec.eps_b = number(field(doc, "eps_b", w), w + ".eps_b");
  const json& eps = field(doc, "eps_e", w);
  if (!eps.is_array()) throw ParseError(w + ".eps_e", "expected an array");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    spec.eps_e.push_back(number(eps[k], w + ".eps_e[" + std::to_string(k) + "]"));
  }
  spec.power = power_from_json(doc, w);
  try {
    spec.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(w, e.what());
  }
  return spec;
}

void save_uncertainty(const std::filesystem::path& path, const UncertaintySpec& spec) {
  spec.validate();
  json doc;
  doc["n_t"] = spec.n_t();
  doc["h_bar"] = vector_to_json(spec.h_bar);
  json g = json::array();
  for (const auto& m : spec.g_bars) g.push_back(matrix_to_json(m));
  doc["g_bars"] = std::move(g);
  doc["eps_b"] = spec.eps_b;
  doc["eps_e"] = spec.eps_e;
  doc["power_db"] = linear_to_db(spec.power);
  doc["power"] = spec.power;
  write_json(path, doc);
}

}  // namespace misosec
