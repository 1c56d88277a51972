#ifndef PROTSUB_JSON_IO_HPP
#define PROTSUB_JSON_IO_HPP

// JSON (nlohmann) readers and writers for matrices, channels, certificates,
// decoders and reports, plus CSV/SVG export of numerical-range regions.
//
// Malformed JSON text raises ParseError; well-formed JSON with the wrong
// structure raises ShapeMismatch or InvalidArgument.

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "json.hpp"
#include "protsub/channels.hpp"
#include "protsub/codes.hpp"
#include "protsub/numrange.hpp"
#include "protsub/recovery.hpp"
#include "protsub/simulator.hpp"

namespace protsub::io {

using nlohmann::json;

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ShapeMismatch, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::size_t count(const json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be an integer");
  }
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> reals(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices

inline json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (const auto& z : m.data()) data.push_back(json::array({z.real(), z.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = detail::count(detail::field(j, "rows"), "rows");
  const std::size_t cols = detail::count(detail::field(j, "cols"), "cols");
  if (rows == 0 || cols == 0) throw Error(ErrorKind::ShapeMismatch, "matrix dimensions must be positive");
  const json& data = detail::field(j, "data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw Error(ErrorKind::ShapeMismatch, "data must hold rows*cols entries");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const json& e = data[i];
    if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::ShapeMismatch, "entries are [re, im] pairs");
    const double re = detail::number(e[0], "entry");
    const double im = detail::number(e[1], "entry");
    if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::NotFinite, "non-finite entry");
    m.data()[i] = {re, im};
  }
  return m;
}

// ---------------------------------------------------------------------------
// Channels and instruments

inline json to_json(const Instrument& inst) {
  json kraus = json::array();
  for (const auto& a : inst.channel.ops()) kraus.push_back(to_json(a));
  return json{{"dim", inst.channel.dim()}, {"tol", inst.channel.tol()}, {"kraus", std::move(kraus)},
              {"labels", inst.labels}};
}

inline json to_json(const KrausChannel& ch) {
  json j = to_json(make_instrument(ch));
  j.erase("labels");
  return j;
}

/// Parses "(1,2)(3,4)" or "(1 2 3 4)" (1-based cycles) into 0-based images.
inline Permutation parse_cycles(const std::string& text, std::size_t n) {
  Permutation perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<bool> moved(n, false);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (text.substr(pos) == "id" || text.substr(pos) == "()") return perm;
  while (pos < text.size()) {
    if (text[pos] != '(') throw Error(ErrorKind::BadPermutation, "expected '(' in " + text);
    ++pos;
    std::vector<std::size_t> cycle;
    while (true) {
      skip_space();
      if (pos >= text.size()) throw Error(ErrorKind::BadPermutation, "unterminated cycle in " + text);
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      std::size_t len = 0;
      while (pos + len < text.size() && std::isdigit(static_cast<unsigned char>(text[pos + len]))) ++len;
      if (len == 0) throw Error(ErrorKind::BadPermutation, "bad cycle syntax in " + text);
      const std::size_t v = std::stoul(text.substr(pos, len));
      pos += len;
      if (v < 1 || v > n) throw Error(ErrorKind::BadPermutation, "cycle entry out of range in " + text);
      cycle.push_back(v - 1);
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const std::size_t a = cycle[i];
      if (moved[a]) throw Error(ErrorKind::BadPermutation, "cycles must be disjoint in " + text);
      moved[a] = true;
      perm[a] = cycle[(i + 1) % cycle.size()];
    }
    skip_space();
  }
  validate_permutation(perm, n);
  return perm;
}

inline KrausChannel biased_permutation_from_json(const json& j, double tol = kDefaultTol) {
  const json& sj = detail::field(j, "S");
  if (!sj.is_array() || sj.empty()) throw Error(ErrorKind::ShapeMismatch, "S must be a nonempty array of rows");
  RealMatrix s;
  for (const auto& row : sj) s.push_back(detail::reals(row, "S row"));
  const std::size_t n = s.front().size();
  const json& pj = detail::field(j, "perms");
  if (!pj.is_array()) throw Error(ErrorKind::ShapeMismatch, "perms must be an array");
  std::vector<Permutation> perms;
  for (const auto& p : pj) {
    if (p.is_string()) {
      perms.push_back(parse_cycles(p.get<std::string>(), n));
    } else if (p.is_array()) {
      Permutation perm;
      for (const auto& x : p) perm.push_back(detail::count(x, "permutation image"));
      perms.push_back(std::move(perm));
    } else {
      throw Error(ErrorKind::BadPermutation, "permutation must be an image array or a cycle string");
    }
  }
  if (j.contains("tol")) tol = detail::number(j.at("tol"), "tol");
  return biased_permutation_channel(s, perms, tol);
}

/// Reads either a Kraus channel file or a biased-permutation {"S", "perms"} file.
inline Instrument instrument_from_json(const json& j) {
  if (j.is_object() && j.contains("S") && j.contains("perms")) {
    return make_instrument(biased_permutation_from_json(j));
  }
  const std::size_t dim = detail::count(detail::field(j, "dim"), "dim");
  const double tol = j.contains("tol") ? detail::number(j.at("tol"), "tol") : kDefaultTol;
  const json& kj = detail::field(j, "kraus");
  if (!kj.is_array() || kj.empty()) throw Error(ErrorKind::ShapeMismatch, "kraus must be a nonempty array");
  std::vector<ComplexMatrix> ops;
  for (const auto& m : kj) {
    ops.push_back(matrix_from_json(m));
    if (ops.back().rows() != dim || ops.back().cols() != dim) {
      throw Error(ErrorKind::ShapeMismatch, "Kraus operator does not match dim");
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j.at("labels").is_array()) throw Error(ErrorKind::ShapeMismatch, "labels must be an array");
    for (const auto& l : j.at("labels")) {
      if (!l.is_string()) throw Error(ErrorKind::ShapeMismatch, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return make_instrument(KrausChannel::make(std::move(ops), tol), std::move(labels));
}

inline KrausChannel channel_from_json(const json& j) { return instrument_from_json(j).channel; }

// ---------------------------------------------------------------------------
// Certificates, decoders, reports

inline json to_json(const CodeCertificate& c) {
  json j{{"class", to_string(c.klass)}, {"lambdas", c.lambdas}, {"tol", c.tol}};
  j["alpha"] = c.alpha ? to_json(*c.alpha) : json(nullptr);
  j["entropy"] = c.entropy ? json(*c.entropy) : json(nullptr);
  j["residuals"] = json::object();
  for (const auto& [k, v] : c.residuals) j["residuals"][k] = v;
  return j;
}

inline CodeCertificate certificate_from_json(const json& j) {
  CodeCertificate c;
  const json& cls = detail::field(j, "class");
  if (!cls.is_string()) throw Error(ErrorKind::ShapeMismatch, "class must be a string");
  const auto klass = protection_class_from_string(cls.get<std::string>());
  if (!klass) throw Error(ErrorKind::InvalidArgument, "unknown class " + cls.get<std::string>());
  c.klass = *klass;
  c.lambdas = detail::reals(detail::field(j, "lambdas"), "lambdas");
  if (j.contains("alpha") && !j.at("alpha").is_null()) c.alpha = matrix_from_json(j.at("alpha"));
  if (j.contains("entropy") && !j.at("entropy").is_null()) c.entropy = detail::number(j.at("entropy"), "entropy");
  if (j.contains("residuals")) {
    const json& r = j.at("residuals");
    if (!r.is_object()) throw Error(ErrorKind::ShapeMismatch, "residuals must be an object");
    for (auto it = r.begin(); it != r.end(); ++it) c.residuals[it.key()] = detail::number(it.value(), "residual");
  }
  if (j.contains("tol")) c.tol = detail::number(j.at("tol"), "tol");
  return c;
}

inline json to_json(const Decoder& d) {
  json ds = json::array();
  for (const auto& m : d.D) ds.push_back(to_json(m));
  json j{{"mode", to_string(d.mode)}, {"D", std::move(ds)}, {"weights", d.weights}};
  j["rebasing"] = d.rebasing ? to_json(*d.rebasing) : json(nullptr);
  const ComplexMatrix mixed = (1.0 / static_cast<double>(d.k)) * ComplexMatrix::identity(d.k);
  if (max_norm(d.completion_state - mixed) > 0.0) j["completion_state"] = to_json(d.completion_state);
  return j;
}

inline Decoder decoder_from_json(const json& j) {
  Decoder d;
  const json& mode = detail::field(j, "mode");
  if (mode == "strong") {
    d.mode = DecoderMode::Strong;
  } else if (mode == "weak") {
    d.mode = DecoderMode::Weak;
  } else {
    throw Error(ErrorKind::InvalidArgument, "mode must be \"strong\" or \"weak\"");
  }
  const json& ds = detail::field(j, "D");
  if (!ds.is_array() || ds.empty()) throw Error(ErrorKind::ShapeMismatch, "D must be a nonempty array");
  for (const auto& m : ds) d.D.push_back(matrix_from_json(m));
  d.k = d.D.front().rows();
  d.n = d.D.front().cols();
  for (const auto& m : d.D) {
    if (m.rows() != d.k || m.cols() != d.n) throw Error(ErrorKind::ShapeMismatch, "decoder blocks differ in shape");
  }
  d.weights = detail::reals(detail::field(j, "weights"), "weights");
  if (d.weights.size() != d.D.size()) throw Error(ErrorKind::ShapeMismatch, "one weight per decoder block");
  if (j.contains("rebasing") && !j.at("rebasing").is_null()) d.rebasing = matrix_from_json(j.at("rebasing"));
  if (j.contains("completion_state") && !j.at("completion_state").is_null()) {
    d.completion_state = matrix_from_json(j.at("completion_state"));
    require_square_of(d.completion_state, d.k, "completion state");
  } else {
    d.completion_state = (1.0 / static_cast<double>(d.k)) * ComplexMatrix::identity(d.k);
  }
  return d;
}

inline json to_json(const RoundTripReport& r) {
  return json{{"max_residual", r.max_residual}, {"unitality_residual", r.unitality_residual}, {"pass", r.pass}};
}

inline json to_json(const TrajectoryReport& r) {
  json j{{"outcome_counts", r.outcome_counts},
         {"expected_probs", r.expected_probs},
         {"chi_square", r.chi_square},
         {"p_value", r.p_value},
         {"max_bin_sigma", r.max_bin_sigma},
         {"pooled_pass", r.pooled_pass},
         {"restoration_fidelity_min", r.restoration_fidelity_min},
         {"max_probability_defect", r.max_probability_defect},
         {"pass", r.pass}};
  if (r.state_independence_pass) {
    j["state_independence_pass"] = *r.state_independence_pass;
    j["state_independence_max_sigma"] = *r.state_independence_max_sigma;
  }
  return j;
}

inline json to_json(const PlanarRegion& r) {
  json v = json::array();
  for (const auto& z : r.vertices) v.push_back(json::array({z.real(), z.imag()}));
  json inner = json::array();
  for (const auto& z : r.certified_inner) inner.push_back(json::array({z.real(), z.imag()}));
  return json{{"empty", r.empty}, {"vertices", std::move(v)}, {"certified_inner", std::move(inner)}};
}

// ---------------------------------------------------------------------------
// Region export

inline std::string region_csv(const PlanarRegion& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& z : r.vertices) out << z.real() << "," << z.imag() << "\n";
  return out.str();
}

/// Unit circle, spectrum dots and the region polygon on a 400×400 canvas.
inline std::string region_svg(const PlanarRegion& r) {
  constexpr double size = 400.0;
  constexpr double scale = 160.0;
  auto px = [&](Complex z) {
    std::ostringstream s;
    s << std::setprecision(8) << size / 2 + scale * z.real() << "," << size / 2 - scale * z.imag();
    return s.str();
  };
  std::ostringstream out;
  out << std::setprecision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <line x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#ccc\"/>\n";
  out << "  <line x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#ccc\"/>\n";
  out << "  <circle cx=\"200\" cy=\"200\" r=\"" << scale << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!r.empty) {
    if (r.vertices.size() == 1) {
      out << "  <circle class=\"region\" cx=\"" << size / 2 + scale * r.vertices[0].real() << "\" cy=\""
          << size / 2 - scale * r.vertices[0].imag() << "\" r=\"4\" fill=\"#555\"/>\n";
    } else {
      out << "  <polygon class=\"region\" points=\"";
      for (std::size_t i = 0; i < r.vertices.size(); ++i) out << (i ? " " : "") << px(r.vertices[i]);
      out << "\" fill=\"#888\" fill-opacity=\"0.6\" stroke=\"#333\" stroke-width=\"2\"/>\n";
    }
  }
  for (const auto& z : r.spectrum) {
    out << "  <circle class=\"eigenvalue\" cx=\"" << size / 2 + scale * z.real() << "\" cy=\""
        << size / 2 - scale * z.imag() << "\" r=\"3\" fill=\"red\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace protsub::io

#endif  // PROTSUB_JSON_IO_HPP
