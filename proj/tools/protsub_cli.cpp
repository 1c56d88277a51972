// protsub: command-line front end.
//
// Exit codes: 0 success, 1 input/shape error, 2 JSON parse error,
// 3 no code found / insufficient protection class / failed gate.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "protsub/json_io.hpp"
#include "protsub/protsub.hpp"

using namespace protsub;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitParse = 2;
constexpr int kExitMath = 3;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
      return kExitParse;
    case ErrorKind::NotFound:
    case ErrorKind::NoCode:
    case ErrorKind::NotDark:
    case ErrorKind::NotCompletelyDark:
    case ErrorKind::SymmetryViolated:
    case ErrorKind::PhaseOutOfRange:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::ParallelChords:
    case ErrorKind::AlphaNotPSD:
    case ErrorKind::AuditFailed:
      return kExitMath;
    default:
      return kExitInput;
  }
}

struct Output {
  bool as_json = false;
  json report = json::object();

  void line(const std::string& s) const {
    if (!as_json) std::cout << s << "\n";
  }
  void flush() const {
    if (as_json) std::cout << report.dump(2) << "\n";
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(Complex z) {
  if (std::abs(z.imag()) < 1e-15) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

void write_or_print(const std::string& path, const json& j, Output& out, const char* key) {
  if (!path.empty()) {
    io::write_json_file(path, j);
    out.line(std::string("wrote ") + key + " to " + path);
  } else if (!out.as_json) {
    std::cout << j.dump(2) << "\n";
  }
  out.report[key] = j;
}

void print_certificate(const CodeCertificate& cert, Output& out) {
  out.line(std::string("class    ") + to_string(cert.klass));
  std::string ls;
  for (double l : cert.lambdas) ls += (ls.empty() ? "" : ", ") + fmt(l);
  out.line("lambdas  (" + ls + ")");
  if (cert.entropy) out.line("entropy  " + fmt(*cert.entropy));
  for (const auto& [k, v] : cert.residuals) out.line("  " + k + " = " + fmt(v));
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, Output& out) {
  const json j = io::read_json_file(path);
  const Instrument inst = io::instrument_from_json(j);
  const double resid = inst.channel.completeness_residual();
  out.report = {{"valid", true}, {"dim", inst.channel.dim()}, {"kraus", inst.channel.size()},
                {"completeness_residual", resid}};
  out.line("valid channel: dim " + std::to_string(inst.channel.dim()) + ", " + std::to_string(inst.channel.size()) +
           " Kraus operators, completeness residual " + fmt(resid));
  return kExitOk;
}

struct NumrangeArgs {
  std::string path;
  std::size_t k = 1;
  std::string kind = "hermitian";
  std::string emit;
  std::optional<double> lambda;
  std::string pairing = "mirror";
  std::string code_out;
  double tol = kDefaultTol;
};

PairingScheme pairing_from(const std::string& s) { return s == "shifted" ? PairingScheme::Shifted : PairingScheme::Mirror; }

int cmd_numrange(const NumrangeArgs& a, Output& out) {
  const ComplexMatrix t = io::matrix_from_json(io::read_json_file(a.path));
  if (a.kind == "hermitian") {
    const RealInterval r = lambda_k_hermitian(t, a.k, a.tol);
    out.report = {{"kind", "hermitian"}, {"k", a.k}, {"empty", r.empty}, {"lo", r.lo}, {"hi", r.hi}};
    out.line(r.empty ? std::string("empty") : "[" + fmt(r.lo) + ", " + fmt(r.hi) + "]");
    if (a.lambda) {
      const auto cert = construct_hermitian_compression(t, a.k, *a.lambda, pairing_from(a.pairing), a.tol);
      std::string ws;
      for (double w : cert.weights) ws += (ws.empty() ? "" : ", ") + fmt(w);
      out.line(a.pairing + " pairing at lambda = " + fmt(cert.lambda) + ": weights (" + ws + "), residual " +
               fmt(cert.residual));
      out.report["compression"] = {{"lambda", cert.lambda.real()}, {"pairing", a.pairing},
                                   {"weights", cert.weights}, {"residual", cert.residual}};
      if (!a.code_out.empty()) {
        io::write_json_file(a.code_out, io::to_json(cert.C));
        out.line("wrote isometry to " + a.code_out);
      }
    }
    return kExitOk;
  }
  const PlanarRegion r = lambda_k_unitary_outer(t, a.k, a.tol);
  out.report = io::to_json(r);
  out.report["kind"] = "unitary";
  out.report["k"] = a.k;
  if (r.empty) {
    out.line("empty outer bound");
  } else {
    out.line("outer bound with " + std::to_string(r.vertices.size()) + " vertices:");
    for (const auto& z : r.vertices) out.line("  " + fmt(z));
    for (const auto& z : r.certified_inner) out.line("certified inner point " + fmt(z));
  }
  if (!a.emit.empty()) {
    auto ends_with = [&](const std::string& s) {
      return a.emit.size() >= s.size() && a.emit.compare(a.emit.size() - s.size(), s.size(), s) == 0;
    };
    std::vector<std::string> written;
    if (ends_with(".csv")) {
      io::write_text_file(a.emit, io::region_csv(r));
      written.push_back(a.emit);
    } else if (ends_with(".svg")) {
      io::write_text_file(a.emit, io::region_svg(r));
      written.push_back(a.emit);
    } else {
      io::write_text_file(a.emit + ".csv", io::region_csv(r));
      io::write_text_file(a.emit + ".svg", io::region_svg(r));
      written = {a.emit + ".csv", a.emit + ".svg"};
    }
    for (const auto& w : written) out.line("wrote " + w);
    out.report["emitted"] = written;
  }
  return kExitOk;
}

struct FindArgs {
  std::string channel;
  std::string family;
  std::size_t k = 0;
  double alpha = 2.0 * std::numbers::pi / 3.0;
  double xi = std::numbers::pi / 6.0;
  std::size_t K = 2;
  std::vector<double> q{0.5, 0.25, 0.25};
  std::string pairing = "mirror";
  std::string code_out;
  std::string cert_out;
  std::string channel_out;
  double tol = kDefaultTol;
};

int cmd_findcode(const FindArgs& a, Output& out) {
  std::optional<Isometry> code;
  CodeCertificate cert;
  if (a.family == "triunitary") {
    TriunitaryParams p;
    p.alpha = a.alpha;
    p.xi = a.xi;
    p.K = a.K;
    p.q = a.q;
    TriunitaryCode t = triunitary_code(p, a.tol);
    out.line("a1 = " + fmt(t.weights[0]) + ", a3 = a5 = " + fmt(t.weights[1]));
    out.line("lambda_U1 = " + fmt(t.lambda_u1) + ", lambda_U2 = " + fmt(t.lambda_u2) + ", lambda_W = " + fmt(t.lambda_w));
    out.report["weights"] = t.weights;
    out.report["lambda_W"] = {t.lambda_w.real(), t.lambda_w.imag()};
    if (!a.channel_out.empty()) {
      io::write_json_file(a.channel_out, io::to_json(t.channel));
      out.line("wrote channel to " + a.channel_out);
    }
    code.emplace(t.code);
    cert = t.cert;
  } else {
    if (a.channel.empty()) throw Error(ErrorKind::InvalidArgument, "family " + a.family + " needs a channel file");
    const KrausChannel ch = io::channel_from_json(io::read_json_file(a.channel));
    if (a.family == "rank2") {
      CodeResult r = find_dark_rank2(ch, a.tol, pairing_from(a.pairing));
      code.emplace(r.code);
      cert = check_knill_laflamme(ch, *code, a.tol);
    } else if (a.family == "biasedperm") {
      CodeResult r = find_dark_biased_permutation(ch, a.tol);
      code.emplace(r.code);
      cert = check_knill_laflamme(ch, *code, a.tol);
    } else if (a.family == "biunitary") {
      BiunitaryCode r = biunitary_code(ch, a.tol);
      out.line(std::string(r.degenerate ? "degenerate eigenspace" : "chord intersection") + ", lambda = " + fmt(r.lambda));
      out.report["lambda"] = {r.lambda.real(), r.lambda.imag()};
      code.emplace(r.code);
      cert = r.cert;
    } else if (a.family == "joint") {
      if (a.k == 0) throw Error(ErrorKind::InvalidArgument, "--k is required for the joint family");
      auto r = find_dark_joint(ch, a.k, a.tol);
      if (!r) throw Error(ErrorKind::NotFound, "no joint compression of rank " + std::to_string(a.k));
      code.emplace(r->code);
      cert = check_knill_laflamme(ch, *code, a.tol);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown family " + a.family);
    }
  }
  if (!cert.at_least(ProtectionClass::Dark)) throw Error(ErrorKind::NotFound, "construction did not yield a dark code");
  print_certificate(cert, out);
  write_or_print(a.code_out, io::to_json(code->matrix()), out, "code");
  write_or_print(a.cert_out, io::to_json(cert), out, "certificate");
  return kExitOk;
}

int cmd_klcheck(const std::string& chp, const std::string& codep, const std::string& cert_out, double tol,
                Output& out) {
  const KrausChannel ch = io::channel_from_json(io::read_json_file(chp));
  const Isometry code(io::matrix_from_json(io::read_json_file(codep)), tol);
  const CodeCertificate cert = check_knill_laflamme(ch, code, tol);
  print_certificate(cert, out);
  write_or_print(cert_out, io::to_json(cert), out, "certificate");
  return kExitOk;
}

int cmd_decode(const std::string& chp, const std::string& codep, const std::string& mode,
               const std::string& dec_out, double tol, Output& out) {
  const Instrument inst = io::instrument_from_json(io::read_json_file(chp));
  const Isometry code(io::matrix_from_json(io::read_json_file(codep)), tol);
  const CodeCertificate cert = check_knill_laflamme(inst.channel, code, tol);
  DecoderOptions opt;
  opt.tol = tol;
  const Decoder dec = mode == "strong" ? build_strong_decoder(inst.channel, code, cert, opt)
                                       : build_weak_decoder(inst, code, cert, opt);
  const RoundTripReport rt = verify_roundtrip(inst.channel, code, dec);
  out.line(std::string("mode ") + to_string(dec.mode) + ", class " + to_string(cert.klass));
  out.line("round-trip max residual " + fmt(rt.max_residual) + (rt.pass ? " (pass)" : " (FAIL)"));
  out.report["roundtrip"] = io::to_json(rt);
  write_or_print(dec_out, io::to_json(dec), out, "decoder");
  return rt.pass ? kExitOk : kExitMath;
}

struct SimArgs {
  std::string channel, code, decoder, out;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
};

int cmd_simulate(const SimArgs& a, Output& out) {
  const Instrument inst = io::instrument_from_json(io::read_json_file(a.channel));
  const Isometry code(io::matrix_from_json(io::read_json_file(a.code)), a.tol);
  const Decoder dec = io::decoder_from_json(io::read_json_file(a.decoder));
  if (dec.mode != DecoderMode::Weak) throw Error(ErrorKind::InvalidArgument, "simulate needs a weak decoder");
  if (dec.D.size() != inst.channel.size() || dec.k != code.k() || dec.n != code.n()) {
    throw Error(ErrorKind::ShapeMismatch, "decoder does not match channel and code");
  }
  if (!verify_roundtrip(inst, code, dec).pass) {
    throw Error(ErrorKind::InvalidArgument, "decoder fails the weak round trip for this code");
  }
  TrajectoryConfig cfg;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.tol = a.tol;
  const TrajectoryReport dark = run_darkness_experiment(inst, code, cfg);
  const TrajectoryReport rest = run_restoration_experiment(inst, code, dec, cfg);
  const bool pass = dark.pass && rest.pass;
  json rep{{"darkness", io::to_json(dark)}, {"restoration", io::to_json(rest)}, {"pass", pass}};
  std::string counts;
  for (std::size_t i = 0; i < dark.outcome_counts.size(); ++i) {
    counts += (i ? ", " : "") + inst.labels[i] + ":" + std::to_string(dark.outcome_counts[i]);
  }
  out.line("outcomes " + counts);
  out.line("chi-square " + fmt(dark.chi_square) + ", p = " + fmt(dark.p_value) +
           ", state-independence max sigma " + fmt(*dark.state_independence_max_sigma));
  out.line("min restoration fidelity " + fmt(rest.restoration_fidelity_min));
  out.line(pass ? "pass" : "FAIL");
  if (!a.out.empty()) {
    io::write_json_file(a.out, rep);
    out.line("wrote report to " + a.out);
  }
  out.report = rep;
  return pass ? kExitOk : kExitMath;
}

// ---------------------------------------------------------------------------
// Worked examples end to end

struct PaperArgs {
  double alpha = 2.0 * std::numbers::pi / 3.0;
  double xi = std::numbers::pi / 6.0;
  std::size_t K = 2;
  std::uint64_t seed = 2024;
  std::size_t trials = 20000;
};

int cmd_paper_examples(const PaperArgs& a, Output& out) {
  struct Row {
    std::string example, step;
    bool pass;
    std::string detail;
  };
  std::vector<Row> rows;
  auto add = [&](const std::string& ex, const std::string& step, bool pass, const std::string& detail) {
    rows.push_back({ex, step, pass, detail});
  };
  TrajectoryConfig cfg;
  cfg.trials = a.trials;
  cfg.seed = a.seed;

  // Tri-unitary parameters are validated first so a bad phase fails fast.
  TriunitaryParams tp;
  tp.alpha = a.alpha;
  tp.xi = a.xi;
  tp.K = a.K;
  const TriunitaryCode tri = triunitary_code(tp);

  {
    const double x = 0.4, pa = 0.05, pb = 0.1, pc = 0.04, pd = 0.08;
    const RealMatrix s{{pa, pb, x - pb, x - pa},
                       {pc, pd, x - pd, x - pc},
                       {1 - pa - pc, 1 - pb - pd, 1 - 2 * x + pb + pd, 1 - 2 * x + pa + pc}};
    const std::vector<Permutation> perms{io::parse_cycles("(1,2,3,4)", 4), io::parse_cycles("(1,2)(3,4)", 4),
                                         io::parse_cycles("(1,4,3,2)", 4)};
    const Instrument inst = make_instrument(biased_permutation_channel(s, perms));
    const CodeResult r = find_dark_biased_permutation(inst.channel);
    std::string ls;
    for (double l : r.cert.lambdas) ls += (ls.empty() ? "" : ", ") + fmt(l);
    add("biased-permutation", "find", r.cert.klass == ProtectionClass::Dark, "lambdas (" + ls + ")");
    const CodeCertificate kl = check_knill_laflamme(inst.channel, r.code);
    add("biased-permutation", "certify", kl.klass == ProtectionClass::Dark,
        std::string(to_string(kl.klass)) + ", KL cross residual " + fmt(kl.residuals.at("kl_cross")));
    const Decoder dec = build_weak_decoder(inst, r.code, r.cert);
    const RoundTripReport rt = verify_roundtrip(inst, r.code, dec);
    add("biased-permutation", "decode (weak)", rt.pass, "residual " + fmt(rt.max_residual));
    const TrajectoryReport dark = run_darkness_experiment(inst, r.code, cfg);
    add("biased-permutation", "simulate darkness", dark.pass, "p = " + fmt(dark.p_value));
    const TrajectoryReport rest = run_restoration_experiment(inst, r.code, dec, cfg);
    add("biased-permutation", "simulate restoration", rest.pass, "min fidelity " + fmt(rest.restoration_fidelity_min));
  }
  {
    CounterRng rng(a.seed);
    const ComplexMatrix frame = random_unitary(4, rng);
    const ComplexMatrix u = frame * ComplexMatrix::diagonal({1.0, Complex{0, 1}, -1.0, Complex{0, -1}}) * adjoint(frame);
    const ComplexMatrix v1 = random_unitary(4, rng);
    const ComplexMatrix ops[] = {v1, v1 * u};
    const double q[] = {0.3, 0.7};
    const KrausChannel ch = ref_channel(ops, q);
    const BiunitaryCode r = biunitary_code(ch);
    add("bi-unitary chord", "find", std::abs(r.lambda) < 1e-10, "lambda = " + fmt(r.lambda));
    add("bi-unitary chord", "certify", r.cert.klass == ProtectionClass::CompletelyDark,
        std::string(to_string(r.cert.klass)) + ", entropy " + fmt(*r.cert.entropy));
    const Decoder dec = build_strong_decoder(ch, r.code, r.cert);
    const RoundTripReport rt = verify_roundtrip(ch, r.code, dec);
    add("bi-unitary chord", "decode (strong)", rt.pass, "residual " + fmt(rt.max_residual));
    const DarknessAuditReport audit = protection_implies_darkness_audit(ch, r.code, dec);
    add("bi-unitary chord", "audit", audit.pass, "scalar residual " + fmt(audit.max_scalar_residual));
    const TrajectoryReport dark = run_darkness_experiment(make_instrument(ch), r.code, cfg);
    add("bi-unitary chord", "simulate darkness", dark.pass, "p = " + fmt(dark.p_value));
  }
  {
    add("tri-unitary", "find", tri.compression_residual < 1e-10,
        "a1 = " + fmt(tri.weights[0]) + ", lambda_W = " + fmt(tri.lambda_w));
    add("tri-unitary", "certify", tri.cert.at_least(ProtectionClass::CompletelyDark), to_string(tri.cert.klass));
    const Decoder dec = build_strong_decoder(tri.channel, tri.code, tri.cert);
    const RoundTripReport rt = verify_roundtrip(tri.channel, tri.code, dec);
    add("tri-unitary", "decode (strong)", rt.pass, "residual " + fmt(rt.max_residual));
    const DarknessAuditReport audit = protection_implies_darkness_audit(tri.channel, tri.code, dec);
    add("tri-unitary", "audit", audit.pass, "scalar residual " + fmt(audit.max_scalar_residual));
    const TrajectoryReport dark = run_darkness_experiment(make_instrument(tri.channel), tri.code, cfg);
    add("tri-unitary", "simulate darkness", dark.pass, "p = " + fmt(dark.p_value));
  }

  bool all = true;
  json jr = json::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %-22s %-5s %s", r.example.c_str(), r.step.c_str(), r.pass ? "pass" : "FAIL",
                  r.detail.c_str());
    out.line(buf);
    jr.push_back({{"example", r.example}, {"step", r.step}, {"pass", r.pass}, {"detail", r.detail}});
  }
  out.report = {{"rows", jr}, {"pass", all}};
  return all ? kExitOk : kExitMath;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protected subspaces of quantum channels: find, certify, decode, simulate"};
  app.require_subcommand(1);
  Output out;
  double tol = kDefaultTol;
  app.add_flag("--json", out.as_json, "Machine-readable JSON on stdout");
  app.add_option("--tol", tol, "Absolute tolerance on max-norm residuals")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a channel file");
  validate->add_option("channel", validate_path, "Channel JSON")->required();

  NumrangeArgs nr;
  auto* numrange = app.add_subcommand("numrange", "Rank-k numerical range of a matrix");
  numrange->add_option("matrix", nr.path, "Matrix JSON")->required();
  numrange->add_option("--k", nr.k, "Rank")->check(CLI::PositiveNumber);
  numrange->add_option("--kind", nr.kind, "hermitian or unitary")->check(CLI::IsMember({"hermitian", "unitary"}));
  numrange->add_option("--emit", nr.emit, "Region output: file.csv, file.svg, or a prefix for both");
  numrange->add_option("--lambda", nr.lambda, "Hermitian: construct a compression at this value");
  numrange->add_option("--pairing", nr.pairing, "Eigenvector pairing: mirror or shifted")
      ->check(CLI::IsMember({"mirror", "shifted"}));
  numrange->add_option("--code-out", nr.code_out, "Write the constructed isometry here");

  FindArgs fa;
  auto* findcode = app.add_subcommand("findcode", "Construct a protected code");
  findcode->add_option("channel", fa.channel, "Channel JSON (not needed for triunitary)");
  findcode->add_option("--family", fa.family, "Code family")
      ->required()
      ->check(CLI::IsMember({"rank2", "biasedperm", "biunitary", "triunitary", "joint"}));
  findcode->add_option("--k", fa.k, "Code dimension (joint family)")->check(CLI::PositiveNumber);
  findcode->add_option("--alpha", fa.alpha, "Tri-unitary phase alpha (radians)");
  findcode->add_option("--xi", fa.xi, "Tri-unitary phase xi (radians)");
  findcode->add_option("--K", fa.K, "Tri-unitary code dimension")->check(CLI::PositiveNumber);
  findcode->add_option("--q", fa.q, "Tri-unitary weights q1 q2 q3")->expected(3);
  findcode->add_option("--pairing", fa.pairing, "Eigenvector pairing for rank2: mirror or shifted")
      ->check(CLI::IsMember({"mirror", "shifted"}));
  findcode->add_option("--code-out", fa.code_out, "Write the isometry here");
  findcode->add_option("--cert-out", fa.cert_out, "Write the certificate here");
  findcode->add_option("--channel-out", fa.channel_out, "Write the generated channel here (triunitary)");

  std::string kl_channel, kl_code, kl_out;
  auto* klcheck = app.add_subcommand("klcheck", "Classify a code for a channel");
  klcheck->add_option("channel", kl_channel, "Channel JSON")->required();
  klcheck->add_option("code", kl_code, "Isometry JSON")->required();
  klcheck->add_option("--out", kl_out, "Write the certificate here");

  std::string dc_channel, dc_code, dc_mode = "strong", dc_out;
  auto* decode = app.add_subcommand("decode", "Build and verify a decoder");
  decode->add_option("channel", dc_channel, "Channel JSON")->required();
  decode->add_option("code", dc_code, "Isometry JSON")->required();
  decode->add_option("--mode", dc_mode, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  decode->add_option("--out", dc_out, "Write the decoder here");

  SimArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo darkness and restoration experiments");
  simulate->add_option("channel", sa.channel, "Channel JSON")->required();
  simulate->add_option("code", sa.code, "Isometry JSON")->required();
  simulate->add_option("decoder", sa.decoder, "Weak decoder JSON")->required();
  simulate->add_option("--trials", sa.trials, "Trials per experiment")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sa.seed, "RNG seed");
  simulate->add_option("--out", sa.out, "Write the report here");

  PaperArgs pa;
  auto* paper = app.add_subcommand("paper-examples", "Run the worked examples end to end");
  paper->add_option("--alpha", pa.alpha, "Tri-unitary phase alpha (radians)");
  paper->add_option("--xi", pa.xi, "Tri-unitary phase xi (radians)");
  paper->add_option("--K", pa.K, "Tri-unitary code dimension")->check(CLI::PositiveNumber);
  paper->add_option("--seed", pa.seed, "RNG seed");
  paper->add_option("--trials", pa.trials, "Simulation trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  nr.tol = tol;
  fa.tol = tol;
  sa.tol = tol;
  int code = kExitOk;
  try {
    if (*validate) {
      code = cmd_validate(validate_path, out);
    } else if (*numrange) {
      code = cmd_numrange(nr, out);
    } else if (*findcode) {
      code = cmd_findcode(fa, out);
    } else if (*klcheck) {
      code = cmd_klcheck(kl_channel, kl_code, kl_out, tol, out);
    } else if (*decode) {
      code = cmd_decode(dc_channel, dc_code, dc_mode, dc_out, tol, out);
    } else if (*simulate) {
      code = cmd_simulate(sa, out);
    } else if (*paper) {
      code = cmd_paper_examples(pa, out);
    }
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    if (out.as_json) {
      std::cout << json{{"error", to_string(e.kind())}, {"message", e.what()}, {"exit", code}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  out.flush();
  return code;
}
