#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gammalab/suites.hpp"
#include "json.hpp"

using namespace gammalab;

namespace {

struct SessionConfig {
  int q = 3, N = 2;
  int precision = 8;
  int m_zeta = 8, m_lambda = 4;
  IntegrationConfig cfg;
  std::string gl_scale = "1";
  std::string out, format = "json";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value in '" + text + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

// order:k as an m-exponent; order must divide m.
int root_to_m_exp(const Session& s, const std::string& text) {
  const RootOfUnity r = RootOfUnity::parse(text);
  if (s.C->m() % r.order) throw UsageError("root order " + std::to_string(r.order) + " does not divide the session order");
  return r.m_exp(s.C->m());
}

void emit(const SessionConfig& sc, const std::string& body) {
  if (sc.out.empty()) {
    std::cout << body << "\n";
    return;
  }
  std::ofstream f(sc.out);
  if (!f) throw UsageError("cannot write " + sc.out);
  f << body << "\n";
}

std::string gamma_json(const Session& s, const SessionConfig& sc, const std::string& pair, const GammaResult& g,
                       const std::optional<StabilizationReport>& stab) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["pair"] = pair;
  j["session"] = {{"q", s.q()}, {"N", s.N}, {"precision", s.precision}, {"M_zeta", sc.m_zeta}};
  j["gamma"] = {{"numerator", g.gamma.num().to_text()}, {"denominator", g.gamma.den().to_text()}};
  j["psi"] = g.psi.to_text();
  j["psi_tilde"] = g.psi_tilde.to_text();
  if (g.monomial)
    j["monomial"] = {{"coefficient", g.monomial->coefficient.to_text()},
                     {"x_degree", g.monomial->degree},
                     {"qs_degree", g.monomial->qs_degree()}};
  else
    j["monomial"] = nullptr;
  j["f_psi"] = g.f_psi ? nlohmann::json(*g.f_psi) : nlohmann::json(nullptr);
  j["f_abs"] = g.f_abs ? nlohmann::json(*g.f_abs) : nlohmann::json(nullptr);
  j["translate"] = g.translate;
  j["cost"] = {{"cells", g.cost.cells}, {"support_cells", g.cost.support_cells}};
  j["cfg"] = sc.cfg.to_text();
  if (stab)
    j["stabilization"] = {{"stable", stab->stable},
                          {"first_divergent", stab->first_divergent},
                          {"base", stab->base_value},
                          {"widened", stab->widened_value}};
  return j.dump(2);
}

int cmd_gamma(const SessionConfig& sc, const std::string& f_text, int chi_exp, const std::string& zeta_text,
              const std::string& twist, bool verify) {
  Session s = Session::make(sc.q, sc.N, sc.precision, sc.m_zeta, sc.m_lambda);
  const auto cd = parse_kv("c=" + f_text.substr(0, f_text.find(',')) + ",d=" + f_text.substr(f_text.find(',') + 1));
  if (f_text.find(',') == std::string::npos) throw UsageError("--f expects c,d");
  const fq_t c = static_cast<fq_t>(std::stoi(cd.at("c"))), d = static_cast<fq_t>(std::stoi(cd.at("d")));
  if (c >= s.q() || d >= s.q()) throw UsageError("f coefficients must lie in F_q");
  const MiddleParams p = make_middle(s, c, d, chi_exp, RootOfUnity::parse(zeta_text));
  std::optional<StabilizationReport> stab;
  GammaResult g;
  std::string pair;
  if (twist.rfind("simple:", 0) == 0) {
    const auto kv = parse_kv(twist.substr(7));
    const SimpleParams sp = make_simple(s, static_cast<fq_t>(std::stoi(kv.at("u"))), std::stoi(kv.at("phi")),
                                        RootOfUnity::parse(kv.at("zetap")));
    pair = p.describe() + " x " + sp.describe();
    g = gamma(p, sp, sc.cfg);
    if (verify) stab = verify_stabilized_glN(p, sp, sc.cfg);
  } else {
    QuasiCharacter chi = QuasiCharacter::tame(s, 0, 0);
    if (twist == "trivial") {
    } else if (twist.rfind("tame:", 0) == 0) {
      const auto kv = parse_kv(twist.substr(5));
      chi = QuasiCharacter::tame(s, std::stoi(kv.at("e")), kv.count("unif") ? root_to_m_exp(s, kv.at("unif")) : 0);
    } else if (twist.rfind("xi:", 0) == 0) {
      const auto xi = build_xi_middle(s);
      const size_t i = static_cast<size_t>(std::stoul(twist.substr(3)));
      if (i >= xi.size()) throw UsageError("xi index out of range");
      chi = xi[i];
    } else {
      throw UsageError("unknown twist '" + twist + "'");
    }
    pair = p.describe() + " x " + chi.describe();
    g = chi.is_tame() ? gamma(p, chi, sc.cfg) : gamma_via_translates(p, chi, default_translates(s, chi), sc.cfg);
    if (verify) stab = verify_stabilized_gl1(p, chi, sc.cfg);
  }
  emit(sc, gamma_json(s, sc, pair, g, stab));
  return stab && !stab->stable ? 1 : 0;
}

int cmd_verify(const SessionConfig& sc, const std::string& suite, bool oracle, int samples) {
  Session s = Session::make(sc.q, sc.N, sc.precision, sc.m_zeta, sc.m_lambda);
  SuiteReport rep;
  std::optional<TheoremReport> theorem;
  if (suite == "lemmas") {
    rep = suite_lemmas(s, samples > 0 ? samples : (oracle ? 200 : 50), 1, oracle ? 2 : 1);
  } else {
    ConverseEngine eng(s, ConverseScope{sc.m_zeta, sc.m_lambda, sc.cfg});
    if (suite == "props") {
      rep = suite_props(eng);
    } else if (suite == "jiang") {
      rep = suite_jiang(eng);
    } else if (suite == "conductor") {
      rep = suite_conductor(eng);
    } else if (suite == "theorem-main") {
      theorem.emplace();
      rep = suite_theorem_main(eng, &*theorem);
    } else if (suite == "stabilization") {
      rep = suite_stabilization(eng);
    } else {
      throw UsageError("unknown suite '" + suite + "'");
    }
  }
  for (const auto& c : rep.checks)
    std::cerr << (c.ok ? "pass " : "FAIL ") << c.anchor << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
  if (theorem)
    emit(sc, sc.format == "csv" ? theorem->to_csv() : theorem->to_json());
  else
    emit(sc, rep.to_json());
  if (const SuiteCheck* f = rep.first_failure()) {
    std::cerr << "first failure: " << f->anchor << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rankin-Selberg gamma factors of middle supercuspidals"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; flags override it");
  SessionConfig sc;
  if (const char* env = std::getenv("GAMMALAB_PRECISION")) sc.precision = std::atoi(env);
  app.add_option("--q", sc.q, "residue field size")->check(CLI::Range(2, 64));
  app.add_option("--N", sc.N, "pi lives on GL(2N)")->check(CLI::Range(2, 4));
  app.add_option("--precision", sc.precision, "relative series precision");
  app.add_option("--mzeta", sc.m_zeta, "order bound for zeta and zeta'");
  app.add_option("--mlambda", sc.m_lambda, "order bound for lambda(varpi)");
  app.add_option("--vmin", sc.cfg.vmin, "lowest det valuation integrated");
  app.add_option("--vmax", sc.cfg.vmax, "highest det valuation integrated");
  app.add_option("--unit-depth", sc.cfg.unit_depth, "units taken modulo 1+P^m");
  app.add_option("--x-ext", sc.cfg.x_ext, "steps the y windows extend past the U^1 pattern");
  app.add_option("--gl-scale", sc.gl_scale, "vol(GL(N,O)) as a rational");
  app.add_option("--jobs", sc.cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", sc.out, "output file (default stdout)");
  app.add_option("--format", sc.format, "theorem-main report format")->check(CLI::IsMember({"json", "csv"}));

  auto* g = app.add_subcommand("gamma", "gamma factor of one pair");
  std::string f_text = "2,0", zeta_text = "8:0", twist = "trivial";
  int chi_exp = 0;
  bool verify = false;
  g->add_option("--f", f_text, "c,d with f_bar = X^2 - d X - c");
  g->add_option("--chi", chi_exp, "exponent of chi on k_fbar^x");
  g->add_option("--zeta", zeta_text, "order:k");
  g->add_option("--twist", twist, "trivial | tame:e=E,unif=ORDER:K | xi:I | simple:u=U,phi=E,zetap=ORDER:K");
  g->add_flag("--verify-stabilized", verify, "recompute with every bound widened and compare");
  g->fallthrough();

  auto* v = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  bool oracle = false;
  int samples = 0;
  v->add_option("suite", suite, "props | lemmas | jiang | conductor | theorem-main | stabilization")->required();
  v->add_flag("--oracle", oracle, "lemmas: full oracle comparison (200 samples, depth 2)");
  v->add_option("--samples", samples);
  v->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    sc.cfg.precision = sc.precision;
    sc.cfg.gl_scale = mpq_class(sc.gl_scale);
    sc.cfg.gl_scale.canonicalize();
    if (sc.cfg.gl_scale <= 0) throw UsageError("--gl-scale must be positive");
    if (g->parsed()) return cmd_gamma(sc, f_text, chi_exp, zeta_text, twist, verify);
    return cmd_verify(sc, suite, oracle, samples);
  } catch (const DomainError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
