// primecorr.cpp
//
// Command-line surface for the prime-pair correlation library.  Every
// subcommand echoes a reproducible run configuration, writes its artifact
// atomically (temp + rename) when --output is given, and follows the exit
// code contract: 0 success, 2 validation/usage error, 3 budget or numeric
// error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "primecorr/primecorr.hpp"

namespace pc = primecorr;

namespace {

struct global_opts {
  std::string format = "csv";
  std::string output;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  pc::u64 seed = 1;
};

void emit(const global_opts& g, const std::vector<pc::report_row>& rows) {
  std::string text = (g.format == "json") ? pc::to_json(rows) : pc::to_csv(rows);
  if (g.output.empty())
    std::fputs(text.c_str(), stdout);
  else
    pc::atomic_write(g.output, text);
}

pc::quad_char* make_chi_opt(pc::i64 d, std::optional<pc::quad_char>& slot) {
  if (d == 0) return nullptr;
  slot.emplace(pc::make_character(d));
  return &*slot;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"prime pair correlations, singular series, character sums"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "print help and exit");
    s->fallthrough(true);  // global flags may follow the subcommand
    s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return s;
  };

  global_opts g;
  app.add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", g.output, "artifact path (atomic write)");
  app.add_option("--threads", g.threads, "segment pool size");
  app.add_option("--seed", g.seed, "seed for randomized grids");

  // twin
  auto* twin = add_sub("twin", "sum of Lambda(n) Lambda(n+h), n <= X");
  pc::u64 twin_x = 1000000;
  pc::i64 twin_h = 2, twin_d = 0;
  double twin_u = 0.0;
  twin->add_option("--x", twin_x, "upper limit X")->required();
  twin->add_option("--h", twin_h, "shift h (nonzero)")->required();
  twin->add_option("--d", twin_d, "fundamental discriminant (0 = none)");
  twin->add_option("--u", twin_u, "sieve parameter u (0 = proof-motivated default)");

  // goldbach
  auto* gold = add_sub("goldbach", "sum of Lambda(n1) Lambda(n2), n1+n2 = h");
  pc::u64 gold_h = 1000000;
  pc::i64 gold_d = 0;
  double gold_u = 0.0;
  gold->add_option("--h", gold_h, "even target h >= 4")->required();
  gold->add_option("--d", gold_d, "fundamental discriminant (0 = none)");
  gold->add_option("--u", gold_u, "sieve parameter u (0 = default)");

  // variance
  auto* var = add_sub("variance", "short-interval variance over [X, 2X]");
  pc::u64 var_x = 1000000, var_H = 1000;
  var->add_option("--x", var_x, "left endpoint X")->required();
  var->add_option("--H", var_H, "window length H")->required();

  // charsum
  auto* cs = add_sub("charsum", "complete character sum over one period");
  pc::i64 cs_d = 5, cs_h = 2;
  std::string cs_mode = "cc", cs_sign = "+";
  cs->add_option("--d", cs_d, "fundamental discriminant")->required();
  cs->add_option("--h", cs_h, "even shift h")->required();
  cs->add_option("--mode", cs_mode, "pp, cp, or cc")
      ->check(CLI::IsMember({"pp", "cp", "cc", "chi_chi", "chi_principal",
                             "principal_principal"}));
  cs->add_option("--sign", cs_sign, "+ or -")->check(CLI::IsMember({"+", "-"}));

  // kloosterman
  auto* kl = add_sub("kloosterman", "Kloosterman sum S(a,b;c)");
  pc::i64 kl_a = 1, kl_b = 1, kl_e = 1, kl_k = 1, kl_alpha = 1;
  pc::u64 kl_c = 3, kl_q = 1, kl_d = 1;
  bool kl_incomplete = false;
  double kl_N = 100.0, kl_delta = 0.1;
  kl->add_option("--a", kl_a, "first argument");
  kl->add_option("--b", kl_b, "second argument");
  kl->add_option("--c", kl_c, "modulus c >= 1");
  kl->add_flag("--incomplete", kl_incomplete,
               "window-restricted sum over n = alpha (mod q), (n,d)=1");
  kl->add_option("--N", kl_N, "window scale (support [N, 2N])");
  kl->add_option("--alpha", kl_alpha, "residue class");
  kl->add_option("--q", kl_q, "residue modulus");
  kl->add_option("--dd", kl_d, "phase modulus d");
  kl->add_option("--e", kl_e, "phase multiplier e, gcd(eq,d)=1");
  kl->add_option("--k", kl_k, "phase numerator k");
  kl->add_option("--delta", kl_delta, "window sharpness");

  // sieve
  auto* sv = add_sub("sieve", "combinatorial sieve weight diagnostics");
  double sv_z = 50.0, sv_s = 3.0, sv_D = 0.0;
  int sv_beta = 10, sv_A = 2;
  pc::u64 sv_v = 1, sv_q = 1, sv_nmax = 10000;
  sv->add_option("--z", sv_z, "sieving level z > 2")->required();
  sv->add_option("--s", sv_s, "exponent, D = z^s");
  sv->add_option("--D", sv_D, "explicit support bound (overrides --s)");
  sv->add_option("--beta", sv_beta, "chain condition parameter");
  sv->add_option("--A", sv_A, "remainder decay exponent");
  sv->add_option("--v", sv_v, "exempt modulus for the combined sum");
  sv->add_option("--q", sv_q, "coprimality modulus for the combined sum");
  sv->add_option("--nmax", sv_nmax, "upper-bound scan limit");

  // lone
  auto* lo = add_sub("lone", "L(1,chi) with certified error and eta");
  pc::i64 lo_d = 5;
  double lo_target = 1e-8, lo_rank_target = 1e-4;
  pc::i64 lo_rank_lo = 0, lo_rank_hi = 0;
  lo->add_option("--d", lo_d, "fundamental discriminant");
  lo->add_option("--target-err", lo_target, "certified error target");
  lo->add_option("--rank-lo", lo_rank_lo, "range scan: lower d");
  lo->add_option("--rank-hi", lo_rank_hi, "range scan: upper d");
  lo->add_option("--rank-target-err", lo_rank_target, "error target in range mode");

  // exzero
  auto* ex = add_sub("exzero", "rough lambda(m)/m tail sum");
  pc::i64 ex_d = 5;
  double ex_z = 10.0, ex_y = 1000.0;
  ex->add_option("--d", ex_d, "fundamental discriminant")->required();
  ex->add_option("--z", ex_z, "roughness level")->required();
  ex->add_option("--y", ex_y, "upper limit Y")->required();

  // chisums
  auto* ch = add_sub("chisums", "rough chi(n) log(y/n)/n sum vs product");
  pc::i64 ch_d = 5;
  double ch_z = 10.0, ch_y = 1e6;
  pc::u64 ch_n = 1000000;
  ch->add_option("--d", ch_d, "fundamental discriminant")->required();
  ch->add_option("--z", ch_z, "roughness level")->required();
  ch->add_option("--n", ch_n, "upper limit N")->required();
  ch->add_option("--y", ch_y, "log numerator scale y");

  // divcorr
  auto* dc = add_sub("divcorr", "four-variable divisor correlation");
  pc::i64 dc_d = 5, dc_h = 2;
  std::string dc_sign = "+", dc_modes = "ccpp";
  double dc_m1 = 8, dc_m2 = 8, dc_n1 = 32, dc_n2 = 32, dc_delta = 0.1, dc_z = 2.0;
  dc->add_option("--d", dc_d, "fundamental discriminant")->required();
  dc->add_option("--h", dc_h, "shift h")->required();
  dc->add_option("--sign", dc_sign, "+ or -")->check(CLI::IsMember({"+", "-"}));
  dc->add_option("--modes", dc_modes,
                 "four slots chi1 chi2 psi1 psi2, each c or p (e.g. ccpp)");
  dc->add_option("--m1", dc_m1, "M1 window scale");
  dc->add_option("--m2", dc_m2, "M2 window scale");
  dc->add_option("--n1", dc_n1, "N1 window scale");
  dc->add_option("--n2", dc_n2, "N2 window scale");
  dc->add_option("--delta", dc_delta, "window sharpness");
  dc->add_option("--z", dc_z, "roughness level");

  // verify-all
  auto* va = add_sub("verify-all", "run every identity check");
  std::string va_budget = "small";
  va->add_option("--budget", va_budget, "small or full")
      ->check(CLI::IsMember({"small", "full"}));

  // "--config FILE" expands to the file's "key = value" pairs, inserted ahead
  // of the explicit flags so the command line wins on conflicts.
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) {
      std::fprintf(stderr, "error: --config needs a file path\n");
      return 2;
    }
    std::ifstream f(args[i + 1]);
    if (!f) {
      std::fprintf(stderr, "error: cannot read config file %s\n",
                   args[i + 1].c_str());
      return 2;
    }
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    pc::run_config cfg = pc::config_parse(text);
    args.erase(args.begin() + i, args.begin() + i + 2);
    std::vector<std::string> expanded;
    for (const auto& [k, v] : cfg.kv) {
      expanded.push_back("--" + k);
      expanded.push_back(v);
    }
    // insert after the subcommand token
    std::size_t pos = args.empty() ? 0 : 1;
    args.insert(args.begin() + pos, expanded.begin(), expanded.end());
    break;
  }
  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message and usage hint
    return 2;
  }

  std::optional<pc::quad_char> chi_slot;

  if (*twin) {
    pc::corr_report r = pc::compare_twin(twin_x, twin_h,
                                         make_chi_opt(twin_d, chi_slot), twin_u,
                                         g.threads);
    emit(g, {pc::to_row(r)});
    return 0;
  }
  if (*gold) {
    pc::corr_report r = pc::compare_goldbach(gold_h,
                                             make_chi_opt(gold_d, chi_slot),
                                             gold_u, g.threads);
    emit(g, {pc::to_row(r)});
    return 0;
  }
  if (*var) {
    auto t0 = std::chrono::steady_clock::now();
    double v = pc::short_interval_variance(var_x, var_H, g.threads);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    double denom = static_cast<double>(var_H) * static_cast<double>(var_x) *
                   std::log(static_cast<double>(var_x));
    pc::report_row row;
    row.str("command", "variance");
    row.num("X", var_x);
    row.num("H", var_H);
    row.num("variance", v);
    row.num("ratio_HXlogX", v / denom);
    row.num("runtime_ms", ms);
    emit(g, {row});
    return 0;
  }
  if (*cs) {
    pc::quad_char chi = pc::make_character(cs_d);
    pc::char_sum_mode mode = pc::char_sum_mode::chi_chi;
    if (cs_mode == "pp" || cs_mode == "principal_principal")
      mode = pc::char_sum_mode::principal_principal;
    else if (cs_mode == "cp" || cs_mode == "chi_principal")
      mode = pc::char_sum_mode::chi_principal;
    pc::char_sum_spec spec{&chi, mode, cs_h, cs_sign == "-" ? -1 : +1};
    pc::rat closed = pc::complete_char_sum(spec);
    pc::rat brute = pc::complete_char_sum_bruteforce(spec);
    pc::report_row row;
    row.str("command", "charsum");
    row.num("d", cs_d);
    row.num("q", static_cast<pc::u64>(chi.q));
    row.num("h", cs_h);
    row.str("mode", cs_mode);
    row.str("sign", cs_sign);
    row.str("closed", closed.str());
    row.str("brute", brute.str());
    row.num("equal", static_cast<pc::i64>(closed == brute ? 1 : 0));
    emit(g, {row});
    return 0;
  }
  if (*kl) {
    pc::report_row row;
    if (kl_incomplete) {
      pc::smooth_window F = pc::make_smooth_window(kl_delta);
      auto res = pc::incomplete_kloosterman(F, kl_N, kl_alpha, kl_q, kl_d, kl_e, kl_k);
      row.str("command", "kloosterman_incomplete");
      row.num("N", kl_N);
      row.num("alpha", kl_alpha);
      row.num("q", kl_q);
      row.num("d", kl_d);
      row.num("e", kl_e);
      row.num("k", kl_k);
      row.num("delta", kl_delta);
      row.num("re", res.value.real());
      row.num("im", res.value.imag());
      row.num("bound", res.bound);
      row.num("eps", res.eps);
      row.num("implied_constant", res.implied_constant);
    } else {
      auto s = pc::kloosterman(pc::kloosterman_input{kl_a, kl_b, kl_c});
      pc::u64 g3 = std::gcd(std::gcd(static_cast<pc::u64>(kl_a < 0 ? -kl_a : kl_a),
                                     static_cast<pc::u64>(kl_b < 0 ? -kl_b : kl_b)),
                            kl_c);
      if (g3 == 0) g3 = kl_c;
      double weil = std::pow(static_cast<double>(kl_c), 0.6) *
                    std::sqrt(static_cast<double>(g3));
      row.str("command", "kloosterman");
      row.num("a", kl_a);
      row.num("b", kl_b);
      row.num("c", kl_c);
      row.num("re", s.real());
      row.num("im", s.imag());
      row.num("weil_bound_eps01", weil);
      row.num("implied_constant", 1.0);
    }
    emit(g, {row});
    return 0;
  }
  if (*sv) {
    auto t0 = std::chrono::steady_clock::now();
    double D = sv_D > 0.0 ? sv_D : std::pow(sv_z, sv_s);
    pc::sieve_weights w = pc::generate_weights(sv_z, D, sv_beta, sv_A);
    pc::u64 support = pc::support_size(w);
    auto fund = pc::fundamental_sum(w, [](pc::u32 p) { return 1.0 / p; });
    auto comb = pc::combined_sieve_sum(w, sv_v, sv_q);
    bool upper_ok = true;
    for (pc::u64 n = 1; n <= sv_nmax; ++n) {
      bool rough = true;
      for (auto [p, e] : pc::factorize(n))
        if (static_cast<double>(p) < sv_z) {
          rough = false;
          break;
        }
      if (pc::sieve_sum_at(n, w, 1) < (rough ? 1 : 0)) {
        upper_ok = false;
        break;
      }
    }
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    pc::report_row row;
    row.str("command", "sieve");
    row.num("z", sv_z);
    row.num("D", D);
    row.num("beta", static_cast<pc::i64>(sv_beta));
    row.num("A", static_cast<pc::i64>(sv_A));
    row.num("support_size", support);
    row.num("fund_lhs", fund.lhs);
    row.num("fund_rhs", fund.rhs);
    row.num("fund_rel_err", fund.rel_err);
    row.num("comb_v", sv_v);
    row.num("comb_q", sv_q);
    row.num("comb_lhs", comb.lhs);
    row.num("comb_rhs", comb.rhs);
    row.num("comb_rel_err", comb.rel_err);
    row.num("upper_ok", static_cast<pc::i64>(upper_ok ? 1 : 0));
    row.num("nmax", sv_nmax);
    row.num("runtime_ms", ms);
    emit(g, {row});
    return 0;
  }
  if (*lo) {
    if (lo_rank_lo != 0 || lo_rank_hi != 0) {
      auto ranked = pc::most_exceptional(lo_rank_lo, lo_rank_hi, lo_rank_target);
      std::vector<pc::report_row> rows;
      pc::i64 rank = 1;
      for (auto [d, eta] : ranked) {
        pc::report_row row;
        row.str("command", "lone_rank");
        row.num("rank", rank++);
        row.num("d", d);
        row.num("q", static_cast<pc::u64>(d < 0 ? -d : d));
        row.num("eta", eta);
        rows.push_back(row);
      }
      emit(g, rows);
      return 0;
    }
    pc::quad_char chi = pc::make_character(lo_d);
    pc::lvalue L = pc::l_one(chi, lo_target);
    pc::eta_interval ei = pc::effective_eta(chi, lo_target);
    pc::report_row row;
    row.str("command", "lone");
    row.num("d", lo_d);
    row.num("q", static_cast<pc::u64>(chi.q));
    row.num("value", L.value);
    row.num("err", L.err);
    row.num("eta", ei.eta);
    row.num("eta_lo", ei.lo);
    row.num("eta_hi", ei.hi);
    emit(g, {row});
    return 0;
  }
  if (*ex) {
    pc::quad_char chi = pc::make_character(ex_d);
    double value = pc::exzero_sum(chi, ex_z, ex_y);
    double eta = pc::l_one(chi, std::max(1e-6, chi.q / 5e8)).eta;
    double bound = pc::exzero_bound(chi, ex_z, ex_y, eta);
    pc::report_row row;
    row.str("command", "exzero");
    row.num("d", ex_d);
    row.num("z", ex_z);
    row.num("Y", ex_y);
    row.num("value", value);
    row.num("eta", eta);
    row.num("bound", bound);
    row.num("implied_constant", 1.0);
    emit(g, {row});
    return 0;
  }
  if (*ch) {
    pc::quad_char chi = pc::make_character(ch_d);
    auto r = pc::chisums_ratio(chi, ch_z, ch_n, ch_y);
    pc::report_row row;
    row.str("command", "chisums");
    row.num("d", ch_d);
    row.num("z", ch_z);
    row.num("N", ch_n);
    row.num("y", ch_y);
    row.num("lhs", r.lhs);
    row.num("rhs", r.rhs);
    row.num("ratio", r.ratio);
    emit(g, {row});
    return 0;
  }
  if (*dc) {
    if (dc_modes.size() != 4)
      throw pc::validation_error("divcorr: --modes needs four of c/p");
    for (char m : dc_modes)
      if (m != 'c' && m != 'p')
        throw pc::validation_error("divcorr: --modes needs four of c/p");
    auto t0 = std::chrono::steady_clock::now();
    pc::quad_char chi = pc::make_character(dc_d);
    pc::char_modes modes{dc_modes[0] == 'c', dc_modes[1] == 'c',
                         dc_modes[2] == 'c', dc_modes[3] == 'c'};
    pc::divisor_windows win =
        pc::make_divisor_windows(dc_m1, dc_m2, dc_n1, dc_n2, dc_delta);
    int sign = dc_sign == "-" ? -1 : +1;
    double emp = pc::divisor_correlation(win, dc_h, sign, modes, dc_z, chi);
    double main = pc::divisor_correlation_main(win, dc_h, sign, modes, dc_z, chi);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    pc::report_row row;
    row.str("command", "divcorr");
    row.num("d", dc_d);
    row.num("h", dc_h);
    row.str("sign", dc_sign);
    row.str("modes", dc_modes);
    row.num("M1", dc_m1);
    row.num("M2", dc_m2);
    row.num("N1", dc_n1);
    row.num("N2", dc_n2);
    row.num("delta", dc_delta);
    row.num("z", dc_z);
    row.num("empirical", emp);
    row.num("main", main);
    if (main != 0.0)
      row.num("ratio", emp / main);
    else
      row.str("ratio", "degenerate");
    row.num("runtime_ms", ms);
    emit(g, {row});
    return 0;
  }
  if (*va) {
    pc::verify_summary s = pc::run_verify(va_budget, g.seed, g.threads);
    std::string text = pc::verify_to_json(s);
    if (g.output.empty())
      std::fputs(text.c_str(), stdout);
    else
      pc::atomic_write(g.output, text);
    return s.all_pass() ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const pc::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const pc::budget_error& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return 3;
  } catch (const pc::numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
