// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <bit>
#include <functional>
#include <numeric>
#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ccwlan/errors.hpp"
#include "ccwlan/harness.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"

using namespace ccwlan;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      note << " [" << why << "]";
    }
  }
};

int failures = 0;

void criterion(int id, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= budget_s) {
    o.pass = false;
    o.note << " [took longer than " << budget_s << " s]";
  }
  std::printf("%s %2d (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, secs, o.note.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::vector<RateVector> rates_of(const std::vector<RatedDecision>& v) {
  std::vector<RateVector> out;
  for (const auto& rd : v) out.push_back(rd.rates);
  return out;
}

std::vector<Atom> expanded_atoms() {
  const auto net = reference_network();
  const auto classes = equivalence_classes(net.topology, net.profiles);
  return to_atoms(expand_by_equivalence(reduce_by_equivalence(enumerate_rate_vectors(net), classes), classes));
}

MixturePolicy optimum(const Network& net, Fairness obj) {
  return solve(obj, to_atoms(enumerate_rate_vectors(net)));
}

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

std::string fmt(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(4);
  s << '(';
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ')';
  return s.str();
}

double dpp_utility_gap(double v, std::uint64_t slots, double optimum_utility) {
  DppConfig cfg;
  cfg.v = v;
  cfg.slots = slots;
  cfg.record_trace = false;
  return std::abs(pf_utility(run_dpp(reference_network(), cfg).goodputs()) - optimum_utility);
}

}  // namespace

int main() {
  criterion(1, 1.0, [](Outcome& o) {
    const auto net = reference_network();
    const auto orig = enumerate_rate_vectors(net);
    const auto classes = equivalence_classes(net.topology, net.profiles);
    const auto red = reduce_by_equivalence(orig, classes);
    const auto exp = expand_by_equivalence(red, classes);
    o.require(rates_of(orig) == reference::table_original(), "original vectors differ");
    o.require(rates_of(red) == reference::table_reduced(), "reduced vectors differ");
    o.require(rates_of(exp) == reference::table_expanded(), "expanded vectors differ");
    o.note << " " << orig.size() << " maximal, " << red.size() << " reduced";
  });

  criterion(2, 5.0, [](Outcome& o) {
    const auto pf = solve_pf(expanded_atoms());
    const std::vector<double> target{0.62, 0.25, 0.42, 0.83, 0.42, 0.42};
    const double gm = metrics(pf.goodput).geometric_mean;
    o.require(max_deviation(pf.goodput, target) <= 0.01, "goodput off target");
    o.require(std::abs(gm - 0.46) <= 0.01, "geometric mean off target");
    o.note << " goodput " << fmt(pf.goodput) << " gm " << gm;
  });

  criterion(3, 5.0, [](Outcome& o) {
    const auto atoms = expanded_atoms();
    const auto hf = solve_hf(atoms);
    o.require(max_deviation(hf.goodput, std::vector<double>(6, 3.0 / 7.0)) <= 0.005, "goodput not 3/7");
    std::set<std::pair<std::uint64_t, std::size_t>> support;
    for (auto a : hf.support()) support.insert({atoms[a].pattern, atoms[a].decision});
    const std::set<std::pair<std::uint64_t, std::size_t>> expected{{1, 3}, {2, 1}, {3, 3}};
    if (support == expected) {
      const std::vector<double> want{2.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0};
      std::vector<double> got;
      for (auto a : hf.support()) got.push_back(hf.probabilities[a]);
      o.require(max_deviation(got, want) <= 0.005, "probabilities off");
      o.note << " support matches, pi " << fmt(got);
    } else {
      o.note << " support differs (goodput checked only)";
    }
    o.note << " goodput " << fmt(hf.goodput);
  });

  criterion(4, 10.0, [](Outcome& o) {
    const auto net = reference_network();
    const auto opt = optimum(net, Fairness::pf);
    DppConfig cfg;
    cfg.v = 200;
    cfg.slots = 20000;
    cfg.record_trace = false;
    const auto g = run_dpp(net, cfg).goodputs();
    o.require(max_deviation(g, opt.goodput) <= 0.02, "V=200 goodput more than 0.02 from optimum");
    o.note << " V=200 deviation " << max_deviation(g, opt.goodput);

    // At 2e4 slots the residual backlog biases the average by about V/T;
    // the ordering is checked once that term has died out.
    const double short_gaps[] = {dpp_utility_gap(10, 20000, opt.utility), dpp_utility_gap(50, 20000, opt.utility),
                                 dpp_utility_gap(200, 20000, opt.utility)};
    const double gaps[] = {dpp_utility_gap(10, 400000, opt.utility), dpp_utility_gap(50, 400000, opt.utility),
                           dpp_utility_gap(200, 400000, opt.utility)};
    o.require(gaps[0] >= gaps[1] && gaps[1] >= gaps[2], "gaps not non-increasing in V");
    o.note << "; gaps@4e5 " << fmt({gaps[0], gaps[1], gaps[2]}) << "; gaps@2e4 "
           << fmt({short_gaps[0], short_gaps[1], short_gaps[2]});
  });

  criterion(5, 20.0, [](Outcome& o) {
    const auto base = reference_network();
    // Network after u6 leaves, and after u7 joins as well.
    Network left = base;
    left.topology = base.topology.without_user(5);
    left.profiles.pop_back();
    Network joined = left;
    joined.topology = left.topology.with_user_added(UserLinks{0b11, 0b11});
    joined.profiles.push_back(0);
    const auto opt_left = optimum(left, Fairness::pf).goodput;
    const auto opt_joined = optimum(joined, Fairness::pf).goodput;

    DppConfig cfg;
    cfg.slots = 10400;
    cfg.events = {{400, UserEvent::Kind::remove, 6, 0, std::nullopt, std::nullopt}};
    const auto r1 = run_dpp(base, cfg);
    std::vector<double> w1;
    for (std::uint64_t id : {1, 2, 3, 4, 5}) w1.push_back(r1.window_average(id, 400, 10400));
    o.require(max_deviation(w1, opt_left) <= 0.03, "window after leave off optimum");

    const auto two_ap_churn = builtin_scenario("two_ap_churn");
    cfg = dpp_config(two_ap_churn, 1);
    cfg.slots = 10600;
    const auto r2 = run_dpp(base, cfg);
    std::vector<double> w2;
    for (std::uint64_t id : {1, 2, 3, 4, 5, 7}) w2.push_back(r2.window_average(id, 601, 10601));
    o.require(max_deviation(w2, opt_joined) <= 0.03, "window after join off optimum");
    bool silent = true, frozen = true;
    for (const auto& row : r2.trace) {
      if (row.user_id == 7 && row.slot < 601) silent = false;
      if (row.user_id == 6 && row.slot >= 400) frozen = false;
    }
    o.require(silent && r2.window_average(7, 1, 601) == 0.0, "u7 served before joining");
    o.require(frozen && r2.users[5].leave_slot == 400u, "u6 still scheduled after leaving");
    o.note << " after leave " << fmt(w1) << " vs " << fmt(opt_left) << "; after join " << fmt(w2) << " vs "
           << fmt(opt_joined);
  });

  criterion(6, 30.0, [](Outcome& o) {
    std::mt19937_64 rng{6};
    int equal = 0, total = 0;
    for (; total < 1000; ++total) {
      const std::size_t H = 1 + rng() % 3, K = 1 + rng() % 8;
      const unsigned L = 1 + static_cast<unsigned>(rng() % 5);
      const auto net = oracle::random_network(rng, H, K, L, L == 1 ? 0 : static_cast<unsigned>(rng() % L));
      std::vector<Rational> w;
      for (std::size_t k = 0; k < K; ++k) w.emplace_back(static_cast<std::int64_t>(rng() % 50), 1 + rng() % 9);
      if (wsrm_exact<Rational>(net, w).wsr == wsrm_reduced<Rational>(net, w).wsr) ++equal;
    }
    o.require(equal == total, "reduced and exact values differ");
    o.note << " " << equal << "/" << total << " equal";
  });

  criterion(7, 5.0, [](Outcome& o) {
    int checked = 0;
    for (unsigned L = 2; L <= 8; ++L)
      for (unsigned t = 0; t < L; ++t)
        for (unsigned v = 1; v <= L; ++v, ++checked)
          o.require(transmissions_needed(CacheConfig::coded(L, t), v) == oracle::phantom_codeword_count(L, t, v),
                    "n(V) mismatch at L=" + std::to_string(L));
    for (unsigned L = 2; L <= 12; ++L)
      for (unsigned t = 0; t < L; ++t)
        o.require(group_rate(CacheConfig::coded(L, t), 1) == Rational{1} / (Rational{1} - Rational{t, L}),
                  "r(1) mismatch at L=" + std::to_string(L));
    o.note << " " << checked << " counts";
  });

  criterion(8, 10.0, [](Outcome& o) {
    std::mt19937_64 rng{8};
    int ok = 0, caught = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const unsigned L = 2 + static_cast<unsigned>(rng() % 5);
      const unsigned t = static_cast<unsigned>(rng() % L);
      const auto cfg = CacheConfig::coded(L, t);
      const unsigned v = 1 + static_cast<unsigned>(rng() % L);
      std::vector<unsigned> profiles(L);
      std::iota(profiles.begin(), profiles.end(), 0U);
      std::shuffle(profiles.begin(), profiles.end(), rng);
      std::vector<GroupMember> group;
      for (unsigned i = 0; i < v; ++i) group.push_back({i, profiles[i], 1000 + i});
      ChunkLibrary lib{cfg, cfg.subpacket_count() * (1 + rng() % 16)};
      for (const auto& m : group) lib.add_random(m.chunk, rng);
      const auto cws = build_codewords(cfg, group);
      auto bytes = encode_codewords(cws, lib);
      if (verify_decodability(cfg, cws, bytes, group, lib)) ++ok;
      auto& target = bytes[rng() % bytes.size()];
      target[rng() % target.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
      if (!verify_decodability(cfg, cws, bytes, group, lib)) ++caught;
    }
    o.require(ok == 500, "decoding failed on intact codewords");
    o.require(caught == 500, "corruption went unnoticed");
    o.note << " decoded " << ok << "/500, corruption detected " << caught << "/500";
  });

  criterion(9, 30.0, [](Outcome& o) {
    // Users that only one AP can hear, on a seven-cell hex grid.
    const auto grid = build_hex_grid(1, 1.0, 1.0, 1.2);
    const auto sampled = sample_users_ppp(grid, density_for_mean_users(grid, 120.0), 9);
    std::vector<Point> green;
    for (UserIndex u = 0; u < sampled.user_count(); ++u)
      if (std::popcount(sampled.inter_set(u)) == 1) green.push_back(sampled.user_positions()[u]);
    Network net{grid.with_users(green), {}, CacheConfig::coded(5, 1)};
    std::mt19937_64 prng{9};
    net.profiles = random_profiles(net.user_count(), 5, prng);

    auto gm = [&](SchedulerKind kind) {
      DppConfig cfg;
      cfg.scheduler = kind;
      cfg.slots = 30000;
      cfg.record_trace = false;
      return metrics(run_dpp(net, cfg).goodputs()).geometric_mean;
    };
    const double exact = gm(SchedulerKind::reduced_wsrm);
    const double csma = gm(SchedulerKind::csma_baseline);
    const double reuse = gm(SchedulerKind::reuse_baseline);
    o.require(std::abs(csma - exact) <= 1e-2, "csma far from exact");
    o.require(std::abs(reuse - exact / 3.0) <= 0.1 * exact / 3.0, "reuse not near a third of exact");
    o.note << " " << net.user_count() << " users; gm exact " << exact << " csma " << csma << " reuse " << reuse;
  });

  std::vector<std::pair<double, double>> min_rates;  // (hf, pf) pairs for criterion 11

  criterion(10, 120.0, [&](Outcome& o) {
    Scenario s;
    s.name = "small";
    s.hex = HexSpec{3, 1.0, 1.0, 1.2};
    s.mean_users = 7;
    s.profiles = 5;
    s.gamma = Rational{1, 5};
    s.trials = 20;
    s.master_seed = 10;
    s.slots = 20000;
    int compared = 0;
    double worst = 1e9;
    for (std::size_t trial = 0; trial < s.trials; ++trial) {
      auto st = s;
      st.mode = SolveMode::static_optimum;
      const auto net = realize_network(st, trial);
      if (net.user_count() == 0) continue;
      const auto exact = run_trial(st, trial);
      st.objective = Fairness::hf;
      min_rates.emplace_back(run_trial(st, trial).min_rate, exact.min_rate);

      for (auto kind : {SchedulerKind::vq_heuristic, SchedulerKind::csma_baseline, SchedulerKind::reuse_baseline}) {
        auto dyn = s;
        dyn.scheduler = kind;
        const double u = run_trial(dyn, trial).utility;
        worst = std::min(worst, exact.utility - u);
        o.require(exact.utility >= u - 1e-2, to_string(kind) + " beats the optimum on trial " + std::to_string(trial));
      }

      auto unc = st;
      unc.objective = Fairness::pf;
      unc.profiles = 1;
      const auto l1 = run_trial(unc, trial);
      o.require(l1.user_ids.size() == exact.user_ids.size(), "L=1 instance not paired");
      o.require(exact.utility >= l1.utility - 1e-9, "L=5 optimum below L=1 on trial " + std::to_string(trial));
      unc.objective = Fairness::hf;
      min_rates.emplace_back(run_trial(unc, trial).min_rate, l1.min_rate);
      ++compared;
    }
    o.require(compared >= 15, "too few non-empty instances");
    o.note << " " << compared << " instances, smallest optimum margin " << worst;
  });

  criterion(11, 30.0, [&](Outcome& o) {
    const auto atoms = expanded_atoms();
    min_rates.emplace_back(metrics(solve_hf(atoms).goodput).min_rate, metrics(solve_pf(atoms).goodput).min_rate);
    std::mt19937_64 rng{11};
    for (int trial = 0; trial < 30; ++trial) {
      const auto net = oracle::random_network(rng, 1 + rng() % 3, 1 + rng() % 8, 3, 1);
      min_rates.emplace_back(optimum(net, Fairness::hf).utility, metrics(optimum(net, Fairness::pf).goodput).min_rate);
    }
    for (const auto& [hf, pf] : min_rates) o.require(hf >= pf - 1e-9, "HF minimum below PF minimum");
    o.note << " " << min_rates.size() << " instances";
  });

  return failures == 0 ? 0 : 1;
}
