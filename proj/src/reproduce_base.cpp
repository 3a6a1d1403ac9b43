#include <algorithm>
#include <sstream>

#include "suite_util.hpp"
#include "transfinite/gen.hpp"
#include "transfinite/oracle.hpp"
#include "transfinite/ranks.hpp"

namespace transfinite::suites {

namespace {

std::string count(std::size_t n, const char* what) { return std::to_string(n) + " " + what; }

std::vector<Level> positive_levels(const StepFn& f) {
  std::vector<Level> out;
  for (auto& l : levels(f)) {
    if (l.weight > 0) out.push_back(std::move(l));
  }
  return out;
}

struct StepFixture {
  SpaceDesc sp;
  Topology t;
  StepFn f;
  std::vector<TransfiniteFamily> per_level;
};

// Non-negative step functions with one layered separation witness per
// positive level; every witness has length at most w^2.
const std::vector<StepFixture>& step_fixtures() {
  static const std::vector<StepFixture> fixtures = [] {
    std::vector<StepFixture> out;
    gen::Engine rng(3131);
    while (out.size() < 30) {
      SpaceDesc sp = out.size() % 5 == 0 ? SpaceDesc(Ordinal::parse("w^2+1"), 4) : gen::space(rng, 3, 3);
      Topology t(sp);
      StepFn f = gen::stepfn(rng, sp, 2 + static_cast<unsigned>(out.size() % 3)).map([](const Rational& v) {
        return abs(v);
      });
      std::vector<TransfiniteFamily> per;
      for (const auto& lv : positive_levels(f)) {
        per.push_back(lv.set == t.whole() ? TransfiniteFamily::finite_sets({t.whole()}) : layered_witness(lv.set, t));
      }
      out.push_back({sp, t, f, std::move(per)});
    }
    return out;
  }();
  return fixtures;
}

std::vector<Ordinal> sample(gen::Engine& rng, const SpaceDesc& sp, std::size_t n) {
  std::vector<Ordinal> pts = PatternSet::whole(sp).sample_points(n / 2);
  while (pts.size() < n) pts.push_back(gen::point(rng, sp, 9));
  return pts;
}

unsigned lambda_for(const Ordinal& length) {
  unsigned l = 1;
  while (Ordinal::omega_power(l) < length) ++l;
  return l;
}

}  // namespace

SuiteReport oracle() {
  SuiteReport r{"oracle", {}};
  run_check(r, "1", "pattern sets, closure and CB derivative", [] {
    gen::Engine rng(8080);
    for (int i = 0; i < 1000; ++i) {
      SpaceDesc sp = gen::oracle_space(rng);
      Topology t(sp);
      auto f = gen::formula(rng, sp);
      auto s = PatternSet::from_formula(sp, f);
      auto o = OracleSet::from_formula(sp, f);
      expect(OracleSet::from_pattern(s) == o, "pattern " + s.str() + " differs from the oracle in " + sp.str());
      expect(OracleSet::from_pattern(t.closure(s)) == o.closure(), "closure of " + s.str() + " in " + sp.str());
      expect(OracleSet::from_pattern(t.cb_derivative(t.closure(s))) == o.closure().cb_derivative(),
             "CB derivative of the closure of " + s.str() + " in " + sp.str());
    }
    return count(1000, "instances");
  });
  const char* names[] = {"separation derivative", "oscillation derivative", "convergence derivative",
                         "CB derivative in refined topologies"};
  for (int which = 0; which < 4; ++which) {
    run_check(r, "1", names[which], [which] {
      gen::Engine rng(9000 + which);
      for (int i = 0; i < 1000; ++i) {
        SpaceDesc sp = gen::oracle_space(rng);
        Topology t = gen::topology(rng, sp);
        auto d = gen::derivative_op(rng, t, which);
        auto f = gen::closed(rng, t);
        const auto got = d.apply(f);
        expect(OracleSet::from_pattern(got) == oracle_apply(d, OracleSet::from_pattern(f)),
               d.describe() + " on " + f.str() + " in " + sp.str() + ": got " + got.str());
      }
      return count(1000, "instances");
    });
  }
  return r;
}

SuiteReport alpha_beta() {
  SuiteReport r{"alpha-beta", {}};
  run_check(r, "2", "separation and oscillation stages coincide on characteristic functions", [] {
    gen::Engine rng(4242);
    std::size_t stages = 0;
    for (int i = 0; i < 50; ++i) {
      SpaceDesc sp = gen::space(rng, 3, 3);
      Topology t = gen::topology(rng, sp);
      auto a = gen::pattern(rng, sp);
      const Rational v(1 + static_cast<std::int64_t>(gen::below(rng, 4)), 2);
      auto chi = StepFn::characteristic(a, v);
      auto sep = iterate(DerivativeOp::separation(t, a, a.complement()), t.whole());
      for (const auto& eps : relevant_eps(chi.values())) {
        auto osc = iterate(DerivativeOp::oscillation(t, chi, eps), t.whole());
        expect(osc.rank == sep.rank, "ranks differ for " + a.str() + " in " + sp.str());
        expect(osc.stages.size() == sep.stages.size(), "stage counts differ for " + a.str());
        for (std::size_t k = 0; k < sep.stages.size(); ++k) {
          expect(osc.stages[k].set == sep.stages[k].set, "stage " + std::to_string(k) + " differs for " + a.str());
        }
        stages += sep.stages.size();
      }
    }
    return count(50, "functions, ") + count(stages, "stages compared");
  });
  return r;
}

SuiteReport baire1_construct() {
  SuiteReport r{"baire1-construct", {}};
  const auto& fixtures = step_fixtures();
  run_check(r, "3", "witnesses have length at most w^2", [&] {
    for (const auto& fx : fixtures) {
      for (const auto& w : fx.per_level) expect(w.length() <= Ordinal::omega_power(2), "witness of length " + w.length().str());
    }
    return count(fixtures.size(), "fixtures");
  });
  run_check(r, "3", "decompositions verify and are bounded by the norm", [&] {
    std::size_t idx = 0;
    for (const auto& fx : fixtures) {
      const DUSBSeq d = build_step_decomposition(fx.f, fx.per_level, fx.t);
      const Rational norm = fx.f.norm();
      for (const auto& eta : probe_indices(d.fam)) {
        expect(d.fam.fn_at(eta).norm() <= norm, "f_" + eta.str() + " exceeds the norm of " + fx.f.str());
        ++idx;
      }
    }
    return count(idx, "indices checked");
  });
  run_check(r, "3", "alternating sums reproduce f through exit parities", [&] {
    gen::Engine rng(3232);
    std::size_t pts = 0;
    for (const auto& fx : fixtures) {
      const DUSBSeq d = build_step_decomposition(fx.f, fx.per_level, fx.t);
      const auto lv = positive_levels(fx.f);
      for (const auto& x : sample(rng, fx.sp, 1000)) {
        const Rational want = fx.f.eval(x);
        Rational via_parity = 0;
        for (std::size_t i = 0; i < lv.size(); ++i) {
          const int p = exit_parity_eval(fx.per_level[i], x);
          expect((p == 1) == lv[i].set.contains(x), "exit parity of " + x.str() + " in level " + std::to_string(i));
          via_parity += lv[i].weight * p;
        }
        expect(via_parity == want, "level sum at " + x.str());
        expect(altsum_eval(d.fam, x, d.fam.length()) == want, "alternating sum at " + x.str() + " for " + fx.f.str());
        ++pts;
      }
    }
    return count(pts, "points");
  });
  run_check(r, "3", "residual sandwich at even indices", [&] {
    gen::Engine rng(3333);
    std::size_t n = 0;
    for (const auto& fx : fixtures) {
      const DUSBSeq d = build_step_decomposition(fx.f, fx.per_level, fx.t);
      std::vector<Ordinal> thetas;
      for (const auto& eta : probe_indices(d.fam)) {
        if (is_even(eta) && eta <= d.fam.length() && thetas.size() < 10) thetas.push_back(eta);
      }
      const auto pts = sample(rng, fx.sp, 40);
      for (const auto& th : thetas) {
        for (const auto& x : pts) {
          const Rational rest = fx.f.eval(x) - altsum_eval(d.fam, x, th);
          const Rational cap = th < d.fam.length() ? d.fam.value(x, th) : Rational(0);
          expect(0 <= rest && rest <= cap, "residual at " + x.str() + ", theta " + th.str());
          ++n;
        }
      }
    }
    return count(n, "residuals");
  });
  return r;
}

SuiteReport baire1_rank() {
  SuiteReport r{"baire1-rank", {}};
  const auto& fixtures = step_fixtures();
  run_check(r, "4", "beta is at most w^lambda for the witness length", [&] {
    std::ostringstream os;
    for (const auto& fx : fixtures) {
      const DUSBSeq d = build_step_decomposition(fx.f, fx.per_level, fx.t);
      const unsigned l = lambda_for(d.fam.length());
      const RankValue b = beta(fx.f, fx.t).value;
      expect(b.le(Ordinal::omega_power(l)), "beta " + b.str() + " > w^" + std::to_string(l) + " for " + fx.f.str());
      (void)length_upper_certificate(fx.f, d, l);
    }
    return count(fixtures.size(), "fixtures");
  });
  return r;
}

SuiteReport polish_failure() {
  SuiteReport r{"polish-failure", {}};
  run_check(r, "5a", "dense/co-dense pairs on CB rank 1, 2, 3", [] {
    std::string out;
    for (unsigned l = 1; l <= 3; ++l) {
      const SpaceDesc sp = cb_rank_space(l);
      const RankValue a = alpha_fn(StepFn::characteristic(least_digit_even(sp)), Topology(sp)).value;
      expect(a.value == Ordinal::finite(l), "alpha " + a.str() + " on " + sp.str() + ", expected " + std::to_string(l));
      out += sp.str() + " -> " + a.str() + "; ";
    }
    return out;
  });
  run_check(r, "5b", "rank w on the non-compact fixture and its 1/3 perturbations", [] {
    // The non-compact space of CB rank w is [0, w^w).
    const SpaceDesc sp(Ordinal::parse("w^w", kMaxDepthCeiling), kMaxDepthCeiling);
    const Topology t(sp);
    const auto chi = StepFn::characteristic(least_digit_even(sp));
    const RankValue a = alpha_fn(chi, t).value;
    expect(a.value == Ordinal::omega(), "alpha " + a.str());
    gen::Engine rng(33);
    for (int i = 0; i < 20; ++i) {
      auto f = chi + gen::stepfn(rng, sp).map([](const Rational& v) { return v / 3; });
      expect(!rank_less(alpha_fn(f, t).value, a), "perturbation " + std::to_string(i) + " lowers alpha");
    }
    return std::string("alpha = w");
  });
  return r;
}

}  // namespace transfinite::suites
